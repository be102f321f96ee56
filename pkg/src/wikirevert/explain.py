"""Decision-path extraction and human-readable rendering.

Works over TreeNode snapshots, so batch CART trees and snapshots of the
online trees share one code path. Natural-language output follows a fixed
template (header, one indented fact per predicate, predicted class); n-gram
predicates that test token presence are verbalized as containment and
consecutive ones collapse into a single list. Graph output is DOT text with
revert leaves in green and non-revert leaves in yellow.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .records import DENSE_FEATURE_NAMES, N_DENSE
from .textfeatures import NgramVocabulary
from .trees import TreeNode

CLASS_NAMES = ("non-revert", "revert")


@dataclass(frozen=True)
class Predicate:
    feature: int
    name: str
    op: str                      # '<' (went left) or '>' (went right)
    threshold: float
    token: str | None = None     # the n-gram text for vocabulary slots

    def holds(self, x: np.ndarray) -> bool:
        if self.op == "<":
            return x[self.feature] <= self.threshold
        return x[self.feature] > self.threshold


@dataclass
class Explanation:
    sample_id: object
    predicates: list[Predicate]
    predicted_class: int
    tree_id: int = 0
    ginis: list[float] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.predicates)


class FeatureSpace:
    """Names and n-gram token lookup for the combined feature vector."""

    def __init__(self, vocab: NgramVocabulary | None = None):
        self._tokens = vocab.ordered_tokens() if vocab is not None else []

    @property
    def width(self) -> int:
        return N_DENSE + 2 * len(self._tokens)

    def token(self, index: int) -> str | None:
        if index < N_DENSE:
            return None
        offset = index - N_DENSE
        block = len(self._tokens)
        if block == 0 or offset >= 2 * block:
            return None
        return self._tokens[offset % block]

    def name(self, index: int) -> str:
        if index < N_DENSE:
            return DENSE_FEATURE_NAMES[index]
        token = self.token(index)
        if token is None:
            return f"feature {index}"
        side = "inserted" if index - N_DENSE < len(self._tokens) else "deleted"
        return f"{side} text n-gram '{token}'"


def decision_path(
    tree: TreeNode,
    x: np.ndarray,
    feature_space: FeatureSpace | None = None,
    sample_id: object = 0,
    tree_id: int = 0,
) -> Explanation:
    """Predicates met on the root-to-leaf traversal of `x`, plus leaf class.

    The gini of every visited node (leaf included) is recorded alongside.
    """
    x = np.asarray(x, dtype=float)
    space = feature_space or FeatureSpace()
    predicates: list[Predicate] = []
    ginis: list[float] = []
    node = tree
    while not node.is_leaf:
        if node.feature >= len(x):
            raise ValueError(
                f"tree splits on feature {node.feature} but the sample has {len(x)}"
            )
        ginis.append(node.gini)
        went_left = x[node.feature] <= node.threshold
        predicates.append(
            Predicate(
                feature=node.feature,
                name=space.name(node.feature) if node.feature < space.width else f"feature {node.feature}",
                op="<" if went_left else ">",
                threshold=node.threshold,
                token=space.token(node.feature),
            )
        )
        node = node.left if went_left else node.right
    ginis.append(node.gini)
    return Explanation(
        sample_id=sample_id,
        predicates=predicates,
        predicted_class=node.predicted_class,
        tree_id=tree_id,
        ginis=ginis,
    )


def verify_explanation(tree: TreeNode, explanation: Explanation, x: np.ndarray) -> bool:
    """Re-evaluate the predicates on the sample: they must reproduce the
    traversal and land on a leaf predicting the recorded class."""
    x = np.asarray(x, dtype=float)
    node = tree
    for predicate in explanation.predicates:
        if node.is_leaf or node.feature != predicate.feature:
            return False
        if node.threshold != predicate.threshold or not predicate.holds(x):
            return False
        node = node.left if predicate.op == "<" else node.right
    return node.is_leaf and node.predicted_class == explanation.predicted_class


def _snapshots(model) -> list[TreeNode]:
    trees = getattr(model, "trees", None)
    if trees is None:
        raise TypeError("model does not expose member trees")
    out = []
    for tree in trees:
        out.append(tree.as_tree_node() if hasattr(tree, "as_tree_node") else tree)
    return out


def shortest_ensemble_path(
    model,
    x: np.ndarray,
    feature_space: FeatureSpace | None = None,
    sample_id: object = 0,
    n_classes: int = 2,
) -> Explanation:
    """Among member trees agreeing with the majority vote, the path with the
    fewest predicates (ties to the lowest tree id)."""
    snapshots = _snapshots(model)
    if not snapshots:
        raise ValueError("ensemble has no member trees")
    x = np.asarray(x, dtype=float)
    paths = [
        decision_path(tree, x, feature_space, sample_id=sample_id, tree_id=i)
        for i, tree in enumerate(snapshots)
    ]
    informed = [p for i, p in enumerate(paths) if snapshots[i].class_counts.sum() > 0]
    if not informed:
        raise ValueError("ensemble is abstaining: no member tree has seen data")
    votes = np.zeros(n_classes)
    for path in informed:
        votes[path.predicted_class] += 1
    majority = int(np.argmax(votes))
    agreeing = [p for p in informed if p.predicted_class == majority]
    return min(agreeing, key=lambda p: (len(p), p.tree_id))


# -- rendering -------------------------------------------------------------------

def _is_presence_test(predicate: Predicate) -> bool:
    return predicate.token is not None and 0.0 < predicate.threshold < 1.0


def _token_list(tokens: list[str]) -> str:
    return "[" + ", ".join(f"'{t}'" for t in tokens) + "]"


def render_nl(explanation: Explanation, class_names: tuple[str, str] = CLASS_NAMES) -> str:
    """Fixed-template natural-language rendering of one explanation."""
    lines = [f"For sample {explanation.sample_id}, the model decision is based on the following facts:"]
    pending: list[str] | None = None
    pending_op = ""

    def flush():
        nonlocal pending
        if pending:
            verb = "contains" if pending_op == ">" else "does not contain"
            lines.append(f" The revision {verb} {_token_list(pending)}")
        pending = None

    for predicate in explanation.predicates:
        if _is_presence_test(predicate):
            if pending is not None and predicate.op == pending_op:
                pending.append(predicate.token)
            else:
                flush()
                pending = [predicate.token]
                pending_op = predicate.op
        else:
            flush()
            lines.append(f" {predicate.name} {predicate.op} {predicate.threshold:.2f}")
    flush()
    lines.append(f" Predicted class {class_names[explanation.predicted_class]}")
    return "\n".join(lines)


_LEAF_COLORS = {0: "khaki", 1: "palegreen"}  # non-revert yellow, revert green


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _fmt_counts(counts: np.ndarray) -> str:
    if np.allclose(counts, np.round(counts)):
        return "[" + ", ".join(str(int(round(v))) for v in counts) + "]"
    return "[" + ", ".join(f"{v:.1f}" for v in counts) + "]"


def export_dot(
    tree: TreeNode,
    highlight: Explanation | None = None,
    feature_space: FeatureSpace | None = None,
    class_names: tuple[str, str] = CLASS_NAMES,
    graph_name: str = "decision_tree",
) -> str:
    """Valid DOT text for the tree: split condition or leaf class, gini and
    class counts per node; the highlighted path's edges are drawn bold."""
    space = feature_space or FeatureSpace()

    highlighted: set[tuple[int, int]] = set()
    if highlight is not None:
        node = tree
        for predicate in highlight.predicates:
            if node.is_leaf:
                break
            child = node.left if predicate.op == "<" else node.right
            highlighted.add((id(node), id(child)))
            node = child

    nodes: list[str] = []
    edges: list[str] = []

    def visit(node: TreeNode) -> int:
        idx = len(nodes)
        if node.is_leaf:
            label = (
                f"{class_names[node.predicted_class]}\\n"
                f"gini = {node.gini:.3f}\\ncounts = {_fmt_counts(node.class_counts)}"
            )
            color = _LEAF_COLORS.get(node.predicted_class, "white")
            nodes.append(f'  n{idx} [label="{_dot_escape(label)}", fillcolor="{color}"];')
            return idx
        name = space.name(node.feature) if node.feature < space.width else f"feature {node.feature}"
        label = (
            f"{name} <= {node.threshold:.4g}\\n"
            f"gini = {node.gini:.3f}\\ncounts = {_fmt_counts(node.class_counts)}"
        )
        nodes.append(f'  n{idx} [label="{_dot_escape(label)}"];')
        for child, tag in ((node.left, "true"), (node.right, "false")):
            child_idx = visit(child)
            attrs = f'label="{tag}"'
            if (id(node), id(child)) in highlighted:
                attrs += ", style=bold, penwidth=2.5"
            edges.append(f"  n{idx} -> n{child_idx} [{attrs}];")
        return idx

    visit(tree)
    body = "\n".join(
        ["  node [shape=box, style=filled, fillcolor=white];", *nodes, *edges]
    )
    return f"digraph {graph_name} {{\n{body}\n}}\n"
