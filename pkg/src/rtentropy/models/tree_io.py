"""Text format for trained trees.

    c45-tree version=1 features=h_a,h_b,h classes=normal,failed
    split h <= 0.5
      leaf normal [5,0]
      leaf failed [0,5]

Children follow their `split` line indented by two more spaces, the `<=` branch first.
Numbers are written with 17 significant digits.
"""
import logging
import math
import re
from typing import List, Tuple

from rtentropy.constants import CLASSES
from rtentropy.errors import TreeParseError
from rtentropy.models.c45 import Internal, Leaf, Node, TreeModel

logger = logging.getLogger(__name__)

FORMAT_NAME = "c45-tree"
FORMAT_VERSION = 1
INDENT = "  "

_HEADER = re.compile(rf"^{FORMAT_NAME} version=(\d+) features=(\S+) classes=(\S+)$")
_LEAF = re.compile(r"^leaf (\S+) \[([^\]]*)\]$")


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def serialize(model: TreeModel) -> str:
    lines = [
        f"{FORMAT_NAME} version={FORMAT_VERSION} features={','.join(model.feature_names)} "
        f"classes={','.join(model.classes)}"
    ]

    def emit(node: Node, depth: int):
        pad = INDENT * depth
        if isinstance(node, Leaf):
            counts = ",".join(_fmt(c) for c in node.class_counts)
            lines.append(f"{pad}leaf {node.predicted} [{counts}]")
            return
        lines.append(f"{pad}split {model.feature_names[node.attribute_index]} <= {_fmt(node.threshold)}")
        emit(node.left, depth + 1)
        emit(node.right, depth + 1)

    emit(model.root, 0)
    return "\n".join(lines) + "\n"


class _TreeParser:
    def __init__(self, text: str, source: str):
        self.source = source
        self.lines: List[Tuple[int, str]] = [
            (i, line.rstrip("\r")) for i, line in enumerate(text.split("\n"), start=1) if line.strip()
        ]
        self.pos = 0
        self.feature_names: Tuple[str, ...] = ()
        self.classes: Tuple[str, ...] = ()

    def error(self, line_no: int, reason: str) -> TreeParseError:
        return TreeParseError(f"{self.source}:{line_no}", reason)

    def parse(self) -> TreeModel:
        if not self.lines:
            raise TreeParseError(f"{self.source}:1", "empty model file")
        line_no, header = self.lines[0]
        match = _HEADER.match(header.strip())
        if match is None:
            raise self.error(line_no, f"expected header '{FORMAT_NAME} version=... features=... classes=...'")
        if int(match.group(1)) != FORMAT_VERSION:
            raise self.error(line_no, f"unsupported format version {match.group(1)}")
        self.feature_names = tuple(match.group(2).split(","))
        self.classes = tuple(match.group(3).split(","))
        if self.classes != CLASSES:
            raise self.error(line_no, f"classes must be {','.join(CLASSES)}")
        if len(set(self.feature_names)) != len(self.feature_names) or "" in self.feature_names:
            raise self.error(line_no, "feature names must be distinct and non-empty")

        self.pos = 1
        root = self.node(depth=0)
        if self.pos < len(self.lines):
            raise self.error(self.lines[self.pos][0], "unexpected content after the tree")
        return TreeModel(root=root, feature_names=self.feature_names, classes=self.classes)

    def node(self, depth: int) -> Node:
        if self.pos >= len(self.lines):
            last = self.lines[-1][0]
            raise self.error(last + 1, "unexpected end of file, expected a split or leaf line")
        line_no, line = self.lines[self.pos]
        indent = len(line) - len(line.lstrip(" "))
        if indent != len(INDENT) * depth:
            raise self.error(line_no, f"expected indentation of {len(INDENT) * depth} spaces, found {indent}")
        self.pos += 1
        body = line.strip()
        if body.startswith("split "):
            return self.split(line_no, body, depth)
        if body.startswith("leaf "):
            return self.leaf(line_no, body)
        raise self.error(line_no, "expected a split or leaf line")

    def split(self, line_no: int, body: str, depth: int) -> Internal:
        tokens = body.split()
        if len(tokens) != 4 or tokens[2] != "<=":
            raise self.error(line_no, "expected 'split <feature> <= <threshold>'")
        if tokens[1] not in self.feature_names:
            raise self.error(line_no, f"unknown feature {tokens[1]!r}")
        threshold = self.number(line_no, tokens[3])
        left = self.node(depth + 1)
        right = self.node(depth + 1)
        counts = tuple(a + b for a, b in zip(left.class_counts, right.class_counts))
        return Internal(
            attribute_index=self.feature_names.index(tokens[1]),
            threshold=threshold,
            left=left,
            right=right,
            class_counts=counts,
        )

    def leaf(self, line_no: int, body: str) -> Leaf:
        match = _LEAF.match(body)
        if match is None:
            raise self.error(line_no, "expected 'leaf <class> [<count>,<count>]'")
        predicted = match.group(1)
        if predicted not in self.classes:
            raise self.error(line_no, f"unknown class {predicted!r}")
        counts = tuple(self.number(line_no, raw.strip()) for raw in match.group(2).split(","))
        if len(counts) != len(self.classes) or any(c < 0 for c in counts):
            raise self.error(line_no, f"expected {len(self.classes)} non-negative class counts")
        if sum(counts) > 0 and Leaf.from_counts(counts).predicted != predicted:
            raise self.error(line_no, f"class {predicted!r} is not the majority of {list(counts)}")
        return Leaf(class_counts=counts, predicted=predicted)

    def number(self, line_no: int, raw: str) -> float:
        try:
            value = float(raw)
        except ValueError:
            raise self.error(line_no, f"{raw!r} is not a number") from None
        if not math.isfinite(value):
            raise self.error(line_no, f"{raw!r} is not finite")
        return value


def deserialize(text: str, source: str = "<model>") -> TreeModel:
    return _TreeParser(text, source).parse()


def save_model(model: TreeModel, path: str):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(serialize(model))
    logger.info("Model with %d leaves saved to %s", model.n_leaves, path)


def load_model(path: str) -> TreeModel:
    with open(path, "r", encoding="utf-8") as f:
        return deserialize(f.read(), source=path)
