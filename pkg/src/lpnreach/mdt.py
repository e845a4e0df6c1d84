"""Multi-value decision trees: a trie over fixed-arity integer tuples.

All root-to-terminal paths have exactly ``arity`` edges and end in one
terminal node shared by every tree of that arity.
"""

from __future__ import annotations

from typing import Iterator, NamedTuple, Sequence


class Terminal:
    """Sentinel ending every path; one instance per arity."""

    __slots__ = ("arity",)

    def __init__(self, arity: int):
        self.arity = arity

    def __repr__(self):
        return f"<terminal/{self.arity}>"


_TERMINALS: dict[int, Terminal] = {}


def terminal(arity: int) -> Terminal:
    t = _TERMINALS.get(arity)
    if t is None:
        t = _TERMINALS[arity] = Terminal(arity)
    return t


class TreeNode:
    __slots__ = ("level", "children")

    def __init__(self, level: int):
        self.level = level
        # label -> TreeNode or Terminal; sorted on iteration, not on insert
        self.children: dict[int, TreeNode | Terminal] = {}

    def items(self):
        return sorted(self.children.items())


class TreeStats(NamedTuple):
    nodes: int  # including root and the terminal
    edges: int
    paths: int

    @property
    def nonterminal_nodes(self) -> int:
        return self.nodes - 1


class Mdt:
    """A set of integer tuples stored as a decision tree.

    Node, edge and path counts are maintained incrementally, so
    :meth:`stats` is O(1).  ``last_visits`` records how many nodes the most
    recent :meth:`add` or :meth:`contains` touched.
    """

    def __init__(self, arity: int):
        if arity < 1:
            raise ValueError("arity must be positive")
        self.arity = arity
        self.terminal = terminal(arity)
        self.root = TreeNode(0)
        self._nodes = 1
        self._edges = 0
        self._paths = 0
        self.last_visits = 0

    def _check(self, tup: Sequence[int]):
        if len(tup) != self.arity:
            raise ValueError(f"tuple {tuple(tup)} has arity {len(tup)}, expected {self.arity}")

    def add(self, tup: Sequence[int]) -> bool:
        """Insert ``tup``; return True if any edge was created."""
        self._check(tup)
        node = self.root
        last = self.arity - 1
        visits = 1
        for level in range(last):
            label = tup[level]
            child = node.children.get(label)
            if child is None:
                if label < 0:
                    raise ValueError("labels must be non-negative")
                child = TreeNode(level + 1)
                node.children[label] = child
                self._nodes += 1
                self._edges += 1
            node = child
            visits += 1
        label = tup[last]
        self.last_visits = visits + 1
        if label in node.children:
            return False
        if label < 0:
            raise ValueError("labels must be non-negative")
        node.children[label] = self.terminal
        self._edges += 1
        self._paths += 1
        return True

    def contains(self, tup: Sequence[int]) -> bool:
        self._check(tup)
        node = self.root
        visits = 1
        for label in tup:
            node = node.children.get(label)
            visits += 1
            if node is None:
                self.last_visits = visits - 1
                return False
        self.last_visits = visits
        return True

    __contains__ = contains

    def __len__(self):
        return self._paths

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        """Tuples in lexicographic order."""
        stack = [(self.root, ())]
        while stack:
            node, prefix = stack.pop()
            if node is self.terminal:
                yield prefix
                continue
            for label, child in reversed(node.items()):
                stack.append((child, prefix + (label,)))

    def stats(self) -> TreeStats:
        return TreeStats(self._nodes + 1, self._edges, self._paths)

    def clear(self):
        self.root = TreeNode(0)
        self._nodes = 1
        self._edges = 0
        self._paths = 0

    def dump(self) -> str:
        """Indented listing of the tree, children in label order."""
        lines = [f"mdt arity={self.arity} paths={self._paths}"]

        def walk(node, depth):
            for label, child in node.items():
                if child is self.terminal:
                    lines.append("  " * depth + f"{label} -> T")
                else:
                    lines.append("  " * depth + f"{label}")
                    walk(child, depth + 1)

        walk(self.root, 1)
        return "\n".join(lines) + "\n"
