"""Quasi-reduced multi-value decision diagrams with hash consing.

Every diagram created by one :class:`MddManager` shares the manager's
unique table, so equal sets of tuples are represented by the very same root
node.  Levels are strict: a node at level ``k`` only points to nodes at
level ``k + 1``, and only level ``arity - 1`` points to the terminal.

Reference counts track incoming edges from live nodes plus external
handles (:class:`Mdd` objects).  Releasing a handle with :meth:`Mdd.remove`
decrements the root and frees every node whose count drops to zero.
"""

from __future__ import annotations

import itertools
from typing import Iterator, NamedTuple, Sequence

from .mdt import Mdt, TreeNode


class MddError(RuntimeError):
    """Misuse of a diagram handle, such as removing it twice."""


class _Terminal:
    __slots__ = ()

    def __repr__(self):
        return "<T>"


TERMINAL = _Terminal()


class DdNode:
    __slots__ = ("level", "edges", "key", "ref", "uid")

    def __init__(self, level: int, edges: dict, key, uid: int):
        self.level = level
        self.edges = edges
        self.key = key
        self.ref = 0
        self.uid = uid

    def __repr__(self):
        return f"<DdNode #{self.uid} level={self.level} edges={len(self.edges)} ref={self.ref}>"


class MddStats(NamedTuple):
    live_nodes: int  # nodes in the manager's unique table
    reachable_nodes: int  # non-terminal nodes reachable from this diagram
    paths: int


class Mdd:
    """External handle on a diagram; owns one reference to its root."""

    __slots__ = ("manager", "root", "_released")

    def __init__(self, manager: MddManager, root: DdNode | None):
        self.manager = manager
        self.root = root
        self._released = False
        if root is not None:
            root.ref += 1

    @property
    def arity(self) -> int:
        return self.manager.arity

    @property
    def is_empty(self) -> bool:
        return self.root is None

    @property
    def handle(self) -> int:
        """Identity of the root node (0 for the empty diagram)."""
        return 0 if self.root is None else self.root.uid

    def same_as(self, other: Mdd) -> bool:
        return self.root is other.root

    def contains(self, tup: Sequence[int]) -> bool:
        return self.manager.contains(self, tup)

    __contains__ = contains

    def union(self, other: Mdd) -> Mdd:
        return self.manager.union(self, other)

    def remove(self):
        self.manager.remove(self)

    def stats(self) -> MddStats:
        return self.manager.stats(self)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return self.manager.paths(self)

    def __len__(self):
        return self.manager.path_count(self)

    def __repr__(self):
        return f"<Mdd arity={self.arity} root={self.handle}>"


class MddManager:
    """Owns the unique table shared by all diagrams of one arity."""

    def __init__(self, arity: int):
        if arity < 1:
            raise ValueError("arity must be positive")
        self.arity = arity
        self._unique: dict[tuple, DdNode] = {}
        self._uids = itertools.count(1)
        self._path_memo: dict[DdNode, int] = {}
        self.live_edges = 0
        self.union_calls = 0  # top-level union invocations
        self.union_steps = 0  # recursive node-pair unions actually computed
        self.cache_hits = 0

    # -- node construction -------------------------------------------------

    def _make(self, level: int, edges: dict) -> DdNode:
        key = (level, frozenset(edges.items()))
        node = self._unique.get(key)
        if node is not None:
            return node
        node = DdNode(level, edges, key, next(self._uids))
        if level != self.arity - 1:
            for child in edges.values():
                child.ref += 1
        self._unique[key] = node
        self.live_edges += len(edges)
        return node

    def _check(self, tup: Sequence[int]):
        if len(tup) != self.arity:
            raise ValueError(f"tuple {tuple(tup)} has arity {len(tup)}, expected {self.arity}")

    def _own(self, d: Mdd):
        if d.manager is not self:
            raise MddError("diagram belongs to a different manager")
        if d._released:
            raise MddError("diagram handle used after remove")

    def empty(self) -> Mdd:
        return Mdd(self, None)

    def create(self, tup: Sequence[int]) -> Mdd:
        """Diagram holding the single path ``tup``."""
        self._check(tup)
        if any(label < 0 for label in tup):
            raise ValueError("labels must be non-negative")
        child = TERMINAL
        for level in range(self.arity - 1, -1, -1):
            child = self._make(level, {tup[level]: child})
        return Mdd(self, child)

    # -- queries -------------------------------------------------------------

    def contains(self, d: Mdd, tup: Sequence[int]) -> bool:
        self._own(d)
        self._check(tup)
        node = d.root
        if node is None:
            return False
        for label in tup:
            node = node.edges.get(label)
            if node is None:
                return False
        return True

    def path_count(self, d: Mdd) -> int:
        self._own(d)
        if d.root is None:
            return 0
        memo = self._path_memo
        last = self.arity - 1

        def count(node):
            n = memo.get(node)
            if n is None:
                if node.level == last:
                    n = len(node.edges)
                else:
                    n = sum(count(c) for c in node.edges.values())
                memo[node] = n
            return n

        return count(d.root)

    def reachable(self, d: Mdd) -> list[DdNode]:
        """Non-terminal nodes reachable from ``d`` in depth-first label order."""
        self._own(d)
        if d.root is None:
            return []
        seen = {d.root}
        order = []
        stack = [d.root]
        last = self.arity - 1
        while stack:
            node = stack.pop()
            order.append(node)
            if node.level == last:
                continue
            for _, child in sorted(node.edges.items(), reverse=True):
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        return order

    def stats(self, d: Mdd) -> MddStats:
        return MddStats(len(self._unique), len(self.reachable(d)), self.path_count(d))

    def paths(self, d: Mdd) -> Iterator[tuple[int, ...]]:
        """Tuples of ``d`` in lexicographic order."""
        self._own(d)
        if d.root is None:
            return
        stack = [(d.root, ())]
        while stack:
            node, prefix = stack.pop()
            if node is TERMINAL:
                yield prefix
                continue
            for label, child in sorted(node.edges.items(), reverse=True):
                stack.append((child, prefix + (label,)))

    @property
    def live_nodes(self) -> int:
        return len(self._unique)

    # -- union ---------------------------------------------------------------

    def union(self, a: Mdd, b: Mdd, use_cache: bool = True) -> Mdd:
        """New diagram holding the paths of both ``a`` and ``b``."""
        self._own(a)
        self._own(b)
        self.union_calls += 1
        if a.root is None:
            return Mdd(self, b.root)
        if b.root is None:
            return Mdd(self, a.root)
        cache = {} if use_cache else None
        return Mdd(self, self._union(a.root, b.root, cache))

    def _union(self, n1: DdNode, n2: DdNode, cache) -> DdNode:
        if n1 is n2:
            return n1
        if cache is not None:
            key = (n1, n2) if n1.uid < n2.uid else (n2, n1)
            hit = cache.get(key)
            if hit is not None:
                self.cache_hits += 1
                return hit
        self.union_steps += 1
        edges = dict(n1.edges)
        if n1.level == self.arity - 1:
            # children are all the terminal; only labels matter
            for label in n2.edges:
                edges[label] = TERMINAL
        else:
            for label, c2 in n2.edges.items():
                c1 = edges.get(label)
                if c1 is None:
                    edges[label] = c2
                elif c1 is not c2:
                    edges[label] = self._union(c1, c2, cache)
        result = self._make(n1.level, edges)
        if cache is not None:
            cache[key] = result
        return result

    # -- compress --------------------------------------------------------------

    def compress(self, tree: Mdt | TreeNode) -> Mdd:
        """Canonical diagram with exactly the paths of a decision tree."""
        root = tree.root if isinstance(tree, Mdt) else tree
        if isinstance(tree, Mdt) and tree.arity != self.arity:
            raise ValueError(f"tree arity {tree.arity} != diagram arity {self.arity}")
        if not root.children:
            return Mdd(self, None)
        return Mdd(self, self._compress(root))

    def _compress(self, node: TreeNode) -> DdNode:
        if node.level == self.arity - 1:
            edges = dict.fromkeys(node.children, TERMINAL)
        else:
            edges = {label: self._compress(child) for label, child in node.children.items()}
        return self._make(node.level, edges)

    # -- removal ---------------------------------------------------------------

    def remove(self, d: Mdd):
        """Release ``d``'s reference; free nodes no longer referenced."""
        if d._released:
            raise MddError("diagram removed twice")
        self._own(d)
        d._released = True
        if d.root is None:
            return
        last = self.arity - 1
        stack = [d.root]
        while stack:
            node = stack.pop()
            node.ref -= 1
            if node.ref > 0:
                continue
            del self._unique[node.key]
            self._path_memo.pop(node, None)
            self.live_edges -= len(node.edges)
            if node.level != last:
                stack.extend(node.edges.values())

    # -- output ----------------------------------------------------------------

    def dump(self, d: Mdd) -> str:
        """Deterministic text form: one line per node, ids in DFS label order."""
        nodes = self.reachable(d)
        ids = {node: i for i, node in enumerate(nodes)}
        lines = [f"mdd arity={self.arity} nodes={len(nodes)} paths={self.path_count(d)}"]
        for node in nodes:
            parts = []
            for label, child in sorted(node.edges.items()):
                target = "T" if child is TERMINAL else f"n{ids[child]}"
                parts.append(f"{label}->{target}")
            lines.append(f"L{node.level} n{ids[node]}: " + " ".join(parts))
        return "\n".join(lines) + "\n"
