"""Reachable-state stores behind one ``add_if_new``/``contains`` contract.

Memory is reported from structure counts through a fixed per-element cost
model rather than measured from the Python heap, which says more about the
interpreter than about the data structure.  The model assumes a compact
64-bit layout:

===================  =====================================================
hash entry           16 bytes (hash + chain pointer) + 4 bytes per index
MDT node             16 bytes (child array pointer + length)
MDD node             24 bytes (level, reference count, child array)
edge (MDT or MDD)    12 bytes (4-byte label + 8-byte pointer)
hash bucket          8 bytes; bucket count is the smallest power of two
                     (at least 16) holding the entries at load factor 0.75
local state          16 bytes + 4 bytes per marked place and per variable,
                     plus its bucket in the per-module table
===================  =====================================================

The hash store and the MDD unique table pay for buckets; the MDT does not
need a table.
"""

from __future__ import annotations

from .mdd import MddManager
from .mdt import Mdt

HASH_ENTRY_BYTES = 16
INDEX_BYTES = 4
TREE_NODE_BYTES = 16
DD_NODE_BYTES = 24
EDGE_BYTES = 12
BUCKET_BYTES = 8
LOCAL_STATE_BYTES = 16

DEFAULT_THRESHOLD = 65536

KINDS = ("hash", "mdt", "mdd", "hybrid")


def bucket_bytes(entries: int) -> int:
    need = -(-entries * 4 // 3)  # ceil(entries / 0.75)
    buckets = max(16, 1 << max(need - 1, 0).bit_length())
    return buckets * BUCKET_BYTES


def hash_bytes(entries: int, arity: int) -> int:
    return entries * (HASH_ENTRY_BYTES + INDEX_BYTES * arity) + bucket_bytes(entries)


def tree_bytes(nonterminal_nodes: int, edges: int) -> int:
    return nonterminal_nodes * TREE_NODE_BYTES + edges * EDGE_BYTES


def dd_bytes(nodes: int, edges: int) -> int:
    return nodes * DD_NODE_BYTES + edges * EDGE_BYTES + bucket_bytes(nodes)


def local_table_bytes(space) -> int:
    total = 0
    for table in space.tables:
        for ls in table:
            total += LOCAL_STATE_BYTES + INDEX_BYTES * (len(ls.marking) + len(ls.values))
        total += bucket_bytes(len(table))
    return total


class StateStore:
    """Set of global states (tuples of local indices)."""

    kind = "abstract"

    def __init__(self, arity: int):
        self.arity = arity
        self.size = 0
        self._peak = 0

    def add_if_new(self, state: tuple[int, ...]) -> bool:
        raise NotImplementedError

    def contains(self, state: tuple[int, ...]) -> bool:
        raise NotImplementedError

    def __contains__(self, state):
        return self.contains(state)

    def __len__(self):
        return self.size

    def finish(self):
        """Called once when the search ends."""

    def structure_count(self) -> int:
        """Entries or nodes currently held; used for the node cap."""
        raise NotImplementedError

    def estimated_bytes(self) -> int:
        raise NotImplementedError

    def _observe(self) -> int:
        current = self.estimated_bytes()
        if current > self._peak:
            self._peak = current
        return current

    def memory_report(self) -> dict:
        current = self._observe()
        report = {"kind": self.kind, "states": self.size}
        report.update(self._counts())
        report["estimated_bytes"] = current
        report["peak_estimated_bytes"] = self._peak
        return report

    def _counts(self) -> dict:
        return {}

    def dump(self) -> str:
        raise NotImplementedError


class HashStore(StateStore):
    kind = "hash"

    def __init__(self, arity: int):
        super().__init__(arity)
        self._set: set[tuple[int, ...]] = set()

    def add_if_new(self, state):
        s = self._set
        n = len(s)
        s.add(state)
        if len(s) == n:
            return False
        self.size += 1
        return True

    def contains(self, state):
        return state in self._set

    def structure_count(self):
        return self.size

    def estimated_bytes(self):
        return hash_bytes(self.size, self.arity)

    def _counts(self):
        return {"entries": self.size}

    def dump(self):
        lines = [f"hash arity={self.arity} entries={self.size}"]
        lines.extend(" ".join(map(str, s)) for s in sorted(self._set))
        return "\n".join(lines) + "\n"


class MdtStore(StateStore):
    kind = "mdt"

    def __init__(self, arity: int):
        super().__init__(arity)
        self.tree = Mdt(arity)

    def add_if_new(self, state):
        if self.tree.add(state):
            self.size += 1
            return True
        return False

    def contains(self, state):
        return self.tree.contains(state)

    def structure_count(self):
        return self.tree.stats().nonterminal_nodes

    def estimated_bytes(self):
        st = self.tree.stats()
        return tree_bytes(st.nonterminal_nodes, st.edges)

    def _counts(self):
        st = self.tree.stats()
        return {"tree_nodes": st.nonterminal_nodes, "tree_edges": st.edges}

    def dump(self):
        return self.tree.dump()


class MddStore(StateStore):
    """Every new state is merged with ``union(table, create(state))``."""

    kind = "mdd"

    def __init__(self, arity: int):
        super().__init__(arity)
        self.manager = MddManager(arity)
        self.table = self.manager.empty()

    def add_if_new(self, state):
        m = self.manager
        if m.contains(self.table, state):
            return False
        single = m.create(state)
        merged = m.union(self.table, single)
        # both inputs are still live here, which is the transient peak
        self._observe()
        m.remove(self.table)
        m.remove(single)
        self.table = merged
        self.size += 1
        return True

    def contains(self, state):
        return self.manager.contains(self.table, state)

    def structure_count(self):
        return self.manager.live_nodes

    def estimated_bytes(self):
        m = self.manager
        return dd_bytes(m.live_nodes, m.live_edges)

    def _counts(self):
        m = self.manager
        return {"dd_nodes": m.live_nodes, "dd_edges": m.live_edges,
                "union_calls": m.union_calls}

    def dump(self):
        return self.manager.dump(self.table)


class HybridStore(StateStore):
    """Decision-tree buffer periodically compressed and merged into an MDD.

    The buffer is flushed once it holds ``threshold`` states, and once more
    by :meth:`finish`.
    """

    kind = "hybrid"

    def __init__(self, arity: int, threshold: int = DEFAULT_THRESHOLD):
        super().__init__(arity)
        if threshold <= 0:
            raise ValueError("hybrid threshold must be positive")
        self.threshold = threshold
        self.manager = MddManager(arity)
        self.table = self.manager.empty()
        self.buffer = Mdt(arity)
        self.flushes = 0

    def add_if_new(self, state):
        if self.manager.contains(self.table, state):
            return False
        if not self.buffer.add(state):
            return False
        self.size += 1
        if len(self.buffer) >= self.threshold:
            self.flush()
        return True

    def contains(self, state):
        return self.buffer.contains(state) or self.manager.contains(self.table, state)

    def flush(self):
        """table <- union(table, compress(buffer)); then empty the buffer."""
        if len(self.buffer) == 0:
            return
        m = self.manager
        compressed = m.compress(self.buffer)
        merged = m.union(self.table, compressed)
        self._observe()
        m.remove(self.table)
        m.remove(compressed)
        self.table = merged
        self.buffer.clear()
        self.flushes += 1

    def finish(self):
        self.flush()

    def structure_count(self):
        return self.manager.live_nodes + self.buffer.stats().nonterminal_nodes

    def estimated_bytes(self):
        m = self.manager
        st = self.buffer.stats()
        return dd_bytes(m.live_nodes, m.live_edges) + tree_bytes(st.nonterminal_nodes, st.edges)

    def _counts(self):
        m = self.manager
        st = self.buffer.stats()
        return {"dd_nodes": m.live_nodes, "dd_edges": m.live_edges,
                "buffer_nodes": st.nonterminal_nodes, "buffer_edges": st.edges,
                "union_calls": m.union_calls, "flushes": self.flushes,
                "threshold": self.threshold}

    def dump(self):
        text = self.manager.dump(self.table)
        if len(self.buffer):
            text += self.buffer.dump()
        return text


def make_store(kind: str, arity: int, threshold: int = DEFAULT_THRESHOLD) -> StateStore:
    if kind == "hash":
        return HashStore(arity)
    if kind == "mdt":
        return MdtStore(arity)
    if kind == "mdd":
        return MddStore(arity)
    if kind == "hybrid":
        return HybridStore(arity, threshold)
    raise ValueError(f"unknown store kind {kind!r} (expected one of {', '.join(KINDS)})")
