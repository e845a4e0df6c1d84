"""Depth-first reachability over an LPN system with a pluggable state store."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Optional

from .model import LpnSystem
from .statespace import StateSpace
from .stores import StateStore, local_table_bytes, make_store

DEFAULT_TIME_LIMIT = 900.0
# stand-in for a 2 GB memory bound: store entries or nodes
DEFAULT_MAX_NODES = 2**25

COMPLETED = "completed"
TIMEOUT = "timeout"
STATE_CAP = "state_cap"
NODE_CAP = "node_cap"

MIB = float(1 << 20)
# fields that vary from run to run even for identical searches
TIMING_FIELDS = ("elapsed_s", "ss")

_CHECK_EVERY = 1024


@dataclass
class Limits:
    max_states: Optional[int] = None
    time_limit: Optional[float] = DEFAULT_TIME_LIMIT
    max_nodes: Optional[int] = DEFAULT_MAX_NODES


@dataclass
class ReachReport:
    model: str
    backend: str
    states: int
    firings: int
    elapsed_s: float
    termination: str
    local_states: int
    store_bytes: int  # peak over the run
    local_table_bytes: int
    estimated_bytes: int  # store_bytes + local_table_bytes
    ss: float  # states per second
    ssd: float  # states per MiB of estimated_bytes
    union_calls: int = 0
    flushes: int = 0
    threshold: int = 0
    max_depth: int = 0
    store: dict = field(default_factory=dict)

    @property
    def completed(self) -> bool:
        return self.termination == COMPLETED

    def to_dict(self) -> dict:
        return asdict(self)


def states_per_second(states: int, elapsed: float) -> float:
    return states / elapsed if elapsed > 0 else 0.0


def states_per_mib(states: int, nbytes: int) -> float:
    return states / (nbytes / MIB) if nbytes > 0 else 0.0


class Search:
    """One run of the depth-first search.

    The stack holds ``(state, remaining enabled transitions)`` frames.  A
    successor is pushed only if the store did not already hold it, and the
    enabled set of a state is computed once, when it is pushed.
    """

    def __init__(self, system: LpnSystem, store: StateStore, limits: Limits | None = None):
        self.system = system
        self.store = store
        self.limits = limits or Limits()
        self.space = StateSpace(system)
        self.firings = 0
        self.pushes = 0
        self.max_depth = 0
        self.termination = None

    def run(self) -> str:
        space, store, limits = self.space, self.store, self.limits
        successor = space.successor_id
        enabled = space.enabled_ids
        add = store.add_if_new
        max_states = limits.max_states
        max_nodes = limits.max_nodes
        deadline = None
        if limits.time_limit is not None:
            deadline = time.perf_counter() + limits.time_limit

        g0 = space.initial_global()
        add(g0)
        states = [g0]
        pending = [iter(enabled(g0))]
        self.pushes = 1
        depth = 1
        firings = 0
        budget = _CHECK_EVERY
        reason = COMPLETED
        if max_states is not None and store.size >= max_states:
            states.clear()
            reason = STATE_CAP

        while states:
            tid = next(pending[-1], None)
            if tid is None:
                states.pop()
                pending.pop()
                continue
            g = successor(states[-1], tid)
            firings += 1
            if add(g):
                states.append(g)
                pending.append(iter(enabled(g)))
                self.pushes += 1
                if len(states) > depth:
                    depth = len(states)
                if max_states is not None and store.size >= max_states:
                    reason = STATE_CAP
                    break
            budget -= 1
            if budget == 0:
                budget = _CHECK_EVERY
                if deadline is not None and time.perf_counter() >= deadline:
                    reason = TIMEOUT
                    break
                if max_nodes is not None and store.structure_count() >= max_nodes:
                    reason = NODE_CAP
                    break

        store.finish()
        self.firings = firings
        self.max_depth = depth
        self.termination = reason
        return reason


def dfs_reach(system: LpnSystem, store: StateStore, limits: Limits | None = None,
              model_name: str | None = None) -> ReachReport:
    """Explore every state reachable from the initial state of ``system``."""
    search = Search(system, store, limits)
    start = time.perf_counter()
    reason = search.run()
    elapsed = time.perf_counter() - start

    mem = store.memory_report()
    store_bytes = mem["peak_estimated_bytes"]
    table_bytes = local_table_bytes(search.space)
    total = store_bytes + table_bytes
    return ReachReport(
        model=model_name or system.name,
        backend=store.kind,
        states=store.size,
        firings=search.firings,
        elapsed_s=elapsed,
        termination=reason,
        local_states=search.space.num_local_states(),
        store_bytes=store_bytes,
        local_table_bytes=table_bytes,
        estimated_bytes=total,
        ss=states_per_second(store.size, elapsed),
        ssd=states_per_mib(store.size, total),
        union_calls=mem.get("union_calls", 0),
        flushes=mem.get("flushes", 0),
        threshold=mem.get("threshold", 0),
        max_depth=search.max_depth,
        store=mem,
    )


def reach(system: LpnSystem, backend: str = "hash", threshold: int | None = None,
          limits: Limits | None = None, model_name: str | None = None) -> ReachReport:
    """Convenience wrapper: build the store, then run :func:`dfs_reach`."""
    arity = len(system.modules)
    store = make_store(backend, arity) if threshold is None else make_store(backend, arity, threshold)
    return dfs_reach(system, store, limits, model_name)
