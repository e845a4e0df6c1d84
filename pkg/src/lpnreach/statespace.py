"""Local-state interning and global states as tuples of local indices.

Each module's distinct ``(marking, valuation)`` pairs are stored once in a
per-module table and numbered densely in first-seen order.  A global state
is then a tuple of small integers, one per module, which is exactly the key
format the decision-diagram stores use.

Because a module's guards and assignment right-hand sides only read that
module's own variables, both the enabled set and the effect of firing are
functions of a single local state.  :class:`StateSpace` memoizes them per
local index, so the search never re-evaluates an expression for a local
state it has already seen.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

from .expr import EvalError, compile_bool, compile_num
from .model import LpnSystem, ModelError, Transition


class LocalState(NamedTuple):
    marking: tuple[str, ...]  # sorted place names
    values: tuple[int, ...]  # in the module's variable declaration order


class LocalStateTable:
    """Bijection between one module's local states and ``0, 1, 2, ...``."""

    def __init__(self):
        self._index: dict[LocalState, int] = {}
        self._states: list[LocalState] = []

    def intern(self, ls: LocalState) -> int:
        idx = self._index.get(ls)
        if idx is None:
            idx = len(self._states)
            self._index[ls] = idx
            self._states.append(ls)
        return idx

    def lookup(self, idx: int) -> LocalState:
        return self._states[idx]

    def __len__(self):
        return len(self._states)

    def __iter__(self):
        return iter(self._states)


class _Plan:
    """Precompiled firing data for one transition."""

    __slots__ = ("tid", "transition", "module", "preset", "postset", "guard",
                 "targets", "rhs", "others")

    def __init__(self, tid, t: Transition, slots, system: LpnSystem):
        self.tid = tid
        self.transition = t
        self.module = t.module
        self.preset = t.preset
        self.postset = t.postset
        self.guard = compile_bool(t.guard, slots)
        self.targets = tuple(v for v, _ in t.assigns)
        self.rhs = tuple(compile_num(e, slots) for _, e in t.assigns)
        affected = set()
        for v in self.targets:
            affected |= system.sharing[v]
        affected.discard(t.module)
        self.others = tuple(sorted(affected))


class StateSpace:
    """Local-state tables plus memoized enabledness and successors."""

    def __init__(self, system: LpnSystem):
        self.system = system
        n = len(system.modules)
        self.tables = [LocalStateTable() for _ in range(n)]
        self._var_order = [tuple(m.variables) for m in system.modules]
        self._slots = [{v: i for i, v in enumerate(order)} for order in self._var_order]
        self.plans = [
            _Plan(tid, t, self._slots[t.module], system)
            for tid, t in enumerate(system.transitions)]
        self._tid = {t.qualname: tid for tid, t in enumerate(system.transitions)}
        self._module_plans = [[p for p in self.plans if p.module == k] for k in range(n)]
        self._enabled: list[list] = [[] for _ in range(n)]
        self._owner_cache: dict[tuple[int, int], tuple[int, tuple]] = {}
        self._other_cache: dict[tuple[int, int, tuple], int] = {}

    # -- interning ---------------------------------------------------------

    def local_state(self, k: int, marking, valuation) -> LocalState:
        """Build module ``k``'s local state from a marking and a valuation
        covering (at least) its variables."""
        return LocalState(tuple(sorted(marking)),
                          tuple(valuation[v] for v in self._var_order[k]))

    def intern(self, k: int, ls: LocalState) -> int:
        return self.tables[k].intern(ls)

    def lookup(self, k: int, idx: int) -> LocalState:
        return self.tables[k].lookup(idx)

    def initial_global(self) -> tuple[int, ...]:
        val = self.system.initial_valuation
        return tuple(
            self.intern(k, self.local_state(k, m.initial_marking, val))
            for k, m in enumerate(self.system.modules))

    def configuration(self, g: Sequence[int]):
        """Rebuild ``(markings, valuation)`` from a global state."""
        markings = []
        valuation = {}
        for k, idx in enumerate(g):
            ls = self.lookup(k, idx)
            markings.append(frozenset(ls.marking))
            valuation.update(zip(self._var_order[k], ls.values))
        return tuple(markings), valuation

    def num_local_states(self) -> int:
        return sum(len(t) for t in self.tables)

    # -- enabledness -------------------------------------------------------

    def enabled_local_ids(self, k: int, idx: int) -> tuple[int, ...]:
        cache = self._enabled[k]
        if idx < len(cache) and cache[idx] is not None:
            return cache[idx]
        ls = self.lookup(k, idx)
        marking = frozenset(ls.marking)
        result = []
        for plan in self._module_plans[k]:
            if plan.preset <= marking:
                try:
                    ok = plan.guard(ls.values)
                except EvalError as exc:
                    raise ModelError(
                        f"transition {plan.transition.qualname}: guard: {exc}") from exc
                if ok:
                    result.append(plan.tid)
        result = tuple(result)
        if idx >= len(cache):
            cache.extend([None] * (idx + 1 - len(cache)))
        cache[idx] = result
        return result

    def enabled_ids(self, g: Sequence[int]) -> list[int]:
        """Enabled transition ids, ordered by module then declaration."""
        out = []
        for k, idx in enumerate(g):
            out.extend(self.enabled_local_ids(k, idx))
        return out

    def enabled_global(self, g: Sequence[int]) -> list[Transition]:
        return [self.plans[tid].transition for tid in self.enabled_ids(g)]

    # -- firing ------------------------------------------------------------

    def successor(self, g: Sequence[int], t: Transition) -> tuple[int, ...]:
        return self.successor_id(g, self._tid[t.qualname])

    def successor_id(self, g: Sequence[int], tid: int) -> tuple[int, ...]:
        plan = self.plans[tid]
        k = plan.module
        key = (tid, g[k])
        hit = self._owner_cache.get(key)
        if hit is None:
            hit = self._fire_owner(plan, g[k])
            self._owner_cache[key] = hit
        new_k, updates = hit
        out = list(g)
        out[k] = new_k
        if plan.others:
            for j in plan.others:
                ukey = (j, g[j], updates)
                new_j = self._other_cache.get(ukey)
                if new_j is None:
                    new_j = self._apply_shared(j, g[j], updates)
                    self._other_cache[ukey] = new_j
                out[j] = new_j
        return tuple(out)

    def _fire_owner(self, plan: _Plan, idx: int):
        k = plan.module
        ls = self.lookup(k, idx)
        marking = frozenset(ls.marking)
        if not plan.preset <= marking:
            raise ModelError(f"transition {plan.transition.qualname} fired while disabled")
        try:
            if not plan.guard(ls.values):
                raise ModelError(
                    f"transition {plan.transition.qualname} fired while disabled")
            # all right-hand sides see the pre-fire values
            new_vals = [f(ls.values) for f in plan.rhs]
        except EvalError as exc:
            raise ModelError(f"transition {plan.transition.qualname}: {exc}") from exc
        updates = tuple(zip(plan.targets, new_vals))
        values = list(ls.values)
        slots = self._slots[k]
        for v, value in updates:
            values[slots[v]] = value
        new_marking = tuple(sorted((marking - plan.preset) | plan.postset))
        new_idx = self.intern(k, LocalState(new_marking, tuple(values)))
        return new_idx, updates

    def _apply_shared(self, j: int, idx: int, updates) -> int:
        ls = self.lookup(j, idx)
        slots = self._slots[j]
        values = list(ls.values)
        changed = False
        for v, value in updates:
            s = slots.get(v)
            if s is not None and values[s] != value:
                values[s] = value
                changed = True
        if not changed:
            return idx
        return self.intern(j, LocalState(ls.marking, tuple(values)))

    # -- debugging ---------------------------------------------------------

    def dump(self) -> str:
        """Deterministic listing ``module/index -> (marking, valuation)``."""
        lines = []
        for k, m in enumerate(self.system.modules):
            names = self._var_order[k]
            for idx, ls in enumerate(self.tables[k]):
                vals = ", ".join(f"{v}={x}" for v, x in zip(names, ls.values))
                lines.append(f"{m.name}/{idx} -> ({{{', '.join(ls.marking)}}}, {{{vals}}})")
        return "\n".join(lines) + ("\n" if lines else "")
