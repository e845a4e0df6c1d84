"""Labeled Petri net modules, their parallel composition, and firing."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .expr import BoolConst, BoolExpr, EvalError, NumExpr, eval_bool, eval_num, variables


class ModelError(Exception):
    """A structurally invalid model, or a runtime failure while firing."""


TRUE = BoolConst(True)


@dataclass(frozen=True)
class Transition:
    name: str
    preset: frozenset[str]
    postset: frozenset[str]
    guard: BoolExpr = TRUE
    assigns: tuple[tuple[str, NumExpr], ...] = ()
    # filled in by LpnSystem
    module: int = -1
    qualname: str = ""

    def reads(self) -> frozenset[str]:
        names = variables(self.guard)
        for _, rhs in self.assigns:
            names |= variables(rhs)
        return names


@dataclass(frozen=True)
class LpnModule:
    """One component net: variables with initial values, one-safe places,
    guarded transitions.  Validated on construction."""

    name: str
    variables: Mapping[str, int]
    places: tuple[str, ...]
    initial_marking: frozenset[str]
    transitions: tuple[Transition, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", dict(self.variables))
        object.__setattr__(self, "places", tuple(self.places))
        object.__setattr__(self, "initial_marking", frozenset(self.initial_marking))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        self._validate()

    def _validate(self):
        where = f"module {self.name!r}"
        if len(set(self.places)) != len(self.places):
            dup = sorted(p for p in set(self.places) if self.places.count(p) > 1)
            raise ModelError(f"{where}: duplicate place {dup[0]!r}")
        places = set(self.places)
        if not self.initial_marking <= places:
            bad = sorted(self.initial_marking - places)
            raise ModelError(f"{where}: initial marking names unknown place {bad[0]!r}")
        seen = set()
        for t in self.transitions:
            tw = f"{where}, transition {t.name!r}"
            if t.name in seen:
                raise ModelError(f"{where}: duplicate transition {t.name!r}")
            seen.add(t.name)
            if not t.preset or not t.postset:
                raise ModelError(f"{tw}: preset and postset must be nonempty")
            for p in sorted((t.preset | t.postset) - places):
                raise ModelError(f"{tw}: unknown place {p!r}")
            for v in sorted(t.reads() - self.variables.keys()):
                raise ModelError(f"{tw}: unknown variable {v!r}")
            targets = [v for v, _ in t.assigns]
            for v in targets:
                if v not in self.variables:
                    raise ModelError(f"{tw}: assignment to unknown variable {v!r}")
            if len(set(targets)) != len(targets):
                raise ModelError(f"{tw}: variable assigned twice")


@dataclass(frozen=True)
class LpnSystem:
    """Parallel composition ``N1 || ... || Nn`` communicating through
    shared variables (same name declared in several modules)."""

    modules: tuple[LpnModule, ...]
    name: str = "system"
    # variable -> indices of the modules declaring it
    sharing: Mapping[str, frozenset[int]] = field(init=False)
    transitions: tuple[Transition, ...] = field(init=False)
    initial_valuation: Mapping[str, int] = field(init=False)

    @property
    def places(self) -> list[str]:
        return [p for m in self.modules for p in m.places]

    def module_transitions(self, k: int) -> tuple[Transition, ...]:
        return self._by_module[k]

    def transition(self, qualname: str) -> Transition:
        for t in self.transitions:
            if t.qualname == qualname:
                return t
        raise KeyError(qualname)


def compose(modules: Sequence[LpnModule], name: str = "system") -> LpnSystem:
    """Validate and build the parallel composition of ``modules``."""
    modules = tuple(modules)
    if not modules:
        raise ModelError("no modules")
    names = set()
    owner = {}
    initial: dict[str, int] = {}
    sharing: dict[str, set[int]] = {}
    for k, m in enumerate(modules):
        if m.name in names:
            raise ModelError(f"duplicate module name {m.name!r}")
        names.add(m.name)
        for p in m.places:
            if p in owner:
                raise ModelError(
                    f"place {p!r} declared in both {owner[p]!r} and {m.name!r}")
            owner[p] = m.name
        for v, value in m.variables.items():
            if v in initial and initial[v] != value:
                raise ModelError(
                    f"shared variable {v!r} has inconsistent initial values "
                    f"{initial[v]} and {value} (module {m.name!r})")
            initial[v] = value
            sharing.setdefault(v, set()).add(k)

    by_module = []
    flat = []
    for k, m in enumerate(modules):
        ts = tuple(
            Transition(t.name, t.preset, t.postset, t.guard, t.assigns,
                       module=k, qualname=f"{m.name}.{t.name}")
            for t in m.transitions)
        by_module.append(ts)
        flat.extend(ts)

    system = LpnSystem(modules, name)
    object.__setattr__(system, "sharing", {v: frozenset(ks) for v, ks in sharing.items()})
    object.__setattr__(system, "transitions", tuple(flat))
    object.__setattr__(system, "initial_valuation", initial)
    object.__setattr__(system, "_by_module", tuple(by_module))
    return system


def initial_markings(system: LpnSystem) -> tuple[frozenset[str], ...]:
    return tuple(m.initial_marking for m in system.modules)


def is_enabled(t: Transition, marking: frozenset[str], valuation: Mapping[str, int]) -> bool:
    if not t.preset <= marking:
        return False
    try:
        return eval_bool(t.guard, valuation)
    except EvalError as exc:
        raise ModelError(f"transition {t.qualname or t.name}: guard: {exc}") from exc


def enabled_local(module, marking, valuation) -> list[Transition]:
    """Transitions of one module enabled under ``marking`` and ``valuation``,
    in declaration order.

    ``module`` may be an :class:`LpnModule` or the module's transitions as
    composed into an :class:`LpnSystem`.
    """
    transitions = module.transitions if isinstance(module, LpnModule) else module
    return [t for t in transitions if is_enabled(t, marking, valuation)]


def evaluate_assigns(t: Transition, valuation: Mapping[str, int]) -> dict[str, int]:
    """Right-hand sides of ``t`` evaluated against the pre-fire valuation."""
    try:
        return {v: eval_num(rhs, valuation) for v, rhs in t.assigns}
    except EvalError as exc:
        raise ModelError(f"transition {t.qualname or t.name}: assignment: {exc}") from exc


def fire(system: LpnSystem, t: Transition, valuation: Mapping[str, int],
         markings: Sequence[frozenset[str]]):
    """Fire ``t`` and return ``(new_markings, new_valuation)``.

    Assignments are evaluated against the pre-fire valuation and applied
    together.  Inputs are not modified.
    """
    k = t.module
    if not is_enabled(t, markings[k], valuation):
        raise ModelError(f"transition {t.qualname} fired while disabled")
    updates = evaluate_assigns(t, valuation)
    new_markings = list(markings)
    new_markings[k] = (markings[k] - t.preset) | t.postset
    new_valuation = dict(valuation)
    new_valuation.update(updates)
    return tuple(new_markings), new_valuation
