import pytest

from conftest import module, trans
from lpnreach import reach
from lpnreach.model import ModelError, compose, enabled_local, fire, initial_markings
from oracles import bfs_count


class TestCompose:
    def test_circuit_shape(self, circuit):
        assert len(circuit.modules) == 3
        assert len(circuit.places) == 6
        assert len(circuit.transitions) == 12
        for m in circuit.modules:
            assert len(m.places) == 2 and len(m.transitions) == 4

    def test_circuit_shared_variables(self, circuit):
        assert circuit.sharing["x"] == {0, 1, 2}
        assert circuit.sharing["u"] == {0}
        assert circuit.initial_valuation == dict(u=0, v=1, w=1, x=0, y=0, z=0)

    def test_single_module(self):
        m = module("A", {"x": 0}, ["p"], ["p"], [trans("t", ["p"], ["p"], x="1 - x")])
        system = compose([m])
        assert system.modules == (m,)
        assert [t.qualname for t in system.transitions] == ["A.t"]

    def test_shared_place_rejected(self):
        a = module("A", {}, ["p0"], ["p0"], [trans("t", ["p0"], ["p0"])])
        b = module("B", {}, ["p0"], ["p0"], [trans("t", ["p0"], ["p0"])])
        with pytest.raises(ModelError, match="p0"):
            compose([a, b])

    def test_inconsistent_shared_initial_value(self):
        a = module("A", {"x": 0}, ["p"], ["p"], [trans("t", ["p"], ["p"])])
        b = module("B", {"x": 1}, ["q"], ["q"], [trans("t", ["q"], ["q"])])
        with pytest.raises(ModelError, match="inconsistent"):
            compose([a, b])

    def test_duplicate_module_name(self):
        a = module("A", {}, ["p"], ["p"], [trans("t", ["p"], ["p"])])
        b = module("A", {}, ["q"], ["q"], [trans("t", ["q"], ["q"])])
        with pytest.raises(ModelError, match="duplicate module"):
            compose([a, b])

    def test_empty(self):
        with pytest.raises(ModelError, match="no modules"):
            compose([])


class TestModuleValidation:
    def test_empty_preset(self):
        with pytest.raises(ModelError, match="nonempty"):
            module("A", {}, ["p"], ["p"], [trans("t", [], ["p"])])

    def test_unknown_place(self):
        with pytest.raises(ModelError, match="unknown place"):
            module("A", {}, ["p"], ["p"], [trans("t", ["p"], ["q"])])

    def test_unknown_variable_in_guard(self):
        with pytest.raises(ModelError, match="unknown variable 'y'"):
            module("A", {"x": 0}, ["p"], ["p"], [trans("t", ["p"], ["p"], "y == 0")])

    def test_marking_outside_places(self):
        with pytest.raises(ModelError, match="initial marking"):
            module("A", {}, ["p"], ["q"], [trans("t", ["p"], ["p"])])


class TestEnabled:
    def test_t11_initially_enabled(self, circuit):
        m1 = circuit.modules[0]
        names = [t.name for t in enabled_local(m1, m1.initial_marking, circuit.initial_valuation)]
        assert "t11" in names

    def test_false_guard_never_enabled(self):
        m = module("A", {"x": 0}, ["p"], ["p"], [trans("t", ["p"], ["p"], "false")])
        for x in range(-3, 4):
            assert enabled_local(m, frozenset({"p"}), {"x": x}) == []

    def test_unmarked_preset(self):
        m = module("A", {}, ["p", "q"], ["q"], [trans("t", ["p"], ["q"])])
        assert enabled_local(m, frozenset({"q"}), {}) == []

    def test_result_is_subset_and_deterministic(self, circuit):
        for k, m in enumerate(circuit.modules):
            ts = circuit.module_transitions(k)
            a = enabled_local(ts, m.initial_marking, circuit.initial_valuation)
            b = enabled_local(ts, m.initial_marking, circuit.initial_valuation)
            assert a == b and set(a) <= set(ts)


class TestFire:
    def test_self_loop_increment(self):
        system = compose([module("A", {"x": 0}, ["p"], ["p"], [trans("t", ["p"], ["p"], x="x + 1")])])
        markings, val = fire(system, system.transitions[0], {"x": 0}, initial_markings(system))
        assert val == {"x": 1}
        assert markings == (frozenset({"p"}),)

    def test_move_token(self):
        system = compose([module("A", {}, ["p0", "p1"], ["p0"], [trans("t", ["p0"], ["p1"])])])
        markings, _ = fire(system, system.transitions[0], {}, (frozenset({"p0"}),))
        assert markings == (frozenset({"p1"}),)

    def test_simultaneous_swap(self):
        system = compose([module("A", {"a": 1, "b": 2}, ["p"], ["p"],
                                 [trans("t", ["p"], ["p"], a="b", b="a")])])
        _, val = fire(system, system.transitions[0], {"a": 1, "b": 2}, ({"p"},))
        assert val == {"a": 2, "b": 1}

    def test_inputs_not_mutated(self, circuit):
        markings = initial_markings(circuit)
        val = dict(circuit.initial_valuation)
        t11 = circuit.transition("M1.t11")
        fire(circuit, t11, val, markings)
        assert val == circuit.initial_valuation
        assert markings == initial_markings(circuit)

    def test_disabled_fire_is_error(self):
        system = compose([module("A", {}, ["p", "q"], ["q"], [trans("t", ["p"], ["q"])])])
        with pytest.raises(ModelError, match="disabled"):
            fire(system, system.transitions[0], {}, (frozenset({"q"}),))

    def test_division_by_zero_names_transition(self):
        system = compose([module("A", {"x": 0}, ["p"], ["p"], [trans("t", ["p"], ["p"], x="1 / x")])])
        with pytest.raises(ModelError, match="A.t"):
            fire(system, system.transitions[0], {"x": 0}, initial_markings(system))

    def test_marking_update_identity(self):
        m = module("A", {}, ["a", "b", "c", "d"], ["a", "b", "d"],
                   [trans("t", ["a", "b"], ["b", "c"])])
        system = compose([m])
        before = frozenset({"a", "b", "d"})
        (after,), _ = fire(system, system.transitions[0], {}, (before,))
        t = system.transitions[0]
        for p in m.places:
            assert (p in after) == ((p in before and p not in t.preset) or p in t.postset)

    def test_only_owner_marking_changes(self, circuit):
        markings = initial_markings(circuit)
        for t in circuit.transitions:
            if not t.preset <= markings[t.module]:
                continue
            try:
                new, _ = fire(circuit, t, circuit.initial_valuation, markings)
            except ModelError:
                continue
            changed = [k for k in range(3) if new[k] != markings[k]]
            assert set(changed) <= {t.module}


def _shared_pair():
    a = module("A", {"s": 0}, ["a0", "a1"], ["a0"],
               [trans("up", ["a0"], ["a1"], "s == 0", s="1"),
                trans("down", ["a1"], ["a0"], s="0")])
    b = module("B", {"s": 0, "c": 0}, ["b0"], ["b0"],
               [trans("count", ["b0"], ["b0"], "s == 1 && c < 2", c="c + 1")])
    return a, b


def test_composition_order_insensitive():
    a, b = _shared_pair()
    ab, ba = compose([a, b]), compose([b, a])
    assert bfs_count(ab) == bfs_count(ba)
    assert reach(ab).states == reach(ba).states == bfs_count(ab)
