from hypothesis import given, strategies as st

from conftest import module, trans
from lpnreach import compose, generate_model
from lpnreach.statespace import LocalState, LocalStateTable, StateSpace


class TestIntern:
    def test_first_is_zero(self):
        table = LocalStateTable()
        assert table.intern(LocalState(("p",), (0,))) == 0

    def test_idempotent(self):
        table = LocalStateTable()
        ls = LocalState(("p",), (3, 4))
        assert table.intern(ls) == table.intern(ls) == 0
        assert len(table) == 1

    def test_circuit_initial_then_successor(self, circuit):
        space = StateSpace(circuit)
        g0 = space.initial_global()
        assert g0[0] == 0
        g1 = space.successor(g0, circuit.transition("M1.t11"))
        assert g1[0] == 1
        assert space.lookup(0, 1).values == (0, 1, 0, 0)  # u x y z

    @given(st.lists(st.tuples(st.sets(st.sampled_from("pqr")),
                              st.tuples(st.integers(-3, 3), st.integers(-3, 3))),
                    max_size=40))
    def test_round_trip_and_stability(self, raw):
        table = LocalStateTable()
        assigned = {}
        for marking, values in raw:
            ls = LocalState(tuple(sorted(marking)), values)
            idx = table.intern(ls)
            assert assigned.setdefault(ls, idx) == idx
            assert table.lookup(idx) == ls
        assert sorted(assigned.values()) == list(range(len(assigned)))


class TestInitial:
    def test_circuit(self, circuit):
        assert StateSpace(circuit).initial_global() == (0, 0, 0)

    def test_one_module(self):
        assert StateSpace(generate_model("toggle_chain", 1)).initial_global() == (0,)

    def test_n_modules(self):
        assert StateSpace(generate_model("toggle_chain", 7)).initial_global() == (0,) * 7


class TestSuccessor:
    def test_unshared_assignment_changes_one_position(self):
        system = generate_model("toggle_chain", 4)
        space = StateSpace(system)
        g = space.initial_global()
        for t in system.transitions:
            g2 = space.successor(g, t)
            assert sum(a != b for a, b in zip(g, g2)) == 1
            assert g2[t.module] != g[t.module]

    def test_shared_assignment_changes_both(self):
        a = module("A", {"s": 0}, ["a0", "a1"], ["a0"], [trans("set", ["a0"], ["a1"], s="1")])
        b = module("B", {"s": 0}, ["b0"], ["b0"], [trans("idle", ["b0"], ["b0"], "s == 5")])
        system = compose([a, b])
        space = StateSpace(system)
        g = space.initial_global()
        g2 = space.successor(g, system.transition("A.set"))
        assert g2[0] != g[0] and g2[1] != g[1]
        assert space.lookup(1, g2[1]).values == (1,)
        assert space.lookup(1, g2[1]).marking == ("b0",)

    def test_noop_self_loop(self):
        system = compose([module("A", {"x": 0}, ["p"], ["p"], [trans("t", ["p"], ["p"])])])
        space = StateSpace(system)
        g = space.initial_global()
        assert space.successor(g, system.transitions[0]) == g

    def test_changed_positions_have_changed_configuration(self, circuit):
        space = StateSpace(circuit)
        frontier = [space.initial_global()]
        seen = set(frontier)
        while frontier:
            g = frontier.pop()
            for t in space.enabled_global(g):
                g2 = space.successor(g, t)
                for k in range(3):
                    if g2[k] != g[k]:
                        assert space.lookup(k, g2[k]) != space.lookup(k, g[k])
                if g2 not in seen:
                    seen.add(g2)
                    frontier.append(g2)
        # every module has far fewer local states than there are global states
        assert max(len(t) for t in space.tables) <= 16 < len(seen)

    def test_configuration_rebuild(self, circuit):
        space = StateSpace(circuit)
        markings, val = space.configuration(space.initial_global())
        assert val == circuit.initial_valuation
        assert markings == tuple(m.initial_marking for m in circuit.modules)


def test_table_growth_bounded_by_local_states():
    system = generate_model("toggle_chain", 6)
    space = StateSpace(system)
    stack = [space.initial_global()]
    seen = set(stack)
    while stack:
        g = stack.pop()
        for tid in space.enabled_ids(g):
            g2 = space.successor_id(g, tid)
            if g2 not in seen:
                seen.add(g2)
                stack.append(g2)
    assert len(seen) == 64
    assert [len(t) for t in space.tables] == [2] * 6


def test_dump_golden():
    system = generate_model("toggle_chain", 2)
    space = StateSpace(system)
    g = space.initial_global()
    space.successor(g, system.transitions[1])
    assert space.dump() == (
        "tog0/0 -> ({on0}, {b0=0})\n"
        "tog1/0 -> ({on1}, {b1=0})\n"
        "tog1/1 -> ({on1}, {b1=1})\n"
    )
