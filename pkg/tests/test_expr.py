import pytest
from hypothesis import given, settings, strategies as st

from lpnreach.expr import (And, BinOp, BitNot, BitOp, BoolConst, Cmp, Const, EvalError,
                           ExprSyntaxError, IntOf, Neg, Not, Or, Truthy, Var, compile_bool,
                           compile_num, eval_bool, eval_num, parse_boolean,
                           parse_boolean_prefix, parse_numeric, to_text)

NAMES = ("a", "b", "c")


class TestParse:
    def test_not_zero(self):
        assert parse_numeric("NOT(0)") == BitNot(Const(0))

    def test_int_of_comparison(self):
        assert parse_numeric("INT(x < 3) * 2") == BinOp(
            "*", IntOf(Cmp("<", Var("x"), Const(3))), Const(2))

    def test_double_plus_rejected(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse_numeric("x ++ 1")
        assert info.value.pos == 3

    def test_guard_conjunction(self):
        assert parse_boolean("u == 0 && z == 0") == And(
            Cmp("==", Var("u"), Const(0)), Cmp("==", Var("z"), Const(0)))

    def test_true(self):
        assert parse_boolean("true") == BoolConst(True)

    def test_bare_variable_is_truthy(self):
        assert parse_boolean("x") == Truthy("x")

    def test_unknown_function(self):
        with pytest.raises(ExprSyntaxError, match="unknown function 'FOO'"):
            parse_numeric("FOO(1)")

    @pytest.mark.parametrize("text", [
        "", "(", "1 +", "a < b < c", "OR(1)", "INT(3)", "x == 1 + true",
        "1 & 2", "3 4", "!5", "NOT", "99999999999999999999",
    ])
    def test_rejects(self, text):
        with pytest.raises(ExprSyntaxError):
            if text in ("!5",):
                parse_boolean(text)
            else:
                parse_numeric(text)

    def test_numeric_is_not_boolean(self):
        with pytest.raises(ExprSyntaxError):
            parse_boolean("x + 1")
        with pytest.raises(ExprSyntaxError):
            parse_numeric("x < 1")

    @pytest.mark.parametrize("text,expected", [
        ("1 + 2 * 3", 7),
        ("(1 + 2) * 3", 9),
        ("2 ** 3 ** 2", 512),
        ("-2 ** 2", 4),  # unary minus binds tighter than **
        ("10 - 4 - 3", 3),
        ("7 / 2", 3),
        ("-7 / 2", -3),
        ("7 % -3", 1),
        ("-7 % 3", -1),
        ("7 % 3", 1),
        ("XOR(5, 3)", 6),
        ("AND(12, 10)", 8),
        ("OR(12, 10)", 14),
        ("NOT(-1)", 0),
        ("INT(5 > 3)", 1),
        ("INT(!(5 > 3) || false)", 0),
    ])
    def test_precedence_and_semantics(self, text, expected):
        assert eval_num(parse_numeric(text), {}) == expected

    def test_prefix_stops_at_foreign_text(self):
        text = "guard u == 0 && z == 0 assign x := 1"
        node, end = parse_boolean_prefix(text, 6)
        assert node == parse_boolean("u == 0 && z == 0")
        assert text[end:] == "assign x := 1"


class TestEval:
    def test_not_zero_is_minus_one(self):
        assert eval_num(parse_numeric("NOT(0)"), {"x": 12}) == -1

    def test_int_true(self):
        assert eval_num(IntOf(Cmp(">", Const(5), Const(3))), {}) == 1

    def test_mod(self):
        assert eval_num(parse_numeric("7 % 3"), {}) == 1

    def test_t11_guard_initially_true(self):
        env = dict(zip("uvwxyz", (0, 1, 1, 0, 0, 0)))
        assert eval_bool(parse_boolean("u == 0 && z == 0"), env) is True

    def test_false_or_true(self):
        assert eval_bool(parse_boolean("false || true"), {}) is True

    def test_truthy_nonzero(self):
        assert eval_bool(parse_boolean("v"), {"v": 2}) is True
        assert eval_bool(parse_boolean("v"), {"v": 0}) is False
        assert eval_bool(parse_boolean("v"), {"v": -3}) is True

    @pytest.mark.parametrize("text", [
        "1 / 0", "1 % 0", "2 ** -1", "9223372036854775807 + 1",
        "2 ** 63", "-(-9223372036854775807 - 1)", "3037000500 * 3037000500",
    ])
    def test_errors(self, text):
        with pytest.raises(EvalError):
            eval_num(parse_numeric(text), {})

    def test_boundaries_fit(self):
        assert eval_num(parse_numeric("-9223372036854775807 - 1"), {}) == -(2**63)
        assert eval_num(parse_numeric("2 ** 62 - 1 + 2 ** 62"), {}) == 2**63 - 1
        assert eval_num(parse_numeric("(-2) ** 63"), {}) == -(2**63)


# -- generated expressions ---------------------------------------------------

_consts = st.integers(min_value=0, max_value=40).map(Const)
_vars = st.sampled_from(NAMES).map(Var)


def _num_ext(children):
    return st.one_of(
        children.map(Neg),
        st.tuples(st.sampled_from(["+", "-", "*", "/", "%", "**"]), children, children).map(
            lambda t: BinOp(*t)),
        children.map(BitNot),
        st.tuples(st.sampled_from(["OR", "AND", "XOR"]), children, children).map(
            lambda t: BitOp(*t)),
    )


num_exprs = st.recursive(st.one_of(_consts, _vars), _num_ext, max_leaves=12)


def _bool_ext(children):
    return st.one_of(
        children.map(Not),
        st.tuples(children, children).map(lambda t: And(*t)),
        st.tuples(children, children).map(lambda t: Or(*t)),
    )


_bool_leaves = st.one_of(
    st.booleans().map(BoolConst),
    st.sampled_from(NAMES).map(Truthy),
    st.tuples(st.sampled_from(["==", ">=", ">", "<=", "<"]), num_exprs, num_exprs).map(
        lambda t: Cmp(*t)),
)
bool_exprs = st.recursive(_bool_leaves, _bool_ext, max_leaves=6)
num_with_int = st.one_of(num_exprs, bool_exprs.map(IntOf),
                         st.tuples(bool_exprs, num_exprs).map(
                             lambda t: BinOp("+", IntOf(t[0]), t[1])))
envs = st.fixed_dictionaries(
    {n: st.integers(min_value=-50, max_value=50) for n in NAMES})


def _outcome(f, *args):
    try:
        return f(*args)
    except EvalError:
        return EvalError


@settings(max_examples=300)
@given(num_with_int)
def test_numeric_round_trip(e):
    assert parse_numeric(to_text(e)) == e


@settings(max_examples=300)
@given(bool_exprs)
def test_boolean_round_trip(e):
    assert parse_boolean(to_text(e)) == e


@given(bool_exprs, envs)
def test_int_of_matches_bool(phi, env):
    b = _outcome(eval_bool, phi, env)
    i = _outcome(eval_num, IntOf(phi), env)
    if b is EvalError:
        assert i is EvalError
    else:
        assert i in (0, 1)
        assert (i == 1) == b


@given(num_exprs, envs)
def test_bitwise_laws(a, env):
    v = _outcome(eval_num, a, env)
    assert _outcome(eval_num, BitOp("AND", a, a), env) == v
    assert _outcome(eval_num, BitOp("XOR", a, a), env) == (EvalError if v is EvalError else 0)
    assert _outcome(eval_num, BitNot(BitNot(a)), env) == v


@given(num_with_int, envs)
def test_evaluation_is_pure_and_compiled_agrees(e, env):
    first = _outcome(eval_num, e, env)
    assert _outcome(eval_num, e, env) == first
    slots = {n: i for i, n in enumerate(NAMES)}
    vals = tuple(env[n] for n in NAMES)
    assert _outcome(compile_num(e, slots), vals) == first


@given(bool_exprs, envs)
def test_compiled_boolean_agrees(e, env):
    slots = {n: i for i, n in enumerate(NAMES)}
    vals = tuple(env[n] for n in NAMES)
    assert _outcome(compile_bool(e, slots), vals) == _outcome(eval_bool, e, env)
