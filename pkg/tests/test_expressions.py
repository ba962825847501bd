import numpy as np
import pytest
from hypothesis import given, strategies as st

from cfbvp import expressions as ex


def test_parse_smallest_composite():
    tree = ex.parse("t + 1")
    assert tree == ex.Expr("add", args=(ex.Expr("var", "t"), ex.Expr("const", 1.0)))


def test_power_binds_before_multiplication():
    tree = ex.parse("abs(t) * (1 - t^2)^(-0.25) * x^(-0.25)")
    # top level is a product whose right factor is the power x^(-0.25)
    assert tree.kind == "mul"
    right = tree.args[1]
    assert right.kind == "pow"
    assert right.args[0] == ex.Expr("var", "x")


def test_unary_minus_binds_below_power():
    assert ex.parse("-t^2") == ex.Expr("neg", args=(ex.parse("t^2"),))


def test_syntax_error_position():
    with pytest.raises(ex.ExprSyntaxError) as err:
        ex.parse("2 * * x")
    assert err.value.position == 4


@pytest.mark.parametrize("bad", ["", "   ", "2 +", "foo", "y + 1", "min(1)", "exp(1, 2)"])
def test_rejected_inputs(bad):
    with pytest.raises(ex.ExprSyntaxError):
        ex.parse(bad)


def test_eval_direct():
    assert ex.evaluate(ex.parse("t + 1"), {"t": 0.0}) == 1.0
    assert ex.evaluate(ex.parse("x^(-0.25)"), {"x": 16.0}) == 0.5
    assert ex.evaluate(ex.parse("min(t, x) + max(t, x)"), {"t": 2.0, "x": 5.0}) == 7.0
    assert ex.evaluate(ex.parse("2^-2"), {}) == 0.25


def test_eval_domain_errors():
    with pytest.raises(ex.ExprDomainError):
        ex.evaluate(ex.parse("x^(-0.25)"), {"x": 0.0})
    with pytest.raises(ex.ExprDomainError):
        ex.evaluate(ex.parse("x^0.5"), {"x": -1.0})
    with pytest.raises(ex.ExprDomainError):
        ex.evaluate(ex.parse("1/t"), {"t": 0.0})
    with pytest.raises(ex.ExprDomainError):
        ex.evaluate(ex.parse("sqrt(t)"), {"t": -2.0})


def test_eval_unbound_variable():
    with pytest.raises(ex.UnboundVariableError):
        ex.evaluate(ex.parse("t + x"), {"t": 1.0})


def test_eval_vectorized_matches_scalar():
    e = ex.parse("abs(t)*(1 - t^2)^(-0.25)")
    ts = np.linspace(-0.9, 0.9, 7)
    vec = ex.evaluate(e, {"t": ts})
    scal = np.array([ex.evaluate(e, {"t": float(t)}) for t in ts])
    assert np.array_equal(vec, scal)


_leaves = st.one_of(
    st.floats(min_value=0.0, max_value=100.0, allow_nan=False).map(
        lambda v: ex.Expr("const", v)),
    st.sampled_from(ex.ALLOWED_VARIABLES).map(lambda n: ex.Expr("var", n)),
)


def _branch(children):
    unary = st.builds(lambda a: ex.Expr("neg", args=(a,)), children)
    binary = st.builds(lambda k, a, b: ex.Expr(k, args=(a, b)),
                       st.sampled_from(["add", "sub", "mul", "div", "pow"]),
                       children, children)
    call1 = st.builds(lambda f, a: ex.Expr("call", f, (a,)),
                      st.sampled_from(["exp", "abs", "cosh", "sinh", "sqrt"]), children)
    call2 = st.builds(lambda f, a, b: ex.Expr("call", f, (a, b)),
                      st.sampled_from(["min", "max"]), children, children)
    return st.one_of(unary, binary, call1, call2)


_trees = st.recursive(_leaves, _branch, max_leaves=12)


@given(_trees)
def test_unparse_parse_round_trip(tree):
    text = ex.unparse(tree)
    assert ex.parse(text) == tree
    assert ex.unparse(ex.parse(text)) == text  # idempotent normal form


@given(_trees)
def test_variables_subset_of_allowed(tree):
    assert tree.variables() <= set(ex.ALLOWED_VARIABLES)


def test_eval_deterministic():
    e = ex.parse("exp(t) + cosh(x) / (1 + s^2)")
    env = {"t": 0.3, "x": 0.7, "s": 0.2}
    assert ex.evaluate(e, env) == ex.evaluate(e, env)
