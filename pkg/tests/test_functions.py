import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadcert.functions import (
    Binary,
    Const,
    ExprSyntaxError,
    Jet2,
    JetDomainError,
    Unary,
    Var,
    builtin,
    convexity_probe,
    eval_jet2,
    from_expression,
    parse,
    render,
)
from quadcert.means import identric, logarithmic, p_logarithmic
from quadcert.rule import Interval

from exprgen import finite_diff, random_expression

CORPUS = [
    "x^4",
    "1/x",
    "exp(x) - 3*x",
    "-x^2",
    "2*x^3 - x + 7",
    "sqrt(x)*ln(x)",
    "sin(x)/cos(x)",
    "abs(x - 2)^1.5",
    "x^-2 + x^0.5",
    "((x))",
    "-(-x)",
    "1.5e-3 * x ^ 2",
    "exp(-x^2/2)",
    "x^(1/3)",
    "cos(2*x) - -x",
]


class TestParse:
    def test_power(self):
        assert parse("x^4") == Binary("^", Var(), Const(4.0))

    def test_reciprocal(self):
        assert parse("1/x") == Binary("/", Const(1.0), Var())

    def test_well_formed(self):
        node = parse("exp(x) - 3*x")
        assert node == Binary("-", Unary("exp", Var()), Binary("*", Const(3.0), Var()))

    def test_caret_binds_tighter_than_minus(self):
        assert parse("-x^2") == Unary("neg", Binary("^", Var(), Const(2.0)))

    def test_left_associative(self):
        assert parse("1 - x - 2") == Binary("-", Binary("-", Const(1.0), Var()), Const(2.0))
        assert parse("8/x/2") == Binary("/", Binary("/", Const(8.0), Var()), Const(2.0))

    def test_constant_exponent_expression(self):
        assert parse("x^(1/3)") == Binary("^", Var(), Const(1 / 3))
        assert parse("x^-2") == Binary("^", Var(), Const(-2.0))

    def test_whitespace_insensitive(self):
        assert parse(" exp ( x )*2 ") == parse("exp(x)*2")

    def test_non_constant_exponent(self):
        with pytest.raises(ExprSyntaxError, match="non-constant exponent") as info:
            parse("x^x")
        assert info.value.offset == 2

    @pytest.mark.parametrize(
        "text,offset",
        [("1 +", 3), ("2 $ x", 2), ("(x", 2), ("x)", 1), ("", 0), ("exp x", 4), ("é+x", 0), ("x+é", 2)],
    )
    def test_syntax_errors(self, text, offset):
        with pytest.raises(ExprSyntaxError) as info:
            parse(text)
        assert info.value.offset == offset

    def test_unknown_identifier(self):
        with pytest.raises(ExprSyntaxError, match="unknown identifier 'foo'"):
            parse("foo(x)")

    @pytest.mark.parametrize("text", CORPUS)
    def test_round_trip(self, text):
        tree = parse(text)
        assert parse(render(tree)) == tree

    def test_round_trip_random(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            tree = parse(random_expression(rng))
            assert parse(render(tree)) == tree


class TestJets:
    def test_quartic(self):
        j = eval_jet2(parse("x^4"), 1.0)
        assert (j.v, j.d1, j.d2) == (1.0, 4.0, 12.0)

    @pytest.mark.parametrize("a", [0.5, 1.0, 3.0])
    def test_reciprocal(self, a):
        j = eval_jet2(parse("1/x"), a)
        assert (j.v, j.d1, j.d2) == pytest.approx((1 / a, -1 / a**2, 2 / a**3), rel=1e-15)

    def test_constant_subtree(self):
        j = eval_jet2(parse("exp(2) * 3 + ln(4)"), 0.7)
        assert j.d1 == 0.0 and j.d2 == 0.0

    def test_array_evaluation(self):
        x = np.linspace(0.5, 2.0, 7)
        j = eval_jet2(parse("x^3 - ln(x)"), x)
        assert np.allclose(j.d2, 6 * x + 1 / x**2, rtol=1e-14)

    @pytest.mark.parametrize(
        "text,x",
        [("ln(x)", 0.0), ("sqrt(x)", -1.0), ("1/x", 0.0), ("abs(x)", 0.0), ("x^0.5", -2.0), ("x^-1", 0.0)],
    )
    def test_domain_errors_carry_x(self, text, x):
        with pytest.raises(JetDomainError) as info:
            eval_jet2(parse(text), x)
        assert info.value.x == x

    def test_domain_error_in_array(self):
        with pytest.raises(JetDomainError) as info:
            eval_jet2(parse("ln(x)"), np.array([1.0, 2.0, -3.0]))
        assert info.value.x == -3.0

    def test_integer_powers_of_negative_base(self):
        j = eval_jet2(parse("x^3"), -2.0)
        assert (j.v, j.d1, j.d2) == (-8.0, 12.0, -12.0)
        j = eval_jet2(parse("x^2"), 0.0)
        assert (j.v, j.d1, j.d2) == (0.0, 0.0, 2.0)

    def test_abs_uses_sign(self):
        j = eval_jet2(parse("abs(x)^3"), -1.5)
        assert (j.v, j.d1, j.d2) == pytest.approx((3.375, -6.75, 9.0))

    @given(
        st.tuples(*[st.floats(-10, 10)] * 3),
        st.tuples(*[st.floats(-10, 10)] * 3),
    )
    def test_product_rule(self, f, g):
        got = Jet2(*f) * Jet2(*g)
        want = (f[0] * g[0], f[1] * g[0] + f[0] * g[1], f[2] * g[0] + 2 * f[1] * g[1] + f[0] * g[2])
        for x, y in zip((got.v, got.d1, got.d2), want):
            assert x == pytest.approx(y, rel=1e-12, abs=1e-12)

    @given(st.tuples(st.floats(-5, 5), st.floats(-10, 10), st.floats(-10, 10)))
    def test_chain_rule(self, u):
        got = Jet2(*u).exp()
        e = math.exp(u[0])
        want = (e, e * u[1], e * (u[1] ** 2 + u[2]))
        for x, y in zip((got.v, got.d1, got.d2), want):
            assert x == pytest.approx(y, rel=1e-12, abs=1e-12)


class TestFiniteDifferences:
    def _check(self, f, d1, d2, x):
        fd1, fd2 = finite_diff(f, x)
        assert abs(d1 - fd1) / max(1.0, abs(d1)) < 1e-6
        assert abs(d2 - fd2) / max(1.0, abs(d2)) < 1e-4

    @pytest.mark.parametrize(
        "name,params,text,lo,hi",
        [
            ("power", (4,), "x^4", 0.5, 2.0),
            ("power", (2.5,), "x^2.5", 0.5, 2.0),
            ("reciprocal", (), "1/x", 0.5, 3.0),
            ("exp", (), "exp(x)", -1.0, 2.0),
            ("ln", (), "ln(x)", 0.5, 3.0),
            ("monomial-sum", ([1.0, -2.0, 0.5, 0.25],), "1 - 2*x + 0.5*x^2 + 0.25*x^3", -1.0, 1.0),
        ],
    )
    def test_builtins(self, name, params, text, lo, hi):
        spec = builtin(name, *params)
        node = parse(text)
        rng = np.random.default_rng(11)
        for x in rng.uniform(lo, hi, 20):
            j = eval_jet2(node, x)
            self._check(spec.f, float(j.d1), float(j.d2), x)
            assert float(spec.d2(x)) == pytest.approx(float(j.d2), rel=1e-12)

    def test_random_expressions(self):
        rng = np.random.default_rng(2024)
        for _ in range(50):
            node = parse(random_expression(rng))
            for x in rng.uniform(0.5, 1.5, 20):
                j = eval_jet2(node, x)
                self._check(lambda t: float(eval_jet2(node, t).v), float(j.d1), float(j.d2), x)


class TestBuiltins:
    def test_power_mean_is_lp(self):
        spec = builtin("power", 4)
        assert spec.integrand.exact_integral(0.0, 1.0) / 1.0 == pytest.approx(1 / 5, rel=1e-15)
        a, b = 1.3, 2.9
        assert spec.integrand.exact_integral(a, b) / (b - a) == pytest.approx(p_logarithmic(a, b, 4) ** 4, rel=1e-13)

    def test_reciprocal_mean_is_inverse_log_mean(self):
        a, b = 0.7, 4.0
        mean = builtin("reciprocal").integrand.exact_integral(a, b) / (b - a)
        assert mean == pytest.approx((math.log(b) - math.log(a)) / (b - a), rel=1e-15)
        assert mean == pytest.approx(1 / logarithmic(a, b), rel=1e-14)

    def test_ln_mean_is_log_identric(self):
        a, b = 1.5, 3.25
        mean = builtin("ln").integrand.exact_integral(a, b) / (b - a)
        identric_def = (1 / math.e) * (b**b / a**a) ** (1 / (b - a))
        assert mean == pytest.approx(math.log(identric_def), rel=1e-13)
        assert mean == pytest.approx(math.log(identric(a, b)), rel=1e-13)

    def test_exp_mean(self):
        a, b = -0.5, 1.25
        assert builtin("exp").integrand.exact_integral(a, b) / (b - a) == pytest.approx(
            (math.exp(b) - math.exp(a)) / (b - a), rel=1e-15
        )

    def test_inline_params(self):
        assert builtin("power(3)").builtin_id == "power(3)"
        ms = builtin("monomial-sum(1, 0, 3)")
        assert ms.integrand.exact_integral(0.0, 2.0) == pytest.approx(2 + 8, rel=1e-15)
        assert float(ms.d2(5.0)) == 6.0

    def test_unknown(self):
        with pytest.raises(ValueError, match="unknown builtin"):
            builtin("gamma")

    def test_declared_convexity(self):
        assert builtin("power", 4).declared_convex_abs_d2
        assert not builtin("power", 2.5).declared_convex_abs_d2
        assert from_expression("x^4").declared_convex_abs_d2 is None


class TestConvexityProbe:
    def test_quartic_curvature(self):
        assert convexity_probe(lambda x: 12 * x**2, Interval(0, 1), 64)

    def test_reciprocal_curvature(self):
        assert convexity_probe(lambda x: 2 / x**3, Interval(1, 2), 64)

    def test_concave(self):
        assert not convexity_probe(lambda x: -(x**2), Interval(0, 1), 64)

    def test_affine_and_constant_pass(self):
        assert convexity_probe(lambda x: 3.0, Interval(0, 1), 16)
        assert convexity_probe(lambda x: 1 + 2 * x, Interval(-4, 1), 16)

    def test_oscillating_fails(self):
        assert not convexity_probe(lambda x: np.abs(-np.sin(x)), Interval(0, 6), 256)

    def test_minimum_samples(self):
        with pytest.raises(ValueError):
            convexity_probe(lambda x: x, Interval(0, 1), 2)
