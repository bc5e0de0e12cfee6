import unittest
from itertools import permutations

from ptorder.config import DEFAULT_CONFIG
from ptorder.errors import InvalidParameterError, NormalizationError, NotDivisibleError, ParseError, ResourceLimitError
from ptorder.groebner import CPoly, PolyIdeal, buchberger, default_names, member, parse_poly, reduce

NAMES = ["u", "v"]


def p(text, names=NAMES, ell=2):
    return parse_poly(text, names, ell)


class TestPolynomials(unittest.TestCase):
    def test_parse_and_format(self):
        f = p("u^2 v - 3/2*e*v + 1", ell=3)
        self.assertEqual(f.terms[(2, 1)], 1)
        self.assertEqual(str(p("-4*u v")), "-4 * u v")
        self.assertEqual(str(p("u + u")), "2 * u")
        self.assertEqual(str(p("u - u")), "0")
        with self.assertRaises(ParseError):
            p("w")

    def test_orders(self):
        f = p("u v^2 + u^2 + v^3")
        self.assertEqual(f.leading("lex")[0], (2, 0))
        self.assertEqual(f.leading("grlex")[0], (1, 2))
        self.assertEqual(f.leading("degrevlex")[0], (1, 2))
        g = p("u^2 v + u v^2")
        self.assertEqual(g.leading("degrevlex")[0], (2, 1))
        with self.assertRaises(InvalidParameterError):
            f.leading("revlex")

    def test_exact_division(self):
        self.assertEqual(p("u^2 - v^2").exact_div(p("u - v")), p("u + v"))
        with self.assertRaises(NotDivisibleError):
            p("u^2 + 1").exact_div(p("u - v"))

    def test_derivative(self):
        self.assertEqual(p("u^2 v + 3*v").derivative(1), p("u^2 + 3"))
        v = CPoly.variable(p("u").field, NAMES, 1)
        self.assertEqual(v * v - p("v^2"), p("0"))

    def test_default_names(self):
        self.assertEqual(default_names(2), ["u", "v"])
        self.assertEqual(default_names(4), ["u1", "u2", "u3", "u4"])


class TestBuchberger(unittest.TestCase):
    def test_lex_basis(self):
        gb = buchberger([p("u^2 - v"), p("u v - 1")], order="lex")
        self.assertEqual(gb, [p("u - v^2"), p("v^3 - 1")])

    def test_reduction_remainder(self):
        gb = buchberger([p("u^2 - v"), p("u v - 1")], order="degrevlex")
        leads = [g.leading("degrevlex")[0] for g in gb]
        r = reduce(p("u^5 + v^4 + u v"), gb, "degrevlex")
        for m in r.terms:
            self.assertFalse(any(all(a <= b for a, b in zip(lm, m)) for lm in leads))

    def test_reduction_is_idempotent(self):
        gb = buchberger([p("u^2 - v"), p("u v - 1")], order="degrevlex")
        for text in ("u^5 + v^4 + u v", "3*u^3 v - v^2 + 7", "u^2 v^2", "1"):
            r = reduce(p(text), gb, "degrevlex")
            self.assertEqual(reduce(r, gb, "degrevlex"), r)
        for g in gb:
            self.assertTrue(reduce(g, gb, "degrevlex").is_zero())

    def test_unit_ideal(self):
        self.assertEqual(buchberger([p("u"), p("u - 1")]), [p("1")])

    def test_step_cap(self):
        config = DEFAULT_CONFIG.merged({"max_gb_steps": 1})
        with self.assertRaises(ResourceLimitError) as ctx:
            buchberger([p("u^2 - v"), p("u v - 1")], order="lex", config=config)
        self.assertEqual(ctx.exception.cap, "max_gb_steps")

    def test_empty_input(self):
        with self.assertRaises(InvalidParameterError):
            buchberger([])
        with self.assertRaises(InvalidParameterError):
            reduce(p("u"), [])


class TestPolyIdeal(unittest.TestCase):
    def test_membership(self):
        ideal = PolyIdeal(NAMES, [p("u^2 - v"), p("u v - 1")])
        self.assertTrue(ideal.contains(p("u - v^2")))
        self.assertTrue(member(p("v^3 - 1"), ideal))
        self.assertTrue(ideal.contains(p("0")))
        self.assertFalse(ideal.contains(p("u")))
        self.assertFalse(ideal.is_unit_ideal())

    def test_membership_ignores_generator_order(self):
        gens = [p("u^2 - v"), p("u v - 1"), p("v^3 - u")]
        candidates = [p(t) for t in ("u - v^2", "v^3 - 1", "u", "u^2 v - v^2", "v + 1", "0")]
        expected = [PolyIdeal(NAMES, gens).contains(f) for f in candidates]
        self.assertEqual(expected, [True, True, False, True, False, True])
        reference = sorted(str(g) for g in PolyIdeal(NAMES, gens).gb)
        for perm in permutations(gens):
            ideal = PolyIdeal(NAMES, list(perm))
            self.assertEqual([ideal.contains(f) for f in candidates], expected)
            self.assertEqual(sorted(str(g) for g in ideal.gb), reference)

    def test_closed_under_sums_and_multiples(self):
        ideal = PolyIdeal(NAMES, [p("u^2 - v"), p("u v - 1")])
        f, g = p("u - v^2"), p("v^3 - 1")
        self.assertTrue(ideal.contains(f) and ideal.contains(g))
        for h in (p("u"), p("3*u v^2 - 1/2"), p("e*v^5 + u^3"), p("0")):
            self.assertTrue(ideal.contains(f + g))
            self.assertTrue(ideal.contains(h * f))
            self.assertTrue(ideal.contains(h * f - g * h))

    def test_generators_are_monic(self):
        ideal = PolyIdeal(NAMES, [p("-256*u^2 v^2")])
        self.assertEqual(ideal.generators, [p("u^2 v^2")])

    def test_laurent_variables(self):
        names = ["u", "v"]
        gen = p("u^-1 - v")
        ideal = PolyIdeal(names, [gen], inverted=[True, False])
        self.assertEqual(ideal.ring_names, ("u", "v", "u_inv"))
        self.assertEqual(ideal.generators, [p("u v - 1")])
        self.assertTrue(ideal.contains(gen))
        self.assertTrue(ideal.contains(p("u^-2 - v^2")))
        with self.assertRaises(NormalizationError):
            ideal.contains(p("v^-1"))

    def test_unit_after_inverting(self):
        ideal = PolyIdeal(NAMES, [p("u^3")], inverted=[True, True])
        self.assertTrue(ideal.is_unit_ideal())
        self.assertFalse(PolyIdeal(NAMES, [p("u^3")]).is_unit_ideal())

    def test_zero_ideal(self):
        ideal = PolyIdeal(NAMES, [p("0")])
        self.assertEqual(ideal.gb, [])
        self.assertFalse(ideal.contains(p("u")))
        self.assertTrue(ideal.contains(p("0")))

    def test_to_dict(self):
        data = PolyIdeal(NAMES, [p("u + 1")]).to_dict()
        self.assertEqual(data["variables"], ["u", "v"])
        self.assertEqual(data["groebner"], ["u + 1"])
        self.assertEqual(data["order"], "degrevlex")

    def test_unknown_order(self):
        with self.assertRaises(InvalidParameterError):
            PolyIdeal(NAMES, [p("u")], order="weird")


if __name__ == "__main__":
    unittest.main()
