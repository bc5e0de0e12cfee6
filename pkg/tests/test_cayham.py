import random
import unittest
from math import comb

from ptorder.cayham import char_poly, newton_coefficients, power_traces, verify_cayley_hamilton
from ptorder.errors import InvalidParameterError
from ptorder.groebner import parse_poly
from ptorder.qtorus import AlgebraSpec, quantum_torus
from ptorder.trace import CentralSubalgebra, regular_trace_form, tr_red
from ptorder.utils import sampling

QP2 = AlgebraSpec(n=2, ell=2, lam=((0, 1), (-1, 0)), invertible=(False, False))
QTORUS3 = AlgebraSpec(n=3, ell=3, lam=((0, 1, 1), (-1, 0, 1), (-1, -1, 0)), invertible=(True, True, True))


class TestNewton(unittest.TestCase):
    def test_commutative_roots(self):
        # roots 1, 2, 3 in a commutative algebra: e1 = 6, e2 = 11, e3 = 6
        ring = quantum_torus(AlgebraSpec(n=1, ell=2, lam=((0,),), invertible=(False,)))
        psi = [ring.scalar(1 + 2 ** k + 3 ** k) for k in (1, 2, 3)]
        self.assertEqual(newton_coefficients(3, psi), [ring.scalar(6), ring.scalar(11), ring.scalar(6)])

    def test_equal_roots(self):
        ring = quantum_torus(QTORUS3)
        for d in range(1, 7):
            for s in (ring.scalar(2), ring.parse("x1^3 - e*x2^-3"), ring.monomial((1, 2, 1), 5)):
                psi = [s ** k * d for k in range(1, d + 1)]
                expected = [s ** k * comb(d, k) for k in range(1, d + 1)]
                self.assertEqual(newton_coefficients(d, psi), expected)

    def test_argument_checks(self):
        ring = quantum_torus(QP2)
        with self.assertRaises(InvalidParameterError):
            newton_coefficients(0, [ring.one()])
        with self.assertRaises(InvalidParameterError):
            newton_coefficients(3, [ring.one()])


class TestCharacteristicPolynomial(unittest.TestCase):
    def setUp(self):
        self.ring = quantum_torus(QP2)
        self.c0 = CentralSubalgebra.c0(self.ring)
        self.tr = regular_trace_form(self.c0)

    def test_regular_trace_of_generator(self):
        ring = self.ring
        chi = char_poly(ring.gen(0), 4, self.tr, self.c0)
        u = ring.monomial((2, 0))
        self.assertEqual(chi.coeffs, [ring.zero(), u * -2, ring.zero(), u * u])
        self.assertEqual(chi.to_dict()["coefficients"], ["0", "-2 * u", "0", "u^2"])
        self.assertEqual(str(chi), "t^4 - 2 * u * t^2 + u^2")
        self.assertTrue(chi.evaluate(ring.gen(0)).is_zero())

    def test_central_element_is_a_repeated_root(self):
        ring = self.ring
        for a in (ring.monomial((2, 0)), ring.parse("3*x1^2 x2^2 - 1/2"), ring.scalar(-2)):
            chi = char_poly(a, 4, self.tr, self.c0)
            self.assertEqual(chi.coeffs, [a ** k * comb(4, k) for k in range(1, 5)])
            self.assertTrue(chi.evaluate(a).is_zero())
        ring3 = quantum_torus(QTORUS3)
        a = ring3.parse("x1 x2^2 x3 + 2")
        chi = char_poly(a, 3, tr_red)
        self.assertEqual(chi.coeffs, [a * 3, a ** 2 * 3, a ** 3])

    def test_power_traces(self):
        ring = self.ring
        self.assertEqual(power_traces(ring.gen(0), 4, self.tr),
                         [ring.zero(), ring.monomial((2, 0), 4), ring.zero(), ring.monomial((4, 0), 4)])

    def test_regular_trace_holds(self):
        rng = random.Random(17)
        for _ in range(5):
            a = sampling.random_element(rng, self.ring, 2)
            residual, report = verify_cayley_hamilton(a, 4, self.tr, self.c0)
            self.assertTrue(residual.is_zero())
            self.assertTrue(report.passed, report.witnesses)

    def test_reduced_trace_at_pi_degree(self):
        ring = self.ring
        a = ring.parse("x1 + x2 + 3*x1 x2")
        residual, report = verify_cayley_hamilton(a, 2, tr_red)
        self.assertTrue(report.passed, report.witnesses)
        ring3 = quantum_torus(QTORUS3)
        residual, report = verify_cayley_hamilton(ring3.parse("x1 + x2^-1 x3"), 3, tr_red)
        self.assertTrue(residual.is_zero())

    def test_wrong_degree_is_reported(self):
        ring = self.ring
        residual, report = verify_cayley_hamilton(ring.gen(0) + ring.gen(1), 3, tr_red)
        self.assertTrue(residual.is_zero())
        self.assertFalse(report.passed)
        self.assertEqual([w["kind"] for w in report.witnesses], ["trace-of-one"])

        residual, report = verify_cayley_hamilton(ring.gen(0), 1, tr_red)
        self.assertEqual(residual, ring.gen(0))
        self.assertEqual([w["kind"] for w in report.witnesses], ["residual", "trace-of-one"])

    def test_rendered_without_variables(self):
        chi = char_poly(self.ring.gen(0), 2, tr_red)
        self.assertEqual(str(chi), "t^2 - x1^2")
        chi = char_poly(self.ring.parse("x1 + x2"), 2, tr_red)
        self.assertEqual(chi.coeffs[1], self.ring.parse("-x1^2 - x2^2"))
        self.assertTrue(str(chi).startswith("t^2 + (-x"))
        chi = char_poly(self.ring.scalar(3), 1, tr_red)
        self.assertEqual(str(chi), "t - 6")
        self.assertEqual(parse_poly("u^2", ["u", "v"], 2), self.c0.to_poly(self.ring.monomial((4, 0))))


if __name__ == "__main__":
    unittest.main()
