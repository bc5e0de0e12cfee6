import itertools
import random
import unittest

from ptorder.errors import DecompositionError, InvalidExtensionError, InvalidParameterError
from ptorder.poisson import PoissonBracketTable
from ptorder.qtorus import AlgebraSpec, quantum_torus
from ptorder.trace import (
    CentralSubalgebra,
    ExtensionTrace,
    compose_trace,
    coordinates,
    is_poisson_subalgebra,
    left_mult_matrix,
    reduced_trace_form,
    regular_trace_form,
    tr_commutative,
    tr_red,
    tr_reg,
    verify_pto,
    verify_trace_axioms,
)
from ptorder.utils import sampling

QP2 = AlgebraSpec(n=2, ell=2, lam=((0, 1), (-1, 0)), invertible=(False, False))
QP3 = AlgebraSpec(n=2, ell=3, lam=((0, 1), (-1, 0)), invertible=(False, False))
QTORUS3 = AlgebraSpec(n=3, ell=3, lam=((0, 1, 1), (-1, 0, 1), (-1, -1, 0)), invertible=(True, True, True))
CLUSTER_A2 = AlgebraSpec(
    n=4, ell=3,
    lam=((0, 2, 1, 0), (-2, 0, 0, 1), (-1, 0, 0, 1), (0, -1, -1, 0)),
    invertible=(False, False, True, True),
    ex=(1, 2), btilde=((0, 1), (-1, 0), (1, 0), (0, 1)), d=(1, 1),
)


class TestCentralSubalgebra(unittest.TestCase):
    def test_c0(self):
        ring = quantum_torus(QP2)
        c0 = CentralSubalgebra.c0(ring)
        self.assertEqual(c0.index, 4)
        self.assertEqual(c0.transversal(), [(0, 0), (0, 1), (1, 0), (1, 1)])
        self.assertEqual(c0.inverted(), (False, False))
        self.assertTrue(c0.contains(ring.parse("x1^2 + 3*x1^4 x2^2")))
        self.assertFalse(c0.contains(ring.parse("x1^2 + x2")))
        self.assertEqual(c0.lattice_coordinates((4, 2)), (2, 1))
        with self.assertRaises(DecompositionError):
            c0.lattice_coordinates((1, 2))

    def test_full_center(self):
        ring = quantum_torus(QTORUS3)
        z = CentralSubalgebra.full_center(ring)
        self.assertEqual(z.index, 9)
        self.assertTrue(z.lattice.contains((1, 2, 1)))
        self.assertEqual(z.inverted(), (True, True, True))

    def test_non_central_lattice(self):
        ring = quantum_torus(QP2)
        with self.assertRaises(InvalidExtensionError):
            CentralSubalgebra.from_basis(ring, [[1, 0], [0, 2]])
        with self.assertRaises(InvalidExtensionError):
            CentralSubalgebra.from_basis(ring, [[2, 0]])

    def test_poly_round_trip_with_twist(self):
        ring = quantum_torus(QTORUS3)
        z = CentralSubalgebra.full_center(ring)
        element = ring.parse("2*x1 x2^2 x3 - e*x1^3 x2^-3 + x1^-1 x2^-2 x3^-1")
        self.assertEqual(z.from_poly(z.to_poly(element)), element)

    def test_basis_map_validation(self):
        ring = quantum_torus(QP2)
        c0 = CentralSubalgebra.c0(ring)
        with self.assertRaises(InvalidParameterError):
            c0.basis_map([(0, 0), (2, 0), (0, 1), (1, 1)])
        with self.assertRaises(InvalidParameterError):
            c0.basis_map([(0, 0), (0, 1)])


class TestCoordinates(unittest.TestCase):
    def test_decomposition(self):
        ring = quantum_torus(QP2)
        c0 = CentralSubalgebra.c0(ring)
        coords = coordinates(ring.parse("x1^3 x2 + 5*x2^2"), c0)
        self.assertEqual(coords, {(1, 1): ring.monomial((2, 0)), (0, 0): ring.monomial((0, 2), 5)})

    def test_reconstruction(self):
        ring = quantum_torus(QTORUS3)
        rng = random.Random(11)
        for C in (CentralSubalgebra.c0(ring), CentralSubalgebra.full_center(ring)):
            for _ in range(10):
                r = sampling.random_element(rng, ring, 6)
                coords = coordinates(r, C)
                total = sum((c * ring.monomial(b) for b, c in coords.items()), ring.zero())
                self.assertEqual(total, r)
                self.assertTrue(all(C.contains(c) for c in coords.values()))

    def test_no_decomposition_without_inverses(self):
        ring = quantum_torus(QP2)
        c0 = CentralSubalgebra.c0(ring)
        basis = [(0, 0), (1, 0), (0, 1), (3, 1)]
        with self.assertRaises(DecompositionError):
            coordinates(ring.parse("x1 x2"), c0, basis)
        self.assertEqual(coordinates(ring.parse("x1^3 x2"), c0, basis), {(3, 1): ring.one()})


class TestRegularTrace(unittest.TestCase):
    def setUp(self):
        self.ring = quantum_torus(QP2)
        self.c0 = CentralSubalgebra.c0(self.ring)

    def test_values(self):
        ring, c0 = self.ring, self.c0
        self.assertEqual(tr_reg(ring.one(), c0), 4)
        self.assertEqual(tr_reg(ring.parse("x1^2 x2^4"), c0), ring.monomial((2, 4), 4))
        self.assertTrue(tr_reg(ring.parse("x1 + x1 x2 + x2^3"), c0).is_zero())

    def test_closed_form_on_low_degree_monomials(self):
        # tr_reg(x^a) = l^N x^a when a is in l Z^N, otherwise 0
        for spec in (QP2, QP3):
            ring = quantum_torus(spec)
            c0 = CentralSubalgebra.c0(ring)
            form = regular_trace_form(c0)
            bound = 3 * spec.ell
            for a in itertools.product(range(bound + 1), repeat=spec.n):
                if sum(a) > bound:
                    continue
                x = ring.monomial(a)
                expected = x * spec.rank if all(v % spec.ell == 0 for v in a) else ring.zero()
                self.assertEqual(tr_reg(x, c0), expected, a)
                self.assertEqual(form(x), expected, a)

    def test_left_mult_matrix(self):
        ring, c0 = self.ring, self.c0
        r = ring.parse("x1^2 + 3*x1 x2 + x2^2")
        m = left_mult_matrix(r, c0)
        diagonal = sum((m[i][i] for i in range(4)), ring.zero())
        self.assertEqual(diagonal, tr_reg(r, c0))
        central = left_mult_matrix(ring.monomial((2, 0)), c0)
        for i in range(4):
            for j in range(4):
                expected = ring.monomial((2, 0)) if i == j else ring.zero()
                self.assertEqual(central[i][j], expected)

    def test_form_agrees_with_matrix_trace(self):
        rng = random.Random(3)
        form = regular_trace_form(self.c0)
        for _ in range(20):
            r = sampling.random_element(rng, self.ring, 6)
            self.assertEqual(form(r), tr_reg(r, self.c0))

    def test_axioms(self):
        rng = random.Random(5)
        ring = quantum_torus(QTORUS3)
        c0 = CentralSubalgebra.c0(ring)
        pairs = sampling.random_pairs(rng, ring, 15, 3)
        centrals = [sampling.random_central_monomial(rng, c0) for _ in range(3)]
        report = verify_trace_axioms(regular_trace_form(c0), pairs, centrals)
        self.assertTrue(report.passed, report.witnesses)

    def test_basis_independence(self):
        rng = random.Random(13)
        ring = quantum_torus(QTORUS3)
        c0 = CentralSubalgebra.c0(ring)
        shifted = [(r[0] - 3, r[1] + 3 * (r[2] % 2), r[2]) for r in c0.transversal()]
        for _ in range(5):
            r = sampling.random_element(rng, ring, 4)
            self.assertEqual(tr_reg(r, c0, shifted), tr_reg(r, c0))

    def test_factors_through_reduced_trace(self):
        rng = random.Random(14)
        ring = quantum_torus(QTORUS3)
        c0 = CentralSubalgebra.c0(ring)
        down = ExtensionTrace(CentralSubalgebra.full_center(ring), c0)
        self.assertEqual(down.degree, 3)
        for _ in range(200):
            r = sampling.random_element(rng, ring, 4)
            self.assertEqual(tr_reg(r, c0), down(tr_red(r)) * ring.pi_degree())

    def test_broken_trace_is_not_cyclic(self):
        ring = self.ring
        broken = regular_trace_form(self.c0).with_value((1, 1), ring.one())
        report = verify_trace_axioms(broken, [(ring.gen(0), ring.gen(1))])
        self.assertFalse(report.passed)
        self.assertEqual(report.witnesses[0]["kind"], "cyclicity")


class TestReducedTrace(unittest.TestCase):
    def test_values(self):
        ring = quantum_torus(QP2)
        self.assertEqual(tr_red(ring.parse("x1^2 + x1")), ring.monomial((2, 0), 2))
        ring3 = quantum_torus(QTORUS3)
        self.assertEqual(tr_red(ring3.monomial((1, 2, 1))), ring3.monomial((1, 2, 1), 3))
        self.assertTrue(tr_red(ring3.gen(0)).is_zero())
        self.assertEqual(tr_red(ring3.one()), 3)

    def test_form_agrees(self):
        rng = random.Random(8)
        ring = quantum_torus(QTORUS3)
        form = reduced_trace_form(ring)
        self.assertEqual(form.target.name, "Z")
        for _ in range(20):
            r = sampling.random_element(rng, ring, 6)
            self.assertEqual(form(r), tr_red(r))

    def test_axioms_over_center(self):
        rng = random.Random(9)
        ring = quantum_torus(QTORUS3)
        z = CentralSubalgebra.full_center(ring)
        pairs = sampling.random_pairs(rng, ring, 15, 3)
        centrals = [sampling.random_central_monomial(rng, z) for _ in range(3)]
        report = verify_trace_axioms(reduced_trace_form(ring), pairs, centrals)
        self.assertTrue(report.passed, report.witnesses)


class TestExtensionTrace(unittest.TestCase):
    def setUp(self):
        self.ring = quantum_torus(QP2)
        self.c0 = CentralSubalgebra.c0(self.ring)
        self.a = CentralSubalgebra.from_basis(self.ring, [[4, 0], [0, 2]])

    def test_values(self):
        ring = self.ring
        ext = ExtensionTrace(self.c0, self.a)
        self.assertEqual(ext.degree, 2)
        self.assertEqual(ext(ring.one()), 2)
        self.assertTrue(ext(ring.monomial((2, 0))).is_zero())
        self.assertEqual(ext(ring.monomial((4, 0))), ring.monomial((4, 0), 2))
        self.assertEqual(tr_commutative(ring.monomial((2, 2)), self.c0, self.a), ring.zero())

    def test_not_an_extension(self):
        with self.assertRaises(InvalidExtensionError):
            ExtensionTrace(self.a, self.c0)

    def test_not_free_over_a_skew_sublattice(self):
        # x1^2 = x^(2,2) * x^(0,-2) needs x2^-2, so C0 has no basis x^t over this A
        skew = CentralSubalgebra.from_basis(self.ring, [[2, 2], [0, 4]])
        with self.assertRaises(InvalidExtensionError):
            ExtensionTrace(self.c0, skew)
        with self.assertRaises(InvalidExtensionError):
            tr_commutative(self.ring.monomial((2, 0)), self.c0, skew)

    def test_torus_extensions_skip_the_cone_check(self):
        ring = quantum_torus(QTORUS3)
        c0 = CentralSubalgebra.c0(ring)
        skew = CentralSubalgebra.from_basis(ring, [[3, 3, 0], [0, 6, 0], [0, 0, 3]])
        ext = ExtensionTrace(c0, skew)
        self.assertEqual(ext.degree, 2)
        self.assertEqual(ext(ring.one()), 2)

    def test_rejects_elements_outside_top(self):
        with self.assertRaises(InvalidParameterError):
            ExtensionTrace(self.c0, self.a)(self.ring.gen(0))

    def test_composite(self):
        ring = self.ring
        composite = compose_trace(regular_trace_form(self.c0), ExtensionTrace(self.c0, self.a))
        self.assertEqual(composite(ring.one()), 8)
        self.assertTrue(composite(ring.gen(0)).is_zero())
        self.assertTrue(composite(ring.monomial((2, 0))).is_zero())
        self.assertEqual(composite(ring.monomial((4, 0))), ring.monomial((4, 0), 8))

    def test_compose_requires_matching_target(self):
        ring = quantum_torus(QTORUS3)
        c0 = CentralSubalgebra.c0(ring)
        a = CentralSubalgebra.from_basis(ring, [[6, 0, 0], [0, 3, 0], [0, 0, 3]])
        with self.assertRaises(InvalidParameterError):
            compose_trace(reduced_trace_form(ring), ExtensionTrace(c0, a))

    def test_poisson_subalgebra(self):
        table = PoissonBracketTable(self.ring)
        self.assertTrue(is_poisson_subalgebra(self.c0, table.bracket))
        self.assertTrue(is_poisson_subalgebra(self.a, table.bracket))


class TestPoissonTraceProperty(unittest.TestCase):
    def test_regular_trace_commutes(self):
        ring = quantum_torus(QP2)
        c0 = CentralSubalgebra.c0(ring)
        table = PoissonBracketTable(ring)
        cs = [ring.monomial(c) for c in [(2, 0), (0, 2), (2, 2), (4, 2)]]
        rs = [ring.parse(t) for t in ["x1", "x1 x2", "x1^2 x2^3 + x2", "3*x1^3 x2^2 - x2^2"]]
        report = verify_pto(regular_trace_form(c0), table.derivation, cs, rs)
        self.assertTrue(report.passed, report.witnesses)
        self.assertEqual(report.details["checks"], 16)

    def test_reduced_trace_commutes(self):
        rng = random.Random(21)
        ring = quantum_torus(QTORUS3)
        c0 = CentralSubalgebra.c0(ring)
        table = PoissonBracketTable(ring)
        cs = [sampling.random_central_monomial(rng, c0, max_coord=1) for _ in range(3)]
        rs = [sampling.random_element(rng, ring, 4) for _ in range(5)]
        report = verify_pto(reduced_trace_form(ring), table.derivation, cs, rs)
        self.assertTrue(report.passed, report.witnesses)

    def test_every_preset_with_both_traces(self):
        rng = random.Random(31)
        for spec in (QP2, QP3, QTORUS3, CLUSTER_A2):
            ring = quantum_torus(spec)
            c0 = CentralSubalgebra.c0(ring)
            table = PoissonBracketTable(ring)
            cs = [sampling.random_central_monomial(rng, c0, max_coord=1) for _ in range(3)]
            rs = [sampling.random_element(rng, ring, 3) for _ in range(4)]
            for name, tr in (("reg", regular_trace_form(c0)), ("red", reduced_trace_form(ring))):
                report = verify_pto(tr, table.derivation, cs, rs, name=f"{spec.n}-{spec.ell}-{name}")
                self.assertTrue(report.passed, report.witnesses)
                self.assertEqual(report.details["checks"], 12)

    def test_derivations_from_the_full_center(self):
        rng = random.Random(32)
        ring = quantum_torus(QTORUS3)
        z = CentralSubalgebra.full_center(ring)
        table = PoissonBracketTable(ring)
        cs = [ring.monomial((1, 2, 1)), ring.monomial((2, 1, 2))]
        cs += [sampling.random_central_monomial(rng, z) for _ in range(3)]
        rs = [sampling.random_element(rng, ring, 4) for _ in range(8)]
        report = verify_pto(reduced_trace_form(ring), table.derivation, cs, rs)
        self.assertTrue(report.passed, report.witnesses)
        self.assertEqual(report.details["checks"], 40)

    def test_modified_trace_fails(self):
        ring = quantum_torus(QP2)
        c0 = CentralSubalgebra.c0(ring)
        table = PoissonBracketTable(ring)
        modified = regular_trace_form(c0).with_value((1, 0), ring.monomial((2, 0)))
        report = verify_pto(modified, table.derivation, [ring.monomial((0, 2))], [ring.gen(0)])
        self.assertFalse(report.passed)
        self.assertEqual(report.witnesses[0]["r"], "x1")


if __name__ == "__main__":
    unittest.main()
