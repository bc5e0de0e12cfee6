"""
The specialization Poisson structure: derivations d_c = ([c^, -] / (q - eps))|_(q=eps)
of the algebra for central c, and the induced bracket {a, b} = d_a(b) on the center.
"""

import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ptorder.config import DEFAULT_CONFIG, EngineConfig
from ptorder.cyclotomic import CycScalar, QLaurent
from ptorder.errors import DomainMismatchError, InvalidParameterError, NotDivisibleError
from ptorder.groebner import CPoly
from ptorder.models import Report
from ptorder.qtorus import Derivation, Exponent, QuantumTorus, TorusElement
from ptorder.trace import CentralSubalgebra

logger = logging.getLogger(__name__)


def _quotient_at_eps(ring: QuantumTorus, lifted: TorusElement) -> TorusElement:
    """Divides every q-coefficient by (q - eps) and evaluates at q = eps."""
    terms = {e: c.divide_by_q_minus_eps().eval_at_eps() for e, c in lifted.terms.items()}
    return ring.element(terms, validate=False)


def specialization_derivation(c: TorusElement, lift: Optional[TorusElement] = None) -> Derivation:
    """
    d_c for a central element c of the specialized algebra. ``lift`` defaults
    to the monomial-wise lift of c; any lift specializing to c may be given.
    Raises NotDivisibleError when c is not central.
    """
    ring = c.ring
    if ring.lifted:
        raise DomainMismatchError("specialization derivations take specialized central elements")
    lifted_ring = ring.lift_ring
    if lift is None:
        lift = ring.lift(c)
    elif lift.ring is not lifted_ring:
        raise DomainMismatchError("the lift must live in the q-algebra of the same spec")
    elif ring.specialize(lift) != c:
        raise InvalidParameterError("the given lift does not specialize to c")
    images = []
    for j in range(ring.n):
        comm = lifted_ring.commutator(lift, lifted_ring.gen(j))
        try:
            images.append(_quotient_at_eps(ring, comm))
        except NotDivisibleError as e:
            raise NotDivisibleError(f"{c} is not central: [c, x{j + 1}] does not vanish at q = eps") from e
    return Derivation(ring, images)


class PoissonBracketTable:
    """
    The bracket on the center, {x^a, x^b} = rho(a, b) x^(a+b), with the
    scalars rho cached per exponent pair. Derivations d_c are cached per c.
    """

    def __init__(self, ring: QuantumTorus, config: EngineConfig = DEFAULT_CONFIG):
        if ring.lifted:
            raise DomainMismatchError("the bracket lives on the specialized algebra")
        self.ring = ring
        self.config = config
        self._kernel = ring.center_lattice(config)
        self._rho: Dict[Tuple[Exponent, Exponent], CycScalar] = {}
        self._derivations: Dict[TorusElement, Derivation] = {}

    def _check_central(self, a: Exponent) -> None:
        if tuple(v % self.ring.ell for v in a) not in self._kernel:
            raise NotDivisibleError(f"x^{a} is not central; its bracket is undefined")

    def log_canonical_scalar(self, a: Exponent, b: Exponent) -> CycScalar:
        """rho(a, b) = ((q^kappa(a,b) - q^kappa(b,a)) / (q - eps))|_(q=eps)."""
        key = (tuple(a), tuple(b))
        if key not in self._rho:
            self._check_central(key[0])
            self._check_central(key[1])
            field = self.ring.field
            k_ab, k_ba = self.ring.kappa(*key), self.ring.kappa(key[1], key[0])
            diff = QLaurent.monomial(field, k_ab) - QLaurent.monomial(field, k_ba)
            self._rho[key] = diff.divide_by_q_minus_eps().eval_at_eps()
        return self._rho[key]

    def bracket(self, x: TorusElement, y: TorusElement) -> TorusElement:
        ring = self.ring
        if x.ring is not ring or y.ring is not ring:
            raise DomainMismatchError("bracket operands live in another algebra")
        total = ring.zero()
        for a, ca in x.terms.items():
            for b, cb in y.terms.items():
                rho = self.log_canonical_scalar(a, b)
                if rho:
                    total = total + ring.monomial(tuple(s + t for s, t in zip(a, b)), ca * cb * rho)
        return total

    def derivation(self, c: TorusElement) -> Derivation:
        if c not in self._derivations:
            self._derivations[c] = specialization_derivation(c)
        return self._derivations[c]

    def variable_brackets(self, C: CentralSubalgebra) -> Dict[Tuple[str, str], CPoly]:
        """Brackets {u_i, u_j}, i < j, of the lattice generators of C as polynomials."""
        ring = self.ring
        gens = [ring.monomial(g) for g in C.generators()]
        out = {}
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                out[(C.variables[i], C.variables[j])] = C.to_poly(self.bracket(gens[i], gens[j]))
        return out


def poisson_bracket(a: TorusElement, b: TorusElement) -> TorusElement:
    """{a, b} = d_a(b)."""
    return specialization_derivation(a)(b)


def verify_poisson_axioms(table: PoissonBracketTable,
                          triples: Iterable[Tuple[TorusElement, TorusElement, TorusElement]]) -> Report:
    """
    Skew-symmetry, Leibniz, Jacobi, the Hamiltonian property d_a|Z = {a, -}
    and centrality of brackets on every sampled triple of central elements.
    """
    ring = table.ring
    br = table.bracket
    witnesses = []
    count = 0
    for a, b, c in triples:
        count += 1
        ab, ba = br(a, b), br(b, a)
        failures = []
        if ab != -ba:
            failures.append("skew-symmetry")
        if br(a, b * c) != ab * c + b * br(a, c):
            failures.append("leibniz")
        jacobi = br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))
        if jacobi:
            failures.append("jacobi")
        if table.derivation(a)(b) != ab:
            failures.append("hamiltonian")
        if not ring.is_central(ab):
            failures.append("centrality")
        for kind in failures:
            witnesses.append({"kind": kind, "a": str(a), "b": str(b), "c": str(c)})
    logger.debug(f"poisson-axioms: {count} triples, {len(witnesses)} witnesses")
    return Report(check="poisson-axioms", passed=not witnesses, witnesses=witnesses, details={"triples": count})


def lift_independence_check(c: TorusElement, perturbations: Sequence[TorusElement],
                            centrals: Sequence[TorusElement] = ()) -> Report:
    """
    Recomputes d_c from the lifts c^ + (q - eps) y^ and compares with the
    monomial lift. The perturbed derivation equals d_c + ad(y), so the two
    must agree on central elements and differ by [y, x_j] on generators.
    """
    ring = c.ring
    lifted_ring = ring.lift_ring
    base = specialization_derivation(c)
    q_minus_eps = lifted_ring.scalar(QLaurent.q_minus_eps(ring.field))
    centrals = list(centrals) or [ring.monomial(tuple(ring.ell if i == j else 0 for j in range(ring.n)))
                                  for i in range(ring.n)]
    witnesses = []
    for y in perturbations:
        lift = ring.lift(c) + q_minus_eps * ring.lift(y)
        other = specialization_derivation(c, lift=lift)
        inner = Derivation.inner(y)
        for j, (img, img0, adj) in enumerate(zip(other.images, base.images, inner.images)):
            if img - img0 != adj:
                witnesses.append({"kind": "generator", "y": str(y), "generator": f"x{j + 1}",
                                  "expected": str(img0 + adj), "actual": str(img)})
        for z in centrals:
            if other(z) != base(z):
                witnesses.append({"kind": "center", "y": str(y), "z": str(z),
                                  "expected": str(base(z)), "actual": str(other(z))})
    return Report(check="lift-independence", passed=not witnesses, witnesses=witnesses,
                  details={"perturbations": len(perturbations)})
