"""
Central monomial subalgebras, free-module coordinates over them, and the
trace maps built on top: the regular trace, the reduced trace of a quantum
torus, commutative extension traces and their composites.
"""

import itertools
import logging
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ptorder.config import DEFAULT_CONFIG, EngineConfig
from ptorder.cyclotomic import CycScalar
from ptorder.errors import (
    DecompositionError,
    InvalidExtensionError,
    InvalidParameterError,
    NormalizationError,
)
from ptorder.groebner import CPoly, default_names
from ptorder.models import Report
from ptorder.qtorus import Derivation, Exponent, QuantumTorus, TorusElement
from ptorder.utils.lattice import Sublattice

logger = logging.getLogger(__name__)


class CentralSubalgebra:
    """
    The monomial subalgebra spanned by x^a, a in a full-rank sublattice L,
    inside the specialized algebra ``ring``. The algebra is a free module
    over it with basis x^r, r running over a transversal of Z^N / L.
    """

    def __init__(self, ring: QuantumTorus, lattice: Sublattice, name: str = "C",
                 config: EngineConfig = DEFAULT_CONFIG):
        if ring.lifted:
            raise InvalidParameterError("central subalgebras live in the specialized algebra")
        if lattice.dim != ring.n:
            raise InvalidExtensionError(f"lattice dimension {lattice.dim} differs from N={ring.n}")
        omega = np.array(ring.spec.omega, dtype=np.int64)
        gens = np.array(lattice.generators(), dtype=np.int64)
        bad = ((gens @ omega.T) % ring.ell != 0).any(axis=1)
        if bad.any():
            g = lattice.generators()[int(np.argmax(bad))]
            raise InvalidExtensionError(f"x^{g} is not central; {name} is not a central subalgebra")
        config.check("max_basis", lattice.index)
        self.ring = ring
        self.lattice = lattice
        self.name = name
        self.config = config
        self.variables = default_names(ring.n)
        self._twists: Dict[Tuple[int, ...], CycScalar] = {}

    def __repr__(self) -> str:
        return f"CentralSubalgebra({self.name}, generators={self.lattice.generators()})"

    # -- standard subalgebras --------------------------------------------
    @classmethod
    def c0(cls, ring: QuantumTorus, config: EngineConfig = DEFAULT_CONFIG) -> "CentralSubalgebra":
        """C0: the l-th powers x_i^l (and x_i^-l at invertible indices)."""
        return cls(ring, Sublattice.scaled(ring.ell, ring.n), name="C0", config=config)

    @classmethod
    def full_center(cls, ring: QuantumTorus, config: EngineConfig = DEFAULT_CONFIG) -> "CentralSubalgebra":
        """Z: the lattice generated by the center residues K and l Z^N."""
        basis = [tuple(ring.ell if i == j else 0 for j in range(ring.n)) for i in range(ring.n)]
        lattice = Sublattice(basis, ring.n)
        for k in sorted(ring.center_lattice(config)):
            if not lattice.contains(k):
                basis.append(k)
                lattice = Sublattice(basis, ring.n)
        return cls(ring, lattice, name="Z", config=config)

    @classmethod
    def from_basis(cls, ring: QuantumTorus, basis: Sequence[Sequence[int]], name: str = "A",
                   config: EngineConfig = DEFAULT_CONFIG) -> "CentralSubalgebra":
        return cls(ring, Sublattice(basis, ring.n), name=name, config=config)

    # -- membership and bases --------------------------------------------
    @property
    def index(self) -> int:
        return self.lattice.index

    def generators(self) -> List[Exponent]:
        return self.lattice.generators()

    def inverted(self) -> Tuple[bool, ...]:
        """A generator may be inverted when its support avoids the non-invertible indices."""
        mask = self.ring.spec.invertible
        return tuple(all(mask[i] for i, v in enumerate(g) if v) for g in self.generators())

    def contains(self, z: TorusElement) -> bool:
        return all(self.lattice.contains(a) for a in z.terms)

    def transversal(self) -> List[Exponent]:
        return self.lattice.transversal()

    def lattice_coordinates(self, a: Exponent) -> Tuple[int, ...]:
        """Integer coordinates of a lattice exponent over the generators."""
        if not self.lattice.contains(a):
            raise DecompositionError(f"x^{tuple(a)} does not lie in {self.name}")
        return self.lattice.coordinates(a)

    def basis_map(self, basis: Optional[Sequence[Exponent]] = None) -> Dict[Exponent, Exponent]:
        """Canonical residue -> chosen basis exponent; the identity for the canonical transversal."""
        if basis is None:
            return {r: r for r in self.transversal()}
        mapping = {}
        for b in basis:
            b = tuple(b)
            self.ring.check_exponent(b)
            res = self.lattice.residue(b)
            if res in mapping:
                raise InvalidParameterError(f"basis exponents {mapping[res]} and {b} share a residue class")
            mapping[res] = b
        if len(mapping) != self.index:
            raise InvalidParameterError(f"a basis needs {self.index} exponents, got {len(mapping)}")
        return mapping

    def split(self, a: Exponent, basis: Optional[Dict[Exponent, Exponent]] = None) -> Tuple[Exponent, Exponent, CycScalar]:
        """
        Splits x^a = s * x^p * x^r with r a basis exponent and p in the
        lattice; returns (r, p, s). Raises DecompositionError when x^p would
        need a negative exponent at a non-invertible index.
        """
        res = self.lattice.residue(a)
        r = basis[res] if basis is not None else res
        p = tuple(x - y for x, y in zip(a, r))
        mask = self.ring.spec.invertible
        for i, v in enumerate(p):
            if v < 0 and not mask[i]:
                raise DecompositionError(
                    f"x^{tuple(a)} has no decomposition over {self.name}: lattice part {p} "
                    f"is negative at non-invertible x{i + 1}"
                )
        return r, p, self.ring.field.eps_pow(-self.ring.kappa(p, r))

    # -- conversion to commutative polynomials ---------------------------
    def _twist(self, coords: Tuple[int, ...]) -> CycScalar:
        """Coefficient of x^(sum m_k g_k) in the ordered product prod_k (x^g_k)^m_k."""
        if coords not in self._twists:
            ring = self.ring
            prod = ring.one()
            for g, m in zip(self.generators(), coords):
                if m:
                    prod = prod * ring.monomial(g) ** m
            (_, c), = prod.terms.items()
            self._twists[coords] = c
        return self._twists[coords]

    def to_poly(self, z: TorusElement) -> CPoly:
        """Writes a central element as a polynomial in the lattice generators."""
        terms = {}
        for a, c in z.terms.items():
            residue, _, coords = self.lattice.decompose(a)
            if any(residue):
                raise DecompositionError(f"x^{a} does not lie in {self.name}")
            terms[coords] = c / self._twist(coords)
        return CPoly(self.ring.field, self.variables, terms)

    def from_poly(self, f: CPoly) -> TorusElement:
        if f.nvars != self.ring.n:
            raise InvalidParameterError(f"polynomial has {f.nvars} variables, expected {self.ring.n}")
        ring = self.ring
        inverted = self.inverted()
        total = ring.zero()
        for m, c in f.terms.items():
            for k, v in enumerate(m):
                if v < 0 and not inverted[k]:
                    raise NormalizationError(f"{self.variables[k]} is not invertible in {self.name}")
            prod = ring.one()
            for g, v in zip(self.generators(), m):
                if v:
                    prod = prod * ring.monomial(g) ** v
            total = total + prod * c
        return total


def coordinates(r: TorusElement, C: CentralSubalgebra,
                basis: Optional[Sequence[Exponent]] = None) -> Dict[Exponent, TorusElement]:
    """The unique decomposition r = sum_b c_b x^b with c_b in C, keyed by basis exponent."""
    if r.ring is not C.ring:
        raise InvalidParameterError("element and subalgebra live in different algebras")
    mapping = C.basis_map(basis)
    ring = C.ring
    out: Dict[Exponent, Dict[Exponent, CycScalar]] = {}
    for a, c in r.terms.items():
        b, p, s = C.split(a, mapping)
        slot = out.setdefault(b, {})
        slot[p] = slot[p] + c * s if p in slot else c * s
    coords = {b: ring.element(terms, validate=False) for b, terms in out.items()}
    return {b: v for b, v in coords.items() if v}


def left_mult_matrix(r: TorusElement, C: CentralSubalgebra,
                     basis: Optional[Sequence[Exponent]] = None) -> List[List[TorusElement]]:
    """M with r * x^b_j = sum_i M[i][j] x^b_i over the basis."""
    ring = C.ring
    order = list(C.basis_map(basis).values())
    zero = ring.zero()
    columns = []
    for b in order:
        coords = coordinates(r * ring.monomial(b), C, order)
        columns.append([coords.get(bi, zero) for bi in order])
    return [[columns[j][i] for j in range(len(order))] for i in range(len(order))]


def tr_reg(r: TorusElement, C: CentralSubalgebra,
           basis: Optional[Sequence[Exponent]] = None) -> TorusElement:
    """Matrix trace of left multiplication by r on the free C-module."""
    ring = C.ring
    order = list(C.basis_map(basis).values())
    total = ring.zero()
    for b in order:
        coords = coordinates(r * ring.monomial(b), C, order)
        if b in coords:
            total = total + coords[b]
    return total


def tr_red(r: TorusElement, config: EngineConfig = DEFAULT_CONFIG) -> TorusElement:
    """n * (projection of r onto its central monomials)."""
    ring = r.ring
    kernel = ring.center_lattice(config)
    n = ring.pi_degree(config)
    central = {a: c * n for a, c in r.terms.items() if tuple(v % ring.ell for v in a) in kernel}
    return ring.element(central, validate=False)


class TraceForm:
    """
    A trace R -> target determined by its values on the basis monomials x^r,
    r in the canonical transversal of ``source``, and extended
    source-linearly. ``normalization`` scales every value.
    """

    def __init__(self, source: CentralSubalgebra, values: Dict[Exponent, TorusElement],
                 target: CentralSubalgebra, normalization=Fraction(1), kind: str = "trace"):
        missing = [r for r in source.transversal() if r not in values]
        if missing:
            raise InvalidParameterError(f"trace form misses values at {missing[:3]}")
        self.source = source
        self.values = dict(values)
        self.target = target
        self.normalization = Fraction(normalization)
        self.kind = kind

    def __repr__(self) -> str:
        return f"TraceForm({self.kind}: {self.source.name} -> {self.target.name})"

    def __call__(self, r: TorusElement) -> TorusElement:
        ring = self.source.ring
        total = ring.zero()
        for a, c in r.terms.items():
            res, p, s = self.source.split(a)
            value = self.values[res]
            if value:
                total = total + ring.monomial(p, c * s) * value
        if self.normalization != 1:
            total = total * self.normalization
        return total

    def with_value(self, residue: Exponent, value: TorusElement) -> "TraceForm":
        values = dict(self.values)
        values[tuple(residue)] = value
        return TraceForm(self.source, values, self.target, self.normalization, f"{self.kind}*")


def regular_trace_form(C: CentralSubalgebra) -> TraceForm:
    ring = C.ring
    values = {r: tr_reg(ring.monomial(r), C) for r in C.transversal()}
    return TraceForm(C, values, C, kind="tr_reg")


def reduced_trace_form(ring: QuantumTorus, config: EngineConfig = DEFAULT_CONFIG) -> TraceForm:
    C0 = CentralSubalgebra.c0(ring, config)
    Z = CentralSubalgebra.full_center(ring, config)
    values = {r: tr_red(ring.monomial(r), config) for r in C0.transversal()}
    return TraceForm(C0, values, Z, kind="tr_red")


class ExtensionTrace:
    """tr_{C/A}: the regular trace of C as a free module over A, with basis x^t, t in C over A's box."""

    def __init__(self, top: CentralSubalgebra, base: CentralSubalgebra, config: EngineConfig = DEFAULT_CONFIG):
        if top.ring is not base.ring:
            raise InvalidExtensionError("subalgebras live in different algebras")
        if not base.lattice.is_sublattice_of(top.lattice):
            raise InvalidExtensionError(f"{base.name} is not contained in {top.name}")
        self.top = top
        self.base = base
        self.transversal = top.lattice.vectors_in(base.transversal())
        self.degree = base.index // top.index
        assert len(self.transversal) == self.degree, "extension transversal has the wrong size"
        self._check_free(config)

    def _check_free(self, config: EngineConfig) -> None:
        """
        Every monomial of top must split over base with a lattice part that
        stays in base. A failing monomial stays failing after subtracting
        multiples m_j e_j in base, so one period box decides it.
        """
        ring = self.top.ring
        if all(ring.spec.invertible):
            return
        periods = []
        for j in range(ring.n):
            unit = [0] * ring.n
            m = 1
            while True:
                unit[j] = m
                if self.base.lattice.contains(unit):
                    break
                m += 1
            periods.append(m)
        config.check("max_center", int(np.prod(periods)))
        for c in itertools.product(*(range(m) for m in periods)):
            if not self.top.lattice.contains(c):
                continue
            try:
                self.base.split(c)
            except DecompositionError as exc:
                raise InvalidExtensionError(
                    f"{self.top.name} is not a free module over {self.base.name} on x^t: {exc}"
                ) from exc

    def __repr__(self) -> str:
        return f"ExtensionTrace({self.top.name}/{self.base.name}, degree {self.degree})"

    def __call__(self, c: TorusElement) -> TorusElement:
        if not self.top.contains(c):
            raise InvalidParameterError(f"{c} does not lie in {self.top.name}")
        ring = self.top.ring
        total = ring.zero()
        for t in self.transversal:
            coords = coordinates(c * ring.monomial(t), self.base)
            if t in coords:
                total = total + coords[t]
        return total


def tr_commutative(c: TorusElement, C: CentralSubalgebra, A: CentralSubalgebra) -> TorusElement:
    return ExtensionTrace(C, A)(c)


def compose_trace(tr: TraceForm, ext: ExtensionTrace) -> TraceForm:
    """tr_{C/A} o tr as a trace form over A."""
    if tr.target.lattice != ext.top.lattice:
        raise InvalidParameterError(
            f"trace takes values in {tr.target.name}, extension starts at {ext.top.name}"
        )
    if not ext.base.lattice.is_sublattice_of(tr.source.lattice):
        raise InvalidParameterError(f"{tr.source.name}-linear trace is not linear over {ext.base.name}")
    ring = ext.base.ring
    values = {t: ext(tr(ring.monomial(t))) for t in ext.base.transversal()}
    return TraceForm(ext.base, values, ext.base, kind=f"tr_{ext.top.name}/{ext.base.name}({tr.kind})")


def is_poisson_subalgebra(A: CentralSubalgebra,
                          bracket: Callable[[TorusElement, TorusElement], TorusElement]) -> bool:
    """True iff the bracket of any two lattice generators of A lies in A."""
    ring = A.ring
    gens = [ring.monomial(g) for g in A.generators()]
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            if not A.contains(bracket(a, b)):
                return False
    return True


def verify_trace_axioms(tr: Callable[[TorusElement], TorusElement],
                        pairs: Iterable[Tuple[TorusElement, TorusElement]],
                        centrals: Sequence[TorusElement] = (),
                        name: str = "trace-axioms") -> Report:
    """Checks tr(z r) = z tr(r) for the given central z and tr(rs) = tr(sr) on every pair."""
    witnesses = []
    checked = 0
    for r, s in pairs:
        checked += 1
        lhs, rhs = tr(r * s), tr(s * r)
        if lhs != rhs:
            witnesses.append({"kind": "cyclicity", "r": str(r), "s": str(s), "lhs": str(lhs), "rhs": str(rhs)})
        for z in centrals:
            lhs, rhs = tr(z * r), z * tr(r)
            if lhs != rhs:
                witnesses.append({"kind": "linearity", "z": str(z), "r": str(r), "lhs": str(lhs), "rhs": str(rhs)})
    logger.debug(f"{name}: {checked} pairs, {len(witnesses)} witnesses")
    return Report(check=name, passed=not witnesses, witnesses=witnesses, details={"samples": checked})


def verify_pto(tr: Callable[[TorusElement], TorusElement],
               family: Callable[[TorusElement], Derivation],
               centrals: Sequence[TorusElement],
               samples: Iterable[TorusElement],
               name: str = "pto") -> Report:
    """Checks tr(d_c(r)) = d_c(tr(r)) for every central c and sample r."""
    derivations = [(c, family(c)) for c in centrals]
    witnesses = []
    checked = 0
    for r in samples:
        t = tr(r)
        for c, delta in derivations:
            checked += 1
            lhs, rhs = tr(delta(r)), delta(t)
            if lhs != rhs:
                witnesses.append({"c": str(c), "r": str(r), "lhs": str(lhs), "rhs": str(rhs)})
    logger.debug(f"{name}: {checked} checks, {len(witnesses)} witnesses")
    return Report(check=name, passed=not witnesses, witnesses=witnesses, details={"checks": checked})
