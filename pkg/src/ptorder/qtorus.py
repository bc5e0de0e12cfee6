"""
Normal-form arithmetic in the mixed quantum torus / quantum affine space
T_eps(Omega)_>= and in its one-parameter lift over Q(eps)[q, q^-1].

A monomial x^a (a in Z^N) denotes the ordered product x_1^a_1 ... x_N^a_N.
Products follow

    x^a * x^b = theta^kappa(a, b) * x^(a + b),   kappa(a, b) = sum_{i > j} a_i b_j Lambda_ij

with theta = eps in the specialized algebra and theta = q in the lift, so
x_i x_j = eps^Omega_ij x_j x_i for i < j.
"""

import itertools
import logging
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from ptorder.config import DEFAULT_CONFIG, EngineConfig
from ptorder.cyclotomic import CycScalar, CyclotomicField, QLaurent, cyclotomic_field
from ptorder.errors import (
    DomainMismatchError,
    InvalidParameterError,
    ParseError,
    RelationViolationError,
    SpecValidationError,
)
from ptorder.models import Report
from ptorder.utils.syntax import Adapter, join_signed, parse_expression

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
IntMatrix = Tuple[Tuple[int, ...], ...]
Coefficient = Union[CycScalar, QLaurent]


class AlgebraSpec(BaseModel):
    """
    Presentation data of T_eps(Omega)_>=: rank, root-of-unity order, the
    integer lift Lambda of Omega, the invertibility mask and optional
    cluster data (1-based exchangeable indices, exchange matrix of shape
    N x |ex|, skew-symmetrizer diagonal).
    """
    model_config = ConfigDict(frozen=True)

    n: int
    ell: int
    lam: IntMatrix
    invertible: Tuple[bool, ...]
    ex: Optional[Tuple[int, ...]] = None
    btilde: Optional[IntMatrix] = None
    d: Optional[Tuple[int, ...]] = None

    @model_validator(mode="after")
    def check_presentation(self) -> "AlgebraSpec":
        n = self.n
        if n < 1:
            raise SpecValidationError(f"rank must be positive, got {n}")
        if self.ell < 2:
            raise SpecValidationError(f"root-of-unity order must be >= 2, got {self.ell}")
        if len(self.lam) != n or any(len(row) != n for row in self.lam):
            raise SpecValidationError(f"lambda must be {n}x{n}")
        for i in range(n):
            for j in range(n):
                if self.lam[i][j] != -self.lam[j][i]:
                    raise SpecValidationError(f"lambda is not skew-symmetric at ({i + 1},{j + 1})")
        if len(self.invertible) != n:
            raise SpecValidationError(f"invertible mask must have {n} entries")
        cluster = (self.ex, self.btilde, self.d)
        if any(c is not None for c in cluster):
            if any(c is None for c in cluster):
                raise SpecValidationError("cluster data needs ex, btilde and d together")
            m = len(self.ex)
            if len(set(self.ex)) != m or any(not 1 <= k <= n for k in self.ex):
                raise SpecValidationError(f"ex indices must be distinct and in [1,{n}]")
            if len(self.btilde) != n or any(len(row) != m for row in self.btilde):
                raise SpecValidationError(f"btilde must be {n}x{m} (rows: all indices, columns: ex)")
            if len(self.d) != m or any(v <= 0 for v in self.d):
                raise SpecValidationError(f"d must hold {m} positive entries")
            if not skew_symmetrizable(self.principal_part(), self.d):
                raise SpecValidationError("principal part of btilde is not skew-symmetrized by d")
        return self

    @property
    def omega(self) -> IntMatrix:
        return tuple(tuple(v % self.ell for v in row) for row in self.lam)

    @property
    def rank(self) -> int:
        return self.ell ** self.n

    @property
    def has_cluster(self) -> bool:
        return self.ex is not None

    @property
    def ex0(self) -> Tuple[int, ...]:
        return tuple(k - 1 for k in self.ex) if self.ex else ()

    def principal_part(self) -> IntMatrix:
        return tuple(tuple(self.btilde[k][c] for c in range(len(self.ex0))) for k in self.ex0)

    @property
    def field(self) -> CyclotomicField:
        return cyclotomic_field(self.ell)


class QuantumTorus:
    """
    The algebra T_eps(Omega)_>= (``lifted=False``) or its lift over
    Q(eps)[q^+-1] built from Lambda (``lifted=True``). Use `quantum_torus`
    to obtain the shared instance for a spec.
    """

    def __init__(self, spec: AlgebraSpec, lifted: bool = False, partner: Optional["QuantumTorus"] = None):
        self.spec = spec
        self.n = spec.n
        self.ell = spec.ell
        self.field = spec.field
        self.lifted = lifted
        self.lam = spec.lam
        self._lower = tuple(
            (i, j, spec.lam[i][j]) for i in range(self.n) for j in range(i) if spec.lam[i][j]
        )
        self._negative_ok = tuple(spec.invertible)
        self.partner = partner if partner is not None else QuantumTorus(spec, not lifted, self)

    def __repr__(self) -> str:
        kind = "lifted" if self.lifted else "specialized"
        return f"QuantumTorus(N={self.n}, l={self.ell}, {kind})"

    @property
    def specialized(self) -> "QuantumTorus":
        return self.partner if self.lifted else self

    @property
    def lift_ring(self) -> "QuantumTorus":
        return self if self.lifted else self.partner

    # -- scalars ----------------------------------------------------------
    def kappa(self, a: Exponent, b: Exponent) -> int:
        return sum(a[i] * b[j] * lam for i, j, lam in self._lower)

    def theta_power(self, k: int) -> Coefficient:
        if self.lifted:
            return QLaurent.monomial(self.field, k)
        return self.field.eps_pow(k)

    def coefficient(self, value) -> Coefficient:
        """Coerces an int, Fraction, CycScalar (or QLaurent for the lift) into the coefficient domain."""
        if isinstance(value, (int, Fraction)):
            value = self.field.rational(value)
        if self.lifted:
            if isinstance(value, CycScalar):
                return QLaurent.constant(value)
            if isinstance(value, QLaurent):
                return value
        elif isinstance(value, CycScalar):
            return value
        raise DomainMismatchError(f"cannot use {value!r} as a coefficient of the {self!r}")

    # -- elements ---------------------------------------------------------
    def check_exponent(self, a: Exponent) -> None:
        if len(a) != self.n:
            raise InvalidParameterError(f"exponent {a} has wrong length for N={self.n}")
        for i, v in enumerate(a):
            if v < 0 and not self._negative_ok[i]:
                raise InvalidParameterError(f"negative exponent at non-invertible index x{i + 1} in {a}")

    def element(self, terms: Dict[Exponent, Coefficient], validate: bool = True) -> "TorusElement":
        return TorusElement(self, terms, validate=validate)

    def zero(self) -> "TorusElement":
        return TorusElement(self, {}, validate=False)

    def one(self) -> "TorusElement":
        return self.monomial((0,) * self.n)

    def monomial(self, a: Sequence[int], coef=1) -> "TorusElement":
        a = tuple(int(v) for v in a)
        return TorusElement(self, {a: self.coefficient(coef)})

    def gen(self, i: int) -> "TorusElement":
        """The generator x_(i+1) (0-based index)."""
        return self.monomial(tuple(1 if k == i else 0 for k in range(self.n)))

    def gens(self) -> List["TorusElement"]:
        return [self.gen(i) for i in range(self.n)]

    def scalar(self, value) -> "TorusElement":
        return self.monomial((0,) * self.n, value)

    # -- products ---------------------------------------------------------
    def multiply(self, a: "TorusElement", b: "TorusElement") -> "TorusElement":
        if a.ring is not self or b.ring is not self:
            raise DomainMismatchError("operands belong to different algebras or coefficient domains")
        out: Dict[Exponent, Coefficient] = {}
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                k = self.kappa(ea, eb)
                c = ca * cb
                if k:
                    c = c * self.theta_power(k)
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out[e] + c if e in out else c
        return TorusElement(self, out, validate=False)

    def commutator(self, a: "TorusElement", b: "TorusElement") -> "TorusElement":
        return self.multiply(a, b) - self.multiply(b, a)

    def is_central(self, x: "TorusElement") -> bool:
        return all(self.commutator(x, g).is_zero() for g in self.gens())

    # -- specialization ---------------------------------------------------
    def specialize(self, x: "TorusElement") -> "TorusElement":
        """q -> eps on every coefficient of a lifted element."""
        if not x.ring.lifted:
            raise DomainMismatchError("specialize expects an element of the lifted algebra")
        target = self.specialized
        return TorusElement(target, {e: c.eval_at_eps() for e, c in x.terms.items()}, validate=False)

    def lift(self, x: "TorusElement") -> "TorusElement":
        """Monomial-wise lift: each eps-coefficient becomes a q-constant."""
        if x.ring.lifted:
            raise DomainMismatchError("lift expects an element of the specialized algebra")
        target = self.lift_ring
        return TorusElement(target, {e: QLaurent.constant(c) for e, c in x.terms.items()}, validate=False)

    # -- center -----------------------------------------------------------
    def center_lattice(self, config: EngineConfig = DEFAULT_CONFIG) -> FrozenSet[Exponent]:
        return center_lattice(self.spec, config)

    def pi_degree(self, config: EngineConfig = DEFAULT_CONFIG) -> int:
        return pi_degree(self.spec, config)

    # -- text -------------------------------------------------------------
    def parse(self, text: str) -> "TorusElement":
        """Parses signed sums of `coef * x<i>^<int>` products; `e` is the root of unity."""

        def symbol(name: str, exp: int) -> TorusElement:
            if name == "e":
                return self.scalar(self.field.eps_pow(exp))
            if self.lifted and name == "q":
                return self.scalar(QLaurent.monomial(self.field, exp))
            if name.startswith("x") and name[1:].isdigit():
                i = int(name[1:]) - 1
                if not 0 <= i < self.n:
                    raise ParseError(f"generator {name} out of range for N={self.n}")
                a = [0] * self.n
                a[i] = exp
                return self.monomial(a)
            raise ParseError(f"unknown symbol {name!r}")

        adapter = Adapter(
            number=lambda c: self.scalar(c),
            symbol=symbol,
            add=lambda x, y: x + y,
            mul=lambda x, y: x * y,
            neg=lambda x: -x,
            power=lambda x, k: x ** k,
        )
        try:
            return parse_expression(text, adapter)
        except InvalidParameterError as e:
            raise ParseError(str(e)) from e

    def from_json(self, data: List[dict]) -> "TorusElement":
        if self.lifted:
            raise DomainMismatchError("JSON form is defined for specialized elements")
        terms = {}
        for item in data:
            terms[tuple(item["exponents"])] = CycScalar.from_json(self.ell, item["coef"])
        return TorusElement(self, terms)


class TorusElement:
    """A finite sum of normal-form monomials; zero coefficients are never stored."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: QuantumTorus, terms: Dict[Exponent, Coefficient], validate: bool = True):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if not c.is_zero()}
        if validate:
            for e, c in self.terms.items():
                ring.check_exponent(e)
                if isinstance(c, QLaurent) != ring.lifted:
                    raise DomainMismatchError("coefficient domain does not match the algebra")

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "TorusElement":
        if isinstance(other, TorusElement):
            if other.ring is not self.ring:
                raise DomainMismatchError("operands belong to different algebras or coefficient domains")
            return other
        return self.ring.scalar(other)

    def __add__(self, other) -> "TorusElement":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return TorusElement(self.ring, out, validate=False)

    __radd__ = __add__

    def __neg__(self) -> "TorusElement":
        return TorusElement(self.ring, {e: -c for e, c in self.terms.items()}, validate=False)

    def __sub__(self, other) -> "TorusElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "TorusElement":
        return self._coerce(other) - self

    def __mul__(self, other) -> "TorusElement":
        if isinstance(other, TorusElement):
            return self.ring.multiply(self, self._coerce(other))
        c = self.ring.coefficient(other)
        return TorusElement(self.ring, {e: v * c for e, v in self.terms.items()}, validate=False)

    def __rmul__(self, other) -> "TorusElement":
        if isinstance(other, TorusElement):
            return self.ring.multiply(self._coerce(other), self)
        return self * other

    def __truediv__(self, other) -> "TorusElement":
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, CycScalar):
            return self * other.inverse()
        raise DomainMismatchError(f"cannot divide a torus element by {other!r}")

    def __pow__(self, k: int) -> "TorusElement":
        if k < 0:
            if not self.is_monomial():
                raise InvalidParameterError("only monomials can be inverted")
            (e, c), = self.terms.items()
            inv = self.ring.monomial(tuple(-v for v in e))
            coef_inv = c.inverse() if isinstance(c, CycScalar) else None
            if coef_inv is None:
                raise InvalidParameterError("cannot invert a q-dependent coefficient")
            # x^-a * x^a = theta^kappa(-a, a) so the inverse carries theta^-kappa(-a, a)
            inv = inv * self.ring.theta_power(-self.ring.kappa(tuple(-v for v in e), e))
            return (inv * coef_inv) ** (-k)
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __eq__(self, other) -> bool:
        if isinstance(other, TorusElement):
            return self.ring is other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, CycScalar)):
            return self == self.ring.scalar(other)
        return NotImplemented

    def __hash__(self) -> int:
        # constants hash like the scalar they equal
        if not self.terms:
            return hash(0)
        if set(self.terms) == {(0,) * self.ring.n}:
            return hash(next(iter(self.terms.values())))
        return hash((self.ring.lifted, frozenset(self.terms.items())))

    def items(self) -> Iterator[Tuple[Exponent, Coefficient]]:
        return iter(sorted(self.terms.items()))

    # -- rendering --------------------------------------------------------
    def __str__(self) -> str:
        parts = []
        for e, c in self.items():
            mono = " ".join(
                f"x{i + 1}" if v == 1 else f"x{i + 1}^{v}" for i, v in enumerate(e) if v
            )
            text_c = str(c)
            atomic = _is_atomic(c)
            negative = atomic and text_c.startswith("-")
            if negative:
                text_c = text_c[1:]
            if not atomic:
                text_c = f"({text_c})"
            if not mono:
                text = text_c
            elif text_c == "1":
                text = mono
            else:
                text = f"{text_c} * {mono}"
            parts.append((negative, text))
        return join_signed(parts)

    def __repr__(self) -> str:
        return f"TorusElement({self})"

    def to_json(self) -> List[dict]:
        if self.ring.lifted:
            return [{"exponents": list(e), "coef": str(c)} for e, c in self.items()]
        return [{"exponents": list(e), "coef": c.to_json()} for e, c in self.items()]


def _is_atomic(c: Coefficient) -> bool:
    if isinstance(c, CycScalar):
        return c.is_atomic()
    if len(c.terms) != 1:
        return False
    (k, scalar), = c.terms.items()
    return scalar.is_atomic() and (k == 0 or scalar == 1)


@lru_cache(maxsize=None)
def quantum_torus(spec: AlgebraSpec) -> QuantumTorus:
    """The specialized algebra for ``spec``; ``.lift_ring`` is its q-lift."""
    return QuantumTorus(spec)


def multiply(a: TorusElement, b: TorusElement) -> TorusElement:
    return a.ring.multiply(a, b)


def commutator(a: TorusElement, b: TorusElement) -> TorusElement:
    return a.ring.commutator(a, b)


# ---------------------------------------------------------------------------
# Center and PI degree
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _center_lattice(omega: IntMatrix, ell: int) -> FrozenSet[Exponent]:
    n = len(omega)
    residues = np.array(list(itertools.product(range(ell), repeat=n)), dtype=np.int64)
    om = np.array(omega, dtype=np.int64)
    mask = ((residues @ om.T) % ell == 0).all(axis=1)
    found = residues[mask]
    return frozenset(tuple(int(v) for v in row) for row in found)


def center_lattice(spec: AlgebraSpec, config: EngineConfig = DEFAULT_CONFIG) -> FrozenSet[Exponent]:
    """
    Residues K = {a mod l : Omega a = 0 mod l}; x^a is central iff a mod l lies in K.
    """
    config.check("max_center", spec.rank)
    return _center_lattice(spec.omega, spec.ell)


def pi_degree(spec: AlgebraSpec, config: EngineConfig = DEFAULT_CONFIG) -> int:
    """n = sqrt(l^N / |K|)."""
    k = len(center_lattice(spec, config))
    quotient, rem = divmod(spec.rank, k)
    n = isqrt(quotient)
    assert rem == 0 and n * n == quotient, f"l^N/|K| = {spec.rank}/{k} is not a perfect square"
    return n


def residue(a: Exponent, ell: int) -> Exponent:
    return tuple(v % ell for v in a)


# ---------------------------------------------------------------------------
# Derivations
# ---------------------------------------------------------------------------

def _relation_defect(ring: QuantumTorus, images: Sequence[TorusElement], i: int, j: int) -> TorusElement:
    """delta(x_i x_j - eps^Omega_ij x_j x_i) for a candidate generator assignment."""
    xi, xj = ring.gen(i), ring.gen(j)
    di, dj = images[i], images[j]
    scale = ring.theta_power(ring.lam[i][j])
    return (di * xj + xi * dj) - (dj * xi + xj * di) * scale


def _power_image(ring: QuantumTorus, images: Tuple[TorusElement, ...], i: int, k: int) -> TorusElement:
    step = 1 if k > 0 else -1
    unit = tuple(step if m == i else 0 for m in range(ring.n))
    dy = images[i]
    if step < 0:
        y = ring.monomial(unit)
        dy = -(y * dy * y)

    def power(t: int) -> TorusElement:
        # x_i^t is already in normal form with coefficient 1
        return ring.monomial(tuple(t * v for v in unit))

    total = ring.zero()
    for t in range(abs(k)):
        total = total + power(t) * dy * power(abs(k) - 1 - t)
    return total


@lru_cache(maxsize=4096)
def _derivation_on_monomial(ring: QuantumTorus, images: Tuple[TorusElement, ...], a: Exponent) -> TorusElement:
    """Leibniz rule over the ordered product x1^a1 ... xN^aN."""
    n = ring.n
    result = ring.zero()
    for i in range(n):
        if not a[i]:
            continue
        left = ring.monomial(a[:i] + (0,) * (n - i))
        right = ring.monomial((0,) * (i + 1) + a[i + 1:])
        result = result + left * _power_image(ring, images, i, a[i]) * right
    return result


class Derivation:
    """
    A Q(eps)-linear derivation of the specialized algebra given by the
    images of the generators and extended by the Leibniz rule.
    """

    def __init__(self, ring: QuantumTorus, images: Sequence[TorusElement], validate: bool = True):
        if ring.lifted:
            raise DomainMismatchError("derivations act on the specialized algebra")
        if len(images) != ring.n:
            raise InvalidParameterError(f"expected {ring.n} generator images, got {len(images)}")
        for img in images:
            if img.ring is not ring:
                raise DomainMismatchError("derivation image lives in another algebra")
        self.ring = ring
        self.images = tuple(images)
        self.validated = False
        if validate:
            pair = _first_failing_pair(ring, self.images)
            if pair is not None:
                raise RelationViolationError(
                    f"images violate the relation for pair (x{pair[0] + 1}, x{pair[1] + 1})", pair
                )
            self.validated = True

    @classmethod
    def zero(cls, ring: QuantumTorus) -> "Derivation":
        return cls(ring, [ring.zero()] * ring.n)

    @classmethod
    def diagonal(cls, ring: QuantumTorus, weights: Sequence) -> "Derivation":
        """x_i -> w_i x_i; the grading derivation has all weights 1."""
        return cls(ring, [ring.gen(i) * w for i, w in enumerate(weights)])

    @classmethod
    def grading(cls, ring: QuantumTorus) -> "Derivation":
        return cls.diagonal(ring, [1] * ring.n)

    @classmethod
    def inner(cls, y: TorusElement) -> "Derivation":
        """ad(y) = [y, -]."""
        ring = y.ring
        return cls(ring, [ring.commutator(y, g) for g in ring.gens()])

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.ring, [a + b for a, b in zip(self.images, other.images)])

    def __mul__(self, c) -> "Derivation":
        return Derivation(self.ring, [img * c for img in self.images])

    __rmul__ = __mul__

    def __sub__(self, other: "Derivation") -> "Derivation":
        return self + other * -1

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.ring is other.ring and self.images == other.images

    def __call__(self, r: TorusElement) -> TorusElement:
        return apply_derivation(self, r)

    def on_monomial(self, a: Exponent) -> TorusElement:
        return _derivation_on_monomial(self.ring, self.images, tuple(a))

    def __str__(self) -> str:
        return "\n".join(f"d(x{i + 1}) = {img}" for i, img in enumerate(self.images))

    def to_json(self) -> List[dict]:
        return [{"generator": f"x{i + 1}", "image": img.to_json()} for i, img in enumerate(self.images)]


def _first_failing_pair(ring: QuantumTorus, images: Sequence[TorusElement]) -> Optional[Tuple[int, int]]:
    for i in range(ring.n):
        for j in range(i + 1, ring.n):
            if not _relation_defect(ring, images, i, j).is_zero():
                return (i, j)
    return None


def check_derivation(delta: Derivation) -> Report:
    """Checks delta(x_i x_j - eps^Omega_ij x_j x_i) = 0 for every pair i < j."""
    ring = delta.ring
    witnesses = []
    for i in range(ring.n):
        for j in range(i + 1, ring.n):
            defect = _relation_defect(ring, delta.images, i, j)
            if not defect.is_zero():
                witnesses.append({"pair": [i + 1, j + 1], "defect": str(defect)})
    return Report(check="derivation-relations", passed=not witnesses, witnesses=witnesses)


def apply_derivation(delta: Derivation, r: TorusElement) -> TorusElement:
    if not delta.validated:
        pair = _first_failing_pair(delta.ring, delta.images)
        if pair is not None:
            raise RelationViolationError(
                f"derivation violates the relation for pair (x{pair[0] + 1}, x{pair[1] + 1})", pair
            )
    if r.ring is not delta.ring:
        raise DomainMismatchError("element and derivation live in different algebras")
    result = delta.ring.zero()
    for a, c in r.terms.items():
        result = result + delta.on_monomial(a) * c
    return result


# ---------------------------------------------------------------------------
# Cluster matrix checks
# ---------------------------------------------------------------------------

def skew_symmetrizable(b: Sequence[Sequence[int]], d: Sequence[int]) -> bool:
    """True iff d_i b_ij = -d_j b_ji for the square principal part b."""
    m = len(b)
    return all(d[i] * b[i][j] == -d[j] * b[j][i] for i in range(m) for j in range(m))


def _compat_product(btilde, matrix, d, ex) -> Tuple[np.ndarray, np.ndarray]:
    bt = np.array(btilde, dtype=object)
    mat = np.array(matrix, dtype=object)
    if bt.ndim != 2 or mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise InvalidParameterError("btilde and the skew matrix must be 2D, the skew matrix square")
    n = mat.shape[0]
    if bt.shape[0] != n:
        raise InvalidParameterError(f"btilde has {bt.shape[0]} rows, expected {n}")
    m = bt.shape[1]
    if len(d) != m:
        raise InvalidParameterError(f"d has {len(d)} entries, expected {m}")
    ex = tuple(range(m)) if ex is None else tuple(ex)
    if len(ex) != m or any(not 0 <= k < n for k in ex):
        raise InvalidParameterError("ex must list one 0-based index per btilde column")
    expected = np.zeros((m, n), dtype=object)
    for k, col in enumerate(ex):
        expected[k, col] = d[k]
    product = bt.T.dot(mat) if m else np.zeros((0, n), dtype=object)
    return product, expected


def ell_compatible(btilde, omega, d, ell: int, ex: Optional[Sequence[int]] = None) -> bool:
    """
    B~^T Omega = [D 0] modulo l, where column ex[k] of the right side holds D_k.
    ``btilde`` is N x |ex|; ``ex`` holds 0-based indices and defaults to the first |ex|.
    """
    if ell < 1:
        raise InvalidParameterError(f"l must be positive, got {ell}")
    product, expected = _compat_product(btilde, omega, d, ex)
    return bool(((product - expected) % ell == 0).all())


def strict(btilde, lam, d, ex: Optional[Sequence[int]] = None) -> bool:
    """B~^T Lambda = [D 0] over the integers."""
    lam_arr = np.array(lam, dtype=object)
    if lam_arr.ndim != 2 or (lam_arr != -lam_arr.T).any():
        raise InvalidParameterError("lambda must be skew-symmetric")
    product, expected = _compat_product(btilde, lam, d, ex)
    return bool((product == expected).all())


def coprime_check(ell: int, d: Sequence[int]) -> bool:
    """l odd and coprime to every diagonal entry of D."""
    return ell % 2 == 1 and all(gcd(ell, v) == 1 for v in d)
