"""
Exact arithmetic in the cyclotomic field Q(eps), eps a primitive l-th root
of unity, and in the Laurent ring Q(eps)[q, q^-1].

Scalars are stored over the power basis 1, eps, ..., eps^(phi(l)-1), always
reduced modulo the cyclotomic polynomial, so equality of values is equality
of coefficient tuples.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Tuple, Union

from sympy import Poly, QQ, Rational as SymRational, Symbol, cyclotomic_poly, invert

from ptorder.errors import (
    CycZeroDivisionError,
    InvalidParameterError,
    NotDivisibleError,
    ParseError,
)
from ptorder.utils.syntax import Adapter, format_rational, join_signed, parse_expression

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]

_Q = Symbol("q")

SCALAR_TOKEN = "e"


@lru_cache(maxsize=None)
def cyclotomic_polynomial(ell: int) -> Tuple[int, ...]:
    """
    Returns the l-th cyclotomic polynomial as integer coefficients in
    ascending degree order (index k holds the coefficient of q^k).
    """
    if not isinstance(ell, int) or ell < 2:
        raise InvalidParameterError(f"cyclotomic order must be an integer >= 2, got {ell!r}")
    coeffs = Poly(cyclotomic_poly(ell, _Q), _Q).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


class CyclotomicField:
    """The field Q(eps) for a fixed order l. Obtain instances via `cyclotomic_field`."""

    def __init__(self, ell: int):
        self.ell = ell
        self.modulus = cyclotomic_polynomial(ell)
        self.degree = len(self.modulus) - 1
        self.zero = CycScalar(self, (Fraction(0),) * self.degree)
        self.one = self.rational(1)
        self._eps_powers = tuple(self._power_of_eps(k) for k in range(ell))

    def __repr__(self) -> str:
        return f"CyclotomicField({self.ell})"

    def reduce(self, coeffs: Iterable[Rational]) -> Tuple[Fraction, ...]:
        """Reduces an ascending coefficient list modulo the cyclotomic polynomial."""
        work = [Fraction(c) for c in coeffs]
        phi = self.degree
        mod = self.modulus
        for top in range(len(work) - 1, phi - 1, -1):
            c = work[top]
            if c:
                base = top - phi
                for k in range(phi):
                    if mod[k]:
                        work[base + k] -= c * mod[k]
                work[top] = Fraction(0)
        work.extend([Fraction(0)] * (phi - len(work)))
        return tuple(work[:phi])

    def element(self, coeffs: Iterable[Rational]) -> "CycScalar":
        return CycScalar(self, self.reduce(coeffs))

    def rational(self, value: Rational) -> "CycScalar":
        return CycScalar(self, (Fraction(value),) + (Fraction(0),) * (self.degree - 1))

    def _power_of_eps(self, k: int) -> "CycScalar":
        coeffs = [0] * (k + 1)
        coeffs[k] = 1
        return self.element(coeffs)

    @property
    def eps(self) -> "CycScalar":
        return self.eps_pow(1)

    def eps_pow(self, k: int) -> "CycScalar":
        """eps^k for any integer k (eps^l = 1)."""
        return self._eps_powers[k % self.ell]

    def parse(self, text: str) -> "CycScalar":
        return parse_scalar(text, self.ell)


@lru_cache(maxsize=None)
def cyclotomic_field(ell: int) -> CyclotomicField:
    cyclotomic_polynomial(ell)
    return CyclotomicField(ell)


@lru_cache(maxsize=4096)
def _inverse_coeffs(ell: int, coeffs: Tuple[Fraction, ...]) -> Tuple[Fraction, ...]:
    field = cyclotomic_field(ell)
    f = Poly([SymRational(c.numerator, c.denominator) for c in reversed(coeffs)], _Q, domain=QQ)
    g = Poly(list(reversed(field.modulus)), _Q, domain=QQ)
    inv = invert(f, g)
    out = [Fraction(int(c.p), int(c.q)) for c in reversed(inv.all_coeffs())]
    return field.reduce(out)


class CycScalar:
    """An element of Q(eps), immutable, canonical over the power basis."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: CyclotomicField, coeffs: Tuple[Fraction, ...]):
        self.field = field
        self.coeffs = coeffs

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other) -> "CycScalar":
        if isinstance(other, CycScalar):
            if other.field.ell != self.field.ell:
                raise InvalidParameterError(
                    f"cannot combine scalars of Q(eps_{self.field.ell}) and Q(eps_{other.field.ell})"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        return NotImplemented

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycScalar(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "CycScalar":
        return CycScalar(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycScalar(self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycScalar(self.field, tuple(a * other for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.field.degree == 1:
            return CycScalar(self.field, (self.coeffs[0] * other.coeffs[0],))
        prod = [Fraction(0)] * (2 * self.field.degree - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CycScalar(self.field, self.field.reduce(prod))

    __rmul__ = __mul__

    def inverse(self) -> "CycScalar":
        if self.is_zero():
            raise CycZeroDivisionError("division by zero in Q(eps)")
        if self.field.degree == 1:
            return CycScalar(self.field, (1 / self.coeffs[0],))
        if self.is_rational():
            return self.field.rational(1 / self.coeffs[0])
        return CycScalar(self.field, _inverse_coeffs(self.field.ell, self.coeffs))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise CycZeroDivisionError("division by zero in Q(eps)")
            return CycScalar(self.field, tuple(a / other for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int) -> "CycScalar":
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CycScalar):
            return NotImplemented
        return self.field.ell == other.field.ell and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        # rational values hash like the int or Fraction they equal
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field.ell, self.coeffs))

    # -- rendering --------------------------------------------------------
    def __str__(self) -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            negative = c < 0
            mag = -c if negative else c
            if k == 0:
                text = format_rational(mag)
            else:
                mono = SCALAR_TOKEN if k == 1 else f"{SCALAR_TOKEN}^{k}"
                text = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
            parts.append((negative, text))
        return join_signed(parts)

    def __repr__(self) -> str:
        return f"CycScalar(l={self.field.ell}, {self})"

    def is_atomic(self) -> bool:
        """True when the rendering is a single signed term (no parentheses needed)."""
        return sum(1 for c in self.coeffs if c) <= 1

    def to_json(self) -> List[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, ell: int, data: List[str]) -> "CycScalar":
        return cyclotomic_field(ell).element(Fraction(s) for s in data)


def cyc_arith(a: CycScalar, b: CycScalar, op: str) -> CycScalar:
    """Field arithmetic dispatcher; op is one of add, sub, mul, div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise InvalidParameterError(f"unknown scalar operation {op!r}")


def parse_scalar(text: str, ell: int) -> CycScalar:
    """Parses `-1 - e`, `3/2*e^2`, `(1 + e)^2` etc. into Q(eps_l)."""
    field = cyclotomic_field(ell)

    def symbol(name: str, exp: int) -> CycScalar:
        if name != SCALAR_TOKEN:
            raise ParseError(f"unknown symbol {name!r} in scalar {text!r}")
        return field.eps_pow(exp)

    adapter = Adapter(
        number=field.rational,
        symbol=symbol,
        add=lambda x, y: x + y,
        mul=lambda x, y: x * y,
        neg=lambda x: -x,
        power=lambda x, k: x ** k,
    )
    return parse_expression(text, adapter)


class QLaurent:
    """A Laurent polynomial in q over Q(eps); zero coefficients are never stored."""

    __slots__ = ("field", "terms")

    def __init__(self, field: CyclotomicField, terms: Dict[int, CycScalar]):
        self.field = field
        self.terms = {k: c for k, c in terms.items() if not c.is_zero()}

    @classmethod
    def constant(cls, c: CycScalar) -> "QLaurent":
        return cls(c.field, {0: c})

    @classmethod
    def monomial(cls, field: CyclotomicField, k: int, c: CycScalar = None) -> "QLaurent":
        return cls(field, {k: field.one if c is None else c})

    @classmethod
    def q_minus_eps(cls, field: CyclotomicField) -> "QLaurent":
        return cls(field, {1: field.one, 0: -field.eps})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def items(self) -> Iterator[Tuple[int, CycScalar]]:
        return iter(sorted(self.terms.items()))

    def _coerce(self, other) -> "QLaurent":
        if isinstance(other, QLaurent):
            return other
        if isinstance(other, CycScalar):
            return QLaurent.constant(other)
        if isinstance(other, (int, Fraction)):
            return QLaurent.constant(self.field.rational(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return QLaurent(self.field, out)

    __radd__ = __add__

    def __neg__(self) -> "QLaurent":
        return QLaurent(self.field, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[int, CycScalar] = {}
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                k = i + j
                out[k] = out[k] + a * b if k in out else a * b
        return QLaurent(self.field, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if not self.terms:
            return hash(0)
        if set(self.terms) == {0}:
            return hash(self.terms[0])
        return hash(tuple(sorted(self.terms.items())))

    def __str__(self) -> str:
        parts = []
        for k, c in sorted(self.terms.items(), reverse=True):
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            negative = c.is_atomic() and str(c).startswith("-")
            scalar = -c if negative else c
            text = str(scalar) if scalar.is_atomic() else f"({scalar})"
            if mono:
                text = mono if scalar == 1 else f"{text}*{mono}"
            parts.append((negative, text))
        return join_signed(parts)

    def __repr__(self) -> str:
        return f"QLaurent({self})"

    def eval_at_eps(self) -> CycScalar:
        return qlaurent_eval_at_eps(self)

    def divide_by_q_minus_eps(self) -> "QLaurent":
        return qlaurent_divide_by_q_minus_eps(self)


def qlaurent_eval_at_eps(p: QLaurent) -> CycScalar:
    """Substitutes q = eps."""
    field = p.field
    acc = field.zero
    for k, c in p.terms.items():
        acc = acc + c * field.eps_pow(k)
    return acc


def qlaurent_divide_by_q_minus_eps(p: QLaurent) -> QLaurent:
    """
    Exact quotient p / (q - eps).

    p is first written as q^m * P(q) with P a polynomial, m the lowest
    exponent; P is divided synthetically and the q^m shift is restored.
    """
    field = p.field
    if p.is_zero():
        return QLaurent(field, {})
    low = min(p.terms)
    high = max(p.terms)
    n = high - low
    a = [p.terms.get(low + i, field.zero) for i in range(n + 1)]
    eps = field.eps
    b: List[CycScalar] = [field.zero] * n
    if n >= 1:
        b[n - 1] = a[n]
        for i in range(n - 1, 0, -1):
            b[i - 1] = a[i] + eps * b[i]
        remainder = a[0] + eps * b[0]
    else:
        remainder = a[0]
    if not remainder.is_zero():
        raise NotDivisibleError(f"(q - e) does not divide {p}: value at q = e is nonzero")
    return QLaurent(field, {low + i: b[i] for i in range(n)})
