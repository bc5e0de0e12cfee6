"""
Commutative multivariate polynomials over Q(eps), Buchberger's algorithm,
multivariate division and ideal membership.
"""

import logging
from functools import cached_property
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from ptorder.config import DEFAULT_CONFIG, EngineConfig
from ptorder.cyclotomic import CycScalar, CyclotomicField, cyclotomic_field
from ptorder.errors import (
    InvalidParameterError,
    NormalizationError,
    NotDivisibleError,
    ParseError,
    ResourceLimitError,
)
from ptorder.utils.syntax import Adapter, join_signed, parse_expression

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]

ORDERS: Dict[str, Callable[[Monomial], tuple]] = {
    "lex": lambda m: m,
    "grlex": lambda m: (sum(m), m),
    "degrevlex": lambda m: (sum(m), tuple(-x for x in reversed(m))),
}


def order_key(order: str) -> Callable[[Monomial], tuple]:
    try:
        return ORDERS[order]
    except KeyError:
        raise InvalidParameterError(f"unknown monomial order {order!r}; expected one of {sorted(ORDERS)}")


def default_names(count: int) -> List[str]:
    """u, v, w for up to three variables, otherwise u1 ... um."""
    if count <= 3:
        return ["u", "v", "w"][:count]
    return [f"u{k + 1}" for k in range(count)]


class CPoly:
    """A commutative (Laurent) polynomial; exponents may be negative, zero terms are never stored."""

    __slots__ = ("field", "names", "terms")

    def __init__(self, field: CyclotomicField, names: Sequence[str], terms: Dict[Monomial, CycScalar]):
        self.field = field
        self.names = tuple(names)
        self.terms = {m: c for m, c in terms.items() if not c.is_zero()}

    @property
    def nvars(self) -> int:
        return len(self.names)

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, field: CyclotomicField, names: Sequence[str]) -> "CPoly":
        return cls(field, names, {})

    @classmethod
    def constant(cls, field: CyclotomicField, names: Sequence[str], c) -> "CPoly":
        c = c if isinstance(c, CycScalar) else field.rational(c)
        return cls(field, names, {(0,) * len(names): c})

    @classmethod
    def variable(cls, field: CyclotomicField, names: Sequence[str], k: int) -> "CPoly":
        mono = tuple(1 if i == k else 0 for i in range(len(names)))
        return cls(field, names, {mono: field.one})

    def _like(self, terms: Dict[Monomial, CycScalar]) -> "CPoly":
        return CPoly(self.field, self.names, terms)

    def _coerce(self, other) -> "CPoly":
        if isinstance(other, CPoly):
            if other.names != self.names:
                raise InvalidParameterError(f"polynomials over {self.names} and {other.names} do not mix")
            return other
        return CPoly.constant(self.field, self.names, other)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other) -> "CPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return self._like(out)

    __radd__ = __add__

    def __neg__(self) -> "CPoly":
        return self._like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "CPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "CPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "CPoly":
        if isinstance(other, CPoly):
            other = self._coerce(other)
            out: Dict[Monomial, CycScalar] = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = tuple(a + b for a, b in zip(m1, m2))
                    c = c1 * c2
                    out[m] = out[m] + c if m in out else c
            return self._like(out)
        return self._like({m: c * other for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "CPoly":
        return self._like({m: c / scalar for m, c in self.terms.items()})

    def __pow__(self, k: int) -> "CPoly":
        if k < 0:
            raise InvalidParameterError("negative powers of polynomials are not supported")
        result = CPoly.constant(self.field, self.names, 1)
        for _ in range(k):
            result = result * self
        return result

    def mul_term(self, mono: Monomial, coef: CycScalar) -> "CPoly":
        return self._like({tuple(a + b for a, b in zip(m, mono)): c * coef for m, c in self.terms.items()})

    def shift(self, mono: Monomial) -> "CPoly":
        return self.mul_term(mono, self.field.one)

    def derivative(self, k: int) -> "CPoly":
        out = {}
        for m, c in self.terms.items():
            if m[k]:
                dm = tuple(v - 1 if i == k else v for i, v in enumerate(m))
                out[dm] = c * m[k]
        return self._like(out)

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def is_polynomial(self) -> bool:
        return all(v >= 0 for m in self.terms for v in m)

    def min_exponents(self) -> Monomial:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(m[i] for m in self.terms) for i in range(self.nvars))

    def __eq__(self, other) -> bool:
        if isinstance(other, CPoly):
            return self.names == other.names and self.terms == other.terms
        if isinstance(other, (int, CycScalar)):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.names, frozenset(self.terms.items())))

    # -- ordering ---------------------------------------------------------
    def leading(self, order: str = "degrevlex") -> Tuple[Monomial, CycScalar]:
        if not self.terms:
            raise InvalidParameterError("the zero polynomial has no leading term")
        key = order_key(order)
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def monic(self, order: str = "degrevlex") -> "CPoly":
        if not self.terms:
            return self
        _, lc = self.leading(order)
        return self / lc if lc != 1 else self

    def exact_div(self, divisor: "CPoly", order: str = "degrevlex") -> "CPoly":
        """Quotient of an exact division by a polynomial; raises NotDivisibleError otherwise."""
        if divisor.is_zero():
            raise InvalidParameterError("division by the zero polynomial")
        lm_d, lc_d = divisor.leading(order)
        rest = self
        quotient = CPoly.zero(self.field, self.names)
        key = order_key(order)
        while rest:
            lm, lc = rest.leading(order)
            q_mono = tuple(a - b for a, b in zip(lm, lm_d))
            if any(v < 0 for v in q_mono) and self.is_polynomial() and divisor.is_polynomial():
                raise NotDivisibleError(f"{divisor} does not divide {self}")
            q = lc / lc_d
            quotient = quotient + CPoly(self.field, self.names, {q_mono: q})
            rest = rest - divisor.mul_term(q_mono, q)
            if rest and key(rest.leading(order)[0]) >= key(lm):
                raise NotDivisibleError(f"{divisor} does not divide {self}")
        return quotient

    # -- rendering --------------------------------------------------------
    def format(self, order: str = "degrevlex") -> str:
        key = order_key(order)
        parts = []
        for m in sorted(self.terms, key=key, reverse=True):
            c = self.terms[m]
            mono = " ".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(self.names, m) if e
            )
            text_c = str(c)
            atomic = c.is_atomic()
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

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"CPoly({self})"


def parse_poly(text: str, names: Sequence[str], ell: int) -> CPoly:
    """Parses `c * u1^a1 ... um^am` sums; `e` denotes the root of unity."""
    field = cyclotomic_field(ell)
    names = tuple(names)

    def symbol(name: str, exp: int) -> CPoly:
        if name == "e":
            return CPoly.constant(field, names, field.eps_pow(exp))
        if name not in names:
            raise ParseError(f"unknown variable {name!r}; expected one of {list(names)}")
        k = names.index(name)
        mono = tuple(exp if i == k else 0 for i in range(len(names)))
        return CPoly(field, names, {mono: field.one})

    adapter = Adapter(
        number=lambda c: CPoly.constant(field, names, c),
        symbol=symbol,
        add=lambda x, y: x + y,
        mul=lambda x, y: x * y,
        neg=lambda x: -x,
        power=lambda x, k: x ** k,
    )
    return parse_expression(text, adapter)


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def reduce(f: CPoly, basis: Sequence[CPoly], order: str = "degrevlex") -> CPoly:
    """Remainder of multivariate division; no remainder term is divisible by a basis leading term."""
    if not basis:
        raise InvalidParameterError("reduce needs a nonempty basis")
    leads = [(g, *g.leading(order)) for g in basis if g]
    rest = f
    remainder = CPoly.zero(f.field, f.names)
    while rest:
        lm, lc = rest.leading(order)
        for g, glm, glc in leads:
            if _divides(glm, lm):
                shift = tuple(a - b for a, b in zip(lm, glm))
                rest = rest - g.mul_term(shift, lc / glc)
                break
        else:
            remainder = remainder + CPoly(f.field, f.names, {lm: lc})
            rest = rest - CPoly(f.field, f.names, {lm: lc})
    return remainder


def s_polynomial(f: CPoly, g: CPoly, order: str = "degrevlex") -> CPoly:
    fm, fc = f.leading(order)
    gm, gc = g.leading(order)
    lcm = tuple(max(a, b) for a, b in zip(fm, gm))
    return (f.mul_term(tuple(a - b for a, b in zip(lcm, fm)), fc.inverse())
            - g.mul_term(tuple(a - b for a, b in zip(lcm, gm)), gc.inverse()))


def _interreduce(basis: List[CPoly], order: str) -> List[CPoly]:
    key = order_key(order)
    minimal: List[CPoly] = []
    for g in sorted(basis, key=lambda p: key(p.leading(order)[0])):
        glm = g.leading(order)[0]
        if not any(_divides(h.leading(order)[0], glm) for h in minimal):
            minimal.append(g)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        lm, lc = g.leading(order)
        tail = g - CPoly(g.field, g.names, {lm: lc})
        if others and tail:
            tail = reduce(tail, others, order)
        reduced.append((tail + CPoly(g.field, g.names, {lm: lc})).monic(order))
    return sorted(reduced, key=lambda p: key(p.leading(order)[0]), reverse=True)


def buchberger(gens: Sequence[CPoly], order: str = "degrevlex",
               config: EngineConfig = DEFAULT_CONFIG) -> List[CPoly]:
    """
    Reduced Groebner basis of the ideal generated by ``gens``. Pairs are
    processed by the normal selection strategy (smallest lcm first) and
    pairs with coprime leading monomials are skipped.
    """
    if not gens:
        raise InvalidParameterError("buchberger needs at least one generator")
    key = order_key(order)
    basis = [g.monic(order) for g in gens if g]
    if not basis:
        return []
    if any(g.is_constant() for g in basis):
        g0 = basis[0]
        return [CPoly.constant(g0.field, g0.names, 1)]

    def lcm_key(pair):
        i, j = pair
        lm_i = basis[i].leading(order)[0]
        lm_j = basis[j].leading(order)[0]
        return key(tuple(max(a, b) for a, b in zip(lm_i, lm_j))), pair

    pairs = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    steps = 0
    while pairs:
        steps += 1
        if steps > config.max_gb_steps:
            raise ResourceLimitError("max_gb_steps", steps, config.max_gb_steps)
        pairs.sort(key=lcm_key)
        i, j = pairs.pop(0)
        lm_i = basis[i].leading(order)[0]
        lm_j = basis[j].leading(order)[0]
        if all(a == 0 or b == 0 for a, b in zip(lm_i, lm_j)):
            continue
        h = reduce(s_polynomial(basis[i], basis[j], order), basis, order)
        if h:
            h = h.monic(order)
            if h.is_constant():
                return [CPoly.constant(h.field, h.names, 1)]
            basis.append(h)
            pairs.extend((k, len(basis) - 1) for k in range(len(basis) - 1))
    logger.debug(f"buchberger: {steps} pairs, {len(basis)} polynomials before interreduction")
    return _interreduce(basis, order)


class PolyIdeal:
    """
    An ideal of the polynomial (or Laurent) ring over the named central
    lattice generators. Variables marked inverted are Laurent variables:
    their inverses are adjoined as extra variables `<name>_inv` with the
    relation name * name_inv - 1 before any Groebner computation.
    """

    def __init__(
        self,
        variables: Sequence[str],
        generators: Sequence[CPoly],
        inverted: Optional[Sequence[bool]] = None,
        order: str = "degrevlex",
        config: EngineConfig = DEFAULT_CONFIG,
    ):
        order_key(order)
        self.variables = tuple(variables)
        self.inverted = tuple(inverted) if inverted is not None else (False,) * len(self.variables)
        self.order = order
        self.config = config
        self.generators = [_unit_normalize(g, self.inverted, order) for g in generators if g]
        if not self.generators and not generators:
            raise InvalidParameterError("an ideal needs at least one generator")
        self._inv_index = [k for k, flag in enumerate(self.inverted) if flag]
        self.ring_names = self.variables + tuple(f"{self.variables[k]}_inv" for k in self._inv_index)

    @property
    def field(self) -> CyclotomicField:
        return self.generators[0].field if self.generators else None

    def embed(self, f: CPoly) -> CPoly:
        """Maps f into the polynomial ring with inverse variables; negative exponents of inverted variables become powers of `<name>_inv`."""
        if f.names != self.variables:
            raise InvalidParameterError(f"polynomial variables {f.names} differ from the ideal's {self.variables}")
        out = {}
        extra = len(self._inv_index)
        for m, c in f.terms.items():
            mono = list(m) + [0] * extra
            for slot, k in enumerate(self._inv_index):
                if m[k] < 0:
                    mono[len(m) + slot] = -m[k]
                    mono[k] = 0
            if any(v < 0 for v in mono):
                raise NormalizationError(
                    f"negative exponent at a non-inverted variable in {f}"
                )
            key = tuple(mono)
            out[key] = out[key] + c if key in out else c
        return CPoly(f.field, self.ring_names, out)

    def _relations(self) -> List[CPoly]:
        rels = []
        field = self.generators[0].field
        n = len(self.ring_names)
        for slot, k in enumerate(self._inv_index):
            mono = tuple(1 if i in (k, len(self.variables) + slot) else 0 for i in range(n))
            rels.append(CPoly(field, self.ring_names, {mono: field.one, (0,) * n: -field.one}))
        return rels

    @cached_property
    def gb(self) -> List[CPoly]:
        if not self.generators:
            return []
        embedded = [self.embed(g) for g in self.generators] + self._relations()
        basis = buchberger(embedded, self.order, self.config)
        logger.info(f"Groebner basis of {len(self.generators)} generators has {len(basis)} elements")
        return basis

    def remainder(self, f: CPoly) -> CPoly:
        g = self.embed(f)
        if not self.gb:
            return g
        return reduce(g, self.gb, self.order)

    def contains(self, f: CPoly) -> bool:
        return member(f, self)

    def is_unit_ideal(self) -> bool:
        return len(self.gb) == 1 and self.gb[0].is_constant()

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "inverted": list(self.inverted),
            "order": self.order,
            "generators": [g.format(self.order) for g in self.generators],
            "groebner": [g.format(self.order) for g in self.gb],
        }


def _unit_normalize(g: CPoly, inverted: Sequence[bool], order: str) -> CPoly:
    """Clears negative exponents of inverted variables by a monomial unit and makes g monic."""
    if not g:
        return g
    low = g.min_exponents()
    shift = tuple(-v if (v < 0 and inverted[k]) else 0 for k, v in enumerate(low))
    if any(shift):
        g = g.shift(shift)
    return g.monic(order)


def member(f: CPoly, ideal: PolyIdeal) -> bool:
    """True iff f reduces to zero modulo the Groebner basis."""
    if f.is_zero():
        return True
    if not ideal.gb:
        return False
    return ideal.remainder(f).is_zero()
