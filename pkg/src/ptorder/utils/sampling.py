"""Seeded random elements, central monomials and derivations for the verification suites."""

import random
from typing import Callable, List, Optional, Sequence, Tuple

from ptorder.cyclotomic import CycScalar, CyclotomicField
from ptorder.qtorus import Derivation, Exponent, QuantumTorus, TorusElement
from ptorder.trace import CentralSubalgebra


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)


def random_scalar(rng: random.Random, field: CyclotomicField, bound: int = 3) -> CycScalar:
    """A nonzero scalar; every third draw also carries an eps term."""
    value = field.rational(rng.choice([v for v in range(-bound, bound + 1) if v]))
    if rng.random() < 1 / 3 and field.degree > 1:
        value = value + field.eps * rng.randint(-bound, bound)
    return value if value else field.one


def random_exponent(rng: random.Random, ring: QuantumTorus, max_degree: int) -> Exponent:
    """Entries in [-m, m] at invertible indices and [0, m] elsewhere, total |degree| <= max_degree."""
    budget = max_degree
    order = list(range(ring.n))
    rng.shuffle(order)
    values = [0] * ring.n
    for i in order:
        low = -budget if ring.spec.invertible[i] else 0
        values[i] = rng.randint(low, budget) if budget else 0
        budget -= abs(values[i])
    return tuple(values)


def random_element(rng: random.Random, ring: QuantumTorus, max_degree: int, max_terms: int = 3) -> TorusElement:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        terms[random_exponent(rng, ring, max_degree)] = random_scalar(rng, ring.field)
    return ring.element(terms)


def random_pairs(rng: random.Random, ring: QuantumTorus, count: int, max_degree: int) -> List[Tuple[TorusElement, TorusElement]]:
    return [(random_element(rng, ring, max_degree), random_element(rng, ring, max_degree)) for _ in range(count)]


def random_central_monomial(rng: random.Random, C: CentralSubalgebra, max_coord: int = 2) -> TorusElement:
    """x^a for a random lattice point a with generator coordinates bounded by max_coord."""
    inverted = C.inverted()
    coords = [rng.randint(-max_coord if inv else 0, max_coord) for inv in inverted]
    return C.ring.monomial(C.lattice.combine(coords))


def random_central_element(rng: random.Random, C: CentralSubalgebra, max_coord: int = 2,
                           max_terms: int = 2) -> TorusElement:
    ring = C.ring
    total = ring.zero()
    for _ in range(rng.randint(1, max_terms)):
        total = total + random_central_monomial(rng, C, max_coord) * random_scalar(rng, ring.field)
    return total if total else ring.one()


def random_preserving_derivation(rng: random.Random, C0: CentralSubalgebra, max_degree: int,
                                 family: Optional[Callable[[TorusElement], Derivation]] = None) -> Derivation:
    """
    A derivation mapping C0 into itself: a diagonal derivation plus an inner
    derivation ad(y), plus d_c for a C0 monomial c when ``family`` is given.
    """
    ring = C0.ring
    delta = Derivation.diagonal(ring, [rng.randint(-3, 3) for _ in range(ring.n)])
    delta = delta + Derivation.inner(random_element(rng, ring, max_degree, max_terms=2))
    if family is not None:
        c = random_central_monomial(rng, C0, max_coord=1)
        delta = delta + family(c) * random_scalar(rng, ring.field)
    return delta


def central_triples(rng: random.Random, C: CentralSubalgebra, count: int,
                    max_coord: int = 2) -> List[Tuple[TorusElement, TorusElement, TorusElement]]:
    return [tuple(random_central_element(rng, C, max_coord) for _ in range(3)) for _ in range(count)]


def residue_basis(C: CentralSubalgebra) -> List[TorusElement]:
    return [C.ring.monomial(r) for r in C.transversal()]


def random_tuples(rng: random.Random, pool: Sequence[TorusElement], k: int) -> List[TorusElement]:
    """k elements drawn from the pool, each scaled by a random scalar."""
    field = pool[0].ring.field
    return [rng.choice(pool) * random_scalar(rng, field) for _ in range(k)]
