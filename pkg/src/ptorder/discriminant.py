"""
Trace pairing determinants, (modified) discriminant ideals and the checks
built on them: the derivation identity for determinants and the
Poisson-ideal property of an ideal of the center.
"""

import logging
from itertools import combinations, combinations_with_replacement
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

from ptorder.config import DEFAULT_CONFIG, EngineConfig
from ptorder.errors import InvalidParameterError, NotDivisibleError
from ptorder.groebner import CPoly, PolyIdeal, member
from ptorder.models import Report
from ptorder.qtorus import Derivation, TorusElement
from ptorder.trace import CentralSubalgebra

logger = logging.getLogger(__name__)

Trace = Callable[[TorusElement], TorusElement]

COFACTOR_LIMIT = 6


def central_to_poly(z: TorusElement, C: CentralSubalgebra) -> CPoly:
    return C.to_poly(z)


def poly_to_central(f: CPoly, C: CentralSubalgebra) -> TorusElement:
    return C.from_poly(f)


def _cofactor_det(m: List[List[CPoly]]) -> CPoly:
    k = len(m)
    if k == 1:
        return m[0][0]
    if k == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = m[0][0] - m[0][0]
    for j in range(k):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _bareiss_det(m: List[List[CPoly]]) -> CPoly:
    """Fraction-free elimination; every intermediate division is exact."""
    k = len(m)
    m = [list(row) for row in m]
    sign = 1
    prev: Optional[CPoly] = None
    for p in range(k - 1):
        if not m[p][p]:
            swap = next((r for r in range(p + 1, k) if m[r][p]), None)
            if swap is None:
                return m[0][0] - m[0][0]
            m[p], m[swap] = m[swap], m[p]
            sign = -sign
        for i in range(p + 1, k):
            for j in range(p + 1, k):
                value = m[i][j] * m[p][p] - m[i][p] * m[p][j]
                m[i][j] = value.exact_div(prev) if prev is not None else value
        prev = m[p][p]
    return m[k - 1][k - 1] if sign > 0 else -m[k - 1][k - 1]


def poly_det(m: List[List[CPoly]]) -> CPoly:
    """Determinant over polynomial entries; Laurent rows are shifted to polynomials first."""
    k = len(m)
    zero = m[0][0] - m[0][0]
    if any(not any(row) for row in m) or any(not any(m[i][j] for i in range(k)) for j in range(k)):
        return zero
    shifts = []
    rows = []
    for row in m:
        low = [min(v) for v in zip(*(f.min_exponents() for f in row if f))]
        shift = tuple(-v if v < 0 else 0 for v in low)
        shifts.append(shift)
        rows.append([f.shift(shift) if any(shift) else f for f in row])
    try:
        det = _bareiss_det(rows)
    except NotDivisibleError:
        if k > COFACTOR_LIMIT:
            raise
        logger.debug(f"Bareiss division failed on a {k}x{k} matrix, expanding cofactors")
        det = _cofactor_det(rows)
    total = tuple(sum(col) for col in zip(*shifts))
    if any(total):
        det = det.shift(tuple(-v for v in total))
    return det


def gram_matrix(rs: Sequence[TorusElement], ss: Sequence[TorusElement], tr: Trace) -> List[List[TorusElement]]:
    return [[tr(r * s) for s in ss] for r in rs]


def pairing_det(rs: Sequence[TorusElement], ss: Sequence[TorusElement], tr: Trace, C: CentralSubalgebra,
                config: EngineConfig = DEFAULT_CONFIG) -> TorusElement:
    """det(tr(r_i s_j)) as a central element."""
    k = len(rs)
    if k < 1 or len(ss) != k:
        raise InvalidParameterError(f"pairing needs two tuples of equal length >= 1, got {len(rs)} and {len(ss)}")
    config.check("max_det_size", k)
    gram = gram_matrix(rs, ss, tr)
    polys = [[central_to_poly(v, C) for v in row] for row in gram]
    return poly_to_central(poly_det(polys), C)


def ideal_generators(k: int, pool: Sequence[TorusElement], tr: Trace, C: CentralSubalgebra,
                     modified: bool = True, config: EngineConfig = DEFAULT_CONFIG) -> PolyIdeal:
    """
    MD_k (``modified``) from determinants over every pair of k-subsets of the
    pool, D_k from the same subset on both sides.
    """
    if not 1 <= k <= len(pool):
        raise InvalidParameterError(f"k must lie in [1, {len(pool)}], got {k}")
    config.check("max_det_size", k)
    subsets = list(combinations(range(len(pool)), k))
    pairs = list(combinations_with_replacement(subsets, 2)) if modified else [(s, s) for s in subsets]
    config.check("max_det", len(pairs))
    kind = "MD" if modified else "D"
    logger.info(f"{kind}_{k}: evaluating {len(pairs)} determinants over a pool of {len(pool)}")

    gram = [[central_to_poly(tr(a * b), C) for b in pool] for a in pool]
    generators: List[CPoly] = []
    seen = set()
    for left, right in tqdm(pairs, desc=f"{kind}_{k}", disable=not config.progress):
        det = poly_det([[gram[i][j] for j in right] for i in left])
        if det and det not in seen:
            seen.add(det)
            generators.append(det)
    zero = CPoly.zero(C.ring.field, C.variables)
    ideal = PolyIdeal(C.variables, generators or [zero], inverted=C.inverted(), config=config)
    logger.info(f"{kind}_{k}: {len(generators)} distinct nonzero determinants")
    return ideal


def discriminant_ideal(k: int, C: CentralSubalgebra, tr: Trace, modified: bool = True,
                       pool: Optional[Sequence[TorusElement]] = None,
                       config: EngineConfig = DEFAULT_CONFIG) -> PolyIdeal:
    """Discriminant ideal over the residue monomial basis of C unless a pool is given."""
    if pool is None:
        pool = [C.ring.monomial(r) for r in C.transversal()]
    return ideal_generators(k, pool, tr, C, modified, config)


def containment_report(inner: PolyIdeal, outer: PolyIdeal, check: str = "d-in-md") -> Report:
    """Groebner membership of every generator of ``inner`` in ``outer``."""
    witnesses = [{"generator": g.format(outer.order)} for g in inner.generators if not member(g, outer)]
    return Report(check=check, passed=not witnesses, witnesses=witnesses,
                  details={"generators": len(inner.generators)})


def verify_der_det(delta: Derivation, rs: Sequence[TorusElement], ss: Sequence[TorusElement],
                   tr: Trace, C: CentralSubalgebra, samples: Sequence[TorusElement] = (),
                   config: EngineConfig = DEFAULT_CONFIG) -> Report:
    """
    delta(d_k(r; s)) = sum_i d_k(.. delta r_i ..; s) + sum_i d_k(r; .. delta s_i ..),
    checked after confirming delta(C) in C and tr o delta = delta o tr on the samples.
    """
    ring = C.ring
    witnesses = []
    for g in C.generators():
        image = delta(ring.monomial(g))
        if not C.contains(image):
            witnesses.append({"kind": "preserves-subalgebra", "generator": str(ring.monomial(g)), "image": str(image)})
    inputs = list(samples) + [r * s for r in rs for s in ss]
    for r in inputs:
        lhs, rhs = tr(delta(r)), delta(tr(r))
        if lhs != rhs:
            witnesses.append({"kind": "commutes-with-trace", "r": str(r), "lhs": str(lhs), "rhs": str(rhs)})
    if witnesses:
        return Report(check="der-det", passed=False, witnesses=witnesses, details={"precondition": False})

    k = len(rs)
    lhs = delta(pairing_det(rs, ss, tr, C, config))
    rhs = ring.zero()
    for i in range(k):
        rs_i = list(rs)
        rs_i[i] = delta(rs[i])
        rhs = rhs + pairing_det(rs_i, ss, tr, C, config)
        ss_i = list(ss)
        ss_i[i] = delta(ss[i])
        rhs = rhs + pairing_det(rs, ss_i, tr, C, config)
    if lhs != rhs:
        witnesses.append({"kind": "identity", "lhs": str(lhs), "rhs": str(rhs)})
    return Report(check="der-det", passed=not witnesses, witnesses=witnesses,
                  details={"precondition": True, "k": k})


def _bracket_with_variable(k: int, g: CPoly, brackets: Dict[Tuple[str, str], CPoly]) -> CPoly:
    """{u_k, g} = sum_j dg/du_j {u_k, u_j}."""
    names = g.names
    total = CPoly.zero(g.field, names)
    for j in range(len(names)):
        if j == k:
            continue
        pair = (names[k], names[j]) if k < j else (names[j], names[k])
        value = brackets.get(pair)
        if value is None or not value:
            continue
        if k > j:
            value = -value
        dg = g.derivative(j)
        if dg:
            total = total + dg * value
    return total


def is_poisson_ideal(ideal: PolyIdeal, brackets: Dict[Tuple[str, str], CPoly]) -> Report:
    """{z, g} reduces to zero modulo the ideal for every generator g and variable z."""
    witnesses = []
    for g in ideal.generators:
        for k, name in enumerate(ideal.variables):
            value = _bracket_with_variable(k, g, brackets)
            if value and not member(value, ideal):
                witnesses.append({
                    "variable": name,
                    "generator": g.format(ideal.order),
                    "bracket": value.format(ideal.order),
                    "remainder": ideal.remainder(value).format(ideal.order),
                })
    return Report(check="poisson-ideal", passed=not witnesses, witnesses=witnesses,
                  details={"ideal": ideal.to_dict()})
