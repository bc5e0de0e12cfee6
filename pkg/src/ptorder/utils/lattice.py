"""Full-rank sublattices of Z^N in Hermite normal form."""

from itertools import product
from typing import Iterable, List, Sequence, Tuple

from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form

from ptorder.errors import InvalidExtensionError

Vector = Tuple[int, ...]


def _pivot_order(columns: List[Vector]):
    """
    Returns (ordered columns, pivot indices) for a triangular basis, trying
    last-nonzero pivots (upper triangular) and then first-nonzero pivots.
    """
    n = len(columns[0])
    for pick, descending in ((lambda c: max(i for i, v in enumerate(c) if v), True),
                             (lambda c: min(i for i, v in enumerate(c) if v), False)):
        pivots = [pick(c) for c in columns]
        if sorted(pivots) == list(range(n)):
            order = sorted(range(len(columns)), key=lambda k: pivots[k], reverse=descending)
            return [columns[k] for k in order], [pivots[k] for k in order]
    raise InvalidExtensionError("Hermite normal form is not triangular")


class Sublattice:
    """
    A full-rank sublattice L of Z^N. Vectors reduce to canonical residues in
    the box prod_p [0, h_p), h_p the Hermite pivots; the box is a transversal
    of Z^N / L.
    """

    def __init__(self, basis: Sequence[Sequence[int]], dim: int):
        rows = [tuple(int(v) for v in row) for row in basis]
        if any(len(r) != dim for r in rows):
            raise InvalidExtensionError(f"lattice basis vectors must have length {dim}")
        self.dim = dim
        self.basis = tuple(rows)
        mat = Matrix(rows).T if rows else Matrix.zeros(dim, 0)
        if mat.rank() < dim:
            raise InvalidExtensionError("sublattice does not have full rank (infinite index)")
        hnf = hermite_normal_form(mat)
        columns = [tuple(int(hnf[i, j]) for i in range(dim)) for j in range(hnf.cols)]
        columns = [c for c in columns if any(c)]
        ordered, pivots = _pivot_order(columns)
        fixed = []
        for col, p in zip(ordered, pivots):
            fixed.append(col if col[p] > 0 else tuple(-v for v in col))
        self._columns = fixed
        self._pivots = pivots
        self.periods = tuple(
            next(col[p] for col, p in zip(fixed, pivots) if p == i) for i in range(dim)
        )

    @classmethod
    def scaled(cls, ell: int, dim: int) -> "Sublattice":
        """l * Z^N."""
        return cls([tuple(ell if i == j else 0 for j in range(dim)) for i in range(dim)], dim)

    def __eq__(self, other) -> bool:
        return isinstance(other, Sublattice) and sorted(self._columns) == sorted(other._columns)

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._columns)))

    def __repr__(self) -> str:
        return f"Sublattice({list(self.generators())})"

    @property
    def index(self) -> int:
        out = 1
        for h in self.periods:
            out *= h
        return out

    def generators(self) -> List[Vector]:
        """Triangular basis ordered by pivot position."""
        return [c for c, _ in sorted(zip(self._columns, self._pivots), key=lambda t: t[1])]

    def decompose(self, v: Sequence[int]) -> Tuple[Vector, Vector, Tuple[int, ...]]:
        """
        Returns (residue, lattice part, coordinates) with v = residue + lattice
        part and lattice part = sum coordinates_k * generators()[k].
        """
        work = list(v)
        coords = {}
        for col, p in zip(self._columns, self._pivots):
            t = work[p] // col[p]
            coords[p] = t
            if t:
                for i, c in enumerate(col):
                    work[i] -= t * c
        residue = tuple(work)
        part = tuple(a - b for a, b in zip(v, residue))
        return residue, part, tuple(coords[p] for p in range(self.dim))

    def residue(self, v: Sequence[int]) -> Vector:
        return self.decompose(v)[0]

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.residue(v))

    def coordinates(self, v: Sequence[int]) -> Tuple[int, ...]:
        residue, _, coords = self.decompose(v)
        if any(residue):
            raise InvalidExtensionError(f"{tuple(v)} is not in the lattice")
        return coords

    def combine(self, coords: Sequence[int]) -> Vector:
        gens = self.generators()
        return tuple(sum(m * g[i] for m, g in zip(coords, gens)) for i in range(self.dim))

    def transversal(self) -> List[Vector]:
        """Canonical residues in lexicographic order."""
        return [tuple(r) for r in product(*(range(h) for h in self.periods))]

    def is_sublattice_of(self, other: "Sublattice") -> bool:
        return all(other.contains(c) for c in self._columns)

    def vectors_in(self, box: Iterable[Vector]) -> List[Vector]:
        return [v for v in box if self.contains(v)]
