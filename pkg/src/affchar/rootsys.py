"""Untwisted affine root systems over exact rational arithmetic.

An affine system is built from a finite simple Cartan matrix by adjoining
the lowest root ``alpha_0 = delta - theta``.  Roots are integer vectors in
the basis of simple roots ``alpha_0..alpha_n``; the minimal imaginary root
``delta`` has the marks vector as coordinates.  Positive roots come in
closed-form families ``k*delta + beta`` with ``beta`` a finite root, so
enumeration by height is direct rather than by reflection closure.

Everything here is immutable after construction and all arithmetic is
exact: integrality tests on coroot pairings are meaningless in floating
point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import Scalar

Coords = tuple[int, ...]

#: Finite Cartan matrices, a[i][j] = <alpha_i^vee, alpha_j>.  Rank checks
#: live in :func:`_finite_cartan`; the affine extension is derived, and
#: build-time kernel/symmetrizability assertions catch transcription bugs.
_SUPPORTED = ("A", "B", "C", "D", "E", "F", "G")


def _chain(rank: int) -> list[list[int]]:
    a = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for i in range(rank - 1):
        a[i][i + 1] = -1
        a[i + 1][i] = -1
    return a


def _finite_cartan(family: str, rank: int) -> list[list[int]]:
    if family == "A" and rank >= 1:
        return _chain(rank)
    if family == "B" and rank >= 2:
        a = _chain(rank)
        a[rank - 1][rank - 2] = -2  # alpha_{rank} short
        return a
    if family == "C" and rank >= 2:
        a = _chain(rank)
        a[rank - 2][rank - 1] = -2  # alpha_{rank} long
        return a
    if family == "D" and rank >= 3:
        a = _chain(rank)
        a[rank - 1][rank - 2] = a[rank - 2][rank - 1] = 0
        a[rank - 1][rank - 3] = a[rank - 3][rank - 1] = -1
        return a
    if family == "E" and rank in (6, 7, 8):
        # Nodes 1..rank-1 form a chain; the last node hangs off the third.
        a = _chain(rank - 1)
        for row in a:
            row.append(0)
        a.append([0] * rank)
        a[rank - 1][rank - 1] = 2
        a[rank - 1][2] = a[2][rank - 1] = -1
        return a
    if family == "F" and rank == 4:
        a = _chain(4)
        a[2][1] = -2  # alpha_3, alpha_4 short
        return a
    if family == "G" and rank == 2:
        return [[2, -3], [-1, 2]]  # alpha_1 short, alpha_2 long
    raise ValueError(f"unsupported finite type {family}_{rank}")


def _finite_positive_roots(cartan: list[list[int]]) -> list[Coords]:
    """All positive roots of a finite Cartan matrix, by root strings."""
    rank = len(cartan)
    simples = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
    known: set[Coords] = set(simples)
    by_height: list[list[Coords]] = [list(simples)]
    while by_height[-1]:
        fresh: list[Coords] = []
        for beta in by_height[-1]:
            for i in range(rank):
                pairing = sum(cartan[i][j] * beta[j] for j in range(rank))
                down = 0
                lower = list(beta)
                while True:
                    lower[i] -= 1
                    if lower[i] < 0 or tuple(lower) not in known:
                        break
                    down += 1
                if down - pairing > 0:
                    up = list(beta)
                    up[i] += 1
                    cand = tuple(up)
                    if cand not in known:
                        known.add(cand)
                        fresh.append(cand)
        by_height.append(sorted(set(fresh)))
    return sorted(known, key=lambda r: (sum(r), r))


def _symmetrizer(cartan: list[list[int]]) -> list[Fraction]:
    """Positive rationals eps with eps_i a_ij = eps_j a_ji, eps_0 = 1."""
    size = len(cartan)
    eps: list[Fraction | None] = [None] * size
    eps[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(size):
            if i != j and cartan[i][j] != 0 and eps[j] is None:
                eps[j] = eps[i] * Fraction(cartan[i][j], cartan[j][i])
                stack.append(j)
    if any(e is None for e in eps):
        raise ValueError("Cartan matrix is not connected")
    return [Fraction(e) for e in eps]


@dataclass(frozen=True)
class Root:
    """A root given by integer coordinates over ``alpha_0..alpha_n``."""

    coords: Coords
    is_real: bool = True
    mult: int = 1

    @property
    def height(self) -> int:
        return sum(self.coords)

    @property
    def delta_degree(self) -> int:
        # a_0 = 1 for untwisted types, so the delta coefficient is coords[0].
        return self.coords[0]

    def __repr__(self):
        kind = "re" if self.is_real else f"im*{self.mult}"
        return f"Root({self.coords}, {kind})"


@dataclass(frozen=True)
class AffineRootSystem:
    """The untwisted affine extension of a finite simple Cartan matrix."""

    finite_type: str
    n: int
    cartan: tuple[tuple[int, ...], ...]
    symmetrizer: tuple[Fraction, ...]
    marks: tuple[int, ...]
    rho_labels: tuple[int, ...]
    width_bound: int
    imaginary_mult: int
    finite_positive: tuple[Coords, ...]  # affine coords, zeroth entry 0

    @property
    def size(self) -> int:
        return self.n + 1

    @property
    def delta_height(self) -> int:
        return sum(self.marks)

    @property
    def classical_count(self) -> int:
        return 2 * len(self.finite_positive)

    def simple_root(self, i: int) -> Coords:
        return tuple(1 if j == i else 0 for j in range(self.size))

    def simple_roots(self) -> list[Coords]:
        return [self.simple_root(i) for i in range(self.size)]

    def gram(self, i: int, j: int) -> Fraction:
        return self.symmetrizer[i] * self.cartan[i][j]

    def label(self) -> str:
        return f"{self.finite_type}{self.n}^(1)"

    def to_json_dict(self) -> dict:
        return {
            "type": self.finite_type,
            "rank": self.n,
            "cartan": [list(row) for row in self.cartan],
            "marks": list(self.marks),
            "symmetrizer": [str(e) for e in self.symmetrizer],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def build_affine(family: str, rank: int) -> AffineRootSystem:
    """Construct the untwisted affine system of type ``family_rank^(1)``."""
    family = family.upper()
    if family not in _SUPPORTED:
        raise ValueError(f"unknown type label {family!r}")
    fin = _finite_cartan(family, rank)
    fin_pos = _finite_positive_roots(fin)
    heights = [sum(r) for r in fin_pos]
    top = max(heights)
    if heights.count(top) != 1:
        raise AssertionError("highest root is not unique")
    theta = fin_pos[-1]

    size = rank + 1
    cartan = [[0] * size for _ in range(size)]
    for i in range(rank):
        for j in range(rank):
            cartan[i + 1][j + 1] = fin[i][j]
    cartan[0][0] = 2
    fin_eps = _symmetrizer(fin)
    top_norm = max(fin_eps)
    fin_eps = [e / top_norm for e in fin_eps]  # long finite roots get norm 2
    for j in range(rank):
        # alpha_0 = delta - theta and delta is orthogonal to everything.
        cartan[0][j + 1] = -sum(
            theta[k] * fin_eps[k] * fin[k][j] for k in range(rank)
        )
        cartan[j + 1][0] = -sum(theta[k] * fin[j][k] for k in range(rank))
        if cartan[0][j + 1] != int(cartan[0][j + 1]):
            raise AssertionError("non-integral extended Cartan entry")
        cartan[0][j + 1] = int(cartan[0][j + 1])

    eps = [Fraction(1)] + fin_eps
    marks = (1,) + theta
    for i in range(size):
        for j in range(size):
            if eps[i] * cartan[i][j] != eps[j] * cartan[j][i]:
                raise AssertionError("extended matrix is not symmetrizable")
        if sum(cartan[i][j] * marks[j] for j in range(size)) != 0:
            raise AssertionError("marks vector must span the kernel")

    embedded = tuple((0,) + r for r in fin_pos)
    width = 2 * len(fin_pos) + rank
    return AffineRootSystem(
        finite_type=family,
        n=rank,
        cartan=tuple(tuple(row) for row in cartan),
        symmetrizer=tuple(eps),
        marks=marks,
        rho_labels=tuple(1 for _ in range(size)),
        width_bound=width,
        imaginary_mult=rank,
        finite_positive=embedded,
    )


def _add(u: Coords, v: Coords, scale: int = 1) -> Coords:
    return tuple(a + scale * b for a, b in zip(u, v))


def positive_roots_up_to(sys: AffineRootSystem, height: int) -> list[Root]:
    """Positive roots of height at most ``height``, deterministically ordered.

    Real roots appear once; ``k*delta`` appears once with its multiplicity
    recorded.  Order is by height then lexicographic coordinates.
    """
    if height < 1:
        raise ValueError("height cutoff must be at least 1")
    delta = tuple(sys.marks)
    ht_delta = sys.delta_height
    out: list[Root] = []
    zero = tuple(0 for _ in range(sys.size))
    max_k = (height + max(sum(b) for b in sys.finite_positive)) // ht_delta
    for k in range(0, max_k + 1):
        shift = tuple(k * m for m in delta)
        if k >= 1 and k * ht_delta <= height:
            out.append(Root(shift, is_real=False, mult=sys.imaginary_mult))
        for beta in sys.finite_positive:
            plus = _add(shift, beta)
            if sum(plus) <= height:
                out.append(Root(plus))
            if k >= 1:
                minus = _add(shift, beta, -1)
                if sum(minus) <= height and minus != zero:
                    out.append(Root(minus))
    out.sort(key=lambda r: (r.height, r.coords))
    return out


def _coords_of(value) -> Coords | None:
    if isinstance(value, Root):
        return value.coords
    if isinstance(value, tuple):
        return value
    return None


def bilinear(sys: AffineRootSystem, x, y) -> Scalar:
    """Invariant symmetric form; (alpha_i, alpha_j) = eps_i a_ij.

    Either argument may be a :class:`Root`, a raw coordinate tuple, or a
    weight exposing ``labels``; a weight pairs with a root-lattice vector
    through (lam, alpha_i) = eps_i <alpha_i^vee, lam>.
    """
    cx, cy = _coords_of(x), _coords_of(y)
    if cx is not None and cy is not None:
        total = Fraction(0)
        for i, a in enumerate(cx):
            if a == 0:
                continue
            row = sys.cartan[i]
            eps = sys.symmetrizer[i]
            total += sum((a * b) * (eps * row[j]) for j, b in enumerate(cy) if b)
        return total
    if cx is None and cy is not None:
        return bilinear(sys, y, x)
    if cx is not None:
        labels = y.labels
        total = 0
        for i, a in enumerate(cx):
            if a:
                total = total + (a * sys.symmetrizer[i]) * labels[i]
        return total
    raise ValueError("the bilinear form needs at least one root-lattice argument")


def coroot_pairing(sys: AffineRootSystem, alpha, mu) -> Scalar:
    """<alpha^vee, mu> = 2 (alpha, mu) / (alpha, alpha) for real alpha."""
    coords = _coords_of(alpha)
    if coords is None:
        raise ValueError("coroot_pairing expects a root-lattice alpha")
    norm = bilinear(sys, coords, coords)
    if norm == 0:
        raise ValueError("imaginary roots have no coroot (zero norm)")
    return 2 * bilinear(sys, coords, mu) / norm


def classical_projection(sys: AffineRootSystem, alpha) -> Coords:
    """Coordinates of ``alpha`` modulo R*delta over the finite simple roots.

    The section sends alpha_0 to -theta, so cl(delta) = 0.
    """
    coords = _coords_of(alpha)
    if coords is None:
        raise ValueError("classical_projection expects a root-lattice vector")
    theta = sys.marks[1:]
    return tuple(coords[j + 1] - coords[0] * theta[j] for j in range(sys.n))


def delta_degree(sys: AffineRootSystem, vector) -> int:
    """<D, .> grading: the delta coefficient of a root-lattice vector."""
    coords = _coords_of(vector)
    if coords is None:
        raise ValueError("delta_degree expects a root-lattice vector")
    return coords[0]


def classical_images(sys: AffineRootSystem, height: int) -> set[Coords]:
    """Deduplicated cl images of the real positive roots up to ``height``."""
    images = set()
    for root in positive_roots_up_to(sys, height):
        if root.is_real:
            img = classical_projection(sys, root)
            images.add(img)
            images.add(tuple(-c for c in img))
    return images
