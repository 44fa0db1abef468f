"""Coxeter machinery for the affine Weyl group and its reflection subgroups.

A :class:`CoxeterSystem` is a set of generating reflections, each attached
to a real root of the ambient affine system; the ambient Weyl group uses
the simple roots, an integral subsystem uses its own simple system.  The
faithful datum of an element is the tuple of images of the generating
roots under the element, which doubles as its canonical form.  Reduced
words are recovered by peeling left descents with the lowest-index
tie-break, so words, enumeration orders, and caches are deterministic.

Bruhat order uses the descent recursion equivalent to the subword
criterion; lower sets satisfy L(y) = L(sy) union s*L(sy) for any left
descent s, which keeps interval enumeration cheap at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import AffcharError
from .exactnum import Scalar, is_integer, simplify
from .rootsys import AffineRootSystem, Root, bilinear

Coords = tuple[int, ...]
Matrix = tuple[Coords, ...]


@dataclass(frozen=True)
class Weight:
    """A point of the weight space, tracked relative to a fixed base.

    ``base_labels`` are the coroot labels ``<alpha_i^vee, base>`` of the
    base weight; the weight represented is ``base - offset`` with
    ``offset`` in the rational span of the simple roots.  Labels alone
    lose the delta direction, so the offset is part of the datum.
    """

    sys: AffineRootSystem
    base_labels: tuple[Scalar, ...]
    offset: tuple[Scalar, ...]

    @property
    def labels(self) -> tuple[Scalar, ...]:
        """Coroot labels of the represented weight: base minus cartan*offset."""
        cartan = self.sys.cartan
        return tuple(
            simplify(
                self.base_labels[i]
                - sum(cartan[i][j] * self.offset[j] for j in range(self.sys.size))
            )
            for i in range(self.sys.size)
        )

    @property
    def shifted_labels(self) -> tuple[Scalar, ...]:
        """Labels of (weight + rho); rho has all labels 1."""
        return tuple(simplify(l + 1) for l in self.labels)

    def with_offset(self, offset) -> "Weight":
        return Weight(self.sys, self.base_labels, tuple(simplify(o) for o in offset))

    def level_shifted(self) -> Scalar:
        """(delta, weight + rho), the quantity whose vanishing is critical."""
        total = 0
        for i, labl in enumerate(self.shifted_labels):
            total = total + (self.sys.marks[i] * self.sys.symmetrizer[i]) * labl
        return simplify(total)

    def is_critical(self) -> bool:
        lvl = self.level_shifted()
        return lvl == 0 if not hasattr(lvl, "is_zero") else lvl.is_zero()


def weight_from_labels(sys: AffineRootSystem, labels) -> Weight:
    labels = tuple(simplify(l if isinstance(l, (int, Fraction)) or hasattr(l, "radical") else Fraction(l)) for l in labels)
    if len(labels) != sys.size:
        raise ValueError(f"expected {sys.size} labels")
    zero = tuple(Fraction(0) for _ in range(sys.size))
    return Weight(sys, labels, zero)


def zero_weight(sys: AffineRootSystem) -> Weight:
    return weight_from_labels(sys, [0] * sys.size)


class CoxeterSystem:
    """Reflections attached to a family of positive real roots.

    For the ambient Weyl group pass the simple roots; for an integral
    subsystem pass its simple system.  Elements are immutable values and
    the instance only grows memo tables, so sharing is safe.
    """

    def __init__(self, sys: AffineRootSystem, generator_roots=None):
        self.sys = sys
        if generator_roots is None:
            generator_roots = sys.simple_roots()
        roots = []
        for g in generator_roots:
            roots.append(g.coords if isinstance(g, Root) else tuple(g))
        self.generator_roots: tuple[Coords, ...] = tuple(roots)
        self.rank = len(roots)
        # <g_i^vee, alpha_j> over the ambient basis drives the reflections.
        rows = []
        for g in roots:
            norm = bilinear(sys, g, g)
            if norm == 0:
                raise ValueError("generators must be real roots")
            row = tuple(
                2 * bilinear(sys, g, sys.simple_root(j)) / norm
                for j in range(sys.size)
            )
            if any(x.denominator != 1 for x in row):
                raise AffcharError("non-integral coroot pairing among generators")
            rows.append(tuple(int(x) for x in row))
        self._pairing_rows: tuple[Coords, ...] = tuple(rows)
        self.cartan: Matrix = tuple(
            tuple(self.pair_index(i, g) for g in self.generator_roots)
            for i in range(self.rank)
        )
        self._identity: Matrix = tuple(self.generator_roots)
        self._bruhat_memo: dict[tuple[Matrix, Matrix], bool] = {}
        self._lower_memo: dict[Matrix, tuple["CoxeterElement", ...]] = {}
        self._element_memo: dict[Matrix, "CoxeterElement"] = {}

    # -- reflections on ambient root-lattice vectors ---------------------

    def pair_index(self, i: int, vec: Coords) -> int:
        row = self._pairing_rows[i]
        return sum(row[j] * vec[j] for j in range(self.sys.size) if vec[j])

    def reflect(self, i: int, vec: Coords) -> Coords:
        c = self.pair_index(i, vec)
        if c == 0:
            return vec
        g = self.generator_roots[i]
        return tuple(v - c * gv for v, gv in zip(vec, g))

    def apply_word(self, word, vec: Coords) -> Coords:
        for i in reversed(word):
            vec = self.reflect(i, vec)
        return vec

    @staticmethod
    def is_negative(vec: Coords) -> bool:
        return any(v for v in vec) and all(v <= 0 for v in vec)

    # -- elements ---------------------------------------------------------

    def element(self, word) -> "CoxeterElement":
        """Canonicalize an arbitrary word into a reduced element."""
        mat = list(self._identity)
        inv = list(self._identity)
        for i in word:
            if not 0 <= i < self.rank:
                raise ValueError(f"generator index {i} out of range")
            # w <- w s_i: columns combine; w^{-1} <- s_i w^{-1}: reflect columns.
            gi = mat[i]
            mat = [
                tuple(m - self.cartan[i][j] * g for m, g in zip(col, gi))
                for j, col in enumerate(mat)
            ]
            inv = [self.reflect(i, col) for col in inv]
        reduced: list[int] = []
        while True:
            for i in range(self.rank):
                if self.is_negative(inv[i]):
                    break
            else:
                break
            reduced.append(i)
            # w <- s_i w ; w^{-1} <- w^{-1} s_i.
            mat = [self.reflect(i, col) for col in mat]
            gi = inv[i]
            inv = [
                tuple(m - self.cartan[i][j] * g for m, g in zip(col, gi))
                for j, col in enumerate(inv)
            ]
        canonical = tuple(self.apply_word(reduced, g) for g in self.generator_roots)
        key = canonical
        cached = self._element_memo.get(key)
        if cached is not None:
            return cached
        elem = CoxeterElement(self, tuple(reduced), canonical)
        self._element_memo[key] = elem
        return elem

    def identity_element(self) -> "CoxeterElement":
        return self.element(())

    def generator(self, i: int) -> "CoxeterElement":
        return self.element((i,))

    def generators(self) -> list["CoxeterElement"]:
        return [self.generator(i) for i in range(self.rank)]

    # -- Bruhat order ------------------------------------------------------

    def bruhat_leq(self, x: "CoxeterElement", y: "CoxeterElement") -> bool:
        if x.length > y.length:
            return False
        if x.length == y.length:
            return x.canonical == y.canonical
        key = (x.canonical, y.canonical)
        hit = self._bruhat_memo.get(key)
        if hit is not None:
            return hit
        s = y.left_descents()[0]
        sy = self.element((s,) + y.word)
        if s in x.left_descents():
            result = self.bruhat_leq(self.element((s,) + x.word), sy)
        else:
            result = self.bruhat_leq(x, sy)
        self._bruhat_memo[key] = result
        return result

    def lower_set(self, y: "CoxeterElement") -> tuple["CoxeterElement", ...]:
        """All z <= y, ordered by (length, canonical)."""
        key = y.canonical
        hit = self._lower_memo.get(key)
        if hit is not None:
            return hit
        if y.length == 0:
            result: tuple[CoxeterElement, ...] = (y,)
        else:
            s = y.left_descents()[0]
            below = self.lower_set(self.element((s,) + y.word))
            seen = {z.canonical: z for z in below}
            for z in below:
                sz = self.element((s,) + z.word)
                seen.setdefault(sz.canonical, sz)
            result = tuple(sorted(seen.values(), key=lambda e: (e.length, e.canonical)))
        self._lower_memo[key] = result
        return result

    def interval(self, x: "CoxeterElement", y: "CoxeterElement"):
        return tuple(z for z in self.lower_set(y) if self.bruhat_leq(x, z))

    # -- enumeration -------------------------------------------------------

    def ball(self, radius: int) -> list[list["CoxeterElement"]]:
        """Shells of elements by length, up to the given radius."""
        shells = [[self.identity_element()]]
        seen = {self.identity_element().canonical}
        for _ in range(radius):
            fresh = {}
            for w in shells[-1]:
                for i in range(self.rank):
                    cand = self.element(w.word + (i,))
                    if cand.length == w.length + 1 and cand.canonical not in seen:
                        fresh.setdefault(cand.canonical, cand)
            if not fresh:
                shells.append([])
                break
            seen.update(fresh)
            shells.append(sorted(fresh.values(), key=lambda e: e.canonical))
        while len(shells) <= radius:
            shells.append([])
        return shells


@dataclass(frozen=True)
class CoxeterElement:
    """A group element: reduced word plus canonical form (generator images)."""

    system: CoxeterSystem
    word: tuple[int, ...]
    canonical: Matrix

    @property
    def length(self) -> int:
        return len(self.word)

    def __eq__(self, other):
        return (
            isinstance(other, CoxeterElement)
            and self.system is other.system
            and self.canonical == other.canonical
        )

    def __hash__(self):
        return hash(self.canonical)

    def __mul__(self, other: "CoxeterElement") -> "CoxeterElement":
        if other.system is not self.system:
            raise ValueError("elements live in different systems")
        return self.system.element(self.word + other.word)

    def inverse(self) -> "CoxeterElement":
        return self.system.element(tuple(reversed(self.word)))

    def is_identity(self) -> bool:
        return not self.word

    def apply(self, vec: Coords) -> Coords:
        return self.system.apply_word(self.word, vec)

    def left_descents(self) -> tuple[int, ...]:
        inv = self.inverse()
        return tuple(
            i
            for i in range(self.system.rank)
            if self.system.is_negative(inv.canonical[i])
        )

    def right_descents(self) -> tuple[int, ...]:
        return tuple(
            i
            for i in range(self.system.rank)
            if self.system.is_negative(self.canonical[i])
        )

    def __repr__(self):
        body = "*".join(f"s{i}" for i in self.word) or "e"
        return f"<{body}>"


# -- operations on elements and weights -----------------------------------


def reduced_word(w: CoxeterElement) -> tuple[int, ...]:
    """The canonical reduced word (descents peeled lowest index first)."""
    return w.word


def act_on_weight(w: CoxeterElement, weight: Weight, shifted: bool = False) -> Weight:
    """Apply ``w`` (or the shifted action ``w.lam = w(lam+rho)-rho``)."""
    sysroot = w.system.sys
    if weight.sys is not sysroot:
        raise ValueError("weight and element belong to different systems")
    offset = list(weight.offset)
    for i in reversed(w.word):
        root = w.system.generator_roots[i]
        current = weight.with_offset(offset)
        labels = current.shifted_labels if shifted else current.labels
        coeff = _coroot_on_labels(w.system, i, labels)
        for j in range(sysroot.size):
            offset[j] = simplify(offset[j] + coeff * root[j])
    return weight.with_offset(offset)


def _coroot_on_labels(system: CoxeterSystem, i: int, labels) -> Scalar:
    """<g_i^vee, lam> from the labels of lam.

    g^vee = (2/(g,g)) nu^{-1}(g) expands over the fundamental coweights
    with coefficients eps_j g_j (2/(g,g)), so the pairing is a rational
    combination of the labels.
    """
    sysroot = system.sys
    g = system.generator_roots[i]
    norm = bilinear(sysroot, g, g)
    total = 0
    for j in range(sysroot.size):
        if g[j]:
            total = total + (2 * g[j] * sysroot.symmetrizer[j] / norm) * labels[j]
    return simplify(total)


def coroot_pairing_weight(system: CoxeterSystem, i: int, weight: Weight, shifted: bool = False) -> Scalar:
    labels = weight.shifted_labels if shifted else weight.labels
    return _coroot_on_labels(system, i, labels)


def inversion_set(w: CoxeterElement) -> list[Root]:
    """S(w): positive roots sent negative by ``w``; exactly l(w) of them."""
    system = w.system
    inv_word = tuple(reversed(w.word))
    prefix: list[Coords] = []
    out = []
    for j, letter in enumerate(inv_word):
        beta = system.generator_roots[letter]
        for i in reversed(inv_word[:j]):
            beta = system.reflect(i, beta)
        out.append(Root(beta))
    if len({r.coords for r in out}) != len(out):
        raise AffcharError("inversion roots must be pairwise distinct")
    return sorted(out, key=lambda r: (r.height, r.coords))


def telescoping_sum(
    w: CoxeterElement, weight: Weight, word: tuple[int, ...] | None = None
) -> tuple[list[tuple[Scalar, Root]], Weight]:
    """Decompose lam - w(lam) as an integer-free exact sum over S(w^{-1}).

    Returns the pairs (coefficient, beta_j) with beta_j the image of the
    j+1st letter's root under the length-j prefix of ``w``, plus the image
    weight w(lam).  The identity lam - w(lam) = sum coeff_j beta_j holds
    exactly and the beta_j are pairwise distinct.
    """
    system = w.system
    if word is None:
        word = w.word
    else:
        word = tuple(word)
        if system.element(word) != w or len(word) != w.length:
            raise ValueError("supplied word is not a reduced word of the element")
    pairs: list[tuple[Scalar, Root]] = []
    for j in range(len(word)):
        letter = word[j]
        beta = system.generator_roots[letter]
        for i in reversed(word[:j]):
            beta = system.reflect(i, beta)
        coeff = _coroot_on_labels(system, letter, weight.labels)
        pairs.append((coeff, Root(beta)))
    image = act_on_weight(w, weight, shifted=False)
    return pairs, image


def bruhat_leq(x: CoxeterElement, y: CoxeterElement) -> bool:
    if x.system is not y.system:
        raise ValueError("elements live in different systems")
    return x.system.bruhat_leq(x, y)


def growth_count(system: CoxeterSystem, radius: int) -> int:
    """|{w : l(w) <= radius}| by breadth-first closure."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    return sum(len(shell) for shell in system.ball(radius))


def growth_counts(system: CoxeterSystem, radius: int) -> list[int]:
    """Cumulative ball sizes for r = 0..radius."""
    shells = system.ball(radius)
    counts = []
    running = 0
    for shell in shells[: radius + 1]:
        running += len(shell)
        counts.append(running)
    return counts


def fit_growth_constant(counts: list[int], degree: int) -> int:
    """Smallest integer C with counts[k] <= C * k^degree for k >= 1."""
    best = 1
    for k in range(1, len(counts)):
        need = -(-counts[k] // (k**degree))  # ceil division
        best = max(best, need)
    return best


def fit_growth_exponent(counts: list[int]) -> float:
    """Least-squares slope of log c(r) against log r over the upper half."""
    import numpy as np

    rs = np.arange(1, len(counts))
    cs = np.asarray(counts[1:], dtype=float)
    lo = len(rs) // 2
    slope, _ = np.polyfit(np.log(rs[lo:]), np.log(cs[lo:]), 1)
    return float(slope)


def serialize_element(w: CoxeterElement) -> list[int]:
    return list(w.word)


def element_from_word(system: CoxeterSystem, word) -> CoxeterElement:
    return system.element(tuple(word))
