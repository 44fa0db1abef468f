"""Exact truncated formal characters of highest-weight modules.

A character is stored normalized: the coefficient map sends a root-lattice
offset ``nu`` (the drop below the highest weight) to the dimension of that
weight space.  Verma characters are Kostant partition values; simple
characters come from the alternating Kazhdan-Lusztig sums over the
integral Weyl group, dispatched on the dominance class of the highest
weight:

* empty integral subsystem: the Verma module is already simple;
* dominant class: infinite sum over ``y >= x`` with inverse-KL
  coefficients, truncated once offsets leave the window with a safety
  margin that is asserted, never assumed;
* antidominant class (and irrational levels): finite sum over ``y <= z``
  with ordinary KL coefficients.

Everything is exact integer arithmetic; a series is trusted only up to
its recorded cutoff height.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .coxkl import KLTable, kl_p, kl_q
from .errors import AffcharError, CriticalLevelError, CutoffError
from .integral import (
    DominanceReport,
    IntegralSystem,
    build_integral_system,
    dominant_conjugate,
    stabilizer_and_extremes,
)
from .rootsys import AffineRootSystem, Root, positive_roots_up_to
from .weyl import CoxeterElement, Weight, act_on_weight, coroot_pairing_weight

Coords = tuple[int, ...]


@dataclass(frozen=True)
class CharSeries:
    """Multiplicities below a highest weight, exact up to ``cutoff``."""

    base: Weight
    coeffs: dict[Coords, int]
    cutoff: int

    def coeff(self, offset: Coords) -> int:
        if sum(offset) > self.cutoff:
            raise ValueError("offset beyond the certified cutoff")
        return self.coeffs.get(tuple(offset), 0)

    def support(self) -> list[Coords]:
        return sorted(self.coeffs, key=lambda v: (sum(v), v))

    def truncated(self, height: int) -> "CharSeries":
        if height > self.cutoff:
            raise ValueError("cannot extend a series past its cutoff")
        kept = {v: c for v, c in self.coeffs.items() if sum(v) <= height}
        return CharSeries(self.base, kept, height)

    def rows(self) -> list[tuple[Coords, int]]:
        return [(v, self.coeffs[v]) for v in self.support()]

    def to_json_dict(self) -> dict:
        return {
            "cutoff": self.cutoff,
            "entries": [
                {"offset": list(v), "multiplicity": m} for v, m in self.rows()
            ],
        }


def _lattice_points(size: int, height: int) -> list[Coords]:
    """All nonnegative integer vectors of the given length with sum <= height."""
    points: list[Coords] = []

    def rec(prefix: list[int], remaining: int, slot: int):
        if slot == size - 1:
            for v in range(remaining + 1):
                points.append(tuple(prefix + [v]))
            return
        for v in range(remaining + 1):
            prefix.append(v)
            rec(prefix, remaining - v, slot + 1)
            prefix.pop()

    rec([], height, 0)
    points.sort(key=lambda p: (sum(p), p))
    return points


@lru_cache(maxsize=32)
def _partition_table(sys: AffineRootSystem, height: int) -> dict[Coords, int]:
    """Kostant partition values on all offsets of height <= ``height``.

    Unbounded multiset-coin dynamic programming; each copy of an imaginary
    root counts as a separate color.
    """
    coins: list[Coords] = []
    for root in positive_roots_up_to(sys, height):
        coins.extend([root.coords] * root.mult)
    points = _lattice_points(sys.size, height)
    table = {p: 0 for p in points}
    table[tuple(0 for _ in range(sys.size))] = 1
    for coin in coins:
        for point in points:
            prev = tuple(p - c for p, c in zip(point, coin))
            if all(v >= 0 for v in prev):
                table[point] += table[prev]
    return table


def partition_function(sys: AffineRootSystem, offset: Coords) -> int:
    """Number of multiset decompositions of ``offset`` into positive roots."""
    offset = tuple(offset)
    if any(v < 0 for v in offset):
        return 0
    height = max(sum(offset), 1)
    return _partition_table(sys, height)[offset]


def verma_char(sys: AffineRootSystem, weight: Weight, height: int) -> CharSeries:
    """Character of the Verma module: partition values at every offset."""
    table = _partition_table(sys, height)
    coeffs = {v: c for v, c in table.items() if c}
    return CharSeries(weight, coeffs, height)


def weyl_denominator_series(sys: AffineRootSystem, height: int) -> dict[Coords, int]:
    """Truncated expansion of prod (1 - e^{-alpha})^{mult} as offset coefficients."""
    series: dict[Coords, int] = {tuple(0 for _ in range(sys.size)): 1}
    for root in positive_roots_up_to(sys, height):
        for _ in range(root.mult):
            update: dict[Coords, int] = dict(series)
            for offset, value in series.items():
                shifted = tuple(o + c for o, c in zip(offset, root.coords))
                if sum(shifted) <= height:
                    update[shifted] = update.get(shifted, 0) - value
            series = {k: v for k, v in update.items() if v}
    return series


def convolve(
    a: dict[Coords, int], b: dict[Coords, int], height: int
) -> dict[Coords, int]:
    out: dict[Coords, int] = {}
    for u, cu in a.items():
        if sum(u) > height:
            continue
        for v, cv in b.items():
            w = tuple(x + y for x, y in zip(u, v))
            if sum(w) <= height:
                out[w] = out.get(w, 0) + cu * cv
    return {k: v for k, v in out.items() if v}


# -- simple modules ----------------------------------------------------------


@dataclass(frozen=True)
class NumeratorTerm:
    y: CoxeterElement
    coefficient: int
    offset: Coords  # lam - y.lam, exact


@dataclass(frozen=True)
class NumeratorData:
    """Exact numerator of a simple character over a dominant weight."""

    lam: Weight
    x: CoxeterElement
    x_offset: Coords  # lam - x.lam
    terms: tuple[NumeratorTerm, ...]
    length_cap: int

    def shells(self) -> dict[int, list[NumeratorTerm]]:
        out: dict[int, list[NumeratorTerm]] = {}
        for term in self.terms:
            out.setdefault(term.y.length, []).append(term)
        return out


def _exact_offset(weight: Weight, image: Weight) -> Coords:
    diff = tuple(b - a for a, b in zip(weight.offset, image.offset))
    out = []
    for value in diff:
        frac = Fraction(value)
        if frac.denominator != 1:
            raise AffcharError("offset is not in the integral root lattice")
        out.append(int(frac))
    return tuple(out)


def numerator_terms(
    report: DominanceReport,
    x: CoxeterElement,
    length_cap: int,
    table: KLTable | None = None,
) -> NumeratorData:
    """All terms (y, c_{x,y}, lam - y.lam) with y >= x up to the length cap.

    Coefficients are signed inverse-KL values at q = 1; offsets come from
    the exact shifted action.
    """
    integral = report.integral
    cox = integral.coxeter
    lam = report.dominant
    if table is None:
        table = KLTable(cox)
    base_offset = _exact_offset(lam, act_on_weight(x, lam, shifted=True))
    terms: list[NumeratorTerm] = []
    for shell in cox.ball(length_cap):
        for y in shell:
            if not cox.bruhat_leq(x, y):
                continue
            image = act_on_weight(y, lam, shifted=True)
            offset = _exact_offset(lam, image)
            sign = 1 if (y.length - x.length) % 2 == 0 else -1
            coeff = sign * kl_q(table, x, y).eval_one()
            terms.append(NumeratorTerm(y, coeff, offset))
    terms.sort(key=lambda t: (t.y.length, t.y.canonical))
    return NumeratorData(lam, x, base_offset, tuple(terms), length_cap)


_SHELL_MARGIN = 4
_SETTLED_SHELLS = 2
_LENGTH_HARD_CAP = 80


def _dominant_sum_terms(
    report: DominanceReport, x: CoxeterElement, height: int, table: KLTable
) -> list[NumeratorTerm]:
    """Terms y >= x whose offsets relative to x.lam fit under ``height``.

    Enumerates length shells until every offset in the last few shells has
    left the window by the safety margin; the margin is asserted so an
    untrustworthy truncation fails loudly instead of returning silently.
    """
    integral = report.integral
    cox = integral.coxeter
    lam = report.dominant
    x_offset = _exact_offset(lam, act_on_weight(x, lam, shifted=True))
    kept: list[NumeratorTerm] = []
    settled = 0
    shells = cox.ball(_LENGTH_HARD_CAP)
    for length, shell in enumerate(shells):
        if not shell:
            settled = _SETTLED_SHELLS  # group exhausted: truncation is exact
            break
        shell_min = None
        for y in shell:
            if not cox.bruhat_leq(x, y):
                continue
            image = act_on_weight(y, lam, shifted=True)
            offset = _exact_offset(lam, image)
            relative = tuple(o - b for o, b in zip(offset, x_offset))
            if any(v < 0 for v in relative):
                raise AffcharError("offset below x.lam escaped the positive cone")
            rel_height = sum(relative)
            shell_min = rel_height if shell_min is None else min(shell_min, rel_height)
            if rel_height <= height:
                sign = 1 if (y.length - x.length) % 2 == 0 else -1
                coeff = sign * kl_q(table, x, y).eval_one()
                if coeff:
                    kept.append(NumeratorTerm(y, coeff, relative))
        if shell_min is not None and shell_min > height + _SHELL_MARGIN:
            settled += 1
            if settled >= _SETTLED_SHELLS:
                break
        else:
            settled = 0
    else:
        raise CutoffError("shell enumeration hit the hard length cap")
    if settled < _SETTLED_SHELLS:
        raise CutoffError("offset growth did not clear the margin; raise the cap")
    return kept


def simple_char_data(
    sys: AffineRootSystem,
    weight: Weight,
    height: int,
    report: DominanceReport | None = None,
    table: KLTable | None = None,
) -> tuple[CharSeries, DominanceReport | None, KLTable | None]:
    """Simple-module character plus the block data used to compute it."""
    if weight.is_critical():
        raise CriticalLevelError("simple characters need a non-critical weight")
    if report is None:
        report = dominant_conjugate(sys, weight)
    if report.klass == "both_empty_integral":
        return verma_char(sys, weight, height), report, None
    integral = report.integral
    cox = integral.coxeter
    if table is None:
        table = KLTable(cox)
    partition = _partition_table(sys, height)
    _, shortest, longest = stabilizer_and_extremes(integral, report.conjugator)
    coeffs: dict[Coords, int] = {}
    if report.klass == "C_plus":
        x = longest
        for term in _dominant_sum_terms(report, x, height, table):
            _accumulate(coeffs, term.offset, term.coefficient, partition, height)
    else:
        z = shortest
        lam = report.dominant
        z_offset = _exact_offset(lam, act_on_weight(z, lam, shifted=True))
        for y in cox.lower_set(z):
            image = act_on_weight(y, lam, shifted=True)
            offset = _exact_offset(lam, image)
            # Lam - y.lam = (lam - y.lam) - (lam - z.lam).
            relative = tuple(o - b for o, b in zip(offset, z_offset))
            if any(v < 0 for v in relative):
                raise AffcharError("antidominant offsets escaped the positive cone")
            if sum(relative) > height:
                continue
            sign = 1 if (z.length - y.length) % 2 == 0 else -1
            coeff = sign * kl_p(table, y, z).eval_one()
            _accumulate(coeffs, relative, coeff, partition, height)
    coeffs = {k: v for k, v in coeffs.items() if v}
    if coeffs.get(tuple(0 for _ in range(sys.size)), 0) != 1:
        raise AffcharError("simple character must have multiplicity one on top")
    return CharSeries(weight, coeffs, height), report, table


def _accumulate(coeffs, base_offset, scale, partition, height):
    room = height - sum(base_offset)
    for nu, value in partition.items():
        if sum(nu) <= room:
            total = tuple(b + n for b, n in zip(base_offset, nu))
            coeffs[total] = coeffs.get(total, 0) + scale * value


def simple_char(sys: AffineRootSystem, weight: Weight, height: int) -> CharSeries:
    """Character of the irreducible highest-weight module."""
    series, _, _ = simple_char_data(sys, weight, height)
    return series


def composition_multiplicity(
    integral: IntegralSystem,
    table: KLTable,
    x: CoxeterElement,
    y: CoxeterElement,
) -> int:
    """Multiplicity of the simple with parameter y inside the Verma of x.

    Both parameters live in the integral Weyl group of a dominant weight;
    y is expected to be the longest element of its stabilizer coset.
    """
    cox = integral.coxeter
    zero = integral.zero_simple_indices()
    if any((y * cox.generator(i)).length > y.length for i in zero):
        raise AffcharError("y must be the longest element of its coset")
    if not cox.bruhat_leq(x, y):
        return 0
    return kl_p(table, x, y).eval_one()


# -- Verma quotients ---------------------------------------------------------


def quotient_char(
    sys: AffineRootSystem, weight: Weight, alpha: Root | Coords, height: int
) -> CharSeries:
    """Character of M(lam)/M(s_alpha.lam) for an integral simple root.

    Requires k = <alpha^vee, lam+rho> to be a positive integer, which is
    exactly when the second Verma embeds properly into the first.
    """
    coords = alpha.coords if isinstance(alpha, Root) else tuple(alpha)
    pairing = _shifted_pairing(sys, coords, weight)
    if not (is_integer(pairing) and sign_of(pairing) > 0):
        raise AffcharError(
            "quotient needs a positive integer pairing <alpha^vee, lam+rho>"
        )
    k = int(Fraction(simplify(pairing)))
    drop = tuple(k * c for c in coords)
    partition = _partition_table(sys, height)
    coeffs: dict[Coords, int] = {}
    for nu, value in partition.items():
        coeffs[nu] = value
    if sum(drop) <= height:
        for nu, value in partition.items():
            total = tuple(d + n for d, n in zip(drop, nu))
            if sum(total) <= height:
                coeffs[total] = coeffs.get(total, 0) - value
    coeffs = {k2: v for k2, v in coeffs.items() if v}
    return CharSeries(weight, coeffs, height)


def _shifted_pairing(sys: AffineRootSystem, coords: Coords, weight: Weight):
    norm = bilinear(sys, coords, coords)
    total = 0
    for j, c in enumerate(coords):
        if c:
            total = total + (2 * c * sys.symmetrizer[j] / norm) * weight.shifted_labels[j]
    return total


def quotient_char_by_word(
    sys: AffineRootSystem,
    report: DominanceReport,
    word: tuple[int, ...],
    height: int,
) -> CharSeries:
    """Character of M(lam)/M(w.lam) for dominant lam and w in W(lam).

    The submodule embedding holds for any w above the coset extreme of a
    dominant weight, so the character is the plain difference of the two
    Verma characters.
    """
    if report.klass != "C_plus":
        raise AffcharError("word quotients are defined over a dominant weight")
    integral = report.integral
    cox = integral.coxeter
    w = cox.element(tuple(word))
    if w.is_identity():
        raise AffcharError("the quotient by the module itself is zero")
    lam = report.dominant
    drop = _exact_offset(lam, act_on_weight(w, lam, shifted=True))
    partition = _partition_table(sys, height)
    coeffs: dict[Coords, int] = dict(partition)
    if sum(drop) <= height:
        for nu, value in partition.items():
            total = tuple(d + n for d, n in zip(drop, nu))
            if sum(total) <= height:
                coeffs[total] = coeffs.get(total, 0) - value
    coeffs = {k: v for k, v in coeffs.items() if v}
    return CharSeries(lam, coeffs, height)
