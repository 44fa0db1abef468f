"""Kazhdan-Lusztig polynomials, their inverses, and growth estimates.

P polynomials follow the classical descent recursion with the mu
correction sum; Q polynomials use the triangular recursion obtained from
the inversion identity, with exact matrix inversion over Z[q] retained as
an independent test oracle.  All coefficients are exact integers and both
families are memoized per Coxeter system under canonical-form keys.

The memo behaves as a write-once map: entries are computed once,
published immutable, and results do not depend on evaluation order.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .weyl import CoxeterElement, CoxeterSystem

CACHE_FORMAT_VERSION = 1


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial in q, coefficients in ascending powers.

    >>> p = IntPolynomial.of(1, 1)   # 1 + q
    >>> (p * p).coefficients
    (1, 2, 1)
    >>> p.eval_one()
    2
    """

    coefficients: tuple[int, ...]

    @staticmethod
    def of(*coeffs: int) -> "IntPolynomial":
        return IntPolynomial(_normalize(tuple(coeffs)))

    @staticmethod
    def zero() -> "IntPolynomial":
        return IntPolynomial(())

    @staticmethod
    def one() -> "IntPolynomial":
        return IntPolynomial((1,))

    @staticmethod
    def q_power(k: int) -> "IntPolynomial":
        return IntPolynomial(tuple([0] * k + [1]))

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def coeff(self, k: int) -> int:
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return 0

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coefficients, other.coefficients
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial(_normalize(tuple(out)))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return IntPolynomial(())
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return IntPolynomial(_normalize(tuple(out)))

    def scaled(self, k: int) -> "IntPolynomial":
        return IntPolynomial(_normalize(tuple(k * c for c in self.coefficients)))

    def shifted(self, k: int) -> "IntPolynomial":
        if self.is_zero():
            return self
        return IntPolynomial(tuple([0] * k) + self.coefficients)

    def eval_one(self) -> int:
        return sum(self.coefficients)

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k, c in enumerate(self.coefficients):
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append(f"{c}*q" if c != 1 else "q")
            else:
                terms.append(f"{c}*q^{k}" if c != 1 else f"q^{k}")
        return " + ".join(terms)


def _normalize(coeffs: tuple[int, ...]) -> tuple[int, ...]:
    end = len(coeffs)
    while end and coeffs[end - 1] == 0:
        end -= 1
    return coeffs[:end]


def system_fingerprint(system: CoxeterSystem) -> str:
    """Stable identifier of the realized Coxeter system, for cache headers."""
    payload = json.dumps(
        {
            "cartan": [list(r) for r in system.sys.cartan],
            "generators": [list(g) for g in system.generator_roots],
        },
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass
class KLTable:
    """Memoized P and Q families for one realized Coxeter system."""

    system: CoxeterSystem
    p_memo: dict = field(default_factory=dict)
    q_memo: dict = field(default_factory=dict)
    frontier: int = 0

    @property
    def fingerprint(self) -> str:
        return system_fingerprint(self.system)

    def _note(self, y: CoxeterElement):
        if y.length > self.frontier:
            self.frontier = y.length


def kl_p(
    table: KLTable,
    x: CoxeterElement,
    y: CoxeterElement,
    descent_choice: int | None = None,
) -> IntPolynomial:
    """The polynomial P_{x,y} by the descent recursion.

    ``descent_choice`` forces a particular left descent of ``y`` (used by
    the descent-independence tests); the default takes the lowest index.
    """
    key = (x.canonical, y.canonical)
    if descent_choice is None:
        hit = table.p_memo.get(key)
        if hit is not None:
            return hit
    system = table.system
    table._note(y)
    if x == y:
        result = IntPolynomial.one()
    elif not system.bruhat_leq(x, y):
        result = IntPolynomial.zero()
    else:
        descents = y.left_descents()
        s = descents[0] if descent_choice is None else descent_choice
        if s not in descents:
            raise ValueError("descent_choice is not a left descent of y")
        sy = system.element((s,) + y.word)
        sx = system.element((s,) + x.word)
        c = 1 if sx.length < x.length else 0
        result = kl_p(table, sx, sy).shifted(1 - c) + kl_p(table, x, sy).shifted(c)
        for z in system.lower_set(sy):
            if z == sy or s not in z.left_descents():
                continue
            if not system.bruhat_leq(x, z):
                continue
            m = mu(table, z, sy)
            if m == 0:
                continue
            gap = y.length - z.length
            if gap % 2:
                raise AssertionError("mu correction with odd length gap")
            result = result - kl_p(table, x, z).scaled(m).shifted(gap // 2)
        if result.degree * 2 > max(y.length - x.length - 1, 0):
            raise AssertionError("degree bound violated; recursion is broken")
    if descent_choice is None:
        table.p_memo[key] = result
    return result


def mu(table: KLTable, z: CoxeterElement, w: CoxeterElement) -> int:
    """Coefficient of q^((l(w)-l(z)-1)/2) in P_{z,w}; 0 for even gaps."""
    gap = w.length - z.length
    if gap <= 0 or gap % 2 == 0:
        return 0
    return kl_p(table, z, w).coeff((gap - 1) // 2)


def kl_q(table: KLTable, x: CoxeterElement, y: CoxeterElement) -> IntPolynomial:
    """Inverse polynomial Q_{x,y} by the triangular recursion."""
    key = (x.canonical, y.canonical)
    hit = table.q_memo.get(key)
    if hit is not None:
        return hit
    system = table.system
    table._note(y)
    if x == y:
        result = IntPolynomial.one()
    elif not system.bruhat_leq(x, y):
        result = IntPolynomial.zero()
    else:
        result = IntPolynomial.zero()
        for w in system.interval(x, y):
            if w == x:
                continue
            sign = -1 if (w.length - x.length) % 2 == 0 else 1
            result = result + (kl_p(table, x, w) * kl_q(table, w, y)).scaled(sign)
        if result.degree * 2 > max(y.length - x.length - 1, 0):
            raise AssertionError("degree bound violated for Q")
    table.q_memo[key] = result
    return result


def check_inversion(table: KLTable, x: CoxeterElement, y: CoxeterElement) -> bool:
    """Whether sum_w (-1)^(l(w)-l(x)) Q_{x,w} P_{w,y} = delta_{x,y} exactly."""
    system = table.system
    total = IntPolynomial.zero()
    if system.bruhat_leq(x, y):
        for w in system.interval(x, y):
            sign = 1 if (w.length - x.length) % 2 == 0 else -1
            total = total + (kl_q(table, x, w) * kl_p(table, w, y)).scaled(sign)
    expected = IntPolynomial.one() if x == y else IntPolynomial.zero()
    return total == expected


def q_by_matrix_inversion(table: KLTable, z: CoxeterElement) -> dict:
    """Independent oracle: invert the unitriangular P matrix below ``z``.

    Returns {(x.canonical, w.canonical): Q_{x,w}} for all x <= w <= z.
    """
    system = table.system
    elems = list(system.lower_set(z))
    size = len(elems)
    p_mat = [
        [kl_p(table, elems[i], elems[j]) for j in range(size)] for i in range(size)
    ]
    inv = [[IntPolynomial.zero()] * size for _ in range(size)]
    for i in range(size):
        inv[i][i] = IntPolynomial.one()
        for j in range(i + 1, size):
            acc = IntPolynomial.zero()
            for k in range(i, j):
                acc = acc + inv[i][k] * p_mat[k][j]
            inv[i][j] = -acc
    out = {}
    for i in range(size):
        for j in range(size):
            gap = elems[j].length - elems[i].length
            sign = 1 if gap % 2 == 0 else -1
            q = inv[i][j].scaled(sign)
            out[(elems[i].canonical, elems[j].canonical)] = q
    return out


def verify_p_estimate(table: KLTable, x: CoxeterElement, y: CoxeterElement) -> bool:
    """P_{x,y}(1) <= l(y)^(l(y)-l(x)), exactly in big integers."""
    if not table.system.bruhat_leq(x, y):
        return True
    value = kl_p(table, x, y).eval_one()
    return value <= y.length ** (y.length - x.length)


def verify_q_estimate(
    table: KLTable,
    x: CoxeterElement,
    y: CoxeterElement,
    growth_constant,
    growth_degree: int,
) -> bool:
    """|Q_{x,y}(1)| <= (C l(y)^N)^(l(y)-l(x)) with N = max(degree+1, 2)."""
    value = abs(kl_q(table, x, y).eval_one())
    gap = y.length - x.length
    if gap <= 0:
        return value <= 1
    cap = max(growth_degree + 1, 2)
    bound = (Fraction(growth_constant) * y.length**cap) ** gap
    return Fraction(value) <= bound


# -- persistent cache -------------------------------------------------------


def save_cache(table: KLTable, path) -> None:
    """Persist the table; merges with an existing compatible cache file."""
    existing = _read_cache_file(path)
    payload = {
        "format_version": CACHE_FORMAT_VERSION,
        "system": table.fingerprint,
        "P": _serialize_entries(table, table.p_memo, "p"),
        "Q": _serialize_entries(table, table.q_memo, "q"),
    }
    if existing is not None and existing.get("system") == table.fingerprint:
        merged_p = {tuple(map(tuple, e[:2])): e for e in existing.get("P", [])}
        merged_p.update({tuple(map(tuple, e[:2])): e for e in payload["P"]})
        merged_q = {tuple(map(tuple, e[:2])): e for e in existing.get("Q", [])}
        merged_q.update({tuple(map(tuple, e[:2])): e for e in payload["Q"]})
        payload["P"] = [merged_p[k] for k in sorted(merged_p)]
        payload["Q"] = [merged_q[k] for k in sorted(merged_q)]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, separators=(",", ":"))


def _serialize_entries(table: KLTable, memo, kind: str) -> list:
    system = table.system
    words = {}
    for (cx, cy), poly in memo.items():
        x = system._element_memo[cx]
        y = system._element_memo[cy]
        words[(x.word, y.word)] = [list(x.word), list(y.word), list(poly.coefficients)]
    return [words[k] for k in sorted(words)]


def _read_cache_file(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None


def load_cache(system: CoxeterSystem, path) -> KLTable:
    """Load a cache into a fresh table; incompatible files are ignored."""
    table = KLTable(system)
    data = _read_cache_file(path)
    if data is None:
        return table
    if data.get("format_version") != CACHE_FORMAT_VERSION:
        warnings.warn(f"ignoring cache {path}: unknown format version")
        return table
    if data.get("system") != system_fingerprint(system):
        warnings.warn(f"ignoring cache {path}: system fingerprint mismatch")
        return table
    for kind, memo in (("P", table.p_memo), ("Q", table.q_memo)):
        for xw, yw, coeffs in data.get(kind, []):
            x = system.element(tuple(xw))
            y = system.element(tuple(yw))
            memo[(x.canonical, y.canonical)] = IntPolynomial(_normalize(tuple(coeffs)))
            table._note(y)
    return table
