"""Integral root subsystems and their Weyl groups.

For a non-critical weight lam, the real roots with integral coroot pairing
against lam+rho form a subsystem; its simple system is recovered as the
indecomposable positive members, verified against the defining reflection
condition on a doubled enumeration window.  The window heuristic is
honest: if the simple system changes when the window doubles, a
:class:`~affchar.errors.CutoffError` is raised instead of silently
returning an unstable answer.

The subsystem's Weyl group reuses the ambient Coxeter machinery with the
integral simple system as generators, so lengths, Bruhat order, and KL
tables all refer to the subsystem.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import AffcharError, CriticalLevelError, CutoffError
from .exactnum import Scalar, is_integer, is_rational, sign_of, simplify
from .rootsys import (
    AffineRootSystem,
    Root,
    bilinear,
    classical_projection,
    coroot_pairing,
    positive_roots_up_to,
)
from .weyl import (
    CoxeterElement,
    CoxeterSystem,
    Weight,
    act_on_weight,
    coroot_pairing_weight,
)

Coords = tuple[int, ...]


def _pairing(sys: AffineRootSystem, root: Coords, weight: Weight) -> Scalar:
    """<root^vee, weight + rho> as an exact scalar."""
    shifted = weight.shifted_labels
    norm = bilinear(sys, root, root)
    total = 0
    for j, c in enumerate(root):
        if c:
            total = total + (2 * c * sys.symmetrizer[j] / norm) * shifted[j]
    return simplify(total)


def integral_subsystem(
    sys: AffineRootSystem, weight: Weight, height: int
) -> tuple[list[Root], list[Root]]:
    """Positive integral roots and zero-pairing roots up to ``height``.

    Returns (Delta(lam)_+ , Delta_0(lam)_+) within the window; the second
    family must be finite and is independent of the window once it
    saturates.
    """
    if weight.is_critical():
        raise CriticalLevelError("weight lies on the critical hyperplane")
    integral: list[Root] = []
    zeros: list[Root] = []
    for root in positive_roots_up_to(sys, height):
        if not root.is_real:
            continue
        pairing = _pairing(sys, root.coords, weight)
        if is_integer(pairing):
            integral.append(root)
            if sign_of(pairing) == 0:
                zeros.append(root)
    return integral, zeros


def simple_system(
    sys: AffineRootSystem, weight: Weight, height: int
) -> tuple[list[Root], bool]:
    """Simple system of the integral subsystem, with a stability flag.

    Candidates are the indecomposable members of Delta(lam)_+ up to
    ``height``; each is verified against the reflection condition on the
    window of height 2*height.  The whole computation is repeated with the
    cutoff doubled; disagreement raises :class:`CutoffError`.
    """
    first = _simple_candidates(sys, weight, height)
    second = _simple_candidates(sys, weight, 2 * height)
    if [r.coords for r in first] != [r.coords for r in second]:
        raise CutoffError(
            "integral simple system unstable under window doubling; "
            f"raise the cutoff (height={height})"
        )
    return second, True


def _simple_candidates(sys: AffineRootSystem, weight: Weight, height: int) -> list[Root]:
    window, _ = integral_subsystem(sys, weight, 2 * height)
    window_set = {r.coords for r in window}
    members = [r for r in window if r.height <= height]
    member_set = {r.coords for r in members}
    candidates = []
    for root in members:
        if _decomposable(root.coords, member_set):
            continue
        if _reflection_closed(sys, root.coords, window, window_set):
            candidates.append(root)
    # Height, then reverse-lex: when the integral simple system equals the
    # ambient one its generator numbering matches the ambient numbering.
    return sorted(candidates, key=lambda r: (r.height, tuple(-c for c in r.coords)))


def _decomposable(coords: Coords, member_set: set[Coords]) -> bool:
    for other in member_set:
        if other == coords:
            continue
        rest = tuple(c - o for c, o in zip(coords, other))
        if all(v >= 0 for v in rest) and rest in member_set:
            return True
    return False


def _reflection_closed(
    sys: AffineRootSystem, alpha: Coords, window: list[Root], window_set: set[Coords]
) -> bool:
    norm = bilinear(sys, alpha, alpha)
    max_height = max((r.height for r in window), default=0)
    for beta in window:
        if beta.coords == alpha:
            continue
        pairing = 2 * bilinear(sys, alpha, beta.coords) / norm
        if pairing.denominator != 1:
            raise AffcharError("non-integral pairing inside a subsystem")
        image = tuple(b - int(pairing) * a for b, a in zip(beta.coords, alpha))
        if all(v <= 0 for v in image):
            return False
        if sum(image) <= max_height and image not in window_set:
            return False
    return True


@dataclass(frozen=True)
class DiagramComponent:
    nodes: tuple[int, ...]  # indices into the simple system
    kind: str  # "finite" | "affine"


def diagram_and_components(
    sys: AffineRootSystem, simples: list[Root]
) -> tuple[list[list[int]], list[DiagramComponent]]:
    """Pairing matrix over the simple system and its typed components.

    Each connected component must be of finite or affine type (positive
    definite or corank-one semidefinite symmetrized form); anything else
    signals a cutoff artifact or a bug and raises.
    """
    size = len(simples)
    matrix = [[0] * size for _ in range(size)]
    for i, a in enumerate(simples):
        norm = bilinear(sys, a.coords, a.coords)
        for j, b in enumerate(simples):
            value = 2 * bilinear(sys, a.coords, b.coords) / norm
            if value.denominator != 1:
                raise AffcharError("non-integral Cartan entry for the subsystem")
            matrix[i][j] = int(value)
            if i != j and matrix[i][j] > 0:
                raise AffcharError("positive off-diagonal pairing in simple system")
    components = []
    seen: set[int] = set()
    for start in range(size):
        if start in seen:
            continue
        stack, nodes = [start], []
        while stack:
            i = stack.pop()
            if i in seen:
                continue
            seen.add(i)
            nodes.append(i)
            for j in range(size):
                if j not in seen and matrix[i][j] != 0 and i != j:
                    stack.append(j)
        nodes.sort()
        kind = _classify_component(sys, [simples[i] for i in nodes])
        components.append(DiagramComponent(tuple(nodes), kind))
    return matrix, components


def _classify_component(sys: AffineRootSystem, roots: list[Root]) -> str:
    gram = [
        [bilinear(sys, a.coords, b.coords) for b in roots] for a in roots
    ]
    minors = _leading_principal_minors(gram)
    if all(m > 0 for m in minors):
        return "finite"
    if all(m > 0 for m in minors[:-1]) and minors[-1] == 0:
        return "affine"
    raise AffcharError(
        "subsystem component is neither finite nor affine; "
        "this violates the classification and signals a bug or cutoff artifact"
    )


def _leading_principal_minors(gram: list[list[Fraction]]) -> list[Fraction]:
    size = len(gram)
    minors = []
    for k in range(1, size + 1):
        sub = [row[:k] for row in gram[:k]]
        minors.append(_det(sub))
    return minors


def _det(matrix: list[list[Fraction]]) -> Fraction:
    size = len(matrix)
    mat = [list(map(Fraction, row)) for row in matrix]
    det = Fraction(1)
    for col in range(size):
        pivot = None
        for row in range(col, size):
            if mat[row][col] != 0:
                pivot = row
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        for row in range(col + 1, size):
            factor = mat[row][col] * inv
            if factor:
                for j in range(col, size):
                    mat[row][j] -= factor * mat[col][j]
    return det


def component_rank(sys: AffineRootSystem, simples: list[Root], comp: DiagramComponent) -> int:
    """Exact rank of the component's roots as ambient vectors."""
    vectors = [list(map(Fraction, simples[i].coords)) for i in comp.nodes]
    rank = 0
    cols = len(vectors[0]) if vectors else 0
    row = 0
    for col in range(cols):
        pivot = None
        for r in range(row, len(vectors)):
            if vectors[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        vectors[row], vectors[pivot] = vectors[pivot], vectors[row]
        inv = 1 / vectors[row][col]
        for r in range(len(vectors)):
            if r != row and vectors[r][col] != 0:
                factor = vectors[r][col] * inv
                for c in range(cols):
                    vectors[r][c] -= factor * vectors[row][c]
        row += 1
        rank += 1
        if row == len(vectors):
            break
    return rank


@dataclass(frozen=True)
class IntegralSystem:
    """The block combinatorics of a non-critical weight."""

    lam: Weight
    positive_roots: tuple[Root, ...]
    zero_roots: tuple[Root, ...]
    simple_roots: tuple[Root, ...]
    diagram: tuple[tuple[int, ...], ...]
    components: tuple[DiagramComponent, ...]
    coxeter: CoxeterSystem
    stable: bool

    @property
    def sys(self) -> AffineRootSystem:
        return self.lam.sys

    def zero_simple_indices(self) -> tuple[int, ...]:
        out = []
        for i, root in enumerate(self.simple_roots):
            if sign_of(_pairing(self.sys, root.coords, self.lam)) == 0:
                out.append(i)
        return tuple(out)

    def pairing(self, root: Root | Coords) -> Scalar:
        coords = root.coords if isinstance(root, Root) else root
        return _pairing(self.sys, coords, self.lam)

    def longest_zero_length(self) -> int:
        """Length of the longest element of the stabilizer subgroup."""
        group = enumerate_stabilizer(self)
        return max((w.length for w in group), default=0)

    def to_json_dict(self) -> dict:
        return {
            "positive_roots": [list(r.coords) for r in self.positive_roots],
            "simple_system": [list(r.coords) for r in self.simple_roots],
            "diagram": [list(row) for row in self.diagram],
            "components": [
                {"nodes": list(c.nodes), "kind": c.kind} for c in self.components
            ],
            "stable": self.stable,
        }


def build_integral_system(
    sys: AffineRootSystem, weight: Weight, height: int | None = None
) -> IntegralSystem:
    """Assemble the full integral datum of a non-critical weight."""
    if height is None:
        height = 20 * sys.size
    positive, zeros = integral_subsystem(sys, weight, height)
    simples, stable = simple_system(sys, weight, height)
    matrix, components = diagram_and_components(sys, simples)
    coxeter = CoxeterSystem(sys, [r.coords for r in simples]) if simples else CoxeterSystem(sys, [])
    return IntegralSystem(
        lam=weight,
        positive_roots=tuple(positive),
        zero_roots=tuple(zeros),
        simple_roots=tuple(simples),
        diagram=tuple(tuple(row) for row in matrix),
        components=tuple(components),
        coxeter=coxeter,
        stable=stable,
    )


# -- dominance --------------------------------------------------------------


@dataclass(frozen=True)
class DominanceReport:
    """Where a weight sits relative to its integral subsystem."""

    klass: str  # "C_plus" | "C_minus" | "both_empty_integral"
    dominant: Weight
    conjugator: CoxeterElement
    level_sign: str  # "positive" | "negative" | "irrational"
    integral: IntegralSystem


def _level_sign(weight: Weight) -> str:
    level = weight.level_shifted()
    if not is_rational(level):
        return "irrational"
    return "positive" if sign_of(level) > 0 else "negative"


def dominant_conjugate(
    sys: AffineRootSystem,
    weight: Weight,
    height: int | None = None,
    integral: IntegralSystem | None = None,
) -> DominanceReport:
    """Conjugate into the dominant or antidominant chamber of W(lam).

    Rational positive levels land in C^+, rational negative levels in C^-;
    irrational levels admit both representatives and are steered to C^- so
    the finite-sum character formula applies downstream.
    """
    if weight.is_critical():
        raise CriticalLevelError("weight lies on the critical hyperplane")
    if integral is None:
        integral = build_integral_system(sys, weight, height)
    cox = integral.coxeter
    identity = cox.identity_element()
    if not integral.simple_roots:
        return DominanceReport(
            "both_empty_integral", weight, identity, _level_sign(weight), integral
        )
    sign = _level_sign(weight)
    raise_up = sign == "positive"
    current = weight
    letters: list[int] = []
    # Guard in the spirit of "stop once a bounded decreasing quantity must
    # have hit zero"; label magnitudes enter because an offset-free weight
    # can still start far from the chamber.
    weight_size = sum(abs(float(o)) for o in weight.offset) + sum(
        abs(float(l)) for l in weight.labels
    )
    bound = 10 * (int(weight_size) + 10)
    for _ in range(bound):
        move = None
        for i in range(cox.rank):
            pairing = coroot_pairing_weight(cox, i, current, shifted=True)
            if not is_integer(pairing):
                raise AffcharError("non-integral pairing along the integral orbit")
            value = sign_of(pairing)
            if raise_up and value < 0:
                move = i
                break
            if not raise_up and value > 0:
                move = i
                break
        if move is None:
            conjugator = cox.element(tuple(letters))
            klass = "C_plus" if raise_up else "C_minus"
            report = DominanceReport(klass, current, conjugator, sign, integral)
            _check_report(report, weight)
            return report
        current = act_on_weight(cox.generator(move), current, shifted=True)
        letters.append(move)
    raise CutoffError("dominance conjugation did not terminate within its guard")


def _check_report(report: DominanceReport, original: Weight) -> None:
    image = act_on_weight(report.conjugator, report.dominant, shifted=True)
    if tuple(image.offset) != tuple(original.offset):
        raise AffcharError("conjugator does not reproduce the input weight")


# -- stabilizer and coset extremes -------------------------------------------


def enumerate_stabilizer(integral: IntegralSystem) -> list[CoxeterElement]:
    """The subgroup generated by the zero-pairing simple reflections."""
    cox = integral.coxeter
    zero = integral.zero_simple_indices()
    group = {cox.identity_element().canonical: cox.identity_element()}
    frontier = [cox.identity_element()]
    guard = 0
    while frontier:
        guard += 1
        if guard > 100000:
            raise CutoffError("stabilizer enumeration exploded; is the level critical?")
        nxt = []
        for w in frontier:
            for i in zero:
                cand = cox.element(w.word + (i,))
                if cand.canonical not in group:
                    group[cand.canonical] = cand
                    nxt.append(cand)
        frontier = nxt
    return sorted(group.values(), key=lambda w: (w.length, w.canonical))


def stabilizer_and_extremes(
    integral: IntegralSystem, w: CoxeterElement
) -> tuple[list[CoxeterElement], CoxeterElement, CoxeterElement]:
    """Generators of the stabilizer and the coset extremes of w*W_0(lam).

    Requires the weight to be dominant or antidominant; the shortest and
    longest coset elements are unique and lengths are additive from the
    shortest one.
    """
    pairings = [sign_of(integral.pairing(r)) for r in integral.simple_roots]
    if any(p < 0 for p in pairings) and any(p > 0 for p in pairings):
        raise AffcharError("weight is neither dominant nor antidominant")
    group = enumerate_stabilizer(integral)
    coset = sorted(
        {(w * y).canonical: w * y for y in group}.values(),
        key=lambda u: (u.length, u.canonical),
    )
    shortest, longest = coset[0], coset[-1]
    if len(coset) != len(group):
        raise AffcharError("coset size mismatch against the stabilizer")
    if sum(1 for u in coset if u.length == shortest.length) != 1:
        raise AffcharError("shortest coset element is not unique")
    if sum(1 for u in coset if u.length == longest.length) != 1:
        raise AffcharError("longest coset element is not unique")
    for y in group:
        if (shortest * y).length != shortest.length + y.length:
            raise AffcharError("length additivity fails from the shortest element")
    gens = [integral.coxeter.generator(i) for i in integral.zero_simple_indices()]
    return gens, shortest, longest


def subsystem_length_by_inversions(
    integral: IntegralSystem, w: CoxeterElement, height: int
) -> int:
    """|w Delta_{1,+} cap Delta_{1,-}| counted inside the enumeration window."""
    count = 0
    for root in integral.positive_roots:
        if root.height > height:
            continue
        image = w.apply(root.coords)
        if all(v <= 0 for v in image) and any(image):
            count += 1
    return count
