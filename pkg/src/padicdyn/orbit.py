"""Invariant p-adic neighbourhoods, vanishing sums, and density probes.

Orbit iteration works modulo p**K: a map with p-integral coefficients
sends the polydisc of points with all coordinate valuations >= s into
itself, and every iterate is certified to stay there and to be congruent
to the start modulo p**s.  When the linear part has unit determinant the
map is a p-adic isometry near the fixed point, checked on sampled pairs
through valuations of differences.

Vanishing sums sum a_i b_i^s are evaluated at working precision; a
candidate zero counts only if it also vanishes at doubled precision.  The
finiteness certificate packages the stabilizing exponent M, the logarithms
c_i = log b_i^M (pairwise distinct exactly when the group generated by the
b_i is torsion-free), and a separating polynomial that strictly dominates
the leading-norm block.

Density probes are exact kernel computations of monomial-evaluation
matrices on orbit samples: an empty kernel at degree d is evidence that no
algebraic relation of degree <= d holds on the orbit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm
from typing import Sequence

from . import ratlinalg
from .arith import fraction_valuation, int_valuation
from .dynamics import (
    AnalyticMap,
    RelationLattice,
    jacobian_at_origin,
    rational_eigenvalues,
    relation_lattice,
)
from .errors import (
    DomainError,
    IntegralityError,
    PrecisionError,
    TorsionError,
)
from .padic import PAdic, padic_log, stabilizing_exponent
from .series import MultiSeries


@dataclass(frozen=True)
class Neighbourhood:
    """The polydisc of points with every coordinate valuation >= level."""

    prime: int
    level: int
    dim: int

    def __post_init__(self):
        if self.level < 1:
            raise DomainError("neighbourhood level must be at least 1")

    def contains(self, point: Sequence[PAdic]) -> bool:
        if len(point) != self.dim:
            return False
        return all(x.valuation >= self.level for x in point)


@dataclass(frozen=True)
class OrbitResult:
    points: tuple[tuple[PAdic, ...], ...]
    neighbourhood: Neighbourhood
    stays_in_neighbourhood: bool
    constant_mod_level: bool
    unit_jacobian: bool
    isometry_pairs_checked: int
    isometry_pairs_skipped: int


def _coefficient_residues(f: AnalyticMap, prime: int, modulus: int) -> list[list[tuple[tuple[int, ...], int]]]:
    out = []
    for comp in f.components:
        terms = []
        for exps, coeff in comp.terms():
            if fraction_valuation(coeff, prime) < 0:
                raise IntegralityError(
                    f"coefficient {coeff} is not {prime}-integral"
                )
            num = coeff.numerator % modulus
            den = pow(coeff.denominator % modulus, -1, modulus)
            terms.append((exps, num * den % modulus))
        out.append(terms)
    return out


def iterate_in_neighbourhood(
    f: AnalyticMap,
    start: Sequence[Fraction | PAdic],
    steps: int,
    neighbourhood: Neighbourhood | None = None,
    precision: int = 32,
) -> OrbitResult:
    """Iterate a p-integral map and certify invariance of the polydisc.

    Every iterate is checked to keep all coordinate valuations >= level and
    to agree with the starting point modulo p**level.  With a unit Jacobian
    determinant, valuations of differences of consecutive distinct points
    are checked to be preserved (local isometry evidence); pairs that are
    indistinguishable at the working precision are skipped and counted.
    """
    if neighbourhood is None:
        raise DomainError("a neighbourhood (prime, level, dim) is required")
    p, s, n = neighbourhood.prime, neighbourhood.level, neighbourhood.dim
    if n != f.n:
        raise DomainError("neighbourhood dimension does not match the map")
    if precision < s:
        raise PrecisionError(f"precision {precision} cannot certify level {s}")
    modulus = p**precision
    coeff_residues = _coefficient_residues(f, p, modulus)

    residues: list[int] = []
    for i, x in enumerate(start):
        if isinstance(x, PAdic):
            if x.prime != p:
                raise DomainError("point prime does not match the neighbourhood")
            value = x.residue(precision)
        else:
            q = Fraction(x)
            if q != 0 and fraction_valuation(q, p) < 0:
                raise DomainError(f"coordinate {i} is not integral")
            value = q.numerator % modulus * pow(q.denominator % modulus, -1, modulus) % modulus
        residues.append(value)
    point = tuple(residues)
    if any(_residue_valuation(x, p, precision) < s for x in point):
        raise DomainError("starting point is outside the neighbourhood")

    det = ratlinalg.det(jacobian_at_origin(f))
    unit_jacobian = det != 0 and fraction_valuation(det, p) == 0

    orbit = [point]
    for _ in range(steps):
        point = _evaluate_residues(coeff_residues, point, modulus)
        orbit.append(point)

    stays = True
    constant = True
    level_mod = p**s
    for pt in orbit:
        for x, x0 in zip(pt, orbit[0]):
            if _residue_valuation(x, p, precision) < s:
                stays = False
            if (x - x0) % level_mod:
                constant = False

    checked = skipped = 0
    if unit_jacobian:
        for a, b, fa, fb in zip(orbit, orbit[1:], orbit[1:], orbit[2:]):
            gap = _pair_valuation(a, b, p, precision)
            if gap >= precision:
                skipped += 1
                continue
            image_gap = _pair_valuation(fa, fb, p, precision)
            if image_gap != gap:
                raise AssertionError(
                    "unit-Jacobian map failed to preserve a difference valuation"
                )
            checked += 1

    points = tuple(
        tuple(_residue_to_padic(x, p, precision) for x in pt) for pt in orbit
    )
    return OrbitResult(
        points=points,
        neighbourhood=neighbourhood,
        stays_in_neighbourhood=stays,
        constant_mod_level=constant,
        unit_jacobian=unit_jacobian,
        isometry_pairs_checked=checked,
        isometry_pairs_skipped=skipped,
    )


def _evaluate_residues(coeff_residues, point: tuple[int, ...], modulus: int) -> tuple[int, ...]:
    powers: list[list[int]] = []
    for x in point:
        powers.append([1, x % modulus])
    out = []
    for terms in coeff_residues:
        total = 0
        for exps, c in terms:
            value = c
            for i, e in enumerate(exps):
                if e:
                    cache = powers[i]
                    while len(cache) <= e:
                        cache.append(cache[-1] * cache[1] % modulus)
                    value = value * cache[e] % modulus
            total = (total + value) % modulus
        out.append(total)
    return tuple(out)


def _residue_valuation(x: int, p: int, precision: int) -> int:
    if x % p**precision == 0:
        return precision
    return int_valuation(x, p)


def _pair_valuation(a: tuple[int, ...], b: tuple[int, ...], p: int, precision: int) -> int:
    return min(_residue_valuation(x - y, p, precision) for x, y in zip(a, b))


def _residue_to_padic(x: int, p: int, precision: int) -> PAdic:
    if x % p**precision == 0:
        return PAdic(p, precision, 0, 0)
    v = int_valuation(x, p)
    return PAdic(p, v, x // p**v, precision - v)


@dataclass(frozen=True)
class SeparatingPolynomial:
    """Product over residue classes avoiding the target unit's class.

    |P(x)| equals |P(target)| exactly when x is congruent to the target
    modulo p**level, and is strictly smaller otherwise; both properties are
    verified on the supplied units.
    """

    coefficients: tuple[int, ...]
    prime: int
    level: int
    target_index: int
    target_abs: Fraction
    verified: bool

    def eval(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc


def separating_polynomial(
    units: Sequence[Fraction], target_index: int, level: int, prime: int
) -> SeparatingPolynomial:
    """Build P(x) = prod over classes b != class(target) of (x - b_lift).

    The level is raised until the supplied units are pairwise distinct
    modulo p**level, so the construction never fails.
    """
    bs = [Fraction(b) for b in units]
    if not 0 <= target_index < len(bs):
        raise DomainError("target index out of range")
    for b in bs:
        if b == 0 or fraction_valuation(b, prime) != 0:
            raise DomainError(f"{b} is not a unit at {prime}")
    if len(set(bs)) != len(bs):
        raise DomainError("units must be pairwise distinct")
    s = max(level, 1)
    while True:
        residues = [_unit_residue(b, prime, s) for b in bs]
        if len(set(residues)) == len(residues):
            break
        s += 1
    modulus = prime**s
    target_residue = residues[target_index]
    coeffs = [1]
    for rep in range(modulus):
        if rep != target_residue:
            coeffs = _poly_mul_linear(coeffs, -rep)
    poly = SeparatingPolynomial(
        coefficients=tuple(coeffs),
        prime=prime,
        level=s,
        target_index=target_index,
        target_abs=Fraction(0),
        verified=False,
    )
    target_abs = _abs(poly.eval(bs[target_index]), prime)
    verified = True
    for i, b in enumerate(bs):
        value = _abs(poly.eval(b), prime)
        if i == target_index or residues[i] == target_residue:
            if value != target_abs:
                verified = False
        elif not value < target_abs:
            verified = False
    return SeparatingPolynomial(
        coefficients=tuple(coeffs),
        prime=prime,
        level=s,
        target_index=target_index,
        target_abs=target_abs,
        verified=verified,
    )


def _unit_residue(b: Fraction, prime: int, s: int) -> int:
    modulus = prime**s
    return b.numerator % modulus * pow(b.denominator % modulus, -1, modulus) % modulus


def _poly_mul_linear(coeffs: list[int], root_negated: int) -> list[int]:
    out = [0] * (len(coeffs) + 1)
    for i, c in enumerate(coeffs):
        out[i] += c * root_negated
        out[i + 1] += c
    return out


def _abs(x: Fraction, prime: int) -> Fraction:
    from .arith import fraction_abs

    return fraction_abs(x, prime)


@dataclass(frozen=True)
class FinitenessCertificate:
    """Data behind the finite-vanishing conclusion for a unit power sum."""

    stabilizing_exponent: int
    log_digits: tuple[str, ...]
    logs_pairwise_distinct: bool
    leading_indices: tuple[int, ...]
    separating: SeparatingPolynomial


class VanishingSumInstance:
    """A finite sum s -> sum a_i b_i^s with distinct units b_i.

    Built from exact rationals so the working precision can be doubled on
    demand.  The units must generate a torsion-free multiplicative group,
    certified exactly through factorization and sign analysis, and
    p-adically by the pairwise-distinct logarithms of b_i^M.
    """

    __slots__ = ("a", "b", "prime", "precision", "M", "logs")

    def __init__(
        self,
        a: Sequence[Fraction],
        b: Sequence[Fraction],
        prime: int,
        precision: int = 24,
    ) -> None:
        a = [Fraction(x) for x in a]
        b = [Fraction(x) for x in b]
        if not a or len(a) != len(b):
            raise DomainError("need matching nonempty coefficient and unit vectors")
        if any(x == 0 for x in a):
            raise DomainError("coefficients must be nonzero")
        if len(set(b)) != len(b):
            raise DomainError("units must be pairwise distinct")
        for x in b:
            if x == 0 or fraction_valuation(x, prime) != 0:
                raise DomainError(f"{x} is not a unit at {prime}")
        lattice = relation_lattice(b)
        if not lattice.torsion_free:
            raise TorsionError("units generate a group with torsion")
        self.a = tuple(a)
        self.b = tuple(b)
        self.prime = prime
        self.precision = precision
        orders = [
            stabilizing_exponent(PAdic.from_rational(x, prime, precision)) for x in b
        ]
        self.M = lcm(*orders)
        logs = []
        for x in b:
            u = PAdic.from_rational(x**self.M, prime, precision)
            logs.append(padic_log(u))
        for i in range(len(logs)):
            for j in range(i + 1, len(logs)):
                if (logs[i] - logs[j]).is_zero():
                    raise PrecisionError(
                        "logarithms collide at the working precision; raise it"
                    )
        self.logs = tuple(logs)

    def evaluate(self, exponent: int, precision: int | None = None) -> PAdic:
        """The sum at one exponent, at the working or a custom precision."""
        prec = precision if precision is not None else self.precision
        total = PAdic.zero(self.prime)
        for coeff, base in zip(self.a, self.b):
            term = PAdic.from_rational(coeff * base**exponent, self.prime, prec)
            total = total + term
        return total


@dataclass(frozen=True)
class VanishingReport:
    solutions: frozenset[int]
    searched_through: int
    certificate: FinitenessCertificate


def vanishing_exponents(inst: VanishingSumInstance, s_max: int) -> VanishingReport:
    """All s in [1, s_max] with sum a_i b_i^s = 0 at the zero-at-precision policy.

    A candidate counts as zero only if the sum vanishes at the working
    precision and again at doubled precision.
    """
    if s_max < 1:
        raise DomainError("horizon must be at least 1")
    p, prec = inst.prime, inst.precision
    modulus = p**prec
    coeff_res = []
    base_res = []
    shift = max(0, -min(fraction_valuation(a, p) for a in inst.a))
    scale = p**shift
    for a, b in zip(inst.a, inst.b):
        scaled = a * scale
        coeff_res.append(
            scaled.numerator % modulus * pow(scaled.denominator % modulus, -1, modulus) % modulus
        )
        base_res.append(_unit_residue(b, p, prec))
    powers = list(base_res)
    found = []
    for s in range(1, s_max + 1):
        total = 0
        for c, bp in zip(coeff_res, powers):
            total = (total + c * bp) % modulus
        if total == 0 and inst.evaluate(s, 2 * prec).is_zero():
            found.append(s)
        powers = [bp * br % modulus for bp, br in zip(powers, base_res)]
    abs_values = [_abs(a, p) for a in inst.a]
    top = max(abs_values)
    leading = tuple(i for i, v in enumerate(abs_values) if v == top)
    separating = separating_polynomial(inst.b, leading[0], 1, p)
    certificate = FinitenessCertificate(
        stabilizing_exponent=inst.M,
        log_digits=tuple(c.digit_string() for c in inst.logs),
        logs_pairwise_distinct=True,
        leading_indices=leading,
        separating=separating,
    )
    return VanishingReport(
        solutions=frozenset(found), searched_through=s_max, certificate=certificate
    )


def interpolation_reduction(
    inst: VanishingSumInstance, samples: Sequence[int], order: int
) -> list[PAdic]:
    """Sliding divided differences of s -> sum a_i b_i^s over the samples.

    Samples must be distinct and congruent modulo the stabilizing exponent;
    order m uses windows of m + 1 nodes.  As the window slides toward a
    p-adic limit point the values approach the m-th derivative data
    sum a_i b_i^(s0) (c_i / M)^m up to m!, which is what forces class sums
    to vanish when the sum vanishes on an infinite set.
    """
    nodes = sorted(set(int(j) for j in samples), reverse=True)
    if len(nodes) != len(samples):
        raise DomainError("sample exponents must be distinct")
    if order < 0:
        raise DomainError("derivative order must be non-negative")
    if len(nodes) < order + 1:
        raise DomainError(f"need at least {order + 1} samples for order {order}")
    residue = nodes[0] % inst.M
    if any(j % inst.M != residue for j in nodes):
        raise DomainError("samples must be congruent modulo the stabilizing exponent")
    out = []
    # slide from the numerically smallest window upward: when the samples
    # approach a limit point through growing prime powers, successive
    # windows are p-adically closer to it, so the outputs converge
    for t in range(len(nodes) - order - 1, -1, -1):
        window = nodes[t : t + order + 1]
        total = PAdic.zero(inst.prime)
        for l, j_l in enumerate(window):
            denom = 1
            for k, j_k in enumerate(window):
                if k != l:
                    denom *= j_l - j_k
            value = inst.evaluate(j_l)
            quotient = value / PAdic.from_rational(denom, inst.prime, inst.precision)
            total = total + quotient
        exhausted = (
            total.unit_digits == 0
            and not total.is_exact_zero()
            and total.valuation <= 0
        )
        if exhausted:
            raise PrecisionError(
                "divided-difference denominators consumed all working digits"
            )
        out.append(total)
    return out


@dataclass(frozen=True)
class RelationProbe:
    """Kernel of the monomial-evaluation matrix on sample points."""

    monomials: tuple[tuple[int, ...], ...]
    kernel: tuple[tuple[Fraction, ...], ...]
    rank: int
    degree: int
    sufficient_points: bool

    def kernel_polynomials(self, trunc: int | None = None) -> list[MultiSeries]:
        nvars = len(self.monomials[0]) if self.monomials else 0
        cap = trunc if trunc is not None else self.degree
        return [
            MultiSeries(nvars, cap, [(m, c) for m, c in zip(self.monomials, vec) if c])
            for vec in self.kernel
        ]

    def contains_relation(self, candidate: dict[tuple[int, ...], Fraction]) -> bool:
        """Whether the candidate polynomial lies in the kernel span."""
        if not self.kernel:
            return not candidate
        index = {m: i for i, m in enumerate(self.monomials)}
        vec = [Fraction(0)] * len(self.monomials)
        for mono, coeff in candidate.items():
            if mono not in index:
                return False
            vec[index[mono]] = Fraction(coeff)
        rows = [list(v) for v in self.kernel]
        before = ratlinalg.rank(rows)
        return ratlinalg.rank(rows + [vec]) == before


def graded_monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree <= degree, graded lexicographic."""

    def exact(prefix: tuple[int, ...], remaining: int, budget: int) -> list[tuple[int, ...]]:
        if remaining == 1:
            return [prefix + (budget,)]
        block: list[tuple[int, ...]] = []
        for e in range(budget, -1, -1):
            block.extend(exact(prefix + (e,), remaining - 1, budget - e))
        return block

    out: list[tuple[int, ...]] = []
    for d in range(degree + 1):
        out.extend(sorted(exact((), nvars, d), reverse=True))
    return out


def relation_probe(points: Sequence[Sequence], degree: int) -> RelationProbe:
    """Exact kernel of polynomial relations of degree <= degree on the points.

    Rational points are eliminated over Q; points with p-adic coordinates
    over Q_p at their working precision, pivoting on the entry of largest
    norm.  An empty kernel is bounded-degree evidence of Zariski density;
    with fewer than C(n + d, d) points a nontrivial kernel is automatic
    and the result is flagged, not an error.
    """
    if not points:
        raise DomainError("need at least one point")
    nvars = len(points[0])
    monos = graded_monomials(nvars, degree)
    padic_mode = any(isinstance(x, PAdic) for x in points[0])
    rows = []
    for pt in points:
        row = []
        if padic_mode:
            for mono in monos:
                term = None
                for v, e in zip(pt, mono):
                    if e:
                        term = v**e if term is None else term * v**e
                row.append(
                    PAdic.from_rational(1, pt[0].prime, pt[0].precision or 1)
                    if term is None
                    else term
                )
        else:
            vals = [Fraction(x) for x in pt]
            for mono in monos:
                term = Fraction(1)
                for v, e in zip(vals, mono):
                    if e:
                        term *= v**e
                row.append(term)
        rows.append(row)
    if padic_mode:
        kernel = _padic_kernel_basis(rows, len(monos))
    else:
        kernel = ratlinalg.kernel_basis(rows, len(monos))
    return RelationProbe(
        monomials=tuple(monos),
        kernel=tuple(tuple(vec) for vec in kernel),
        rank=len(monos) - len(kernel),
        degree=degree,
        sufficient_points=len(points) >= comb(nvars + degree, degree),
    )


def _padic_kernel_basis(rows: list[list[PAdic]], ncols: int) -> list[list[PAdic]]:
    """Kernel over Q_p at working precision, pivoting on maximal norm."""
    work = [list(row) for row in rows]
    nrows = len(work)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        best = None
        for i in range(r, nrows):
            entry = work[i][c]
            if entry.is_zero():
                continue
            if best is None or entry.valuation < work[best][c].valuation:
                best = i
        if best is None:
            continue
        work[r], work[best] = work[best], work[r]
        inv = work[r][c]
        work[r] = [x / inv for x in work[r]]
        for i in range(nrows):
            if i != r and not work[i][c].is_zero():
                factor = work[i][c]
                work[i] = [x - factor * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    prime = rows[0][0].prime
    prec = max(int(x.precision) for x in rows[0] if x.precision != float("inf"))
    one = PAdic.from_rational(1, prime, max(prec, 1))
    zero = PAdic.zero(prime)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [zero] * ncols
        vec[fc] = one
        for i, pc in enumerate(pivots):
            vec[pc] = -work[i][fc]
        basis.append(vec)
    return basis


@dataclass(frozen=True)
class ClosureEstimate:
    """Certified lower bound and finite-sample estimate of orbit-closure dimension."""

    lower_bound: int
    estimated_dimension: int
    consistent: bool
    transform: tuple[tuple[int, ...], ...]
    multipliers: tuple[Fraction, ...]
    probe: RelationProbe
    lattice: RelationLattice


def closure_dimension_estimate(
    eigenvalues: Sequence[Fraction],
    start: Sequence[Fraction],
    samples: int,
    degree: int,
) -> ClosureEstimate:
    """Probe the orbit closure of a diagonal map from a point off the axes.

    The multiplicative-relation lattice gives the certified bound
    rank distinct from the ambient dimension; a unimodular monomial change
    turns relation directions into coordinates with multiplier +-1, whose
    sampled values are constant (or two-valued), while the independent
    directions show no relation of degree <= degree.
    """
    lams = [Fraction(x) for x in eigenvalues]
    pt = [Fraction(x) for x in start]
    n = len(lams)
    if len(pt) != n:
        raise DomainError("start dimension mismatch")
    if any(x == 0 for x in pt):
        raise DomainError("start must avoid the coordinate hyperplanes")
    if samples < 2:
        raise DomainError("need at least two samples")
    lattice = relation_lattice(lams)
    columns = list(lattice.complement) + list(lattice.unsigned_kernel)
    multipliers = []
    for col in columns:
        value = Fraction(1)
        for lam, e in zip(lams, col):
            value *= lam**e
        multipliers.append(value)
    orbit_points = []
    current = list(pt)
    for _ in range(samples):
        orbit_points.append(tuple(current))
        current = [lam * x for lam, x in zip(lams, current)]
    transformed = []
    for point in orbit_points:
        image = []
        for col in columns:
            value = Fraction(1)
            for x, e in zip(point, col):
                value *= x**e
            image.append(value)
        transformed.append(tuple(image))
    probe = relation_probe(transformed, degree)
    free = len(lattice.complement)
    consistent = True
    for j in range(free, n):
        values = {pt_t[j] for pt_t in transformed}
        if multipliers[j] == 1:
            consistent = consistent and len(values) == 1
        else:  # multiplier -1: the coordinate alternates between two values
            consistent = consistent and len({abs(v) for v in values}) == 1
    if free and degree >= 1:
        free_points = [pt_t[:free] for pt_t in transformed]
        free_probe = relation_probe(free_points, degree)
        if free_probe.sufficient_points and free_probe.kernel:
            consistent = False
    estimated = lattice.rank if consistent else min(lattice.rank, n - len(probe.kernel))
    return ClosureEstimate(
        lower_bound=lattice.rank,
        estimated_dimension=estimated,
        consistent=consistent,
        transform=tuple(tuple(c) for c in columns),
        multipliers=tuple(multipliers),
        probe=probe,
        lattice=lattice,
    )


@dataclass(frozen=True)
class UnionClosureComparison:
    equal: bool
    first: RelationProbe
    second: RelationProbe
    indices_first: tuple[int, ...]
    indices_second: tuple[int, ...]


def union_closure_compare(
    f: AnalyticMap,
    sample_points: Sequence[Sequence[Fraction]],
    indices_first: Sequence[int],
    indices_second: Sequence[int],
    degree: int,
) -> UnionClosureComparison:
    """Compare relation kernels of two unions of iterate images of a sample set.

    Requires the eigenvalue group to be torsion-free (exact sign and
    factorization analysis); equality of the kernels across different index
    sets is finite-sample evidence that the closure of the union does not
    depend on the index set.
    """
    eigen = rational_eigenvalues(jacobian_at_origin(f))
    lattice = relation_lattice(eigen.eigenvalues)
    if not lattice.torsion_free:
        raise TorsionError(
            "eigenvalues generate a group with torsion; replace the map by its square"
        )
    s1 = sorted(set(int(i) for i in indices_first))
    s2 = sorted(set(int(i) for i in indices_second))
    if not s1 or not s2 or min(s1) < 0 or min(s2) < 0:
        raise DomainError("index sets must be nonempty sets of non-negative integers")
    horizon = max(s1 + s2)
    union1 = []
    union2 = []
    for pt in sample_points:
        current = tuple(Fraction(x) for x in pt)
        for i in range(horizon + 1):
            if i in s1:
                union1.append(current)
            if i in s2:
                union2.append(current)
            current = f.components.eval(current)
    probe1 = relation_probe(union1, degree)
    probe2 = relation_probe(union2, degree)
    equal = _same_row_space(probe1.kernel, probe2.kernel)
    return UnionClosureComparison(
        equal=equal,
        first=probe1,
        second=probe2,
        indices_first=tuple(s1),
        indices_second=tuple(s2),
    )


def _same_row_space(a: tuple[tuple[Fraction, ...], ...], b: tuple[tuple[Fraction, ...], ...]) -> bool:
    if not a and not b:
        return True
    if bool(a) != bool(b):
        return False
    ra = ratlinalg.rref([list(v) for v in a])[0]
    rb = ratlinalg.rref([list(v) for v in b])[0]
    ra = [row for row in ra if any(row)]
    rb = [row for row in rb if any(row)]
    return ra == rb
