"""Star subdivisions and weighted blow-ups.

The blow-up of a simplicial cone ``sigma`` at ``alpha = sum w_j h(e_{sigma_j})``
subdivides the fan; the new ray must already be a calibration column
(``extend_calibration`` adds one when it is missing).  Integer weights give an
honest fan morphism, any positive weights give a birational one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, lcm
from typing import Iterable, Sequence

from .exactreal import (
    ExactMatrix,
    QFanError,
    Scalar,
    num,
    parse_rational,
    scalar_to_json,
    sign,
)
from .fan_core import (
    Calibration,
    QuantumFan,
    UnsupportedDimension,
    _maximal,
    _one_based,
    angular_sort,
    cross2,
    is_zero,
    normalize_ray,
    standard_basis,
    support_equal,
    validate_fan,
)
from .fan_maps import (
    BirationalFanMorphism,
    FanMorphism,
    MonomialMap,
    NotSimplicial,
    validate_birational,
    validate_morphism,
)


class CenterNotInCone(QFanError):
    code = "CenterNotInCone"


class IndexNotAvailable(QFanError):
    code = "IndexNotAvailable"


class NonIntegerWeight(QFanError):
    code = "NonIntegerWeight"


class NonPositiveWeight(QFanError):
    code = "NonPositiveWeight"


class WeightMismatch(QFanError):
    code = "WeightMismatch"


class NotRational(QFanError):
    code = "NotRational"


class UnequalSupport(QFanError):
    code = "UnequalSupport"


class BudgetExhausted(QFanError):
    code = "BudgetExhausted"


# ---------------------------------------------------------------------------
# subdivision


def extend_calibration(fan: QuantumFan, vector: Sequence, virtual: bool = True):
    """Add a column for ``vector`` just before the virtual tail.

    Returns ``(new_fan, index)``; labels at or after the insertion point shift
    by one.
    """
    cal = fan.calibration
    n = cal.n
    tail = sorted(cal.virtuals)
    pos = tail[0] if tail and tail == list(range(n - len(tail), n)) else n
    shift = lambda j: j + 1 if j >= pos else j  # noqa: E731
    cols = list(cal.columns)
    cols.insert(pos, tuple(num(x) for x in vector))
    virt = {shift(j) for j in cal.virtuals} | ({pos} if virtual else set())
    new_cal = Calibration(cols, virt, d=cal.d)
    cones = [{shift(j) for j in s} for s in fan.max_cones]
    gens = {shift(j) for j in fan.generator_set}
    return QuantumFan(new_cal, cones, gens), pos


def _minimal_face_containing(fan: QuantumFan, sigma: frozenset, point) -> frozenset:
    cone = fan.cone(sigma)
    best = None
    for f in cone.faces():
        if not f:
            continue
        c = fan.cone(f)
        if c.contains(point) and (best is None or c.dim < fan.cone(best).dim):
            best = f
    return best


def star_subdivision(fan: QuantumFan, alpha_index: int, sigma: Iterable[int]) -> QuantumFan:
    """Subdivide every cone containing the minimal cone tau through alpha.

    Cones not containing tau survive; every cone theta that avoids tau but
    shares a cone with it is coned over alpha.  When alpha spans an existing
    ray the fan is returned unchanged.
    """
    sigma = frozenset(sigma)
    cal = fan.calibration
    k = alpha_index
    if not 0 <= k < cal.n:
        raise IndexNotAvailable("index outside the calibration", k + 1)
    if k in fan.generator_set or any(k in s for s in fan.cones):
        raise IndexNotAvailable("index already used by the fan", k + 1)
    if sigma not in fan.cones:
        raise CenterNotInCone("center is not a cone of the fan", _one_based(sigma))
    alpha = cal.columns[k]
    if is_zero(alpha) or not fan.cone(sigma).contains(alpha):
        raise CenterNotInCone("alpha does not lie in the center cone", {"cone": _one_based(sigma), "alpha": list(alpha)})
    tau = _minimal_face_containing(fan, sigma, alpha)
    if fan.cone(tau).dim == 1:
        return fan
    kept = [c for c in fan.cones if not tau <= c]
    starred = [
        theta | {k}
        for theta in fan.cones
        if not tau <= theta and any((tau | theta) <= c for c in fan.cones)
    ]
    new_cal = cal.with_virtuals(cal.virtuals - {k})
    out = QuantumFan(new_cal, _maximal(kept + starred), fan.generator_set | {k})
    return out


# ---------------------------------------------------------------------------
# blow-up specifications


@dataclass
class BlowupSpec:
    """Blow-up of ``base`` at ``alpha = sum weights[j] * h(e_{center[j]})``.

    ``center`` is an ordered tuple of labels of a simplicial cone; ``new_index``
    is the label k with h(e_k) = alpha.
    """

    base: QuantumFan
    center: tuple
    weights: tuple
    new_index: int

    def __post_init__(self):
        self.center = tuple(self.center)
        self.weights = tuple(num(w) for w in self.weights)
        if len(self.center) != len(self.weights):
            raise WeightMismatch("one weight per center generator is required")
        if any(sign(w) < 0 for w in self.weights):
            raise NonPositiveWeight("weights must be nonnegative", [scalar_to_json(w) for w in self.weights])
        if all(w == 0 for w in self.weights):
            raise NonPositiveWeight("at least one weight must be positive")
        if self.base.cone(self.center).dim != len(self.center):
            raise NotSimplicial("center cone is not simplicial", _one_based(self.center))
        alpha = self.alpha()
        if tuple(self.base.column(self.new_index)) != alpha:
            raise WeightMismatch("h(e_k) differs from the weighted combination", {"k": self.new_index + 1})

    @classmethod
    def create(cls, base: QuantumFan, center: Sequence[int], weights: Sequence, new_index: int | None = None) -> "BlowupSpec":
        """Build a spec, appending the alpha column when ``new_index`` is None."""
        center = tuple(center)
        weights = tuple(num(w) for w in weights)
        if new_index is None:
            alpha = _combination(base, center, weights)
            base, new_index = extend_calibration(base, alpha)
            tail_shift = lambda j: j + 1 if j >= new_index else j  # noqa: E731
            center = tuple(tail_shift(j) for j in center)
        return cls(base, center, weights, new_index)

    def alpha(self) -> tuple:
        return _combination(self.base, self.center, self.weights)

    @property
    def support(self) -> tuple:
        """Positions in ``center`` with nonzero weight (the complement of I)."""
        return tuple(p for p, w in enumerate(self.weights) if w != 0)


def _combination(base: QuantumFan, center, weights) -> tuple:
    d = base.d
    out = [Fraction(0)] * d
    for j, w in zip(center, weights):
        col = base.column(j)
        for r in range(d):
            out[r] = out[r] + w * col[r]
    return tuple(out)


def standard_plane_spec(weights: Sequence, extra_virtual: Sequence = ()) -> BlowupSpec:
    """C_d = Cone(e_1..e_d) with alpha appended as the virtual column d+1."""
    w = [num(x) for x in weights]
    d = len(w)
    cols = standard_basis(d) + [tuple(w)] + [tuple(num(x) for x in c) for c in extra_virtual]
    cal = Calibration(cols, range(d, len(cols)))
    base = QuantumFan(cal, [range(d)])
    return BlowupSpec(base, tuple(range(d)), tuple(w), d)


def blown_up_fan(spec: BlowupSpec) -> QuantumFan:
    return star_subdivision(spec.base, spec.new_index, spec.center)


def natural_blowup_matrix(spec: BlowupSpec) -> ExactMatrix:
    n = spec.base.n
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    k = spec.new_index
    for i in range(n):
        rows[i][k] = Fraction(0)
    for j, w in zip(spec.center, spec.weights):
        rows[j][k] = w
    return ExactMatrix(rows)


def natural_blowup(spec: BlowupSpec) -> FanMorphism:
    """The pair (id, H) with H e_k = sum w_j e_{center_j}; integer weights only."""
    bad = [w for w in spec.weights if not (isinstance(w, Fraction) and w.denominator == 1)]
    if bad:
        raise NonIntegerWeight("natural blow-up needs integer weights", [scalar_to_json(w) for w in bad])
    return FanMorphism(blown_up_fan(spec), spec.base, ExactMatrix.identity(spec.base.d), natural_blowup_matrix(spec))


def is_natural_blowup_valid(spec: BlowupSpec) -> bool:
    """Whether the candidate (id, H) passes fan-morphism validation."""
    m = FanMorphism(blown_up_fan(spec), spec.base, ExactMatrix.identity(spec.base.d), natural_blowup_matrix(spec))
    return validate_morphism(m).ok


def irrational_blowup(spec: BlowupSpec) -> BirationalFanMorphism:
    """(id, id) from the subdivided fan back to the base, with its witness."""
    b = BirationalFanMorphism(blown_up_fan(spec), spec.base, ExactMatrix.identity(spec.base.d), ExactMatrix.identity(spec.base.n))
    rep, w = validate_birational(b)
    b.meta["report"] = rep
    b.meta["witness"] = w
    return b


# ---------------------------------------------------------------------------
# fibers


def minimal_transversals(edges: Iterable[Iterable[int]]) -> list:
    """Inclusion-minimal sets meeting every edge (Berge's incremental method)."""
    trs = [frozenset()]
    for e in edges:
        e = frozenset(e)
        nxt = set()
        for t in trs:
            if t & e:
                nxt.add(t)
            else:
                for x in e:
                    nxt.add(t | {x})
        trs = [t for t in nxt if not any(u < t for u in nxt)]
    return sorted(set(trs), key=lambda s: (len(s), sorted(s)))


@dataclass
class FiberStratum:
    zero_set: frozenset
    free_set: frozenset
    kind: str
    solve_rows: tuple
    solve_cols: tuple
    solve_matrix: tuple
    descriptor: str

    def to_json(self) -> dict:
        return {
            "A": _one_based(self.zero_set),
            "free": _one_based(self.free_set),
            "kind": self.kind,
            "solve_rows": [i + 1 for i in self.solve_rows],
            "solve_cols": [j + 1 for j in self.solve_cols],
            "solve_matrix": [[str(x) for x in r] for r in self.solve_matrix],
            "descriptor": self.descriptor,
        }


def _det(rows) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    sgn, prev = 1, 1
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            sgn = -sgn
        for r in range(c + 1, n):
            for k in range(c + 1, n):
                m[r][k] = (m[r][k] * m[c][c] - m[r][c] * m[c][k]) // prev
        prev = m[c][c]
    return sgn * m[n - 1][n - 1] if n else 1


def _describe(kind: str, sub, rows, cols, d: int, zero: frozenset, names) -> str:
    if kind == "zero":
        free = [j for j in range(d) if j not in zero]
        return f"C^{_one_based(free)} x 0_{_one_based(zero)}"
    w = "(" + ",".join(names[i] for i in rows) + ")"
    parts = []
    if len(rows) == len(cols) and rows:
        det = _det(sub)
        if len(rows) == 1:
            c = sub[0][0]
            body = f"E({names[rows[0]]})" if c == 1 else f"mu_{c} E({names[rows[0]]}/{c})"
        elif det != 0:
            ncomp = abs(det)
            body = f"E(L_A^-1 {w}) [{ncomp} component{'s' if ncomp != 1 else ''}]"
        else:
            body = f"{{z : z^L_A = E{w}}}"
    elif not cols:
        body = "point"
    else:
        body = f"{{z in (C*)^{_one_based(cols)} : z^L_A = E{w}}}"
    parts.append(body)
    if zero:
        parts.append("0")
    return " x ".join(parts)


def _exponent(x) -> int:
    if not isinstance(x, int):
        x = parse_rational(x) if isinstance(x, str) else x
        if not isinstance(x, Fraction) or x.denominator != 1:
            raise ValueError("exponent matrix must have nonnegative integer entries")
        x = int(x)
    if x < 0:
        raise ValueError("exponent matrix must have nonnegative integer entries")
    return x


def fiber_strata(A, nonzero_coords: Iterable[int] | None = None, names: Sequence[str] | None = None) -> list:
    """Maximal strata of the reduced fiber of z -> z^A over an orbit.

    ``nonzero_coords`` lists the target coordinates that are nonzero (None or
    all rows: torus orbit; empty: the origin).  Each stratum is indexed by an
    inclusion-minimal zero set.  An unreachable target yields no strata.
    """
    if isinstance(A, MonomialMap):
        A = A.matrix()
    rows = [[_exponent(x) for x in r] for r in (A.rows if isinstance(A, ExactMatrix) else A)]
    dp, d = len(rows), len(rows[0])
    It = frozenset(range(dp)) if nonzero_coords is None else frozenset(nonzero_coords)
    names = list(names) if names else [f"w{i + 1}" for i in range(dp)]
    if It == frozenset(range(dp)):
        sub = tuple(tuple(r) for r in rows)
        desc = _describe("torus", sub, list(range(dp)), list(range(d)), d, frozenset(), names)
        return [FiberStratum(frozenset(), frozenset(range(d)), "torus", tuple(range(dp)), tuple(range(d)), sub, desc)]
    allowed = frozenset(l for l in range(d) if all(rows[i][l] == 0 for i in It))
    edges = []
    for k in range(dp):
        if k in It:
            continue
        e = frozenset(j for j in allowed if rows[k][j] != 0)
        if not e:
            return []
        edges.append(e)
    kind = "zero" if not It else "mixed"
    out = []
    for zero in minimal_transversals(edges):
        free = frozenset(range(d)) - zero
        srows = tuple(sorted(It))
        scols = tuple(sorted(free))
        sub = tuple(tuple(rows[i][j] for j in scols) for i in srows)
        desc = _describe(kind, sub, list(srows), list(scols), d, zero, names)
        out.append(FiberStratum(zero, free, kind, srows, scols, sub, desc))
    return out


def _check_weights(v: Sequence) -> list:
    v = [num(x) for x in v]
    for x in v:
        if not (isinstance(x, Fraction) and x.denominator == 1):
            raise NonIntegerWeight("reducedness criteria need integer weights", scalar_to_json(x))
        if x <= 0:
            raise NonPositiveWeight("weights must be positive", str(x))
    return [int(x) for x in v]


def _default_chart(n: int, J) -> int:
    return next(i for i in range(n) if i not in J)


def fiber_reduced(v: Sequence, J: Iterable[int], chart: int | None = None) -> bool:
    """Reducedness at a fiber point of chart ``chart`` whose nonzero coordinates are ``J``.

    Positions are 0-based within the support of the weight.  True iff the
    smallest weight over J is 1 (vacuous for empty J) and every weight outside
    J and the chart equals 1.
    """
    w = _check_weights(v)
    J = frozenset(J)
    chart = _default_chart(len(w), J) if chart is None else chart
    if chart in J:
        raise ValueError("the chart coordinate vanishes on the fiber")
    if J and min(w[j] for j in J) != 1:
        return False
    return all(w[k] == 1 for k in range(len(w)) if k not in J and k != chart)


def fiber_reduced_strict(v: Sequence, J: Iterable[int], chart: int | None = None) -> bool:
    """Same as :func:`fiber_reduced` except at the generic point of the chart.

    When every coordinate but the chart is nonzero the minimum is taken over
    all weights, chart included.
    """
    w = _check_weights(v)
    J = frozenset(J)
    chart = _default_chart(len(w), J) if chart is None else chart
    if J == frozenset(range(len(w))) - {chart}:
        return min(w) == 1
    return fiber_reduced(w, J, chart)


def fiber_reduced_analytic(v: Sequence, J: Iterable[int], chart: int | None = None) -> bool:
    """Reducedness of the local ring computed from the ideal directly.

    The fiber ideal at a point with nonzero coordinates J is generated by
    z_i^min(v_i, v_j for j in J) and z_k z_i^v_k for the remaining k.
    """
    w = _check_weights(v)
    J = frozenset(J)
    chart = _default_chart(len(w), J) if chart is None else chart
    m = min([w[chart]] + [w[j] for j in J])
    return m == 1


def blowup_fibers_reduced(v: Sequence) -> bool:
    """Conjunction of :func:`fiber_reduced` over every chart and support set."""
    w = _check_weights(v)
    if len(w) < 2:
        raise ValueError("the criterion needs at least two positive weights")
    for chart in range(len(w)):
        others = [j for j in range(len(w)) if j != chart]
        for r in range(len(others) + 1):
            for J in itertools.combinations(others, r):
                if not fiber_reduced(w, J, chart):
                    return False
    return True


def lcd(values: Iterable) -> int:
    N = 1
    for x in values:
        x = num(x)
        if isinstance(x, Scalar):
            raise NotRational("weight is irrational", scalar_to_json(x))
        N = lcm(N, x.denominator)
    return N


def rational_blowup_fibers_reduced(v: Sequence) -> bool:
    """Rational weights: the chart exponents get multiplied by N, so N > 1 is never reduced."""
    N = lcd(v)
    if N > 1:
        return False
    return blowup_fibers_reduced(v)


def chart_exponents(v: Sequence, chart: int, N: int = 1) -> MonomialMap:
    """Exponents of the chart map z -> (z_l z_i^{N v_l}, z_i^{N v_i}) (times N off the chart)."""
    w = [num(x) for x in v]
    d = len(w)
    rows = []
    for l in range(d):
        r = [0] * d
        if l != chart:
            r[l] = N
        r[chart] = int(N * w[l])
        rows.append(r)
    return MonomialMap(tuple(tuple(x) for x in rows))


# ---------------------------------------------------------------------------
# exceptional divisor


def _chart_data(spec: BlowupSpec, chart: int | None):
    sup = spec.support
    if len(sup) < 2:
        raise ValueError("the blow-up center must have at least two positive weights")
    chart = sup[0] if chart is None else chart
    if chart not in sup:
        raise ValueError("chart must be a position with positive weight")
    return sup, chart


def _sigma_basis_inverse(spec: BlowupSpec) -> ExactMatrix:
    if len(spec.center) != spec.base.d:
        raise NotSimplicial("exceptional divisor needs a full-dimensional simplicial center", _one_based(spec.center))
    return ExactMatrix.from_columns([spec.base.column(j) for j in spec.center]).inverse()


def chart_matrix(spec: BlowupSpec, chart: int) -> ExactMatrix:
    """A_i in center coordinates: e_l -> e_l off the chart, e_i -> alpha."""
    d = len(spec.center)
    cols = standard_basis(d)
    cols[chart] = tuple(spec.weights)
    return ExactMatrix.from_columns(cols)


def exceptional_divisor(spec: BlowupSpec, chart: int | None = None) -> QuantumFan:
    """Quantum projective space glued from the divisor charts.

    Coordinates are those of the support positions other than ``chart``
    (positions in ``spec.center``).  Rays: e_j for those positions (label
    ``center[j]``) and -sum (alpha_m / alpha_i) e_m (label k).
    """
    sup, chart = _chart_data(spec, chart)
    coords = [j for j in sup if j != chart]
    Binv = _sigma_basis_inverse(spec)
    Ainv = chart_matrix(spec, chart).inverse()
    k = spec.new_index
    gi = spec.center[chart]

    def swap(j):
        return gi if j == k else k if j == gi else j

    cols = []
    for j in range(spec.base.n):
        x = Ainv @ (Binv @ spec.base.column(swap(j)))
        cols.append(tuple(x[m] for m in coords))
    virt = spec.base.virtuals - {k}
    cal = Calibration(cols, virt, d=len(coords))
    labels = [spec.center[j] for j in coords] + [k]
    cones = [set(c) for c in itertools.combinations(labels, len(labels) - 1)]
    return QuantumFan(cal, cones, labels)


def transition_formula(spec: BlowupSpec, i: int, j: int) -> ExactMatrix:
    """Matrix of the divisor transition from chart i coordinates to chart j coordinates."""
    sup = spec.support
    a = spec.weights
    src = [m for m in sup if m != i]
    tgt = [m for m in sup if m != j]
    cols = []
    for l in src:
        image = [Fraction(0)] * len(tgt)
        if l != j:
            image[tgt.index(l)] = Fraction(1)
        else:
            for m in tgt:
                image[tgt.index(m)] = -a[m] / a[j]
        cols.append(tuple(image))
    return ExactMatrix.from_columns(cols)


def transition_composite(spec: BlowupSpec, i: int, j: int) -> ExactMatrix:
    """pr_j . A_j^-1 A_i . incl_i, computed from the chart matrices."""
    sup = spec.support
    d = len(spec.center)
    src = [m for m in sup if m != i]
    tgt = [m for m in sup if m != j]
    M = chart_matrix(spec, j).inverse() @ chart_matrix(spec, i)
    cols = []
    for l in src:
        e = [Fraction(0)] * d
        e[l] = Fraction(1)
        x = M @ e
        cols.append(tuple(x[m] for m in tgt))
    return ExactMatrix.from_columns(cols)


# ---------------------------------------------------------------------------
# zig-zags


@dataclass
class ZigzagLegs:
    up: FanMorphism
    down: FanMorphism
    N: int
    H: ExactMatrix

    def dashed(self) -> ExactMatrix:
        """down after the formal inverse of up."""
        return self.down.H @ self.up.H.inverse()


def rational_zigzag(v: Sequence | BlowupSpec) -> ZigzagLegs:
    spec = v if isinstance(v, BlowupSpec) else standard_plane_spec(v)
    N = lcd(spec.weights)
    fine = blown_up_fan(spec)
    scaled_cal = Calibration([tuple(N * x for x in c) for c in fine.calibration.columns], fine.virtuals, d=fine.d)
    scaled = fine.with_calibration(scaled_cal)
    n = spec.base.n
    up = FanMorphism(scaled, fine, ExactMatrix.identity(spec.base.d), ExactMatrix.identity(n) * N)
    H = natural_blowup_matrix(spec)
    down = FanMorphism(scaled, spec.base, ExactMatrix.identity(spec.base.d), H * N)
    return ZigzagLegs(up, down, N, H)


@dataclass
class ZigzagStep:
    kind: str
    label: int
    before: QuantumFan
    after: QuantumFan
    weights: tuple = ()
    morphism: BirationalFanMorphism | None = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "ray": self.label + 1,
            "weights": [scalar_to_json(w) for w in self.weights],
            "fan": self.after.to_json(),
        }


@dataclass
class Zigzag:
    calibration: Calibration
    start: QuantumFan
    end: QuantumFan
    steps: list = field(default_factory=list)

    def fans(self) -> list:
        return [self.start] + [s.after for s in self.steps]


def zigzag_dim2(f1: QuantumFan, f2: QuantumFan) -> Zigzag:
    """Blow-ups (inserting rays of f2) followed by blow-downs (removing rays of f1)."""
    if f1.d != 2 or f2.d != 2:
        raise UnsupportedDimension("zig-zag construction is implemented for d = 2", {"d": f1.d})
    if not support_equal(f1, f2):
        raise UnequalSupport("fans have different supports")
    basis = standard_basis(2)
    cols = list(basis)
    index: dict = {}

    def label_of(v):
        r = normalize_ray(v)
        if r not in index:
            if tuple(v) in cols[:2]:
                index[r] = cols.index(tuple(v))
            else:
                cols.append(tuple(v))
                index[r] = len(cols) - 1
        return index[r]

    rays1 = {normalize_ray(f1.column(j)): f1.column(j) for j in f1.rays()}
    rays2 = {normalize_ray(f2.column(j)): f2.column(j) for j in f2.rays()}
    for v in angular_sort(list(rays1.values()) + [x for r, x in rays2.items() if r not in rays1]):
        label_of(v)
    cal = Calibration(cols, [], d=2)

    def relabel(f: QuantumFan):
        return [{index[normalize_ray(f.column(j))] for j in s} for s in f.max_cones]

    def build(cones) -> QuantumFan:
        used = set().union(*cones) if cones else set()
        virt = frozenset(range(cal.n)) - used - frozenset(range(2))
        return QuantumFan(cal.with_virtuals(virt), cones, used)

    start = build(relabel(f1))
    end = build(relabel(f2))
    z = Zigzag(cal, start, end)
    current = start
    for v in angular_sort([x for r, x in rays2.items() if r not in rays1]):
        k = index[normalize_ray(v)]
        sigma = next(s for s in current.max_cones if current.cone(s).contains(v))
        a, b = sorted(sigma, key=lambda j: angular_sort_key(cal.columns[j], v))
        wa, wb = _planar_weights(cal.columns[a], cal.columns[b], v)
        after = star_subdivision(current, k, sigma)
        after = build([set(s) for s in after.max_cones])
        b_m = BirationalFanMorphism(after, current, ExactMatrix.identity(2), ExactMatrix.identity(cal.n))
        z.steps.append(ZigzagStep("blowup", k, current, after, (wa, wb), b_m))
        current = after
    for r in sorted(set(rays1) - set(rays2), key=lambda r: index[r]):
        k = index[r]
        nbrs = [s for s in current.max_cones if k in s]
        merged = set().union(*nbrs) - {k}
        cones = [set(s) for s in current.max_cones if k not in s] + [merged]
        after = build(cones)
        b_m = BirationalFanMorphism(current, after, ExactMatrix.identity(2), ExactMatrix.identity(cal.n))
        z.steps.append(ZigzagStep("blowdown", k, current, after, (), b_m))
        current = after
    return z


def angular_sort_key(u, v) -> int:
    """0 for the generator clockwise of v, 1 for the counter-clockwise one."""
    return 0 if sign(cross2(u, v)) > 0 else 1


def _planar_weights(a, b, v):
    """Positive (x, y) with v = x a + y b."""
    det = cross2(a, b)
    x = cross2(v, b) / det
    y = cross2(a, v) / det
    return x, y


# ---------------------------------------------------------------------------
# rational approximation


def _round(x, Q: int) -> Fraction:
    if isinstance(x, Scalar):
        return Fraction((x * Q + Fraction(1, 2)).floor(), Q)
    return Fraction(floor(Fraction(x) * Q + Fraction(1, 2)), Q)


DEFAULT_LADDER = (2**4, 2**8, 2**16, 2**32)


def rational_approximation(fan: QuantumFan, ladder: Sequence[int] = DEFAULT_LADDER):
    """Round non-virtual columns until validity and the cone poset are preserved.

    Returns ``(fan, Q)``; Q = 1 means the fan was already rational.
    """
    cal = fan.calibration
    nonvirt = cal.non_virtual()
    if all(not isinstance(x, Scalar) for j in nonvirt for x in cal.columns[j]):
        return fan, 1
    complete = fan.is_complete()
    last = None
    for Q in ladder:
        cols = [tuple(_round(x, Q) for x in c) if j in nonvirt else c for j, c in enumerate(cal.columns)]
        cand = QuantumFan(Calibration(cols, cal.virtuals, d=cal.d), fan.max_cones, fan.generator_set)
        rep = validate_fan(cand)
        if not rep.ok:
            last = {"Q": Q, "failed": "validate_fan", "codes": sorted(rep.codes())}
            continue
        if cand.cones != fan.cones:
            last = {"Q": Q, "failed": "combinatorial_type"}
            continue
        if complete and not cand.is_complete():
            last = {"Q": Q, "failed": "completeness"}
            continue
        return cand, Q
    raise BudgetExhausted("no rung of the ladder preserved the fan", last)
