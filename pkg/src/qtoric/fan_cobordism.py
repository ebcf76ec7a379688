"""Cobordisms between quantum fans.

A cobordism is a complete simplicial fan in R^{d+1} whose maximal cones split
into two subfans projecting onto d-dimensional fans, plus exactly one leftover
cone.  The normal form used throughout: both projections share ``L`` (drop the
last coordinate) and ``H`` (delete the two columns spanning +-e_{d+1}).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exactreal import (
    ExactMatrix,
    QFanError,
    as_matrix,
    num,
    rank_of,
    scalar_to_json,
    sign,
    solve_affine_projection,
    squared_distance,
)
from .fan_core import (
    Calibration,
    Cone,
    QuantumFan,
    ValidationReport,
    _one_based,
    is_zero,
    validate_fan,
)
from .fan_maps import BirationalFanMorphism, validate_birational
from .blowup import extend_calibration, star_subdivision


class NotValid(QFanError):
    code = "NotValid"


class NotNormalForm(QFanError):
    code = "NotNormalForm"


class UnionsDiffer(QFanError):
    code = "UnionsDiffer"


class NotInterior(QFanError):
    code = "NotInterior"


class MissingCombinationColumn(QFanError):
    code = "MissingCombinationColumn"


class NotComplete(QFanError):
    code = "NotComplete"


class TrivialBlowup(QFanError):
    code = "TrivialBlowup"


class ChamberLeft(QFanError):
    code = "ChamberLeft"


class VirtualMismatch(QFanError):
    code = "VirtualMismatch"


class OutOfRange(QFanError):
    code = "OutOfRange"


def drop_last(d: int) -> ExactMatrix:
    """The d x (d+1) matrix forgetting the last coordinate."""
    return ExactMatrix([[Fraction(int(i == j)) for j in range(d + 1)] for i in range(d)])


def column_projection(n: int, dropped: Iterable[int]) -> ExactMatrix:
    """0/1 matrix deleting the ``dropped`` coordinates of Z^n, order kept."""
    keep = [j for j in range(n) if j not in set(dropped)]
    return ExactMatrix([[Fraction(int(j == k)) for j in range(n)] for k in keep])


def max_cone_rays(fan: QuantumFan) -> frozenset:
    """Maximal cones as sets of normalized ray directions (label free)."""
    return frozenset(fan.cone(s).ray_set() for s in fan.max_cones)


def same_cones(a: QuantumFan, b: QuantumFan) -> bool:
    return a.d == b.d and max_cone_rays(a) == max_cone_rays(b)


@dataclass
class FanCobordism:
    total: QuantumFan
    sub0: frozenset
    sub1: frozenset
    fan0: QuantumFan
    fan1: QuantumFan
    L0: ExactMatrix
    H0: ExactMatrix
    L1: ExactMatrix
    H1: ExactMatrix
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.sub0 = frozenset(frozenset(s) for s in self.sub0)
        self.sub1 = frozenset(frozenset(s) for s in self.sub1)
        for name in ("L0", "H0", "L1", "H1"):
            setattr(self, name, as_matrix(getattr(self, name)))

    @property
    def d(self) -> int:
        return self.fan0.d

    def side(self, i: int):
        """(subfan, fan, L, H) for side 0 or 1."""
        if i == 0:
            return self.sub0, self.fan0, self.L0, self.H0
        return self.sub1, self.fan1, self.L1, self.H1

    def leftover(self) -> list:
        return sorted((s for s in self.total.max_cones if s not in self.sub0 and s not in self.sub1), key=sorted)

    def is_normal_form(self) -> bool:
        return (
            self.L0 == self.L1
            and self.H0 == self.H1
            and self.L0 == drop_last(self.d)
            and self.fan0.calibration.columns == self.fan1.calibration.columns
        )

    def to_json(self) -> dict:
        return {
            "total": self.total.to_json(),
            "sub0": sorted(_one_based(s) for s in self.sub0),
            "sub1": sorted(_one_based(s) for s in self.sub1),
            "fan0": self.fan0.to_json(),
            "fan1": self.fan1.to_json(),
            "L0": self.L0.to_json(),
            "H0": self.H0.to_json(),
            "L1": self.L1.to_json(),
            "H1": self.H1.to_json(),
        }

    @classmethod
    def from_json(cls, obj) -> "FanCobordism":
        total = QuantumFan.from_json(obj["total"])
        fan0 = QuantumFan.from_json(obj["fan0"])
        fan1 = QuantumFan.from_json(obj["fan1"])
        fld = total.field

        def mat(key, default):
            return ExactMatrix.from_json(obj[key], fld) if key in obj else default

        d = fan0.d
        L = drop_last(d)
        H = column_projection(total.n, _dropped_normal_form(total))
        return cls(
            total,
            [[j - 1 for j in s] for s in obj["sub0"]],
            [[j - 1 for j in s] for s in obj["sub1"]],
            fan0,
            fan1,
            mat("L0", L),
            mat("H0", H),
            mat("L1", L),
            mat("H1", H),
        )


def _dropped_normal_form(total: QuantumFan) -> list:
    """Columns equal to +-e_last, the ones a normal-form H deletes."""
    d1 = total.d
    out = []
    for j, c in enumerate(total.calibration.columns):
        if all(c[i] == 0 for i in range(d1 - 1)) and c[-1] != 0:
            out.append(j)
    return out


# ---------------------------------------------------------------------------
# label transport


def _coordinate_map(H: ExactMatrix):
    """(map j -> i with H e_j = e_i, killed columns) or None if H is not a projection."""
    mapping = {}
    killed = []
    for j in range(H.ncols):
        col = H.column(j)
        nz = [i for i, x in enumerate(col) if x != 0]
        if not nz:
            killed.append(j)
        elif len(nz) == 1 and col[nz[0]] == 1:
            mapping[j] = nz[0]
        else:
            return None
    if sorted(mapping.values()) != list(range(H.nrows)):
        return None
    return mapping, killed


def _image_cone(c: FanCobordism, s: frozenset, L: ExactMatrix) -> Cone:
    vecs = [L @ c.total.column(j) for j in sorted(s)]
    vecs = [v for v in vecs if not is_zero(v)]
    return Cone(vecs, d=L.nrows)


def _lifted_rays(c: FanCobordism, side: int) -> frozenset:
    """Total labels whose H-image is a ray of the side's fan."""
    _, fan, _, H = c.side(side)
    cm = _coordinate_map(H)
    if cm is None:
        return frozenset()
    mapping, _ = cm
    rays = fan.rays()
    return frozenset(j for j, i in mapping.items() if i in rays)


def _neighbors(c: FanCobordism, sigma: frozenset) -> list:
    d1 = c.total.d
    return sorted((t for t in c.total.max_cones if t != sigma and len(t & sigma) == d1 - 1), key=sorted)


# ---------------------------------------------------------------------------
# validation


def validate_cobordism(c: FanCobordism) -> ValidationReport:
    """Pre-cobordism checks, then the cobordism conditions, then ray counts."""
    rep = ValidationReport()
    total = c.total
    d = c.d
    base = validate_fan(total)
    rep.extend(base)
    if not base.ok:
        return rep
    if total.d != d + 1:
        rep.add("DimensionMismatch", "total fan must live one dimension above the sides", {"total": total.d, "d": d})
        return rep
    if not total.is_simplicial():
        rep.add("NotSimplicial", "total fan is not simplicial")
    if not total.is_complete():
        rep.add("NotComplete", "total fan is not complete")
    for i in (0, 1):
        rep.extend(validate_fan(c.side(i)[1]))

    # pre-cobordism
    both = c.sub0 & c.sub1
    if both:
        rep.add("DisjointnessViolated", "a maximal cone belongs to both subfans", sorted(_one_based(s) for s in both))
    stray = (c.sub0 | c.sub1) - set(total.max_cones)
    if stray:
        rep.add("SubfanNotInFan", "subfan cone is not a maximal cone of the total fan", sorted(_one_based(s) for s in stray))
    left = c.leftover()
    if len(left) != 1:
        rep.add("LeftoverCountViolated", "exactly one maximal cone must lie outside both subfans", {"leftover": [_one_based(s) for s in left]})
    for i in (0, 1):
        sub, fan, L, H = c.side(i)
        if L.shape != (d, d + 1) or H.shape != (fan.n, total.n):
            rep.add("ShapeMismatch", f"projection matrices of side {i} have the wrong shape", {"side": i})
            continue
        if L.rank() != d or H.rank() != fan.n:
            rep.add("NotOnto", f"projection of side {i} is not onto", {"side": i})
        hp = fan.calibration.matrix()
        for j in range(total.n):
            left_side = L @ total.column(j)
            right_side = hp @ H.column(j)
            if left_side != right_side:
                rep.add("CommutationViolated", f"L h(e_j) differs from h_{i} H e_j", {"side": i, "column": j + 1})
        cm = _coordinate_map(H)
        hit = set()
        for s in sorted(sub, key=sorted):
            img = _image_cone(c, s, L)
            rays = img.ray_set() if img.is_pointed else None
            match = [t for t in fan.max_cones if fan.cone(t).ray_set() == rays]
            if not match:
                rep.add("ConeNotMapped", f"image of a subfan cone is not a maximal cone of side {i}", {"side": i, "cone": _one_based(s)})
                continue
            hit.add(match[0])
            if cm is not None:
                mapping, _ = cm
                labels = frozenset(mapping[j] for j in s if j in mapping)
                if labels != match[0]:
                    rep.add("LabelTransportMismatch", "H moves labels differently from L moves cones", {"side": i, "cone": _one_based(s)})
        missing = set(fan.max_cones) - hit
        if missing:
            rep.add("SubfanNotOnto", f"some maximal cones of side {i} are not images", {"side": i, "cones": sorted(_one_based(t) for t in missing)})

    # cobordism conditions
    n = total.n
    if c.fan0.n + 2 != n or c.fan1.n + 2 != n:
        rep.add("ColumnCountViolated", "each side needs exactly two columns fewer than the total", {"n": n, "n0": c.fan0.n, "n1": c.fan1.n})
    lift = [_lifted_rays(c, 0), _lifted_rays(c, 1)]
    extra = total.rays() - lift[0] - lift[1]
    for i in (0, 1):
        _, fan, _, H = c.side(i)
        cm = _coordinate_map(H)
        if cm is None or sorted(cm[1]) != sorted(extra) or len(extra) != 2:
            rep.add("HNotCoordinateProjection", f"H_{i} is not the projection deleting the two extra rays", {"side": i, "extra": _one_based(extra)})
            continue
        mapping, _ = cm
        expected = {mapping[j] for j in (total.virtuals | (lift[1 - i] - lift[i])) if j in mapping}
        if set(fan.virtuals) != expected:
            rep.add("VirtualSetMismatch", f"virtual set of side {i} differs from the adjusted total virtual set", {"side": i, "expected": _one_based(expected), "got": _one_based(fan.virtuals)})

    # ray counts by index class
    if len(left) == 1 and rep.ok:
        nb = _neighbors(c, left[0])
        a = sum(t in c.sub0 for t in nb)
        b = sum(t in c.sub1 for t in nb)
        r, r0, r1 = len(total.rays()), len(lift[0]), len(lift[1])
        if a >= 2 and b >= 2:
            good = lift[0] == lift[1] and r == r0 + 2
        elif a == 1 and b != 1:
            good = lift[0] < lift[1] and r == r0 + 3
        elif b == 1 and a != 1:
            good = lift[1] < lift[0] and r == r1 + 3
        else:
            good = True
        if not good:
            rep.add("RayCountViolated", "ray counts do not match the index class", {"a": a, "b": b, "rays": r, "rays0": r0, "rays1": r1})
    return rep


def cobordism_index(c: FanCobordism, check: bool = True) -> tuple:
    """(a, b): neighbours of the leftover cone lying in each subfan."""
    if check:
        rep = validate_cobordism(c)
        if not rep.ok:
            raise NotValid("cobordism does not validate", sorted(rep.codes()))
    left = c.leftover()
    if len(left) != 1:
        raise NotValid("no unique leftover cone", [_one_based(s) for s in left])
    nb = _neighbors(c, left[0])
    a = sum(t in c.sub0 for t in nb)
    b = sum(t in c.sub1 for t in nb)
    if a + b != c.d + 1 or len(nb) != c.d + 1:
        raise NotValid("leftover cone neighbours do not split into the two subfans", {"a": a, "b": b})
    return a, b


def ray_counts(c: FanCobordism) -> dict:
    return {"total": len(c.total.rays()), "side0": len(_lifted_rays(c, 0)), "side1": len(_lifted_rays(c, 1))}


# ---------------------------------------------------------------------------
# catastrophe and transition


def _require_normal_form(c: FanCobordism):
    if not (c.L0 == c.L1 and c.H0 == c.H1 and c.fan0.calibration.columns == c.fan1.calibration.columns):
        raise NotNormalForm("both sides must share L, H and calibration columns")


def _sigma_images(c: FanCobordism, side: int) -> list:
    sub, fan, _, H = c.side(side)
    mapping, _ = _coordinate_map(H)
    sigma = c.leftover()[0]
    return [frozenset(mapping[j] for j in t if j in mapping) for t in _neighbors(c, sigma) if t in sub]


@dataclass
class Catastrophe:
    fan: QuantumFan
    merged: frozenset
    sigma0: list
    sigma1: list


def catastrophe(c: FanCobordism, check: bool = True) -> Catastrophe:
    if check:
        rep = validate_cobordism(c)
        if not rep.ok:
            raise NotValid("cobordism does not validate", sorted(rep.codes()))
    _require_normal_form(c)
    s0, s1 = _sigma_images(c, 0), _sigma_images(c, 1)
    cols = c.fan0.calibration.columns
    g0 = sorted(set().union(*s0))
    g1 = sorted(set().union(*s1))
    c0 = Cone([cols[j] for j in g0], g0)
    c1 = Cone([cols[j] for j in g1], g1)
    if not (all(c0.contains(cols[j]) for j in g1) and all(c1.contains(cols[j]) for j in g0)):
        raise UnionsDiffer("projected neighbourhoods of the leftover cone differ", {"side0": _one_based(g0), "side1": _one_based(g1)})
    merged = c0.extremal_labels()
    cones = [s for s in c.fan0.max_cones if s not in s0] + [merged]
    virt = c.fan0.virtuals & c.fan1.virtuals
    cal = c.fan0.calibration.with_virtuals(virt)
    fan = QuantumFan(cal, cones)
    return Catastrophe(fan, merged, s0, s1)


def catastrophe_fan(c: FanCobordism, check: bool = True) -> QuantumFan:
    return catastrophe(c, check).fan


def _common(fan: QuantumFan, cal: Calibration, extra_virtual: Iterable[int] = ()) -> QuantumFan:
    return QuantumFan(cal.with_virtuals(set(fan.virtuals) | set(extra_virtual)), fan.max_cones, fan.generator_set)


@dataclass
class Transition:
    fan: QuantumFan
    alpha_index: int
    edges: dict
    nodes: dict

    @property
    def subdivision(self) -> list:
        """Maximal cones through the new ray (the subdivided merged cone)."""
        return [s for s in self.fan.max_cones if self.alpha_index in s]


def transition_fan(c: FanCobordism, alpha: Sequence | None = None, check: bool = True) -> Transition:
    """Star subdivision of the catastrophe fan's merged cone at ``alpha``.

    All five fans are placed on one calibration (the alpha column is virtual
    except in the transition fan) so each edge of the diamond is (id, id).
    """
    cat = catastrophe(c, check)
    C = cat.fan
    a, b = len(cat.sigma0), len(cat.sigma1)
    cols = C.calibration.columns
    mcone = C.cone(cat.merged)
    k = None
    if alpha is None:
        if a == 1:
            new = c.fan1.rays() - c.fan0.rays()
            k = min(new) if new else None
        elif b == 1:
            new = c.fan0.rays() - c.fan1.rays()
            k = min(new) if new else None
        if k is None:
            alpha = tuple(sum((cols[j][r] for j in cat.merged), Fraction(0)) for r in range(C.d))
    if k is None:
        alpha = tuple(num(x) for x in alpha)
        if not mcone.contains_relative_interior(alpha):
            raise NotInterior("alpha is not in the relative interior of the merged cone", [scalar_to_json(x) for x in alpha])
        same = [j for j, v in enumerate(cols) if v == alpha and j not in C.generator_set]
        if same:
            k = same[0]
    elif not mcone.contains_relative_interior(cols[k]):
        raise NotInterior("new ray is not interior to the merged cone", {"ray": k + 1})
    if k is None:
        Cx, k = extend_calibration(C, alpha)
        shift = lambda fan: extend_calibration(fan, alpha)[0]  # noqa: E731
        f0, f1 = shift(c.fan0), shift(c.fan1)
    else:
        Cx, f0, f1 = C, c.fan0, c.fan1
        Cx = _common(C, C.calibration, [k])
        f0, f1 = _common(f0, C.calibration, [k] if k not in f0.rays() else []), _common(f1, C.calibration, [k] if k not in f1.rays() else [])
    T = star_subdivision(Cx, k, cat.merged)
    cal = T.calibration.with_virtuals(set())
    nodes = {
        "transition": T,
        "fan0": _common(f0, cal),
        "fan1": _common(f1, cal),
        "catastrophe": Cx,
    }
    d, n = T.d, T.n
    edges = {}
    for name, src, tgt in (
        ("transition->fan0", "transition", "fan0"),
        ("transition->fan1", "transition", "fan1"),
        ("fan0->catastrophe", "fan0", "catastrophe"),
        ("fan1->catastrophe", "fan1", "catastrophe"),
    ):
        m = BirationalFanMorphism(nodes[src], nodes[tgt], ExactMatrix.identity(d), ExactMatrix.identity(n))
        rep, w = validate_birational(m)
        m.meta["report"] = rep
        m.meta["witness"] = w
        edges[name] = m
    return Transition(T, k, edges, nodes)


# ---------------------------------------------------------------------------
# constructions


def _find_combination(base: QuantumFan, alpha: tuple):
    for j in sorted(base.virtuals):
        if tuple(base.column(j)) == alpha:
            return j
    return None


def blowup_cobordism(base: QuantumFan, sigma: Sequence[int], weights: Sequence, new_index: int | None = None, auto_extend: bool = False) -> FanCobordism:
    """Cobordism between ``base`` and its blow-up at sum w_j h(e_{sigma_j}).

    The combination column must be a virtual column of ``base`` (found by value
    or given as ``new_index``); ``auto_extend`` appends it instead.
    """
    sigma = tuple(sigma)
    w = tuple(num(x) for x in weights)
    if len(w) != len(sigma):
        raise QFanError("one weight per generator of the center")
    if not base.is_complete() or not base.is_simplicial():
        raise NotComplete("base must be complete and simplicial")
    if frozenset(sigma) not in base.max_cones:
        raise QFanError("center must be a maximal cone", _one_based(sigma))
    if len(sigma) < 2:
        raise TrivialBlowup("a blow-up needs at least two generators with positive weight")
    if any(sign(x) <= 0 for x in w):
        raise TrivialBlowup("all weights must be positive", [scalar_to_json(x) for x in w])
    d = base.d
    alpha = tuple(sum((x * base.column(j)[r] for x, j in zip(w, sigma)), Fraction(0)) for r in range(d))
    k = new_index if new_index is not None else _find_combination(base, alpha)
    if k is not None and (tuple(base.column(k)) != alpha or k not in base.virtuals):
        raise MissingCombinationColumn("given column is not a virtual column equal to the combination", {"index": k + 1})
    if k is None:
        if not auto_extend:
            raise MissingCombinationColumn("calibration has no virtual column equal to the weighted combination", [scalar_to_json(x) for x in alpha])
        base, k = extend_calibration(base, alpha)
        sigma = tuple(j + 1 if j >= k else j for j in sigma)
    n0 = base.n
    zero, one = Fraction(0), Fraction(1)
    cols = [tuple(base.column(j)) + (zero,) for j in range(n0)]
    cols[k] = tuple(alpha) + (-one,)
    up, down = n0, n0 + 1
    cols.append(tuple([zero] * d) + (one,))
    cols.append(tuple([zero] * d) + (-one,))
    tvirt = set(base.virtuals) - {k}
    scone = frozenset(sigma)
    sub0 = [s | {up} for s in base.max_cones]
    sub1 = [s | {down} for s in base.max_cones if s != scone]
    sub1 += [(scone - {j}) | {down, k} for j in sigma]
    leftover = scone | {k}
    total = QuantumFan(Calibration(cols, tvirt), sub0 + sub1 + [leftover])
    fan1 = star_subdivision(base, k, scone)
    L = drop_last(d)
    H = column_projection(n0 + 2, [up, down])
    out = FanCobordism(total, sub0, sub1, base, fan1, L, H, L, H)
    out.meta["alpha_index"] = k
    out.meta["center"] = sigma
    out.meta["weights"] = w
    return out


def reverse_cobordism(c: FanCobordism) -> FanCobordism:
    """Same total fan with the roles of the two sides exchanged."""
    return FanCobordism(c.total, c.sub1, c.sub0, c.fan1, c.fan0, c.L1, c.H1, c.L0, c.H0, dict(c.meta))


def cobordism_from_polytope(W, P_id, Q_id) -> FanCobordism:
    """Normal-fan cobordism of a polytope cobordism W with P, Q orthogonal to the last axis.

    Side 0 is the normal fan of P, side 1 that of Q.
    """
    from .polytopes import classify_cobordism, normal_fan

    cob = classify_cobordism(W, P_id, Q_id)
    D = W.ambient_dim
    for f in (cob.P_facet, cob.Q_facet):
        nrm = W.facets[f].normal
        if any(x != 0 for x in nrm[:-1]):
            raise NotNormalForm("P and Q must be orthogonal to the last coordinate axis", {"facet": f + 1})
    total = normal_fan(W)
    dropped = [cob.P_facet, cob.Q_facet]
    d = D - 1
    L = drop_last(d)
    H = column_projection(total.n, dropped)
    keep = [j for j in range(total.n) if j not in dropped]
    cols = [L @ total.column(j) for j in keep]
    pos = {j: i for i, j in enumerate(keep)}
    sides = []
    for vertices in (cob.P_vertices, cob.Q_vertices):
        sub = [frozenset(W.vertex_facets(v)) for v in sorted(vertices)]
        cones = [frozenset(pos[j] for j in s if j in pos) for s in sub]
        used = set().union(*cones)
        fan = QuantumFan(Calibration(cols, set(range(len(cols))) - used, d=d), cones)
        sides.append((sub, fan))
    out = FanCobordism(total, sides[0][0], sides[1][0], sides[0][1], sides[1][1], L, H, L, H)
    out.meta["polytope"] = cob
    return out


def normalize_cobordism(c: FanCobordism) -> FanCobordism:
    """Conjugate a cobordism with shared (L, H) into the drop-last normal form.

    The total space is changed by an invertible M with L M^{-1} = drop-last,
    and labels are permuted so H deletes the last two columns in order.
    """
    if not (c.L0 == c.L1 and c.H0 == c.H1):
        raise NotNormalForm("sides do not share L and H")
    L, H = c.L0, c.H0
    d = L.nrows
    rows = list(L.rows)
    for i in range(d + 1):
        e = tuple(Fraction(int(i == j)) for j in range(d + 1))
        if rank_of(rows + [e], d + 1) == d + 1:
            rows.append(e)
            break
    M = ExactMatrix(rows)
    cm = _coordinate_map(H)
    if cm is None:
        raise NotNormalForm("H is not a coordinate projection")
    mapping, killed = cm
    order = sorted(mapping, key=mapping.get) + sorted(killed)
    new_of = {j: p for p, j in enumerate(order)}
    cols = [M @ c.total.column(j) for j in order]
    tvirt = {new_of[j] for j in c.total.virtuals}
    relabel = lambda s: frozenset(new_of[j] for j in s)  # noqa: E731
    total = QuantumFan(Calibration(cols, tvirt), [relabel(s) for s in c.total.max_cones])
    if killed:
        # orient so the first deleted column spans +e_last
        last = cols[len(mapping)][-1]
        if sign(last) < 0:
            flip = ExactMatrix([[Fraction(int(i == j)) * (-1 if i == d else 1) for j in range(d + 1)] for i in range(d + 1)])
            total = QuantumFan(Calibration([flip @ v for v in cols], tvirt), total.max_cones)
    Ln = drop_last(d)
    Hn = column_projection(total.n, range(len(mapping), total.n))
    return FanCobordism(total, [relabel(s) for s in c.sub0], [relabel(s) for s in c.sub1], c.fan0, c.fan1, Ln, Hn, Ln, Hn, dict(c.meta))


# ---------------------------------------------------------------------------
# families and deformations


def slice_family(c: FanCobordism, t, check: bool = True) -> QuantumFan:
    """Fan at height t in [-1, 1]: side 0 below 0, catastrophe at 0, side 1 above.

    Calibrations are taken constant on each open half.
    """
    t = num(t)
    if sign(t + 1) < 0 or sign(t - 1) > 0:
        raise OutOfRange("t must lie in [-1, 1]", scalar_to_json(t))
    if check:
        rep = validate_cobordism(c)
        if not rep.ok:
            raise NotValid("cobordism does not validate", sorted(rep.codes()))
    s = sign(t)
    fan = c.fan0 if s < 0 else c.fan1 if s > 0 else catastrophe_fan(c, check=False)
    rep = validate_fan(fan)
    if not rep.ok:
        raise NotValid("slice fan does not validate", sorted(rep.codes()))
    return fan


def deform_cobordism(c: FanCobordism, new_calibration: Calibration | Sequence, side: int = 0, check: bool = True) -> FanCobordism:
    """Move the side's calibration to ``new_calibration`` and lift to the total fan.

    Each total column is replaced by the nearest point (Euclidean) of the
    L-fiber over the new image column; columns deleted by H are kept.  The
    squared Frobenius distance of the lift is stored in ``meta['frobenius_sq']``.
    """
    sub, fan, L, H = c.side(side)
    cols = new_calibration.columns if isinstance(new_calibration, Calibration) else tuple(tuple(num(x) for x in v) for v in new_calibration)
    if len(cols) != fan.n or any(len(v) != fan.d for v in cols):
        raise QFanError("new calibration has the wrong shape", {"n": fan.n, "d": fan.d})
    moved = [j for j in fan.virtuals if tuple(cols[j]) != tuple(fan.column(j))]
    if moved:
        raise VirtualMismatch("new calibration differs on virtual columns", _one_based(moved))
    if check:
        before = cobordism_index(c)
    cm = _coordinate_map(H)
    if cm is None:
        raise NotNormalForm("H is not a coordinate projection")
    mapping, _ = cm
    new_total_cols = []
    dist = Fraction(0)
    for j in range(c.total.n):
        old = c.total.column(j)
        if j in mapping:
            new = solve_affine_projection(L, list(cols[mapping[j]]), old)
            dist = dist + squared_distance(new, old)
        else:
            new = tuple(old)
        new_total_cols.append(tuple(new))
    total = QuantumFan(Calibration(new_total_cols, c.total.virtuals), c.total.max_cones, c.total.generator_set)
    fans = []
    for i in (0, 1):
        _, f, Li, Hi = c.side(i)
        cmi = _coordinate_map(Hi)
        if cmi is None:
            raise NotNormalForm("H is not a coordinate projection")
        inv = {v: k for k, v in cmi[0].items()}
        fcols = [Li @ new_total_cols[inv[r]] for r in range(f.n)]
        fans.append(QuantumFan(Calibration(fcols, f.virtuals, d=f.d), f.max_cones, f.generator_set))
    out = FanCobordism(total, c.sub0, c.sub1, fans[0], fans[1], c.L0, c.H0, c.L1, c.H1, dict(c.meta))
    out.meta["frobenius_sq"] = dist
    if check:
        rep = validate_cobordism(out)
        if not rep.ok:
            raise ChamberLeft("deformed data no longer forms a cobordism", sorted(rep.codes()))
        if cobordism_index(out, check=False) != before:
            raise ChamberLeft("index changed under deformation")
    return out


def max_cone_count(fan: QuantumFan) -> int:
    return len(fan.max_cones)


def merged_face_counts(c: FanCobordism) -> tuple:
    """Face counts of the merged cone by dimension."""
    cat = catastrophe(c)
    lat = cat.fan.cone(cat.merged).face_lattice()
    return tuple(len(lat.get(k, [])) for k in range(cat.fan.d + 1))

