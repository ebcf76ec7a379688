"""Calibrations, polyhedral cones and quantum fans.

All geometry goes through one routine, :func:`extreme_rays`, an exact double
description method.  A cone stores its generators together with the indices
(labels) they carry in the calibration, so fans can be compared and mapped
combinatorially.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .exactreal import (
    QQ,
    DimensionMismatch,
    ExactMatrix,
    NotInvertible,
    QFanError,
    RealField,
    Scalar,
    _rref,
    dot,
    field_of,
    kernel_rows,
    num,
    rank_of,
    scalar_from_json,
    scalar_to_json,
    sign,
)


class UnsupportedDimension(QFanError):
    code = "UnsupportedDimension"


class NotPointed(QFanError):
    code = "NotPointed"


class UnknownIndex(QFanError):
    code = "UnknownIndex"


class InvalidFan(QFanError):
    code = "InvalidFan"


# ---------------------------------------------------------------------------
# vectors


def vec(v: Iterable) -> tuple:
    return tuple(num(x) for x in v)


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def normalize_ray(v: Sequence) -> tuple:
    """Canonical representative of the ray through ``v``.

    Rational rays become primitive integer vectors; others are scaled so the
    first nonzero entry is +1 or -1.
    """
    lead = next((x for x in v if x != 0), None)
    if lead is None:
        return tuple(Fraction(0) for _ in v)
    if any(isinstance(x, Scalar) for x in v):
        scale = lead if sign(lead) > 0 else -lead
        w = tuple(x / scale for x in v)
        if any(isinstance(x, Scalar) for x in w):
            return w
        v = w
    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(Fraction(x // g) for x in ints)


def same_ray(u: Sequence, v: Sequence) -> bool:
    return normalize_ray(u) == normalize_ray(v)


def cross2(u: Sequence, v: Sequence):
    return u[0] * v[1] - u[1] * v[0]


def _half(v) -> int:
    return 0 if sign(v[1]) > 0 or (v[1] == 0 and sign(v[0]) > 0) else 1


def angle_cmp(u, v) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    return -sign(cross2(u, v))


def angular_sort(vectors: Iterable) -> list:
    """Sort planar vectors counter-clockwise starting from the positive x-axis."""
    return sorted(vectors, key=functools.cmp_to_key(angle_cmp))


# ---------------------------------------------------------------------------
# double description


def extreme_rays(constraints: Sequence[Sequence], k: int) -> list:
    """Extreme rays of {y in R^k : c . y >= 0 for every constraint c}.

    The constraint matrix must have rank ``k`` (the cone is then pointed).
    Rays come back normalized with :func:`normalize_ray`.
    """
    cons = [vec(c) for c in constraints]
    if k == 0:
        return []
    if len(cons) == k:
        # simplicial: the rays are the columns of the inverse
        try:
            Binv = ExactMatrix(cons).inverse()
        except NotInvertible:
            pass
        else:
            return [normalize_ray(Binv.column(j)) for j in range(k)]
    if rank_of(cons, k) < k:
        raise NotPointed("constraint system has a lineality space")
    # choose k independent constraints greedily
    basis_idx: list[int] = []
    for i, c in enumerate(cons):
        if rank_of([cons[j] for j in basis_idx] + [c], k) > len(basis_idx):
            basis_idx.append(i)
            if len(basis_idx) == k:
                break
    B = ExactMatrix([cons[i] for i in basis_idx])
    Binv = B.inverse()
    rays = []
    for j in range(k):
        r = Binv.column(j)
        zeros = frozenset(basis_idx[i] for i in range(k) if i != j)
        rays.append((r, zeros))
    processed = set(basis_idx)
    for i, c in enumerate(cons):
        if i in processed:
            continue
        processed.add(i)
        pos, neg, zero = [], [], []
        for r, z in rays:
            s = sign(dot(c, r))
            if s > 0:
                pos.append((r, z))
            elif s < 0:
                neg.append((r, z))
            else:
                zero.append((r, z | {i}))
        new = list(zero)
        if pos and neg:
            everyone = pos + neg + zero
            for p, zp in pos:
                for q, zq in neg:
                    common = zp & zq
                    if len(common) < k - 2:
                        continue
                    if any(other is not p and other is not q and common <= zo for other, zo in everyone):
                        continue
                    cp, cq = dot(c, p), dot(c, q)
                    r = tuple(cp * b - cq * a for a, b in zip(p, q))
                    new.append((r, common | {i}))
        rays = pos + new
    return [normalize_ray(r) for r, _ in rays]


# ---------------------------------------------------------------------------
# cones


class Cone:
    """Polyhedral cone generated by labelled vectors.

    ``labels`` default to ``0..len(vectors)-1``.  Facet normals are computed
    lazily and live in the span of the cone; ``equations`` cut out that span.
    """

    def __init__(self, vectors: Iterable[Sequence], labels: Iterable | None = None, d: int | None = None):
        self.vectors = tuple(vec(v) for v in vectors)
        self.labels = tuple(labels) if labels is not None else tuple(range(len(self.vectors)))
        if len(self.labels) != len(self.vectors):
            raise DimensionMismatch("one label per generator is required")
        if self.vectors:
            self.d = len(self.vectors[0])
            if any(len(v) != self.d for v in self.vectors):
                raise DimensionMismatch("generators of different lengths")
        elif d is None:
            raise DimensionMismatch("an empty cone needs an explicit dimension")
        else:
            self.d = d
        self._normals = None
        self._faces = None

    # -- structure
    @functools.cached_property
    def dim(self) -> int:
        return rank_of(self.vectors, self.d) if self.vectors else 0

    @functools.cached_property
    def equations(self) -> list:
        if not self.vectors:
            return [tuple(Fraction(int(i == j)) for j in range(self.d)) for i in range(self.d)]
        return kernel_rows(self.vectors, self.d)

    @property
    def normals(self) -> list:
        if self._normals is None:
            self._normals = self._compute_normals()
        return self._normals

    def _compute_normals(self) -> list:
        k = self.dim
        if k == 0:
            return []
        _, pivots = _rref(list(self.vectors), self.d)
        projected = [tuple(v[p] for p in pivots) for v in self.vectors if not is_zero(v)]
        out = []
        for r in extreme_rays(projected, k):
            n = [Fraction(0)] * self.d
            for p, x in zip(pivots, r):
                n[p] = x
            out.append(tuple(n))
        return out

    @functools.cached_property
    def is_pointed(self) -> bool:
        return rank_of(self.normals, self.d) == self.dim if self.normals else self.dim == 0

    @property
    def is_simplicial(self) -> bool:
        return self.dim == len(self.vectors)

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.d

    def contains(self, point: Sequence) -> bool:
        x = vec(point)
        if len(x) != self.d:
            raise DimensionMismatch(f"point of length {len(x)} in a cone of R^{self.d}")
        if any(dot(e, x) != 0 for e in self.equations):
            return False
        return all(sign(dot(n, x)) >= 0 for n in self.normals)

    def contains_relative_interior(self, point: Sequence) -> bool:
        x = vec(point)
        if any(dot(e, x) != 0 for e in self.equations):
            return False
        return all(sign(dot(n, x)) > 0 for n in self.normals)

    def facet_sets(self) -> list:
        """For each facet normal, the labels of generators on that facet."""
        return [frozenset(l for l, v in zip(self.labels, self.vectors) if dot(n, v) == 0) for n in self.normals]

    def extremal_positions(self) -> list:
        """Positions of generators spanning extreme rays, one per ray."""
        if not self.is_pointed:
            raise NotPointed("cone contains a line", list(self.labels))
        seen = []
        out = []
        for i, v in enumerate(self.vectors):
            if is_zero(v):
                continue
            tight = [n for n in self.normals if dot(n, v) == 0]
            tight_rank = rank_of(tight, self.d) if tight else 0
            if tight_rank != self.dim - 1:
                continue
            r = normalize_ray(v)
            if r in seen:
                continue
            seen.append(r)
            out.append(i)
        return out

    def extremal_labels(self) -> frozenset:
        return frozenset(self.labels[i] for i in self.extremal_positions())

    def ray_set(self) -> frozenset:
        return frozenset(normalize_ray(self.vectors[i]) for i in self.extremal_positions())

    def faces(self) -> set:
        """All faces as label sets (including the cone itself and the apex)."""
        if self._faces is None:
            full = frozenset(self.labels)
            facets = self.facet_sets()
            found = {full}
            frontier = [full]
            while frontier:
                nxt = []
                for f in frontier:
                    for s in facets:
                        g = f & s
                        if g not in found:
                            found.add(g)
                            nxt.append(g)
                frontier = nxt
            self._faces = found
        return set(self._faces)

    def face_lattice(self) -> dict:
        """Faces keyed by dimension."""
        out: dict[int, list] = {}
        index = dict(zip(self.labels, self.vectors))
        for f in self.faces():
            dim = rank_of([index[l] for l in f], self.d) if f else 0
            out.setdefault(dim, []).append(f)
        return {k: sorted(v, key=sorted) for k, v in sorted(out.items())}

    def __repr__(self):
        return f"Cone(labels={list(self.labels)}, dim={self.dim})"


def cone_contains(cone: Cone, point: Sequence) -> bool:
    return cone.contains(point)


def cone_intersection(a: Cone, b: Cone, candidates: dict | None = None) -> Cone:
    """a ∩ b by double description.

    Output rays are relabelled from ``candidates`` (a map label -> vector) or
    from the generators of ``a`` and ``b`` when a ray matches one of them up
    to positive scaling; unmatched rays get label ``None``.
    """
    if a.d != b.d:
        raise DimensionMismatch("cones live in different ambient spaces")
    d = a.d
    eqs = list(a.equations) + list(b.equations)
    K = kernel_rows(eqs, d) if eqs else [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]
    r = len(K)
    if r == 0:
        return Cone([], [], d=d)
    normals = list(a.normals) + list(b.normals)
    cons = [tuple(dot(n, kv) for kv in K) for n in normals]
    rays_z = extreme_rays(cons, r) if cons else None
    if rays_z is None:
        raise NotPointed("intersection contains a line")
    rays = [normalize_ray(tuple(dot([kv[i] for kv in K], z) for i in range(d))) for z in rays_z]
    pool = dict(candidates) if candidates else {}
    for l, v in itertools.chain(zip(a.labels, a.vectors), zip(b.labels, b.vectors)):
        pool.setdefault(l, v)
    lookup = {}
    for l, v in pool.items():
        if not is_zero(v):
            lookup.setdefault(normalize_ray(v), l)
    labels = [lookup.get(r) for r in rays]
    return Cone(rays, labels, d=d)


# ---------------------------------------------------------------------------
# calibrations and fans


class Calibration:
    """Columns ``h(e_j)`` (each a length-d vector) plus the virtual index set."""

    def __init__(self, columns: Iterable[Sequence], virtuals: Iterable[int] = (), d: int | None = None):
        self.columns = tuple(vec(c) for c in columns)
        self.n = len(self.columns)
        self.d = len(self.columns[0]) if self.columns else (d or 0)
        if any(len(c) != self.d for c in self.columns):
            raise DimensionMismatch("calibration columns of different lengths")
        self.virtuals = frozenset(virtuals)
        bad = [j for j in self.virtuals if not 0 <= j < self.n]
        if bad:
            raise UnknownIndex("virtual index out of range", [j + 1 for j in bad])
        self.field = field_of(x for c in self.columns for x in c)

    def matrix(self) -> ExactMatrix:
        return ExactMatrix.from_columns(self.columns) if self.columns else ExactMatrix.zeros(self.d, 0)

    def is_standard(self) -> bool:
        if self.n < self.d:
            return False
        for i in range(self.d):
            if self.columns[i] != tuple(Fraction(int(i == j)) for j in range(self.d)):
                return False
        m = len(self.virtuals)
        return self.virtuals == frozenset(range(self.n - m, self.n))

    def non_virtual(self) -> list:
        return [j for j in range(self.n) if j not in self.virtuals]

    def rank(self) -> int:
        return rank_of(self.columns, self.d) if self.columns else 0

    def non_virtual_rank(self) -> int:
        cols = [self.columns[j] for j in self.non_virtual()]
        return rank_of(cols, self.d) if cols else 0

    def with_virtuals(self, virtuals: Iterable[int]) -> "Calibration":
        return Calibration(self.columns, virtuals, d=self.d)

    def __eq__(self, other):
        return isinstance(other, Calibration) and (self.columns, self.virtuals, self.d) == (other.columns, other.virtuals, other.d)

    def __hash__(self):
        return hash((self.columns, self.virtuals))

    def __repr__(self):
        return f"Calibration(d={self.d}, n={self.n}, virtuals={sorted(j + 1 for j in self.virtuals)})"

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "columns": [[scalar_to_json(x) for x in c] for c in self.columns],
            "virtuals": sorted(j + 1 for j in self.virtuals),
        }

    @classmethod
    def from_json(cls, obj, field: RealField = QQ) -> "Calibration":
        cols = [[scalar_from_json(x, field) for x in c] for c in obj["columns"]]
        if "n" in obj and obj["n"] != len(cols):
            raise DimensionMismatch("declared n does not match the column count")
        d = obj.get("d")
        if cols and d is not None and any(len(c) != d for c in cols):
            raise DimensionMismatch("declared d does not match the column length")
        return cls(cols, [j - 1 for j in obj.get("virtuals", [])], d=d)


def _maximal(sets: Iterable[frozenset]) -> list:
    sets = sorted(set(sets), key=lambda s: (-len(s), sorted(s)))
    out: list[frozenset] = []
    for s in sets:
        if not any(s < t for t in out):
            out.append(s)
    return sorted(out, key=sorted)


class QuantumFan:
    """A fan of cones indexed by calibration labels, with its generator set.

    ``cones`` may list only maximal cones; faces are added unless
    ``close_faces`` is false (used to test face-closure validation).
    """

    def __init__(self, calibration: Calibration, cones: Iterable[Iterable[int]], generator_set: Iterable[int] | None = None, close_faces: bool = True):
        self.calibration = calibration
        listed = [frozenset(c) for c in cones]
        self.max_cones = _maximal(listed)
        self._cache: dict = {}
        self._close = close_faces
        if close_faces:
            allc = {frozenset()}
            for s in self.max_cones:
                if all(0 <= j < calibration.n for j in s):
                    allc |= self.cone(s).faces()
                else:
                    allc.add(s)
            self.cones = frozenset(allc)
        else:
            self.cones = frozenset(listed) | {frozenset()}
        if generator_set is None:
            generator_set = set().union(*self.max_cones) if self.max_cones else set()
        self.generator_set = frozenset(generator_set)

    @classmethod
    def from_columns(cls, columns, cones, virtuals=(), generator_set=None) -> "QuantumFan":
        return cls(Calibration(columns, virtuals), cones, generator_set)

    @property
    def d(self) -> int:
        return self.calibration.d

    @property
    def n(self) -> int:
        return self.calibration.n

    @property
    def virtuals(self) -> frozenset:
        return self.calibration.virtuals

    @property
    def field(self) -> RealField:
        return self.calibration.field

    def column(self, j: int) -> tuple:
        return self.calibration.columns[j]

    def cone(self, labels: Iterable[int]) -> Cone:
        key = frozenset(labels)
        c = self._cache.get(key)
        if c is None:
            ordered = sorted(key)
            c = Cone([self.calibration.columns[j] for j in ordered], ordered, d=self.d)
            self._cache[key] = c
        return c

    def rays(self) -> frozenset:
        """Labels spanning the 1-dimensional cones."""
        return frozenset(next(iter(s)) for s in self.cones if len(s) == 1 and not is_zero(self.column(next(iter(s)))))

    def cones_of_dim(self, k: int) -> list:
        return sorted((s for s in self.cones if self.cone(s).dim == k), key=sorted)

    def is_simplicial(self) -> bool:
        return all(self.cone(s).is_simplicial for s in self.max_cones)

    def is_pure(self) -> bool:
        return all(self.cone(s).dim == self.d for s in self.max_cones)

    def support_contains(self, x: Sequence) -> bool:
        return any(self.cone(s).contains(x) for s in self.max_cones)

    def is_complete(self) -> bool:
        """Pure of full dimension with every codimension-1 cone in exactly two maximal cones."""
        if not self.max_cones or not self.is_pure():
            return False
        if self.d == 0:
            return True
        count: dict = {}
        for s in self.max_cones:
            for f in self.cone(s).faces():
                if self.cone(f).dim == self.d - 1:
                    count[f] = count.get(f, 0) + 1
        return bool(count) and all(v == 2 for v in count.values())

    def with_calibration(self, calibration: Calibration) -> "QuantumFan":
        return QuantumFan(calibration, self.max_cones, self.generator_set)

    def label_poset(self) -> frozenset:
        return frozenset(self.cones)

    def __repr__(self):
        return f"QuantumFan(d={self.d}, n={self.n}, max_cones={[sorted(j + 1 for j in s) for s in self.max_cones]})"

    def to_json(self) -> dict:
        return {
            "field": None if self.field.is_rational else self.field.to_json(),
            "calibration": self.calibration.to_json(),
            "generator_set": sorted(j + 1 for j in self.generator_set),
            "cones": [sorted(j + 1 for j in s) for s in self.max_cones],
        }

    @classmethod
    def from_json(cls, obj) -> "QuantumFan":
        field = RealField.from_json(obj.get("field"))
        cal = Calibration.from_json(obj["calibration"], field)
        gens = obj.get("generator_set")
        return cls(cal, [[j - 1 for j in c] for c in obj["cones"]], None if gens is None else [j - 1 for j in gens])


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    witness: object = None

    def to_json(self) -> dict:
        from .exactreal import _jsonable

        return {"code": self.code, "message": self.message, "witness": _jsonable(self.witness)}


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def codes(self) -> set:
        return {v.code for v in self.violations}

    def add(self, code: str, message: str, witness=None):
        self.violations.append(Violation(code, message, witness))

    def warn(self, code: str, message: str, witness=None):
        self.warnings.append(Violation(code, message, witness))

    def extend(self, other: "ValidationReport"):
        self.violations.extend(other.violations)
        self.warnings.extend(other.warnings)

    def to_json(self) -> dict:
        return {
            "valid": self.ok,
            "violations": [v.to_json() for v in self.violations],
            "warnings": [w.to_json() for w in self.warnings],
        }


def _one_based(s) -> list:
    return sorted(j + 1 for j in s)


def validate_fan(fan: QuantumFan) -> ValidationReport:
    rep = ValidationReport()
    cal = fan.calibration
    d = cal.d
    bad = sorted({j for s in fan.cones for j in s if not 0 <= j < cal.n} | {j for j in fan.generator_set if not 0 <= j < cal.n})
    if bad:
        rep.add("UnknownIndex", "cone or generator index outside the calibration", [j + 1 for j in bad])
        return rep
    if cal.non_virtual_rank() < d:
        rep.add("CalibrationRankDeficient", "non-virtual columns do not span R^d", {"rank": cal.non_virtual_rank(), "d": d})
    if not cal.is_standard():
        rep.warn("NonStandardCalibration", "calibration is not in standard form")

    good_cones = []
    for s in fan.max_cones:
        virt = s & cal.virtuals
        if virt:
            rep.add("VirtualGeneratorInCone", "cone uses a virtual generator", {"cone": _one_based(s), "virtual": _one_based(virt)})
        zeros = [j for j in s if is_zero(cal.columns[j])]
        if zeros:
            rep.add("ZeroGenerator", "cone generator maps to zero", {"cone": _one_based(s), "index": _one_based(zeros)})
            continue
        c = fan.cone(s)
        if not c.is_pointed:
            rep.add("StrongConvexityViolated", "cone contains a line", {"cone": _one_based(s)})
            continue
        ext = c.extremal_labels()
        if ext != s:
            rep.add("RedundantGenerator", "generator does not span its own extreme ray", {"cone": _one_based(s), "redundant": _one_based(s - ext)})
        good_cones.append(s)

    if not fan._close:
        for s in list(fan.cones):
            if not s or not all(0 <= j < cal.n for j in s):
                continue
            c = fan.cone(s)
            if not c.is_pointed:
                continue
            for f in c.faces():
                if f not in fan.cones:
                    rep.add("FaceClosureViolated", "a face of a listed cone is missing", {"cone": _one_based(s), "face": _one_based(f)})
                    break

    # intersection closure, compared by ray sets
    by_rays: dict = {}
    for s in fan.cones:
        if all(not is_zero(cal.columns[j]) for j in s):
            c = fan.cone(s)
            if c.is_pointed:
                by_rays.setdefault(c.ray_set(), []).append(s)
    for s, t in itertools.combinations(good_cones, 2):
        inter = cone_intersection(fan.cone(s), fan.cone(t))
        matches = by_rays.get(frozenset(normalize_ray(v) for v in inter.vectors), [])
        if not matches:
            rep.add("IntersectionClosureViolated", "intersection of two cones is not a cone of the fan", {"cones": [_one_based(s), _one_based(t)]})
            continue
        m = min(matches, key=len)
        if m not in fan.cone(s).faces() or m not in fan.cone(t).faces():
            rep.add("IntersectionNotFace", "intersection is listed but is not a face of both cones", {"cones": [_one_based(s), _one_based(t)], "intersection": _one_based(m)})

    rays = fan.rays()
    if fan.generator_set & cal.virtuals:
        rep.add("VirtualInGeneratorSet", "generator set contains a virtual index", _one_based(fan.generator_set & cal.virtuals))
    if fan.generator_set != rays:
        rep.add("GeneratorSetMismatch", "generator set differs from the labels of the 1-cones", {"generator_set": _one_based(fan.generator_set), "rays": _one_based(rays)})
    return rep


# ---------------------------------------------------------------------------
# supports


def _rot90(u):
    return (-u[1], u[0])


def _planar_samples(rays: list) -> list:
    if not rays:
        return []
    ordered = angular_sort(rays)
    samples = list(ordered)
    if len(ordered) == 1:
        u = ordered[0]
        return [u, _rot90(u), (-u[0], -u[1]), (u[1], -u[0])]
    for u, v in zip(ordered, ordered[1:] + ordered[:1]):
        if sign(cross2(u, v)) > 0:
            samples.append((u[0] + v[0], u[1] + v[1]))
        else:
            samples.append(_rot90(u))
    return samples


def support_equal(f1: QuantumFan, f2: QuantumFan) -> bool:
    if f1.d != f2.d:
        raise DimensionMismatch("fans live in different dimensions")
    if f1.d == 2:
        rays = {}
        for f in (f1, f2):
            for s in f.max_cones:
                for j in s:
                    v = f.column(j)
                    if not is_zero(v):
                        rays.setdefault(normalize_ray(v), v)
        samples = _planar_samples(list(rays.values()))
        return all(f1.support_contains(x) == f2.support_contains(x) for x in samples)
    c1, c2 = f1.is_complete(), f2.is_complete()
    if c1 and c2:
        return True
    if c1 != c2:
        return False
    if {f1.cone(s).ray_set() for s in f1.max_cones} == {f2.cone(s).ray_set() for s in f2.max_cones}:
        return True
    raise UnsupportedDimension("support comparison needs d = 2 or complete fans", {"d": f1.d})


def face_lattice(cone: Cone) -> dict:
    return cone.face_lattice()


def standard_basis(d: int) -> list:
    return [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]
