"""Exact convex polytopes, normal fans, polytope cobordisms and LVM data.

Everything is computed by homogenizing: a polytope is the slice at height 1
of the cone over ``(v, 1)``, so facets and faces come from the same double
description kernel as the fans.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactreal import (
    ExactMatrix,
    QFanError,
    RealField,
    dot,
    field_of,
    kernel_rows,
    num,
    rank_of,
    scalar_from_json,
    scalar_to_json,
    sign,
)
from .fan_core import Calibration, Cone, NotPointed, QuantumFan, extreme_rays, normalize_ray


class DegeneratePolytope(QFanError):
    code = "DegeneratePolytope"


class Unbounded(QFanError):
    code = "Unbounded"


class EmptyPolytope(QFanError):
    code = "EmptyPolytope"


class NotAFacet(QFanError):
    code = "NotAFacet"


class FacetsIntersect(QFanError):
    code = "FacetsIntersect"


class NotElementary(QFanError):
    code = "NotElementary"


class EmptySlice(QFanError):
    code = "EmptySlice"


class NotAdmissible(QFanError):
    code = "NotAdmissible"


class InvalidIndex(QFanError):
    code = "InvalidIndex"


@dataclass(frozen=True)
class Facet:
    normal: tuple
    offset: object
    vertices: frozenset

    def value(self, x) -> object:
        """normal . x - offset, nonnegative on the polytope."""
        return dot(self.normal, x) - self.offset


class Polytope:
    """Convex hull of finitely many exact points.

    ``facets`` are inner normals with offsets (normal . x >= offset); when the
    polytope is not full-dimensional they are only defined modulo
    ``equations``.
    """

    def __init__(self, points: Iterable[Sequence]):
        pts = []
        for p in points:
            v = tuple(num(x) for x in p)
            if v not in pts:
                pts.append(v)
        if not pts:
            raise EmptyPolytope("a polytope needs at least one point")
        self.ambient_dim = len(pts[0])
        lifted = Cone([v + (Fraction(1),) for v in pts])
        keep = lifted.extremal_positions() if len(pts) > 1 else [0]
        self.vertices = [pts[i] for i in keep]
        self._cone = Cone([v + (Fraction(1),) for v in self.vertices])
        self.dim = self._cone.dim - 1
        self.field = field_of(x for v in self.vertices for x in v)
        self._facets = None

    @classmethod
    def from_inequalities(cls, A: Sequence[Sequence], b: Sequence, equalities: Sequence[Sequence] = (), eq_rhs: Sequence = ()) -> "Polytope":
        """{x : A x >= b, E x = f}; raises when unbounded or empty."""
        rows = [tuple(num(x) for x in r) for r in A]
        rhs = [num(x) for x in b]
        for r, c in zip(equalities, eq_rhs):
            r = tuple(num(x) for x in r)
            rows += [r, tuple(-x for x in r)]
            rhs += [num(c), -num(c)]
        D = len(rows[0])
        cons = [r + (-c,) for r, c in zip(rows, rhs)]
        cons.append(tuple([Fraction(0)] * D + [Fraction(1)]))
        try:
            rays = extreme_rays(cons, D + 1)
        except NotPointed as exc:
            raise Unbounded("inequalities do not bound a polytope") from exc
        pts = []
        for r in rays:
            if r[-1] == 0:
                raise Unbounded("inequalities admit a recession direction", [scalar_to_json(x) for x in r[:-1]])
            pts.append(tuple(x / r[-1] for x in r[:-1]))
        if not pts:
            raise EmptyPolytope("inequalities are infeasible")
        return cls(pts)

    # -- H-representation
    @property
    def facets(self) -> list:
        if self._facets is None:
            out = []
            for n in self._cone.normals:
                a, beta = n[:-1], n[-1]
                verts = frozenset(i for i, v in enumerate(self.vertices) if dot(a, v) + beta == 0)
                if len(verts) == len(self.vertices):
                    continue
                out.append(Facet(tuple(a), -beta, verts))
            out.sort(key=lambda f: sorted(f.vertices))
            self._facets = out
        return self._facets

    @property
    def equations(self) -> list:
        """Affine hull as (a, c) pairs with a . x = c."""
        return [(tuple(e[:-1]), -e[-1]) for e in self._cone.equations]

    def contains(self, x: Sequence) -> bool:
        x = tuple(num(v) for v in x)
        return self._cone.contains(x + (Fraction(1),))

    def faces(self) -> list:
        """Nonempty faces as vertex-index sets."""
        faces = [frozenset(f) for f in self._cone.faces() if f]
        return sorted(faces, key=lambda s: (len(s), sorted(s)))

    def face_dim(self, face: Iterable[int]) -> int:
        pts = [self.vertices[i] + (Fraction(1),) for i in face]
        return rank_of(pts, self.ambient_dim + 1) - 1 if pts else -1

    def edges(self) -> list:
        return [f for f in self.faces() if len(f) == 2 and self.face_dim(f) == 1]

    def vertex_facets(self, i: int) -> list:
        return [k for k, f in enumerate(self.facets) if i in f.vertices]

    def is_simple(self) -> bool:
        return all(len(self.vertex_facets(i)) == self.dim for i in range(len(self.vertices)))

    def non_simple_vertices(self) -> list:
        return [i for i in range(len(self.vertices)) if len(self.vertex_facets(i)) != self.dim]

    def f_vector(self) -> tuple:
        counts = [0] * (self.dim + 1)
        for f in self.faces():
            counts[self.face_dim(f)] += 1
        return tuple(counts)

    def facet_index(self, ident) -> int:
        """Facet position from an index or an inner normal."""
        if isinstance(ident, int):
            if not 0 <= ident < len(self.facets):
                raise NotAFacet("facet index out of range", ident)
            return ident
        target = normalize_ray([num(x) for x in ident])
        for k, f in enumerate(self.facets):
            if normalize_ray(f.normal) == target:
                return k
        raise NotAFacet("no facet has this inner normal", [scalar_to_json(num(x)) for x in ident])

    def facet_polytope(self, ident, drop_axis: int | None = None) -> "Polytope":
        f = self.facets[self.facet_index(ident)]
        pts = [self.vertices[i] for i in sorted(f.vertices)]
        if drop_axis is not None:
            pts = [v[:drop_axis] + v[drop_axis + 1:] for v in pts]
        return Polytope(pts)

    def __repr__(self):
        return f"Polytope(dim={self.dim}, vertices={len(self.vertices)}, facets={len(self.facets)})"

    def to_json(self) -> dict:
        return {
            "field": None if self.field.is_rational else self.field.to_json(),
            "vertices": [[scalar_to_json(x) for x in v] for v in self.vertices],
        }

    @classmethod
    def from_json(cls, obj) -> "Polytope":
        field = RealField.from_json(obj.get("field"))
        return cls([[scalar_from_json(x, field) for x in v] for v in obj["vertices"]])


def normal_fan(P: Polytope) -> QuantumFan:
    """Inner normal fan: one column per facet, one maximal cone per vertex."""
    if P.dim != P.ambient_dim or P.dim < 1:
        raise DegeneratePolytope("normal fan needs a full-dimensional polytope", {"dim": P.dim, "ambient": P.ambient_dim})
    cols = [normalize_ray(f.normal) for f in P.facets]
    cones = [P.vertex_facets(i) for i in range(len(P.vertices))]
    return QuantumFan(Calibration(cols, (), d=P.ambient_dim), cones, range(len(cols)))


# ---------------------------------------------------------------------------
# cobordisms


@dataclass
class PolytopeCobordism:
    W: Polytope
    P_facet: int
    Q_facet: int
    interior_vertices: tuple
    kind: str

    @property
    def P_vertices(self) -> frozenset:
        return self.W.facets[self.P_facet].vertices

    @property
    def Q_vertices(self) -> frozenset:
        return self.W.facets[self.Q_facet].vertices

    def swapped(self) -> "PolytopeCobordism":
        return PolytopeCobordism(self.W, self.Q_facet, self.P_facet, self.interior_vertices, self.kind)


def classify_cobordism(W: Polytope, P_id, Q_id) -> PolytopeCobordism:
    p = W.facet_index(P_id)
    q = W.facet_index(Q_id)
    P, Q = W.facets[p], W.facets[q]
    if p == q or P.vertices & Q.vertices:
        raise FacetsIntersect("P and Q share a vertex", sorted(i + 1 for i in P.vertices & Q.vertices))
    interior = tuple(i for i in range(len(W.vertices)) if i not in P.vertices and i not in Q.vertices)
    kind = "trivial" if not interior else "elementary" if len(interior) == 1 else "composite"
    return PolytopeCobordism(W, p, q, interior, kind)


def flip_index(cob: PolytopeCobordism) -> tuple:
    """(edges from the interior vertex to P, edges to Q)."""
    if cob.kind != "elementary":
        raise NotElementary("flip index needs exactly one interior vertex", {"kind": cob.kind})
    v = cob.interior_vertices[0]
    a = b = 0
    for e in cob.W.edges():
        if v not in e:
            continue
        (w,) = e - {v}
        if w in cob.P_vertices:
            a += 1
        elif w in cob.Q_vertices:
            b += 1
    return a, b


def _direction(axis, D: int) -> tuple:
    if isinstance(axis, int):
        return tuple(Fraction(int(i == axis)) for i in range(D))
    return tuple(num(x) for x in axis)


def slice_polytope(W: Polytope, t, axis=-1, drop_axis: bool = True) -> Polytope:
    """W ∩ {u . x = t}; ``axis`` is a coordinate index or a direction u.

    With a coordinate axis and ``drop_axis`` the sliced coordinate is removed.
    """
    D = W.ambient_dim
    if isinstance(axis, int) and axis < 0:
        axis += D
    u = _direction(axis, D)
    t = num(t)
    heights = [dot(u, v) - t for v in W.vertices]
    if not any(sign(h) > 0 for h in heights) or not any(sign(h) < 0 for h in heights):
        raise EmptySlice("hyperplane misses the interior of the polytope", {"t": scalar_to_json(t)})
    pts = [v for v, h in zip(W.vertices, heights) if h == 0]
    for e in W.edges():
        i, j = sorted(e)
        hi, hj = heights[i], heights[j]
        if sign(hi) * sign(hj) < 0:
            lam = hi / (hi - hj)
            pts.append(tuple(a + lam * (b - a) for a, b in zip(W.vertices[i], W.vertices[j])))
    if isinstance(axis, int) and drop_axis:
        pts = [p[:axis] + p[axis + 1:] for p in pts]
    return Polytope(pts)


slice = slice_polytope  # noqa: A001  (public name used by the CLI verb)


def _height_axis(cob: PolytopeCobordism):
    """Coordinate axis orthogonal to P and Q when there is one."""
    nP = cob.W.facets[cob.P_facet].normal
    nz = [i for i, x in enumerate(nP) if x != 0]
    return nz[0] if len(nz) == 1 else None


def catastrophe_polytope(cob: PolytopeCobordism) -> Polytope:
    """Slice of W through its interior vertex, parallel to P."""
    if cob.kind != "elementary":
        raise NotElementary("catastrophe polytope needs an elementary cobordism")
    W = cob.W
    v = W.vertices[cob.interior_vertices[0]]
    axis = _height_axis(cob)
    if axis is not None:
        return slice_polytope(W, v[axis], axis)
    u = W.facets[cob.P_facet].normal
    return slice_polytope(W, dot(u, v), u, drop_axis=False)


def truncate_vertex(C: Polytope, i: int) -> Polytope:
    """Cut vertex i off C by a hyperplane normal to the sum of its facet normals."""
    n = [Fraction(0)] * C.ambient_dim
    for k in C.vertex_facets(i):
        n = [a + b for a, b in zip(n, C.facets[k].normal)]
    base = dot(n, C.vertices[i])
    gaps = [dot(n, w) - base for j, w in enumerate(C.vertices) if j != i]
    eps = min(gaps) / 2
    A = [f.normal for f in C.facets] + [tuple(n)]
    b = [f.offset for f in C.facets] + [base + eps]
    eqs = C.equations
    return Polytope.from_inequalities(A, b, [e[0] for e in eqs], [e[1] for e in eqs])


def transition_polytope(cob: PolytopeCobordism) -> Polytope:
    """Catastrophe polytope with its non-simple vertex truncated.

    When the catastrophe is simple (an index entry equals 1) the transition is
    the facet on the other side.
    """
    C = catastrophe_polytope(cob)
    bad = C.non_simple_vertices()
    if not bad:
        a, _ = flip_index(cob)
        axis = _height_axis(cob)
        side = cob.Q_facet if a == 1 else cob.P_facet
        return cob.W.facet_polytope(side, axis)
    return truncate_vertex(C, bad[0])


# ---------------------------------------------------------------------------
# LVM data


@dataclass
class Admissibility:
    siegel: bool
    weak_hyperbolic: bool
    violating_subset: tuple | None

    @property
    def admissible(self) -> bool:
        return self.siegel and self.weak_hyperbolic

    def to_json(self) -> dict:
        return {
            "siegel": self.siegel,
            "weak_hyperbolic": self.weak_hyperbolic,
            "violating_subset": None if self.violating_subset is None else [i + 1 for i in self.violating_subset],
            "admissible": self.admissible,
        }


def _columns(A) -> list:
    M = A if isinstance(A, ExactMatrix) else ExactMatrix(A)
    return M.columns()


def _nonneg_kernel_rays(cols: Sequence[Sequence], p: int) -> list:
    """Extreme rays of {r >= 0 : sum r_i col_i = 0}."""
    n = len(cols)
    rows = [tuple(c[i] for c in cols) for i in range(p)]
    K = kernel_rows(rows, n) if rows else [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    if not K:
        return []
    m = len(K)
    cons = [tuple(K[a][i] for a in range(m)) for i in range(n)]
    rays = extreme_rays(cons, m)
    return [normalize_ray(tuple(dot([K[a][i] for a in range(m)], z) for i in range(n))) for z in rays]


def zero_in_hull(cols: Sequence[Sequence]) -> bool:
    if not cols:
        return False
    return bool(_nonneg_kernel_rays(cols, len(cols[0])))


def lvm_admissible(A) -> Admissibility:
    cols = _columns(A)
    p = len(cols[0]) if cols else 0
    siegel = zero_in_hull(cols)
    violating = None
    for size in range(1, p + 1):
        for I in itertools.combinations(range(len(cols)), size):
            if zero_in_hull([cols[i] for i in I]):
                violating = I
                break
        if violating:
            break
    return Admissibility(siegel, violating is None, violating)


def lvm_polytope(A) -> Polytope:
    """{r >= 0 : sum A_i r_i = 0, sum r_i = 1} in moment coordinates."""
    adm = lvm_admissible(A)
    if not adm.admissible:
        raise NotAdmissible("matrix violates the Siegel or weak hyperbolicity condition", adm.to_json())
    cols = _columns(A)
    rays = _nonneg_kernel_rays(cols, len(cols[0]))
    pts = []
    for r in rays:
        s = sum(r, Fraction(0))
        pts.append(tuple(x / s for x in r))
    return Polytope(pts)


def surgery_descriptor(a: int, b: int, p: int) -> dict:
    """Sphere/disk bookkeeping of the surgery attached to a flip of index (a, b)."""
    if isinstance(a, PolytopeCobordism):
        raise TypeError("pass the flip index, not the cobordism")
    if a < 1 or b < 1:
        raise InvalidIndex("index entries must be at least 1", {"a": a, "b": b})
    if p < 0:
        raise InvalidIndex("torus rank must be nonnegative", {"p": p})
    torus = f" x (S^1)^{p}" if p else ""
    return {
        "a": a,
        "b": b,
        "p": p,
        "removed": f"S^{2 * a - 1} x D^{2 * b}{torus}",
        "glued": f"D^{2 * a} x S^{2 * b - 1}{torus}",
    }


def cobordism_surgery(cob: PolytopeCobordism, p: int) -> dict:
    a, b = flip_index(cob)
    return surgery_descriptor(a, b, p)

