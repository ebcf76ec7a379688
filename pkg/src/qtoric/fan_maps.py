"""Morphisms between quantum fans.

A morphism is a pair ``(L, H)``: ``L`` acts on the ambient real spaces and
``H`` on the generator lattices, with ``h_target . H = L . h_source``.
Birational morphisms only need to be isomorphisms on a common open part; the
largest such part (the witness) is computed, not guessed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exactreal import (
    ExactMatrix,
    NotInvertible,
    QFanError,
    as_matrix,
    kernel_basis,
    sign,
)
from .fan_core import (
    Calibration,
    QuantumFan,
    ValidationReport,
    _one_based,
    cone_intersection,
    normalize_ray,
)


class NonIntegral(QFanError):
    code = "NonIntegral"


class NotContained(QFanError):
    code = "NotContained"


class EmptyWitness(QFanError):
    code = "EmptyWitness"


class ChainMismatch(QFanError):
    code = "ChainMismatch"


class NotSimplicial(QFanError):
    code = "NotSimplicial"


def _is_int(x) -> bool:
    return isinstance(x, Fraction) and x.denominator == 1


def fans_equal(a: QuantumFan, b: QuantumFan) -> bool:
    return a.calibration == b.calibration and a.max_cones == b.max_cones and a.generator_set == b.generator_set


# ---------------------------------------------------------------------------
# plain morphisms


@dataclass
class FanMorphism:
    source: QuantumFan
    target: QuantumFan
    L: ExactMatrix
    H: ExactMatrix

    def __post_init__(self):
        self.L = as_matrix(self.L)
        self.H = as_matrix(self.H)

    def to_json(self) -> dict:
        return {"L": self.L.to_json(), "H": self.H.to_json(), "source": self.source.to_json(), "target": self.target.to_json()}

    @classmethod
    def from_json(cls, obj) -> "FanMorphism":
        src = QuantumFan.from_json(obj["source"])
        tgt = QuantumFan.from_json(obj["target"])
        fld = src.field if not src.field.is_rational else tgt.field
        return cls(src, tgt, ExactMatrix.from_json(obj["L"], fld), ExactMatrix.from_json(obj["H"], fld))


def commutation_defects(source_cal: Calibration, target_cal: Calibration, L: ExactMatrix, H: ExactMatrix) -> list:
    """Columns j where h'(H e_j) differs from L h(e_j), with both sides."""
    hp = target_cal.matrix()
    out = []
    for j in range(source_cal.n):
        left = hp @ H.column(j)
        right = L @ source_cal.columns[j]
        if left != right:
            out.append((j, left, right))
    return out


def validate_morphism(m: FanMorphism) -> ValidationReport:
    """Check integrality, commutation, cone images and virtual respect.

    Virtual respect is read as: virtual source generators land in the span of
    virtual target coordinates, and generators used by source cones land in
    the span of non-virtual target coordinates.
    """
    rep = ValidationReport()
    src, tgt, L, H = m.source, m.target, m.L, m.H
    if L.shape != (tgt.d, src.d):
        rep.add("ShapeMismatch", "L has the wrong shape", {"expected": [tgt.d, src.d], "got": list(L.shape)})
        return rep
    if H.shape != (tgt.n, src.n):
        rep.add("ShapeMismatch", "H has the wrong shape", {"expected": [tgt.n, src.n], "got": list(H.shape)})
        return rep
    bad = [(i + 1, j + 1, H[i, j]) for i in range(H.nrows) for j in range(H.ncols) if not _is_int(H[i, j])]
    if bad:
        rep.add("HNotIntegral", "H has non-integer entries", bad[:5])
    for j, left, right in commutation_defects(src.calibration, tgt.calibration, L, H):
        rep.add("CommutationViolated", "h' H e_j differs from L h(e_j)", {"column": j + 1, "hH": list(left), "Lh": list(right)})
    for s in src.max_cones:
        images = [L @ src.column(j) for j in sorted(s)]
        if not any(all(tgt.cone(t).contains(x) for x in images) for t in tgt.max_cones):
            rep.add("ConeImageNotContained", "image of a cone lies in no target cone", {"cone": _one_based(s)})
    tv = tgt.virtuals
    for j in sorted(src.virtuals):
        leak = [i for i in range(tgt.n) if i not in tv and H[i, j] != 0]
        if leak:
            rep.add("VirtualLeak", "a virtual generator maps outside the virtual target span", {"column": j + 1, "coordinates": _one_based(leak)})
    for j in sorted(set().union(*src.max_cones) if src.max_cones else set()):
        leak = [i for i in tv if H[i, j] != 0]
        if leak:
            rep.add("VirtualLeak", "a cone generator maps onto a virtual target coordinate", {"column": j + 1, "coordinates": _one_based(leak)})
    if not bad:
        rep.warn("VirtualRespectInterpretation", "virtual respect checked as H(Z^I) in Z^I' and cone generators avoiding I'")
    return rep


# ---------------------------------------------------------------------------
# monomial maps


@dataclass(frozen=True)
class MonomialMap:
    """z -> (prod_j z_j^{A[i][j]})_i for a nonnegative integer matrix A."""

    exponents: tuple

    @classmethod
    def from_matrix(cls, A) -> "MonomialMap":
        A = as_matrix(A)
        return cls(tuple(tuple(int(x) for x in r) for r in A.rows))

    def matrix(self) -> ExactMatrix:
        return ExactMatrix(self.exponents)

    def compose(self, inner: "MonomialMap") -> "MonomialMap":
        """self after inner."""
        return MonomialMap.from_matrix(self.matrix() @ inner.matrix())

    def evaluate(self, z: Sequence):
        out = []
        for row in self.exponents:
            v = 1
            for zj, a in zip(z, row):
                v = v * zj**a
            out.append(v)
        return tuple(out)


def _basis_matrix(fan: QuantumFan, cone: Sequence[int]) -> ExactMatrix:
    cone = list(cone)
    if len(cone) != fan.d or fan.cone(cone).dim != fan.d:
        raise NotSimplicial("cone is not maximal simplicial", _one_based(cone))
    return ExactMatrix.from_columns([fan.column(j) for j in cone])


def local_monomial(m: FanMorphism, sigma: Sequence[int], sigma_target: Sequence[int]) -> MonomialMap:
    """Exponent matrix of the chart map U_sigma -> U_sigma'.

    Cones are ordered index sequences; the order fixes the chart coordinates.
    """
    Bs = _basis_matrix(m.source, sigma)
    Bt = _basis_matrix(m.target, sigma_target)
    A = Bt.inverse() @ m.L @ Bs
    for i in range(A.nrows):
        for j in range(A.ncols):
            x = A[i, j]
            if sign(x) < 0:
                raise NotContained("image of the cone leaves the target cone", {"row": i + 1, "col": j + 1, "value": x})
    for i in range(A.nrows):
        for j in range(A.ncols):
            if not _is_int(A[i, j]):
                raise NonIntegral("exponent is not an integer", {"row": i + 1, "col": j + 1, "value": A[i, j]})
    return MonomialMap.from_matrix(A)


# ---------------------------------------------------------------------------
# Gale duality and coordinate patterns


def gale_transform(cal: Calibration) -> ExactMatrix:
    """n x (n-d) matrix whose columns span ker(h)."""
    basis = kernel_basis(cal.matrix())
    if not basis:
        return ExactMatrix.zeros(cal.n, 0)
    return ExactMatrix.from_columns(basis)


@dataclass(frozen=True)
class CoordinatePattern:
    zero_allowed: frozenset
    nonzero_required: frozenset

    def admits(self, zeros: Iterable[int]) -> bool:
        return frozenset(zeros) <= self.zero_allowed

    def to_json(self) -> dict:
        return {"zero_allowed": _one_based(self.zero_allowed), "nonzero_required": _one_based(self.nonzero_required)}


def s_delta(fan: QuantumFan, all_cones: bool = False) -> list:
    """One pattern per maximal cone (or per cone): coordinates that may vanish."""
    cones = sorted(fan.cones, key=lambda s: (len(s), sorted(s))) if all_cones else fan.max_cones
    if not cones:
        cones = [frozenset()]
    full = frozenset(range(fan.n))
    out = []
    for s in cones:
        rays = fan.cone(s).extremal_labels() if s else frozenset()
        out.append(CoordinatePattern(rays, full - rays))
    return out


def s_delta_contains(patterns: Sequence[CoordinatePattern], zeros: Iterable[int]) -> bool:
    """Whether a point whose vanishing coordinates are ``zeros`` lies in the union."""
    return any(p.admits(zeros) for p in patterns)


# ---------------------------------------------------------------------------
# birational morphisms


@dataclass
class Witness:
    source_cones: frozenset
    target_cones: frozenset
    source_rays: frozenset
    target_rays: frozenset
    ray_map: dict
    source_exceptional: frozenset
    target_exceptional: frozenset

    def swapped(self) -> "Witness":
        return Witness(
            self.target_cones,
            self.source_cones,
            self.target_rays,
            self.source_rays,
            {v: k for k, v in self.ray_map.items()},
            self.target_exceptional,
            self.source_exceptional,
        )

    def to_json(self) -> dict:
        return {
            "source_cones": sorted(_one_based(s) for s in self.source_cones),
            "target_cones": sorted(_one_based(s) for s in self.target_cones),
            "source_exceptional": _one_based(self.source_exceptional),
            "target_exceptional": _one_based(self.target_exceptional),
        }


@dataclass
class BirationalFanMorphism:
    source: QuantumFan
    target: QuantumFan
    L: ExactMatrix
    H: ExactMatrix
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.L = as_matrix(self.L)
        self.H = as_matrix(self.H)

    def to_json(self) -> dict:
        return {"L": self.L.to_json(), "H": self.H.to_json(), "source": self.source.to_json(), "target": self.target.to_json()}

    @classmethod
    def from_json(cls, obj) -> "BirationalFanMorphism":
        m = FanMorphism.from_json(obj)
        return cls(m.source, m.target, m.L, m.H)


def _unit_image(H: ExactMatrix, j: int):
    """(i, c) if H e_j = c e_i with c > 0, else None."""
    col = H.column(j)
    nz = [i for i, x in enumerate(col) if x != 0]
    if len(nz) == 1 and sign(col[nz[0]]) > 0:
        return nz[0], col[nz[0]]
    return None


def maximal_witness(b: BirationalFanMorphism) -> Witness:
    src, tgt, L, H = b.source, b.target, b.L, b.H
    ray_map: dict = {}
    for j in src.rays():
        u = _unit_image(H, j)
        if u is None:
            continue
        i, _ = u
        if i not in tgt.rays():
            continue
        if normalize_ray(L @ src.column(j)) != normalize_ray(tgt.column(i)):
            continue
        ray_map[j] = i
    cones = set()
    for s in src.cones:
        if not all(j in ray_map for j in src.cone(s).extremal_labels()):
            continue
        image = frozenset(ray_map[j] for j in s)
        if image in tgt.cones:
            cones.add(s)
    src_rays = frozenset(j for s in cones for j in s)
    image_cones = {frozenset(ray_map[j] for j in s) for s in cones}
    tgt_rays = frozenset(ray_map[j] for j in src_rays)
    return Witness(
        frozenset(cones),
        frozenset(image_cones),
        src_rays,
        tgt_rays,
        {j: ray_map[j] for j in src_rays},
        src.rays() - src_rays,
        tgt.rays() - tgt_rays,
    )


def validate_birational(b: BirationalFanMorphism, require_nonempty: bool = True):
    """Return (report, maximal witness).

    Raises :class:`NotInvertible` when L or H is not invertible and
    :class:`EmptyWitness` when the common part is only the origin although
    both fans have rays.
    """
    L, H = b.L, b.H
    if L.nrows != L.ncols or H.nrows != H.ncols:
        raise NotInvertible("L and H must be square", {"L": list(L.shape), "H": list(H.shape)})
    Hinv = H.inverse()
    L.inverse()
    rep = ValidationReport()
    if H.shape != (b.target.n, b.source.n) or L.shape != (b.target.d, b.source.d):
        rep.add("ShapeMismatch", "matrix shapes do not match the fans")
        return rep, None
    for j, left, right in commutation_defects(b.source.calibration, b.target.calibration, L, H):
        rep.add("CommutationViolated", "h' H e_j differs from L h(e_j)", {"column": j + 1, "hH": list(left), "Lh": list(right)})
    w = maximal_witness(b)
    if require_nonempty and w.source_cones <= {frozenset()} and b.source.rays() and b.target.rays():
        raise EmptyWitness("no common subfan beyond the origin")
    rest_src = frozenset(range(b.source.n)) - w.source_rays
    rest_tgt = frozenset(range(b.target.n)) - w.target_rays
    for j in sorted(rest_src):
        leak = [i for i in range(H.nrows) if i not in rest_tgt and H[i, j] != 0]
        if leak:
            rep.add("VirtualMismatch", "a non-witness generator maps onto a witness ray coordinate", {"column": j + 1, "coordinates": _one_based(leak)})
    for t in sorted(rest_tgt):
        leak = [i for i in range(Hinv.nrows) if i not in rest_src and Hinv[i, t] != 0]
        if leak:
            rep.add("VirtualMismatch", "inverse sends a non-witness target generator onto a witness ray", {"column": t + 1, "coordinates": _one_based(leak)})
    return rep, w


def identity_birational(fan: QuantumFan) -> BirationalFanMorphism:
    return BirationalFanMorphism(fan, fan, ExactMatrix.identity(fan.d), ExactMatrix.identity(fan.n))


def invert_birational(b: BirationalFanMorphism) -> BirationalFanMorphism:
    inv = BirationalFanMorphism(b.target, b.source, b.L.inverse(), b.H.inverse(), dict(b.meta))
    if "witness" in b.meta:
        inv.meta["witness"] = b.meta["witness"].swapped()
    return inv


def compose_birational(b2: BirationalFanMorphism, b1: BirationalFanMorphism) -> BirationalFanMorphism:
    """b2 after b1.  The middle common refinement is stored in ``meta``."""
    if not fans_equal(b1.target, b2.source):
        raise ChainMismatch("target of the first morphism is not the source of the second")
    _, w1 = validate_birational(b1, require_nonempty=False)
    _, w2 = validate_birational(b2, require_nonempty=False)
    middle = b1.target
    refinement = set()
    for s in w1.target_cones:
        for t in w2.source_cones:
            inter = cone_intersection(middle.cone(s), middle.cone(t))
            labels = [l for l in inter.labels if l is not None]
            if len(labels) == len(inter.labels):
                refinement.add(frozenset(labels))
    back = {v: k for k, v in w1.ray_map.items()}
    transported_src = {frozenset(back[j] for j in s) for s in refinement if all(j in back for j in s)}
    transported_tgt = {frozenset(w2.ray_map[j] for j in s) for s in refinement if all(j in w2.ray_map for j in s)}
    out = BirationalFanMorphism(b1.source, b2.target, b2.L @ b1.L, b2.H @ b1.H)
    out.meta["middle_refinement"] = frozenset(refinement)
    out.meta["transported_source"] = frozenset(transported_src)
    out.meta["transported_target"] = frozenset(transported_tgt)
    return out


def transported_cones_compatible(b: BirationalFanMorphism) -> bool:
    """Transported refinement cones lie in the composite's maximal witness."""
    _, w = validate_birational(b, require_nonempty=False)
    src = b.meta.get("transported_source", frozenset())
    return all(s in w.source_cones for s in src)


def exceptional_rays(b: BirationalFanMorphism):
    _, w = validate_birational(b)
    return w.source_exceptional, w.target_exceptional

