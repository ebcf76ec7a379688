"""``qfan``: command-line front end over the library.

Every verb prints canonical JSON (or SVG for ``render``).  Exit status is 0 on
success, 1 for unreadable input and 2 when the input is well formed but fails
a domain check.  Errors are printed as ``{"code", "message", "witness"}``.
"""

from __future__ import annotations

import argparse
import ast
import json
import math
import sys
from fractions import Fraction
from typing import Sequence

from .exactreal import (
    QQ,
    ExactMatrix,
    QFanError,
    RealField,
    Scalar,
    _jsonable,
    scalar_from_json,
    scalar_to_json,
    sqrt_field,
    to_float,
)
from .fan_core import (
    Calibration,
    QuantumFan,
    ValidationReport,
    angular_sort,
    is_zero,
    validate_fan,
)
from .fan_maps import FanMorphism, gale_transform, s_delta, validate_birational, validate_morphism
from . import blowup as bl
from . import fan_cobordism as fc
from . import polytopes as pt


class InputError(QFanError):
    code = "InputError"


class UnrenderableDimension(QFanError):
    code = "UnrenderableDimension"


# ---------------------------------------------------------------------------
# exact input parsing

_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def parse_scalar(text, field: RealField | None = None):
    """Exact value of an expression such as ``3/2``, ``1+sqrt(2)`` or ``2*t``.

    ``t`` (or ``theta``) is the generator of ``field``.  Decimal literals are
    refused.
    """
    if isinstance(text, bool):
        raise InputError("booleans are not numbers")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, (Fraction, Scalar)):
        return text
    if isinstance(text, dict):
        return scalar_from_json(text, field or QQ)
    if not isinstance(text, str):
        raise InputError(f"cannot read a number from {text!r}")
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise InputError(f"bad expression {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return Fraction(node.value)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Pow):
            e = ev(node.right)
            if not (isinstance(e, Fraction) and e.denominator == 1):
                raise InputError("exponents must be integers")
            return ev(node.left) ** int(e)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Name) and node.id in ("t", "theta"):
            if field is None or field.is_rational:
                raise InputError("the generator t needs a field")
            return field.gen()
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt" and len(node.args) == 1:
            n = ev(node.args[0])
            if not (isinstance(n, Fraction) and n.denominator == 1 and n >= 0):
                raise InputError("sqrt takes a nonnegative integer")
            r = math.isqrt(int(n))
            return Fraction(r) if r * r == n else sqrt_field(int(n)).gen()
        raise InputError(f"unsupported expression {text!r}")

    try:
        return ev(tree)
    except ZeroDivisionError as exc:
        raise InputError("division by zero") from exc


def parse_list(text: str, field=None) -> list:
    """Comma separated scalars, or a JSON list."""
    text = text.strip()
    if text.startswith("["):
        return [parse_scalar(x if not isinstance(x, float) else _reject_float(x), field) for x in _json_loads(text)]
    return [parse_scalar(x, field) for x in text.split(",") if x.strip()]


def parse_indices(text: str) -> list:
    """1-based comma list to 0-based ints."""
    try:
        vals = json.loads(text) if text.strip().startswith("[") else [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"bad index list {text!r}") from exc
    if any(not isinstance(v, int) or v < 1 for v in vals):
        raise InputError("indices are 1-based positive integers", text)
    return [v - 1 for v in vals]


def _reject_float(x):
    raise InputError(f"floating point value {x!r}; use exact strings")


def _json_loads(text: str):
    try:
        return json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", {"line": exc.lineno, "column": exc.colno}) from exc


def parse_matrix(obj, field=None) -> list:
    if isinstance(obj, str):
        obj = _json_loads(obj)
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise InputError("a matrix is a list of rows")
    return [[parse_scalar(x, field) for x in r] for r in obj]


def read_json(path: str):
    """Read ``path`` (``-`` for stdin); ``file#name`` picks an object out of a document."""
    name = None
    if "#" in path:
        path, name = path.split("#", 1)
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    obj = _json_loads(text)
    if name is not None:
        doc = Document.from_json(obj)
        return doc.raw(name)
    return obj


def _wrap(loader, obj, what: str):
    try:
        return loader(obj)
    except QFanError:
        raise
    except (KeyError, TypeError, ValueError, IndexError, ZeroDivisionError) as exc:
        raise InputError(f"malformed {what}: {exc}") from exc


def load_fan(path: str) -> QuantumFan:
    return _wrap(QuantumFan.from_json, read_json(path), "fan")


def polytope_from_json(obj) -> pt.Polytope:
    if "inequalities" in obj:
        field = RealField.from_json(obj.get("field"))
        ineq = obj["inequalities"]
        A = parse_matrix(ineq["A"], field)
        b = [parse_scalar(x, field) for x in ineq["b"]]
        return pt.Polytope.from_inequalities(A, b)
    return pt.Polytope.from_json(obj)


def load_polytope(path: str) -> pt.Polytope:
    return _wrap(polytope_from_json, read_json(path), "polytope")


def load_cobordism(path: str) -> fc.FanCobordism:
    return _wrap(fc.FanCobordism.from_json, read_json(path), "cobordism")


def load_morphism(path: str) -> FanMorphism:
    return _wrap(FanMorphism.from_json, read_json(path), "morphism")


def canonical(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# documents


_KINDS = {
    "fan": (QuantumFan.from_json, lambda o: validate_fan(o)),
    "polytope": (polytope_from_json, lambda o: ValidationReport()),
    "cobordism": (fc.FanCobordism.from_json, lambda o: fc.validate_cobordism(o)),
    "morphism": (FanMorphism.from_json, lambda o: validate_morphism(o)),
}


class Document:
    """Named objects over one field plus a log of the operations that made them."""

    def __init__(self, field: RealField = QQ):
        self.field = field
        self.objects: dict = {}
        self.log: list = []

    def put(self, name: str, kind: str, obj, op: str | None = None):
        if kind not in _KINDS:
            raise InputError(f"unknown object kind {kind!r}")
        rep = _KINDS[kind][1](obj)
        if not rep.ok:
            raise QFanError(f"object {name!r} does not validate", sorted(rep.codes()))
        fld = getattr(obj, "field", QQ)
        if not fld.is_rational:
            if not self.field.is_rational and fld != self.field:
                raise QFanError(f"object {name!r} lives over a different field")
            self.field = fld
        self.objects[name] = (kind, obj)
        if op:
            self.log.append({"op": op, "object": name})

    def get(self, name: str):
        if name not in self.objects:
            raise InputError(f"no object named {name!r}")
        return self.objects[name][1]

    def raw(self, name: str):
        return self.get(name).to_json()

    def to_json(self) -> dict:
        return {
            "field": None if self.field.is_rational else self.field.to_json(),
            "objects": {k: {"type": kind, "data": obj.to_json()} for k, (kind, obj) in sorted(self.objects.items())},
            "log": list(self.log),
        }

    @classmethod
    def from_json(cls, obj) -> "Document":
        doc = cls(RealField.from_json(obj.get("field")))
        for name, entry in sorted(obj.get("objects", {}).items()):
            kind = entry.get("type")
            if kind not in _KINDS:
                raise InputError(f"unknown object kind {kind!r}")
            doc.put(name, kind, _wrap(_KINDS[kind][0], entry["data"], kind))
        doc.log = list(obj.get("log", []))
        return doc

    def dumps(self) -> str:
        return canonical(self.to_json())


# ---------------------------------------------------------------------------
# SVG

SIZE = 240
RADIUS = 100


def _f(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _unit(v) -> tuple:
    xs = [to_float(x) for x in v]
    n = math.sqrt(sum(x * x for x in xs)) or 1.0
    return tuple(x / n for x in xs)


def _oblique(p) -> tuple:
    """Fixed projection of R^3 (or lower) to the drawing plane."""
    x, y, z = (list(p) + [0.0, 0.0, 0.0])[:3]
    return x - 0.45 * z, y - 0.3 * z


def _screen(p, cx=SIZE / 2, cy=SIZE / 2, r=RADIUS) -> tuple:
    return cx + r * p[0], cy - r * p[1]


def _svg(elements: list, width=SIZE, height=SIZE) -> str:
    head = f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">'
    return "\n".join([head] + elements + ["</svg>"]) + "\n"


def _fan_elements(fan: QuantumFan) -> list:
    d = fan.d
    if d > 3 or d < 1:
        raise UnrenderableDimension("fans are drawn in dimensions 1 to 3", {"d": d})
    c = SIZE / 2
    out = [f'<circle cx="{_f(c)}" cy="{_f(c)}" r="{RADIUS}" fill="none" stroke="#cccccc"/>']
    tips = {}
    for j in range(fan.n):
        v = fan.column(j)
        if is_zero(v):
            continue
        u = _unit(v)
        tips[j] = _oblique(u) if d == 3 else (u[0], u[1] if d == 2 else 0.0)
    if d == 2:
        for s in fan.max_cones:
            labels = [j for j in sorted(s) if j in tips]
            if len(labels) != 2:
                continue
            a, b = angular_sort([fan.column(j) for j in labels])
            ja = next(j for j in labels if fan.column(j) == a)
            jb = next(j for j in labels if fan.column(j) == b and j != ja)
            pa, pb = _screen(tips[ja]), _screen(tips[jb])
            out.append(
                f'<path d="M {_f(c)} {_f(c)} L {_f(pa[0])} {_f(pa[1])} A {RADIUS} {RADIUS} 0 0 0 {_f(pb[0])} {_f(pb[1])} Z" fill="#dde8f4" stroke="none"/>'
            )
    if d == 3:
        for s in sorted(fan.cones_of_dim(2), key=sorted):
            ext = sorted(fan.cone(s).extremal_labels())
            if len(ext) == 2 and all(j in tips for j in ext):
                p, q = _screen(tips[ext[0]]), _screen(tips[ext[1]])
                out.append(f'<line x1="{_f(p[0])}" y1="{_f(p[1])}" x2="{_f(q[0])}" y2="{_f(q[1])}" stroke="#7a8fa6"/>')
    rays = fan.rays()
    for j in sorted(tips):
        p = _screen(tips[j])
        if j in fan.virtuals:
            style = 'stroke="#444444" stroke-dasharray="5 4"'
        elif j in rays:
            style = 'stroke="#000000" stroke-width="2"'
        else:
            style = 'stroke="#999999"'
        out.append(f'<line x1="{_f(c)}" y1="{_f(c)}" x2="{_f(p[0])}" y2="{_f(p[1])}" {style}/>')
        lp = _screen(tuple(1.12 * x for x in tips[j]))
        out.append(f'<text x="{_f(lp[0])}" y="{_f(lp[1])}" font-size="12" text-anchor="middle" dominant-baseline="middle">{j + 1}</text>')
    return out


def render_fan_svg(fan: QuantumFan) -> str:
    """Rays clipped to the unit disk; virtual columns dashed; labels are 1-based indices."""
    return _svg(_fan_elements(fan))


def render_polytope_svg(P: pt.Polytope) -> str:
    """Wireframe of a polytope in ambient dimension at most 3."""
    if P.ambient_dim > 3:
        raise UnrenderableDimension("polytopes are drawn in ambient dimension at most 3", {"dim": P.ambient_dim})
    pts = [_oblique([to_float(x) for x in v]) for v in P.vertices]
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    mx, my = (max(xs) + min(xs)) / 2, (max(ys) + min(ys)) / 2
    scr = [_screen(((x - mx) / span * 1.6, (y - my) / span * 1.6)) for x, y in pts]
    out = []
    edges = sorted(tuple(sorted(e)) for e in P.edges()) if P.dim >= 1 else []
    for i, j in edges:
        out.append(f'<line x1="{_f(scr[i][0])}" y1="{_f(scr[i][1])}" x2="{_f(scr[j][0])}" y2="{_f(scr[j][1])}" stroke="#000000"/>')
    for i, (x, y) in enumerate(scr):
        out.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="3" fill="#000000"/>')
        out.append(f'<text x="{_f(x + 6)}" y="{_f(y - 6)}" font-size="11">{i + 1}</text>')
    return _svg(out)


def render_diagram_svg(tr: fc.Transition) -> str:
    """Transition fan on top, the two sides in the middle, the catastrophe below."""
    place = {"transition": (1, 0), "fan0": (0, 1), "fan1": (2, 1), "catastrophe": (1, 2)}
    scale = 0.5
    cell = SIZE * scale
    out = []
    for name in ("transition", "fan0", "fan1", "catastrophe"):
        gx, gy = place[name]
        out.append(f'<g transform="translate({_f(gx * cell * 1.4)} {_f(gy * cell * 1.2)}) scale({scale})">')
        out.extend(_fan_elements(tr.nodes[name]))
        out.append("</g>")
        out.append(f'<text x="{_f(gx * cell * 1.4 + cell / 2)}" y="{_f(gy * cell * 1.2 + cell + 10)}" font-size="10" text-anchor="middle">{name}</text>')
    for edge in sorted(tr.edges):
        src, tgt = edge.split("->")
        (sx, sy), (tx, ty) = place[src], place[tgt]
        x1, y1 = sx * cell * 1.4 + cell / 2, sy * cell * 1.2 + cell
        x2, y2 = tx * cell * 1.4 + cell / 2, ty * cell * 1.2
        ok = tr.edges[edge].meta["report"].ok
        dash = "" if ok else ' stroke-dasharray="3 3"'
        out.append(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" stroke="#aa3333"{dash}/>')
    return _svg(out, width=int(cell * 4.2), height=int(cell * 3.6 + 20))


# ---------------------------------------------------------------------------
# verbs


def _report_result(rep: ValidationReport, extra: dict | None = None):
    out = rep.to_json()
    if extra:
        out.update(extra)
    return out, (0 if rep.ok else 2)


def cmd_validate(args):
    if args.morphism:
        return _report_result(validate_morphism(load_morphism(args.morphism)))
    if not args.fan:
        raise InputError("validate needs --fan or --morphism")
    return _report_result(validate_fan(load_fan(args.fan)))


def cmd_blowup(args):
    if args.fan:
        base = load_fan(args.fan)
        weights = parse_list(args.weights, base.field)
        center = parse_indices(args.center) if args.center else None
        if center is None:
            raise InputError("--center is required with --fan")
        spec = bl.BlowupSpec.create(base, center, weights)
    else:
        spec = bl.standard_plane_spec(parse_list(args.weights))
    fan = bl.blown_up_fan(spec)
    out = {
        "fan": fan.to_json(),
        "alpha": list(spec.alpha()),
        "new_ray": spec.new_index + 1,
        "natural_morphism_valid": bl.is_natural_blowup_valid(spec),
    }
    if args.natural:
        m = bl.natural_blowup(spec)
        out["morphism"] = {"L": m.L.to_json(), "H": m.H.to_json()}
    return out, 0


def _target(text: str, names: list | None):
    """torus | zero | 1-based nonzero coordinates | a pattern like (0,E(w))."""
    t = text.strip()
    if t.lower() == "torus":
        return None, names
    if t.lower() == "zero":
        return [], names
    if t.startswith("(") and t.endswith(")"):
        items = [x.strip() for x in t[1:-1].split(",")]
        nonzero = [i for i, x in enumerate(items) if x != "0"]
        if names is None:
            names = [x[2:-1] if x.startswith("E(") and x.endswith(")") else f"w{i + 1}" for i, x in enumerate(items)]
        return nonzero, names
    return parse_indices(text), names


def cmd_fiber(args):
    A = parse_matrix(args.matrix)
    for r in A:
        for x in r:
            if not (isinstance(x, Fraction) and x.denominator == 1 and x >= 0):
                raise InputError("exponent matrix entries must be nonnegative integers")
    names = args.names.split(",") if args.names else None
    target, names = _target(args.target, names)
    if target is not None and any(i >= len(A) for i in target):
        raise InputError("target has more coordinates than the matrix has rows")
    strata = bl.fiber_strata(A, target, names)
    return {"strata": [s.to_json() for s in strata]}, 0


def cmd_gale(args):
    if args.fan:
        cal = load_fan(args.fan).calibration
    elif args.calibration:
        cols = parse_matrix(args.calibration)
        cal = Calibration(cols)
    else:
        raise InputError("gale needs --fan or --calibration (list of columns)")
    k = gale_transform(cal)
    product = cal.matrix() @ k if k.ncols else ExactMatrix.zeros(cal.d, 0)
    exact = all(x == 0 for r in product.rows for x in r)
    return {"gale": k.to_json(), "n": cal.n, "d": cal.d, "rank": k.rank() if k.ncols else 0, "exact": exact}, 0


def cmd_sdelta(args):
    fan = load_fan(args.fan)
    return {"patterns": [p.to_json() for p in s_delta(fan, args.all_cones)]}, 0


def cmd_zigzag(args):
    if args.weights:
        legs = bl.rational_zigzag(parse_list(args.weights))
        return {"N": legs.N, "H": legs.H.to_json(), "dashed": legs.dashed().to_json(), "up_valid": validate_morphism(legs.up).ok, "down_valid": validate_morphism(legs.down).ok}, 0
    if not (args.source and args.target):
        raise InputError("zigzag needs --from and --to, or --weights")
    z = bl.zigzag_dim2(load_fan(args.source), load_fan(args.target))
    steps = []
    ok = True
    for s in z.steps:
        rep, _ = validate_birational(s.morphism)
        ok = ok and rep.ok
        item = s.to_json()
        item["valid"] = rep.ok
        steps.append(item)
    return {"steps": steps, "valid": ok, "calibration": z.calibration.to_json()}, (0 if ok else 2)


def _facet_id(text: str):
    t = text.strip()
    if t.startswith("["):
        return [parse_scalar(x) for x in _json_loads(t)]
    try:
        return int(t) - 1
    except ValueError as exc:
        raise InputError(f"facet is a 1-based index or a normal vector: {text!r}") from exc


def _polytope_summary(P: pt.Polytope) -> dict:
    out = P.to_json()
    out["dim"] = P.dim
    out["f_vector"] = list(P.f_vector()) if P.dim >= 1 else [len(P.vertices)]
    out["simple"] = P.is_simple() if P.dim >= 1 else True
    out["non_simple_vertices"] = [i + 1 for i in P.non_simple_vertices()] if P.dim >= 1 else []
    return out


def cmd_polytope(args):
    if args.action == "normalfan":
        P = load_polytope(args.input)
        fan = pt.normal_fan(P)
        return {"fan": fan.to_json(), "simplicial": fan.is_simplicial(), "complete": fan.is_complete()}, 0
    if args.action == "cobordism":
        W = load_polytope(args.input)
        cob = pt.classify_cobordism(W, _facet_id(args.P), _facet_id(args.Q))
        out = {"kind": cob.kind, "interior_vertices": [i + 1 for i in cob.interior_vertices]}
        if cob.kind == "elementary":
            a, b = pt.flip_index(cob)
            out["index"] = {"a": a, "b": b}
            out["catastrophe"] = _polytope_summary(pt.catastrophe_polytope(cob))
            out["transition"] = _polytope_summary(pt.transition_polytope(cob))
            out["surgery"] = pt.surgery_descriptor(a, b, args.p)
        return out, 0
    if args.action == "slice":
        W = load_polytope(args.input)
        return _polytope_summary(pt.slice_polytope(W, parse_scalar(args.t, W.field))), 0
    if args.action == "lvm":
        A = parse_matrix(args.matrix)
        adm = pt.lvm_admissible(A)
        out = adm.to_json()
        if adm.admissible:
            out["polytope"] = _polytope_summary(pt.lvm_polytope(A))
        return out, (0 if adm.admissible else 2)
    raise InputError(f"unknown polytope action {args.action!r}")


def _edge_json(tr: fc.Transition) -> dict:
    out = {}
    for name, m in sorted(tr.edges.items()):
        w = m.meta["witness"]
        out[name] = {"valid": m.meta["report"].ok, "witness": w.to_json() if w is not None else None}
    return out


def cmd_cobordism(args):
    act = args.action
    if act == "build-blowup":
        base = load_fan(args.fan)
        c = fc.blowup_cobordism(base, parse_indices(args.center), parse_list(args.weights, base.field), auto_extend=args.auto_extend)
        return c.to_json(), 0
    if act == "build-polytope":
        W = load_polytope(args.input)
        return fc.cobordism_from_polytope(W, _facet_id(args.P), _facet_id(args.Q)).to_json(), 0
    c = load_cobordism(args.input)
    if act == "validate":
        rep = fc.validate_cobordism(c)
        extra = {"index": None}
        if rep.ok:
            a, b = fc.cobordism_index(c, check=False)
            extra = {"index": {"a": a, "b": b}, "ray_counts": fc.ray_counts(c)}
        return _report_result(rep, extra)
    if act == "index":
        a, b = fc.cobordism_index(c)
        return {"a": a, "b": b}, 0
    if act == "catastrophe":
        cat = fc.catastrophe(c)
        return {"fan": cat.fan.to_json(), "merged_cone": sorted(j + 1 for j in cat.merged), "simplicial": cat.fan.is_simplicial()}, 0
    if act == "transition":
        alpha = parse_list(args.alpha, c.total.field) if args.alpha else None
        tr = fc.transition_fan(c, alpha)
        ok = all(m.meta["report"].ok for m in tr.edges.values())
        return {"fan": tr.fan.to_json(), "new_ray": tr.alpha_index + 1, "subdivision": [sorted(j + 1 for j in s) for s in tr.subdivision], "edges": _edge_json(tr)}, (0 if ok else 2)
    if act == "slice":
        fan = fc.slice_family(c, parse_scalar(args.t, c.total.field))
        return {"fan": fan.to_json()}, 0
    if act == "deform":
        fld = c.total.field
        cols = parse_matrix(args.calibration, fld)
        out = fc.deform_cobordism(c, cols, side=args.side)
        a, b = fc.cobordism_index(out, check=False)
        res = out.to_json()
        res["frobenius_sq"] = scalar_to_json(out.meta["frobenius_sq"])
        res["index"] = {"a": a, "b": b}
        return res, 0
    raise InputError(f"unknown cobordism action {act!r}")


def cmd_render(args):
    if args.fan:
        return render_fan_svg(load_fan(args.fan)), 0
    if args.polytope:
        return render_polytope_svg(load_polytope(args.polytope)), 0
    if args.cobordism:
        c = load_cobordism(args.cobordism)
        if args.diagram:
            return render_diagram_svg(fc.transition_fan(c)), 0
        return render_fan_svg(c.total), 0
    raise InputError("render needs --fan, --polytope or --cobordism")


def cmd_doc(args):
    doc = Document.from_json(read_json(args.input))
    if args.action == "canon":
        return doc.dumps(), 0
    if args.action == "list":
        return {"objects": {k: kind for k, (kind, _) in sorted(doc.objects.items())}, "log": doc.log}, 0
    raise InputError(f"unknown doc action {args.action!r}")


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qfan", description="Exact quantum fan toolkit")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    v = sub.add_parser("validate", help="validate a fan or a fan morphism")
    v.add_argument("--fan")
    v.add_argument("--morphism")
    v.set_defaults(func=cmd_validate)

    b = sub.add_parser("blowup", help="star subdivision at a weighted combination")
    b.add_argument("--fan", help="base fan; without it the standard plane cone is used")
    b.add_argument("--center", help="1-based labels of the center cone, in weight order")
    b.add_argument("--weights", "--weight", dest="weights", required=True)
    b.add_argument("--natural", action="store_true", help="also build the integer-weight fan morphism")
    b.set_defaults(func=cmd_blowup)

    f = sub.add_parser("fiber", help="strata of the fiber of a monomial map")
    f.add_argument("--matrix", required=True)
    f.add_argument("--target", default="torus", help="torus, zero, or 1-based nonzero coordinates")
    f.add_argument("--names")
    f.set_defaults(func=cmd_fiber)

    g = sub.add_parser("gale", help="Gale transform of a calibration")
    g.add_argument("--fan")
    g.add_argument("--calibration", help="JSON list of columns")
    g.set_defaults(func=cmd_gale)

    s = sub.add_parser("sdelta", help="coordinate patterns of the quotient presentation")
    s.add_argument("--fan", required=True)
    s.add_argument("--all-cones", action="store_true")
    s.set_defaults(func=cmd_sdelta)

    z = sub.add_parser("zigzag", help="planar zig-zag between two fans, or a rational zig-zag")
    z.add_argument("--from", dest="source")
    z.add_argument("--to", dest="target")
    z.add_argument("--weights")
    z.set_defaults(func=cmd_zigzag)

    po = sub.add_parser("polytope", help="polytope operations")
    po.add_argument("action", choices=["normalfan", "cobordism", "slice", "lvm"])
    po.add_argument("--in", dest="input")
    po.add_argument("--P")
    po.add_argument("--Q")
    po.add_argument("--t", default="0")
    po.add_argument("--p", type=int, default=0, help="torus rank for the surgery descriptor")
    po.add_argument("--matrix")
    po.set_defaults(func=cmd_polytope)

    co = sub.add_parser("cobordism", help="fan cobordism operations")
    co.add_argument("action", choices=["validate", "index", "catastrophe", "transition", "slice", "deform", "build-blowup", "build-polytope"])
    co.add_argument("--in", dest="input")
    co.add_argument("--fan")
    co.add_argument("--center")
    co.add_argument("--weights")
    co.add_argument("--auto-extend", action="store_true")
    co.add_argument("--P")
    co.add_argument("--Q")
    co.add_argument("--t", default="0")
    co.add_argument("--alpha")
    co.add_argument("--calibration", help="JSON list of new columns")
    co.add_argument("--side", type=int, choices=[0, 1], default=0)
    co.set_defaults(func=cmd_cobordism)

    r = sub.add_parser("render", help="SVG of a fan, polytope or cobordism")
    r.add_argument("--fan")
    r.add_argument("--polytope")
    r.add_argument("--cobordism")
    r.add_argument("--diagram", action="store_true", help="draw the birational diamond")
    r.add_argument("--out")
    r.set_defaults(func=cmd_render)

    dc = sub.add_parser("doc", help="document store utilities")
    dc.add_argument("action", choices=["canon", "list"])
    dc.add_argument("--in", dest="input", required=True)
    dc.set_defaults(func=cmd_doc)
    for parser in sub.choices.values():
        if not any(a.dest == "out" for a in parser._actions):
            parser.add_argument("--out", help="write the result to this file instead of stdout")
    return p


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        result, code = args.func(args)
    except InputError as exc:
        stdout.write(canonical(exc.to_json()))
        return 1
    except QFanError as exc:
        stdout.write(canonical(exc.to_json()))
        return 2
    text = result if isinstance(result, str) else canonical(result)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
