"""Exact arithmetic in a real number field Q(theta) and exact linear algebra.

A :class:`RealField` is fixed by a monic irreducible rational polynomial and a
rational interval isolating one real root ``theta``.  Elements are
:class:`Scalar` objects holding coefficients of ``1, theta, ..., theta^(m-1)``.
Rational values are always demoted to :class:`fractions.Fraction`, so purely
rational computations never pay for the field machinery.

Nothing in this module touches floating point, except :func:`to_float`, which
exists for rendering only.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

MAX_DEGREE = 8


class QFanError(Exception):
    """Base error.  ``code`` is a stable machine-readable identifier."""

    code = "Error"

    def __init__(self, message: str = "", witness=None):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.witness = witness

    def to_json(self) -> dict:
        return {"code": self.code, "message": self.message, "witness": _jsonable(self.witness)}


def _jsonable(obj):
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, (Fraction, Scalar)):
        return scalar_to_json(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_jsonable(x) for x in items]
    return str(obj)


class Reducible(QFanError):
    code = "Reducible"


class NoRootInInterval(QFanError):
    code = "NoRootInInterval"


class MultipleRootsInInterval(QFanError):
    code = "MultipleRootsInInterval"


class FieldDegreeTooLarge(QFanError):
    code = "FieldDegreeTooLarge"


class NotMonic(QFanError):
    code = "NotMonic"


class FieldMismatch(QFanError):
    code = "FieldMismatch"


class Infeasible(QFanError):
    code = "Infeasible"


class NotInvertible(QFanError):
    code = "NotInvertible"


class DimensionMismatch(QFanError):
    code = "DimensionMismatch"


# ---------------------------------------------------------------------------
# rational polynomials (coefficient lists, low degree first)


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_eval(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = list(a)
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] -= c * bc
        a.pop()
    return _trim(q), a


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _poly_deriv(p):
    return [i * c for i, c in enumerate(p)][1:]


def sturm_sequence(p: Sequence[Fraction]) -> list:
    seq = [_trim(list(p)), _trim(_poly_deriv(p))]
    while seq[-1]:
        _, r = _poly_divmod(seq[-2], seq[-1])
        r = [-c for c in r]
        if not r:
            break
        seq.append(r)
    return [s for s in seq if s]


def _variations(seq, x: Fraction) -> int:
    signs = [v for v in (poly_eval(s, x) for s in seq) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_roots(p: Sequence[Fraction], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of ``p`` in the open interval (lo, hi)."""
    seq = sturm_sequence(p)
    n = _variations(seq, lo) - _variations(seq, hi)
    if poly_eval(p, hi) == 0:
        n -= 1
    return n


def _is_irreducible(coeffs: Sequence[Fraction]) -> bool:
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], x, domain="QQ")
    return poly.is_irreducible


# ---------------------------------------------------------------------------
# fields


def parse_rational(s) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        s = s.strip()
        if "." in s or "e" in s.lower():
            raise ValueError(f"decimal notation is not accepted: {s!r}")
        return Fraction(s)
    raise TypeError(f"cannot read a rational from {s!r}")


class RealField:
    """Q(theta) for a real root theta of an irreducible monic polynomial."""

    def __init__(self, minpoly: Sequence, interval: Sequence):
        coeffs = [parse_rational(c) for c in minpoly]
        coeffs = _trim(coeffs)
        if len(coeffs) < 2:
            raise Reducible("minimal polynomial must have degree at least 1")
        if coeffs[-1] != 1:
            raise NotMonic("minimal polynomial must be monic", coeffs)
        degree = len(coeffs) - 1
        if degree > MAX_DEGREE:
            raise FieldDegreeTooLarge(f"degree {degree} exceeds the cap of {MAX_DEGREE}")
        lo, hi = (parse_rational(c) for c in interval)
        if not lo < hi:
            raise NoRootInInterval("empty isolating interval", [lo, hi])
        if degree > 1 and not _is_irreducible(coeffs):
            raise Reducible("minimal polynomial factors over the rationals", coeffs)
        roots = count_roots(coeffs, lo, hi)
        if roots == 0:
            raise NoRootInInterval("no real root in the interval", [lo, hi])
        if roots > 1:
            raise MultipleRootsInInterval(f"{roots} real roots in the interval", [lo, hi])
        self.minpoly = tuple(coeffs)
        self.interval = (lo, hi)
        self.degree = degree
        # refinement memo; narrowing it never changes the represented root
        self._lo, self._hi = lo, hi
        self._sign_lo = 1 if poly_eval(coeffs, lo) > 0 else -1

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def __eq__(self, other):
        return isinstance(other, RealField) and (self.minpoly, self.interval) == (other.minpoly, other.interval)

    def __hash__(self):
        return hash((self.minpoly, self.interval))

    def __repr__(self):
        return f"RealField(minpoly={[str(c) for c in self.minpoly]}, interval={[str(c) for c in self.interval]})"

    def gen(self):
        if self.degree == 1:
            return -self.minpoly[0]
        return Scalar(self, [0, 1])

    def element(self, coeffs: Sequence):
        return make_scalar(self, coeffs)

    def root_interval(self, width: Fraction | None = None):
        """Current isolating interval, refined until narrower than ``width``."""
        if self.degree == 1:
            r = -self.minpoly[0]
            return r, r
        if width is not None:
            while self._hi - self._lo >= width:
                self._bisect()
        return self._lo, self._hi

    def _bisect(self):
        lo, hi = self._lo, self._hi
        mid = (lo + hi) / 2
        v = poly_eval(self.minpoly, mid)
        if (v > 0) == (self._sign_lo > 0):
            self._lo = mid
        else:
            self._hi = mid

    def to_json(self) -> dict:
        return {"minpoly": [str(c) for c in self.minpoly], "interval": [str(c) for c in self.interval]}

    @classmethod
    def from_json(cls, obj) -> "RealField":
        if obj is None:
            return QQ
        return field_create(obj["minpoly"], obj["interval"])


_FIELD_CACHE: dict = {}


def field_create(minpoly: Sequence, interval: Sequence) -> RealField:
    """Validated field handle.  Equal inputs give the same object."""
    key = (tuple(parse_rational(c) for c in minpoly), tuple(parse_rational(c) for c in interval))
    f = _FIELD_CACHE.get(key)
    if f is None:
        f = RealField(minpoly, interval)
        _FIELD_CACHE[key] = f
    return f


QQ = field_create([0, 1], [-1, 1])


def sqrt_field(n: int) -> RealField:
    """Q(sqrt(n)) with the positive root."""
    r = math.isqrt(n)
    return field_create([-n, 0, 1], [r, r + 1])


# ---------------------------------------------------------------------------
# scalars


Number = Union[int, Fraction, "Scalar"]


def make_scalar(field: RealField, coeffs: Sequence):
    coeffs = [parse_rational(c) for c in coeffs]
    m = field.degree
    if len(coeffs) > m:
        coeffs = _reduce(coeffs, field.minpoly)
    coeffs = coeffs + [Fraction(0)] * (m - len(coeffs))
    return _demote(field, coeffs)


def _reduce(coeffs: list, minpoly: Sequence[Fraction]) -> list:
    m = len(minpoly) - 1
    c = list(coeffs)
    for k in range(len(c) - 1, m - 1, -1):
        lead = c[k]
        if lead:
            for i in range(m):
                c[k - m + i] -= lead * minpoly[i]
        c[k] = Fraction(0)
    return c[:m]


def _demote(field, coeffs):
    if all(c == 0 for c in coeffs[1:]):
        return coeffs[0]
    s = Scalar.__new__(Scalar)
    s.field = field
    s.coeffs = tuple(coeffs)
    return s


class Scalar:
    """An irrational element of a :class:`RealField`.

    Arithmetic with ``int``/``Fraction`` operands is allowed; results that
    turn out rational come back as ``Fraction``.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: RealField, coeffs: Sequence):
        c = [parse_rational(x) for x in coeffs]
        if len(c) > field.degree:
            c = _reduce(c, field.minpoly)
        c += [Fraction(0)] * (field.degree - len(c))
        self.field = field
        self.coeffs = tuple(c)

    # -- helpers
    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch("operands live in different fields", [repr(self.field), repr(other.field)])
            return other.coeffs
        if isinstance(other, (int, Fraction)):
            return (Fraction(other),) + (Fraction(0),) * (self.field.degree - 1)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _demote(self.field, [a + b for a, b in zip(self.coeffs, o)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _demote(self.field, [a - b for a, b in zip(self.coeffs, o)])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _demote(self.field, [b - a for a, b in zip(self.coeffs, o)])

    def __neg__(self):
        return _demote(self.field, [-a for a in self.coeffs])

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Fraction(0)
            return _demote(self.field, [a * other for a in self.coeffs])
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _demote(self.field, _reduce(_poly_mul(list(self.coeffs), list(o)), self.field.minpoly))

    __rmul__ = __mul__

    def inverse(self):
        if self.field.degree == 2:
            # (a + b t)^-1 = (a - p b - b t) / norm for t^2 + p t + q = 0
            q, p = self.field.minpoly[0], self.field.minpoly[1]
            a, b = self.coeffs
            norm = a * a - p * a * b + q * b * b
            return _demote(self.field, [(a - p * b) / norm, -b / norm])
        # extended Euclid: find u with u * s = 1 mod minpoly
        a = _trim(list(self.coeffs))
        b = list(self.field.minpoly)
        u0, u1 = [Fraction(1)], []
        while b:
            q, r = _poly_divmod(a, b)
            a, b = b, r
            u0, u1 = u1, _poly_sub(u0, _poly_mul(q, u1))
        # now a is a nonzero constant (gcd), u1 carries the cofactor of the old a
        c = a[0]
        inv = [x / c for x in u0]
        return _demote(self.field, _reduce(inv + [Fraction(0)] * self.field.degree, self.field.minpoly))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return _demote(self.field, [a / other for a in self.coeffs])
        if isinstance(other, Scalar):
            self._coerce(other)
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out: Number = Fraction(1)
        base: Number = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparisons
    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return False  # a Scalar is never rational
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return True

    def sign(self) -> int:
        return _scalar_sign(self)

    def __lt__(self, other):
        return sign(self - other) < 0

    def __le__(self, other):
        return sign(self - other) <= 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __ge__(self, other):
        return sign(self - other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def enclosure(self, width: Fraction):
        """Rational interval of width below ``width`` containing the value."""
        w = Fraction(width)
        lo, hi = self.field.root_interval()
        while True:
            elo, ehi = _interval_eval(self.coeffs, lo, hi)
            if ehi - elo < w:
                return elo, ehi
            lo, hi = self.field.root_interval((hi - lo) / 4)

    def floor(self) -> int:
        lo, hi = self.field.root_interval()
        while True:
            elo, ehi = _interval_eval(self.coeffs, lo, hi)
            if math.floor(elo) == math.floor(ehi):
                return math.floor(elo)
            lo, hi = self.field.root_interval((hi - lo) / 4)

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append(f"{c}*t")
            else:
                terms.append(f"{c}*t^{k}")
        return "(" + " + ".join(terms) + ")"


def _interval_eval(coeffs, lo: Fraction, hi: Fraction):
    alo = ahi = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        products = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(products) + c, max(products) + c
    return alo, ahi


def _scalar_sign(s: Scalar) -> int:
    if all(c == 0 for c in s.coeffs):
        return 0
    field = s.field
    lo, hi = field.root_interval()
    while True:
        elo, ehi = _interval_eval(s.coeffs, lo, hi)
        if elo > 0:
            return 1
        if ehi < 0:
            return -1
        lo, hi = field.root_interval((hi - lo) / 2**16)


def scalar_sign(s: Number) -> int:
    """Exact sign of a scalar: -1, 0 or +1."""
    return sign(s)


def sign(x: Number) -> int:
    if isinstance(x, Scalar):
        return _scalar_sign(x)
    return (x > 0) - (x < 0)


def is_rational(x: Number) -> bool:
    return not isinstance(x, Scalar)


def field_of(values: Iterable) -> RealField:
    """The common field of ``values`` (``QQ`` when all are rational)."""
    found = None
    for v in values:
        if isinstance(v, Scalar):
            if found is None:
                found = v.field
            elif v.field != found:
                raise FieldMismatch("values from two different fields", [repr(found), repr(v.field)])
    return found or QQ


def to_float(x: Number) -> float:
    """Float approximation.  Used for rendering, never for decisions."""
    if isinstance(x, Scalar):
        lo, hi = x.enclosure(Fraction(1, 2**60))
        return float((lo + hi) / 2)
    return float(x)


def num(x) -> Number:
    """Normalize user input to ``Fraction`` or ``Scalar``."""
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction, str)):
        return parse_rational(x)
    raise TypeError(f"not an exact number: {x!r}")


def scalar_to_json(x: Number):
    if isinstance(x, Scalar):
        return {"coeffs": [str(c) for c in x.coeffs]}
    return str(Fraction(x))


def scalar_from_json(obj, field: RealField = QQ) -> Number:
    if isinstance(obj, dict):
        return make_scalar(field, obj["coeffs"])
    return parse_rational(obj)


# ---------------------------------------------------------------------------
# linear algebra on row lists


def _rref(rows: list, ncols: int):
    """Reduced row echelon form.  Returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = m[r][c].inverse() if isinstance(m[r][c], Scalar) else Fraction(1) / m[r][c]
        if m[r][c] != 1:
            m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[: len(pivots)], pivots


def rank_of(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    rows = list(rows)
    if not rows:
        return 0
    return len(_rref(rows, ncols if ncols is not None else len(rows[0]))[1])


def kernel_rows(rows: Sequence[Sequence], ncols: int) -> list:
    """Basis of {v : row . v = 0 for all rows}, as tuples."""
    red, pivots = _rref(list(rows), ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in zip(red, pivots):
            v[p] = -r[f]
        basis.append(tuple(v))
    return basis


def dot(u: Sequence, v: Sequence):
    acc = Fraction(0)
    for a, b in zip(u, v):
        if a != 0 and b != 0:
            acc = acc + a * b
    return acc


class ExactMatrix:
    """Immutable matrix of exact numbers (rationals or field scalars)."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        self.rows = tuple(tuple(num(x) for x in r) for r in rows)
        self.nrows = len(self.rows)
        if self.rows:
            self.ncols = len(self.rows[0])
            if any(len(r) != self.ncols for r in self.rows):
                raise DimensionMismatch("ragged matrix rows")
        else:
            self.ncols = ncols or 0

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int | None = None) -> "ExactMatrix":
        if not cols:
            return cls([[] for _ in range(nrows or 0)], 0)
        return cls(list(zip(*cols)))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, r: int, c: int) -> "ExactMatrix":
        return cls([[Fraction(0)] * c for _ in range(r)], c)

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(list(zip(*self.rows)), self.nrows) if self.rows and self.ncols else ExactMatrix.zeros(self.ncols, self.nrows)

    T = property(transpose)

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.ncols != other.nrows:
                raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.columns()
            return ExactMatrix([[dot(r, c) for c in cols] for r in self.rows], other.ncols)
        v = tuple(other)
        if len(v) != self.ncols:
            raise DimensionMismatch(f"vector of length {len(v)} for a matrix with {self.ncols} columns")
        return tuple(dot(r, v) for r in self.rows)

    def __mul__(self, c):
        return ExactMatrix([[x * c for x in r] for r in self.rows], self.ncols)

    __rmul__ = __mul__

    def __add__(self, other: "ExactMatrix"):
        return ExactMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "ExactMatrix"):
        return ExactMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"ExactMatrix({[list(r) for r in self.rows]})"

    def rank(self) -> int:
        return rank_of(self.rows, self.ncols)

    def rref(self):
        return _rref(list(self.rows), self.ncols)

    def kernel_basis(self) -> list:
        return kernel_basis(self)

    def inverse(self) -> "ExactMatrix":
        n = self.nrows
        if n != self.ncols:
            raise NotInvertible("matrix is not square", self.shape)
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        red, pivots = _rref(aug, 2 * n)
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise NotInvertible("matrix is singular")
        return ExactMatrix([r[n:] for r in red], n)

    def is_integral(self) -> bool:
        return all(isinstance(x, Fraction) and x.denominator == 1 for r in self.rows for x in r)

    def field(self) -> RealField:
        return field_of(x for r in self.rows for x in r)

    def to_json(self):
        return [[scalar_to_json(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, obj, field: RealField = QQ) -> "ExactMatrix":
        return cls([[scalar_from_json(x, field) for x in r] for r in obj])


def as_matrix(m) -> ExactMatrix:
    return m if isinstance(m, ExactMatrix) else ExactMatrix(m)


def kernel_basis(M) -> list:
    """Exact basis of ker(M); its size is cols - rank."""
    M = as_matrix(M)
    return kernel_rows(M.rows, M.ncols)


def solve_affine_projection(constraint, rhs, anchor) -> tuple:
    """Point of {x : constraint . x = rhs} nearest to ``anchor`` (Euclidean).

    Raises :class:`Infeasible` when the affine set is empty.
    """
    C = as_matrix(constraint)
    b = [num(x) for x in (rhs if isinstance(rhs, (list, tuple)) else [rhs])]
    a = [num(x) for x in anchor]
    if len(b) != C.nrows or len(a) != C.ncols:
        raise DimensionMismatch("constraint, rhs and anchor sizes disagree")
    aug = [list(r) + [bi] for r, bi in zip(C.rows, b)]
    red, pivots = _rref(aug, C.ncols + 1)
    if C.ncols in pivots:
        raise Infeasible("constraint system has no solution")
    R = [r[: C.ncols] for r in red]
    rr = [r[C.ncols] for r in red]
    if not R:
        return tuple(a)
    # x = a + R^T y with R R^T y = rr - R a
    gram = [[dot(r, s) for s in R] for r in R]
    target = [ri - dot(r, a) for r, ri in zip(R, rr)]
    sol_rows, piv = _rref([g + [t] for g, t in zip(gram, target)], len(R) + 1)
    y = [Fraction(0)] * len(R)
    for row, p in zip(sol_rows, piv):
        y[p] = row[-1]
    return tuple(ai + dot([r[j] for r in R], y) for j, ai in enumerate(a))


def squared_distance(u: Sequence, v: Sequence):
    return dot([a - b for a, b in zip(u, v)], [a - b for a, b in zip(u, v)])
