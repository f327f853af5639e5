"""Exact lattice and affine geometry kernel.

Integer lattice vectors, rational plane vectors, 2x2 integer matrices,
primitive decomposition, integral affine length, half-planes, and the
piecewise-linear shear that realises a change of branch cut.

Conventions fixed here and used everywhere else:

* det(a, b) = a.x * b.y - a.y * b.x
* the piecewise shear with eigendirection v moves the half-plane
  {det(v, y) >= 0} (y relative to the anchor) and fixes the other one;
  the moving half transforms by  y |-> y + k * det(y, v) * v.
  Note det(v, y) = -det(y, v); both orders appear on purpose.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import BadParams, ZeroVector
from .rat import Rat, rat_str


@dataclass(frozen=True)
class IVec2:
    """Integer lattice vector."""

    x: int
    y: int

    def __post_init__(self):
        if not (isinstance(self.x, int) and isinstance(self.y, int)):
            raise BadParams(f"IVec2 needs integer entries, got ({self.x!r}, {self.y!r})")

    def __add__(self, other: "IVec2") -> "IVec2":
        return IVec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "IVec2") -> "IVec2":
        return IVec2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "IVec2":
        return IVec2(-self.x, -self.y)

    def __mul__(self, s: int) -> "IVec2":
        return IVec2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def dot(self, other) -> int:
        return self.x * other.x + self.y * other.y

    def cross(self, other):
        return self.x * other.y - self.y * other.x

    def rot90(self) -> "IVec2":
        """Counterclockwise quarter turn (x, y) -> (-y, x)."""
        return IVec2(-self.y, self.x)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_primitive(self) -> bool:
        return gcd(abs(self.x), abs(self.y)) == 1

    def content(self) -> int:
        """gcd of the absolute entries (0 only for the zero vector)."""
        return gcd(abs(self.x), abs(self.y))

    def primitive_part(self) -> "IVec2":
        if self.is_zero():
            raise ZeroVector("zero vector has no primitive part")
        g = self.content()
        return IVec2(self.x // g, self.y // g)

    def as_q(self) -> "QVec2":
        return QVec2(Fraction(self.x), Fraction(self.y))

    def __str__(self):
        return f"({self.x}, {self.y})"


@dataclass(frozen=True)
class QVec2:
    """Rational plane vector / point."""

    x: Rat
    y: Rat

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))

    def __add__(self, other) -> "QVec2":
        return QVec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other) -> "QVec2":
        return QVec2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "QVec2":
        return QVec2(-self.x, -self.y)

    def scale(self, s: Rat) -> "QVec2":
        s = Fraction(s)
        return QVec2(self.x * s, self.y * s)

    def dot(self, other) -> Rat:
        return self.x * other.x + self.y * other.y

    def cross(self, other) -> Rat:
        return self.x * other.y - self.y * other.x

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def __str__(self):
        return f"({rat_str(self.x)}, {rat_str(self.y)})"


def qvec(x, y) -> QVec2:
    return QVec2(Fraction(x), Fraction(y))


def det(a, b) -> Rat:
    """det(a, b) = a.x * b.y - a.y * b.x for any mix of IVec2/QVec2."""
    return a.x * b.y - a.y * b.x


def translate(point: QVec2, direction: IVec2, t: Rat) -> QVec2:
    """point + t * direction with an integer direction and rational t."""
    t = Fraction(t)
    return QVec2(point.x + t * direction.x, point.y + t * direction.y)


@dataclass(frozen=True)
class IMat2:
    """2x2 integer matrix, row-major [[a, b], [c, d]]."""

    a: int
    b: int
    c: int
    d: int

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def is_unimodular(self) -> bool:
        return self.det() in (1, -1)

    def __matmul__(self, other: "IMat2") -> "IMat2":
        return IMat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def apply(self, v):
        """Matrix times column vector; preserves IVec2/QVec2 flavour."""
        if isinstance(v, IVec2):
            return IVec2(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
        return QVec2(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)

    def transpose(self) -> "IMat2":
        return IMat2(self.a, self.c, self.b, self.d)

    def inverse(self) -> "IMat2":
        """Exact inverse, defined only for unimodular matrices."""
        dt = self.det()
        if dt not in (1, -1):
            raise BadParams(f"matrix with determinant {dt} has no integral inverse")
        return IMat2(self.d * dt, -self.b * dt, -self.c * dt, self.a * dt)

    def power(self, n: int) -> "IMat2":
        if n < 0:
            return self.inverse().power(-n)
        result = identity()
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def identity() -> IMat2:
    return IMat2(1, 0, 0, 1)


def primitive_decompose(w: QVec2) -> tuple[IVec2, Rat]:
    """Write a nonzero rational vector exactly as t * u with u primitive, t > 0."""
    if w.is_zero():
        raise ZeroVector("cannot decompose the zero vector")
    bx, by = w.x.denominator, w.y.denominator
    common = bx * by // gcd(bx, by)
    ix = w.x.numerator * (common // bx)
    iy = w.y.numerator * (common // by)
    g = gcd(abs(ix), abs(iy))
    u = IVec2(ix // g, iy // g)
    t = Fraction(g, common)
    return u, t


def affine_length(p: QVec2, q: QVec2) -> Rat:
    """Integral affine length of the segment [p, q].

    This is the factor t with q - p = t * (primitive integer vector); it is
    invariant under GL(2, Z) and translations.
    """
    if p == q:
        raise ZeroVector("affine length needs two distinct points")
    _, t = primitive_decompose(q - p)
    return t


def shear_matrix(v: IVec2, k: int) -> IMat2:
    """Integral shear fixing the line spanned by v, as a matrix.

    Realises x |-> x + k * det(x, v) * v.  Entry formula
    [[1 + k*vx*vy, -k*vx^2], [k*vy^2, 1 - k*vx*vy]]; determinant 1 and
    v is a fixed vector for every k.
    """
    if not isinstance(k, int) or k < 0:
        raise BadParams(f"shear weight must be a nonnegative integer, got {k!r}")
    if not v.is_primitive():
        raise BadParams(f"shear direction must be primitive, got {v}")
    return IMat2(1 + k * v.x * v.y, -k * v.x * v.x, k * v.y * v.y, 1 - k * v.x * v.y)


def piecewise_shear(v: IVec2, k: int, anchor: QVec2, x: QVec2) -> QVec2:
    """Piecewise-linear shear fixing the line through `anchor` spanned by v.

    With y = x - anchor: points with det(v, y) >= 0 map to
    anchor + y + k * det(y, v) * v; the other half-plane is fixed.
    Continuous across the eigenline and fixes it pointwise.
    """
    if not v.is_primitive():
        raise BadParams(f"shear direction must be primitive, got {v}")
    if not isinstance(k, int) or k < 0:
        raise BadParams(f"shear weight must be a nonnegative integer, got {k!r}")
    y = x - anchor
    if det(v, y) >= 0:
        s = k * det(y, v)
        return QVec2(x.x + s * v.x, x.y + s * v.y)
    return x


def piecewise_shear_inverse(v: IVec2, k: int, anchor: QVec2, x: QVec2) -> QVec2:
    """Exact inverse of piecewise_shear with the same v, anchor, k.

    The moving half is the same {det(v, y) >= 0} (the shear preserves
    det(v, .)); the matrix there is the inverse shear y + k * det(v, y) * v.
    """
    if not v.is_primitive():
        raise BadParams(f"shear direction must be primitive, got {v}")
    if not isinstance(k, int) or k < 0:
        raise BadParams(f"shear weight must be a nonnegative integer, got {k!r}")
    y = x - anchor
    if det(v, y) >= 0:
        s = k * det(v, y)
        return QVec2(x.x + s * v.x, x.y + s * v.y)
    return x


@dataclass(frozen=True)
class HalfPlane:
    """Closed half-plane {x : <x, normal> + offset >= 0} with primitive normal."""

    normal: IVec2
    offset: Rat

    def __post_init__(self):
        object.__setattr__(self, "offset", Fraction(self.offset))
        if not self.normal.is_primitive():
            raise BadParams(f"half-plane normal must be primitive, got {self.normal}")

    def value(self, x: QVec2) -> Rat:
        return x.x * self.normal.x + x.y * self.normal.y + self.offset

    def contains(self, x: QVec2) -> bool:
        return self.value(x) >= 0

    def contains_strictly(self, x: QVec2) -> bool:
        return self.value(x) > 0


def complete_basis(u: IVec2) -> IVec2:
    """Some w with det(u, w) = 1, for primitive u (extended gcd)."""
    if not u.is_primitive():
        raise BadParams(f"cannot complete non-primitive {u} to a basis")
    # det(u, w) = u.x * w.y - u.y * w.x = 1
    a, b = _ext_gcd(u.x, u.y)  # a*u.x + b*u.y == 1
    return IVec2(-b, a)


def _ext_gcd(x: int, y: int) -> tuple[int, int]:
    """Coefficients (a, b) with a*x + b*y == gcd == 1 for coprime x, y."""
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        qq = old_r // r
        old_r, r = r, old_r - qq * r
        old_s, s = s, old_s - qq * s
        old_t, t = t, old_t - qq * t
    if old_r == 1:
        return old_s, old_t
    if old_r == -1:
        return -old_s, -old_t
    raise BadParams(f"({x}, {y}) is not coprime")


def basis_change_to(u: IVec2) -> IMat2:
    """Unimodular W (det +1) with W @ u = (1, 0)."""
    a, b = _ext_gcd(u.x, u.y)
    return IMat2(a, b, -u.y, u.x)
