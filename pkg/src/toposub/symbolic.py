"""One-dimensional substitutions, incidence matrices and exact arithmetic in Z[beta].

Letters are the integers 1..d. Words are plain strings of digits when d <= 9,
or tuples of ints otherwise; both forms are accepted everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class InvalidInput(ValueError):
    pass


class Unsupported(ValueError):
    pass


def _letters(word) -> list[int]:
    if isinstance(word, str):
        return [int(ch) for ch in word]
    return [int(a) for a in word]


@dataclass(frozen=True)
class Substitution:
    """A substitution on the alphabet {1..d}; images[i-1] is the image of letter i."""

    images: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        d = len(self.images)
        if d == 0:
            raise InvalidInput("empty alphabet")
        for k, img in enumerate(self.images, start=1):
            if not img:
                raise InvalidInput(f"image of {k} is empty")
            for a in img:
                if not 1 <= a <= d:
                    raise InvalidInput(f"letter {a} in image of {k} outside 1..{d}")

    @classmethod
    def from_words(cls, words: Iterable) -> "Substitution":
        return cls(tuple(tuple(_letters(w)) for w in words))

    @property
    def size(self) -> int:
        return len(self.images)

    def apply(self, word) -> tuple[int, ...]:
        out: list[int] = []
        for a in _letters(word):
            if not 1 <= a <= self.size:
                raise InvalidInput(f"letter {a} outside alphabet")
            out.extend(self.images[a - 1])
        return tuple(out)


TRIBONACCI = Substitution.from_words(["12", "13", "1"])
# second example pairing with the tau tiling
T_SUBST = Substitution.from_words(["13", "1", "2"])


def abelianize(word, d: int = 3) -> tuple[int, ...]:
    counts = [0] * d
    for a in _letters(word):
        if not 1 <= a <= d:
            raise InvalidInput(f"letter {a} outside alphabet 1..{d}")
        counts[a - 1] += 1
    return tuple(counts)


def incidence_matrix(subst: Substitution) -> np.ndarray:
    d = subst.size
    m = np.zeros((d, d), dtype=np.int64)
    for i, img in enumerate(subst.images):
        m[:, i] = abelianize(img, d)
    return m


def matrix_inverse(m) -> np.ndarray:
    """Exact inverse of a unimodular integer matrix."""
    m = np.asarray(m, dtype=np.int64)
    n = m.shape[0]
    a = [[Fraction(int(m[i, j])) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise Unsupported("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    inv = [row[n:] for row in a]
    if any(x.denominator != 1 for row in inv for x in row):
        raise Unsupported("matrix is not unimodular")
    out = np.array([[int(x) for x in row] for row in inv], dtype=np.int64)
    if abs(round(np.linalg.det(m))) != 1:
        raise Unsupported("matrix is not unimodular")
    return out


def fixed_point_prefix(subst: Substitution, n: int) -> tuple[int, ...]:
    if subst.images[0][0] != 1:
        raise InvalidInput("substitution is not prolongable on 1")
    if n <= 0:
        return ()
    word: tuple[int, ...] = (1,)
    while len(word) < n:
        nxt = subst.apply(word)
        if len(nxt) <= len(word):
            raise InvalidInput("fixed point is finite")
        word = nxt
    return word[:n]


def word_str(word) -> str:
    return "".join(str(a) for a in word)


# ---------------------------------------------------------------------------
# Z[beta] for a cubic beta^3 = c2 beta^2 + c1 beta + c0


class CubicRing:
    """The ring Z[beta] where beta is the real root > 1 of x^3 - c2 x^2 - c1 x - c0."""

    def __init__(self, c2: int, c1: int, c0: int):
        self.rel = (c0, c1, c2)
        self._poly = lambda x: x ** 3 - c2 * x ** 2 - c1 * x - c0
        lo, hi = Fraction(1), Fraction(1 + abs(c0) + abs(c1) + abs(c2))
        if self._poly(lo) >= 0 or self._poly(hi) <= 0:
            raise Unsupported("no isolated real root > 1")
        self._lo, self._hi = lo, hi
        self._refine(Fraction(1, 2 ** 80))
        self.beta_float = float((self._lo + self._hi) / 2)

    def _refine(self, width: Fraction) -> None:
        while self._hi - self._lo > width:
            mid = (self._lo + self._hi) / 2
            if self._poly(mid) > 0:
                self._hi = mid
            else:
                self._lo = mid

    def interval(self) -> tuple[Fraction, Fraction]:
        return self._lo, self._hi

    def __call__(self, a: int = 0, b: int = 0, c: int = 0) -> "BetaNumber":
        return BetaNumber(int(a), int(b), int(c), self)

    @property
    def beta(self) -> "BetaNumber":
        return self(0, 1, 0)

    @property
    def one(self) -> "BetaNumber":
        return self(1, 0, 0)

    @property
    def zero(self) -> "BetaNumber":
        return self(0, 0, 0)

    def conjugates(self) -> np.ndarray:
        c0, c1, c2 = self.rel
        return np.roots([1, -c2, -c1, -c0])

    def is_pisot(self) -> bool:
        roots = self.conjugates()
        big = [r for r in roots if abs(r) >= 1]
        return len(big) == 1 and abs(big[0].imag) < 1e-12 and big[0].real > 1

    def _sign(self, a: int, b: int, c: int) -> int:
        if a == 0 and b == 0 and c == 0:
            return 0
        # float filter first; the exact interval path only runs near zero
        x = self.beta_float
        v = a + b * x + c * x * x
        err = (abs(a) + abs(b) * x + abs(c) * x * x) * 1e-12
        if abs(v) > err:
            return 1 if v > 0 else -1
        width = Fraction(1, 2 ** 80)
        while True:
            lo, hi = self._lo, self._hi
            bl, bh = sorted((b * lo, b * hi))
            cl, ch = sorted((c * lo * lo, c * hi * hi))
            low, high = a + bl + cl, a + bh + ch
            if low > 0:
                return 1
            if high < 0:
                return -1
            width /= 2 ** 32
            self._refine(width)


TRIB_RING = CubicRing(1, 1, 1)


@dataclass(frozen=True)
class BetaNumber:
    """a + b*beta + c*beta^2 in a CubicRing."""

    a: int
    b: int
    c: int
    ring: CubicRing = field(default=TRIB_RING, compare=False, repr=False)

    @property
    def coeffs(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def _lift(self, other) -> "BetaNumber":
        if isinstance(other, BetaNumber):
            return other
        if isinstance(other, (int, np.integer)):
            return BetaNumber(int(other), 0, 0, self.ring)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return BetaNumber(self.a + o.a, self.b + o.b, self.c + o.c, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return BetaNumber(-self.a, -self.b, -self.c, self.ring)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        p = [0] * 5
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(o.coeffs):
                p[i + j] += x * y
        c0, c1, c2 = self.ring.rel
        for k in (4, 3):
            t = p[k]
            p[k] = 0
            p[k - 3] += c0 * t
            p[k - 2] += c1 * t
            p[k - 1] += c2 * t
        return BetaNumber(p[0], p[1], p[2], self.ring)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self.ring.one
        for _ in range(n):
            out = out * self
        return out

    def mult_matrix(self) -> np.ndarray:
        """Matrix of multiplication by self on the basis (1, beta, beta^2)."""
        cols = [self * self.ring(*e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
        return np.array([[col.coeffs[r] for col in cols] for r in range(3)], dtype=np.int64)

    def inverse(self) -> "BetaNumber":
        inv = matrix_inverse(self.mult_matrix())
        return BetaNumber(*(int(v) for v in inv[:, 0]), self.ring)

    def sign(self) -> int:
        return self.ring._sign(self.a, self.b, self.c)

    def __float__(self) -> float:
        x = self.ring.beta_float
        return self.a + self.b * x + self.c * x * x

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __str__(self):
        return f"{self.a}{self.b:+d}b{self.c:+d}b^2"


def beta_sign(x: BetaNumber | Sequence[int], ring: CubicRing = TRIB_RING) -> int:
    if not isinstance(x, BetaNumber):
        x = ring(*x)
    return x.sign()


def dot(x: Sequence[int], v: Sequence[BetaNumber]) -> BetaNumber:
    out = v[0].ring.zero
    for xi, vi in zip(x, v):
        out = out + vi * int(xi)
    return out


class PisotData:
    """Eigen-data of a unimodular 3x3 Pisot matrix, exact where it matters."""

    def __init__(self, m, ring: CubicRing | None = None):
        self.m = np.asarray(m, dtype=np.int64)
        if ring is None:
            # characteristic polynomial x^3 - t x^2 + s x - det
            t = int(np.trace(self.m))
            s = int(round(sum(np.linalg.det(np.delete(np.delete(self.m, i, 0), i, 1))
                              for i in range(3))))
            det = int(round(np.linalg.det(self.m)))
            ring = CubicRing(t, -s, det)
        self.ring = ring
        if not ring.is_pisot():
            raise Unsupported("matrix is not Pisot")
        self.m_inv = matrix_inverse(self.m)
        adj = self._adjugate()
        right = next(col for col in (tuple(adj[r][k] for r in range(3)) for k in range(3))
                     if any(v.coeffs != (0, 0, 0) for v in col))
        left = next(row for row in adj if any(v.coeffs != (0, 0, 0) for v in row))
        self.u_r = self._normalize(right)
        self.w = self._normalize(left)
        self.beta = ring.beta_float
        self.w_float = np.array([float(v) for v in self.w])
        self.ur_float = np.array([float(v) for v in self.u_r])
        self.norm = self.u_r[0] * self.w[0] + self.u_r[1] * self.w[1] + self.u_r[2] * self.w[2]
        e1 = self._project3(np.array([1.0, 0.0, 0.0]))
        e2 = self._project3(np.array([0.0, 1.0, 0.0]))
        b1 = e1 / np.linalg.norm(e1)
        b2 = e2 - (e2 @ b1) * b1
        b2 = b2 / np.linalg.norm(b2)
        self.plane_basis = np.vstack([b1, b2])
        self.h = self.plane_basis @ self.m @ self.plane_basis.T

    def _adjugate(self):
        """adj(beta I - M) over Z[beta]; its rows are left and columns right eigenvectors."""
        r = self.ring
        a = [[(r.beta if i == j else r.zero) - int(self.m[i, j]) for j in range(3)] for i in range(3)]

        def minor(i, j):
            rows = [k for k in range(3) if k != i]
            cols = [k for k in range(3) if k != j]
            return a[rows[0]][cols[0]] * a[rows[1]][cols[1]] - a[rows[0]][cols[1]] * a[rows[1]][cols[0]]

        return [[minor(j, i) * ((-1) ** (i + j)) for j in range(3)] for i in range(3)]

    def _normalize(self, vec):
        last = vec[2]
        try:
            inv = last.inverse()
            vec = tuple(v * inv for v in vec)
        except Unsupported:
            pass
        if float(vec[0]) + float(vec[1]) + float(vec[2]) < 0:
            vec = tuple(-v for v in vec)
        return vec

    def _project3(self, x: np.ndarray) -> np.ndarray:
        return x - (x @ self.w_float) / (self.ur_float @ self.w_float) * self.ur_float

    def height(self, x: Sequence[int]) -> BetaNumber:
        return dot(x, self.w)

    def project(self, x) -> np.ndarray:
        """Coordinates in plane_basis of the projection along u_r onto ker <., w>."""
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1, 3)
        hts = flat @ self.w_float
        proj = flat - np.outer(hts / (self.ur_float @ self.w_float), self.ur_float)
        out = proj @ self.plane_basis.T
        return out.reshape(x.shape[:-1] + (2,))

    def check_eigen(self) -> bool:
        r = self.ring
        b = r.beta
        for j in range(3):
            lhs = sum((self.w[i] * int(self.m[i, j]) for i in range(3)), r.zero)
            if (lhs - b * self.w[j]).coeffs != (0, 0, 0):
                return False
        for i in range(3):
            lhs = sum((self.u_r[j] * int(self.m[i, j]) for j in range(3)), r.zero)
            if (lhs - b * self.u_r[i]).coeffs != (0, 0, 0):
                return False
        return True


_TRIB_PISOT: PisotData | None = None


def tribonacci_pisot() -> PisotData:
    global _TRIB_PISOT
    if _TRIB_PISOT is None:
        _TRIB_PISOT = PisotData(incidence_matrix(TRIBONACCI), TRIB_RING)
    return _TRIB_PISOT
