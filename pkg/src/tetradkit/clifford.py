"""Real Clifford algebras C(p,q) and complex Clifford algebras CC(n).

Elements are coefficient vectors over the 2^n basis blades, indexed by
bitmask: bit a set means generator a is present, generators written in
increasing index order.  For C(p,q) the first p generators square to +e and
the remaining q square to -e; the complex algebra CC(n) uses the Euclidean
basis in which every generator squares to +e.

All values are immutable and every operation is pure, so instances can be
shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "Signature",
    "MultiVector",
    "AlgebraClass",
    "geometric_product",
    "complexify",
    "classify",
    "classify_complex",
    "center_dimension",
]


@dataclass(frozen=True)
class Signature:
    """p generators squaring to +e, q squaring to -e; n = p + q <= 8."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError("signature counts must be non-negative")
        if not 1 <= self.n <= 8:
            raise ValueError("supported algebras have 1 <= p+q <= 8")

    @property
    def n(self):
        return self.p + self.q

    def generator_square(self, a):
        return 1.0 if a < self.p else -1.0

    @property
    def squares(self):
        return tuple(self.generator_square(a) for a in range(self.n))


def _reorder_sign(mask_a, mask_b):
    """Sign from moving each generator of blade b into canonical position
    within blade a: one transposition per pair (i in a, j in b) with i > j."""
    swaps = 0
    a = mask_a
    while a:
        lowest = a & -a
        # generators of b strictly below this generator of a
        swaps += bin(mask_b & (lowest - 1)).count("1")
        a ^= lowest
    return -1.0 if swaps & 1 else 1.0


@lru_cache(maxsize=32)
def _cayley(squares):
    """(result index, sign) tables for blade products under given generator squares."""
    n = len(squares)
    dim = 1 << n
    idx = np.zeros((dim, dim), dtype=np.int64)
    sgn = np.zeros((dim, dim))
    for a in range(dim):
        for b in range(dim):
            s = _reorder_sign(a, b)
            common = a & b
            g = 0
            while common:
                low = common & -common
                s *= squares[low.bit_length() - 1]
                common ^= low
                g += 1
            idx[a, b] = a ^ b
            sgn[a, b] = s
    return idx, sgn


class MultiVector:
    """Element of C(p,q) (field 'real') or CC(n) (field 'complex')."""

    __slots__ = ("sig", "field", "coeffs")

    def __init__(self, sig, coeffs, field="real"):
        if field not in ("real", "complex"):
            raise ValueError("field must be 'real' or 'complex'")
        self.sig = sig
        self.field = field
        dtype = complex if field == "complex" else float
        coeffs = np.asarray(coeffs, dtype=dtype)
        if coeffs.shape != (1 << sig.n,):
            raise ValueError(f"need {1 << sig.n} blade coefficients")
        coeffs.setflags(write=False)
        self.coeffs = coeffs

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, sig, field="real"):
        return cls(sig, np.zeros(1 << sig.n), field)

    @classmethod
    def unit(cls, sig, field="real"):
        c = np.zeros(1 << sig.n)
        c[0] = 1.0
        return cls(sig, c, field)

    @classmethod
    def generator(cls, sig, a, field="real"):
        c = np.zeros(1 << sig.n)
        c[1 << a] = 1.0
        return cls(sig, c, field)

    @classmethod
    def blade(cls, sig, mask, coefficient=1.0, field="real"):
        c = np.zeros(1 << sig.n, dtype=complex if field == "complex" else float)
        c[mask] = coefficient
        return cls(sig, c, field)

    @classmethod
    def from_vector(cls, sig, components, field="real"):
        """Grade-1 element with the given generator components."""
        components = np.asarray(components)
        c = np.zeros(1 << sig.n, dtype=complex if field == "complex" else float)
        for a in range(sig.n):
            c[1 << a] = components[a]
        return cls(sig, c, field)

    # -- structure ----------------------------------------------------------

    @property
    def squares(self):
        if self.field == "complex":
            return (1.0,) * self.sig.n
        return self.sig.squares

    def _same_algebra(self, other):
        if self.sig != other.sig or self.field != other.field:
            raise ValueError("operands live in different Clifford algebras")

    def __add__(self, other):
        self._same_algebra(other)
        return MultiVector(self.sig, self.coeffs + other.coeffs, self.field)

    def __sub__(self, other):
        self._same_algebra(other)
        return MultiVector(self.sig, self.coeffs - other.coeffs, self.field)

    def __neg__(self):
        return MultiVector(self.sig, -self.coeffs, self.field)

    def scale(self, s):
        if self.field == "real" and isinstance(s, complex):
            raise ValueError("complex scalar on a real multivector")
        return MultiVector(self.sig, self.coeffs * s, self.field)

    def __mul__(self, other):
        if isinstance(other, (int, float)) or (
                self.field == "complex" and isinstance(other, complex)):
            return self.scale(other)
        return geometric_product(self, other)

    def __rmul__(self, s):
        return self.scale(s)

    def scalar_part(self):
        return self.coeffs[0]

    def vector_part(self):
        return np.array([self.coeffs[1 << a] for a in range(self.sig.n)])

    def grade_select(self, k):
        c = self.coeffs.copy()
        for mask in range(len(c)):
            if bin(mask).count("1") != k:
                c[mask] = 0.0
        return MultiVector(self.sig, c, self.field)

    def grade_norms(self):
        """Euclidean coefficient norm per grade, for purity checks."""
        out = np.zeros(self.sig.n + 1)
        for mask, c in enumerate(self.coeffs):
            out[bin(mask).count("1")] += abs(c) ** 2
        return np.sqrt(out)

    def eta(self, other):
        """Bilinear form on grade-1 elements: eta(v, w) = sum eta^aa v_a w_a."""
        v, w = self.vector_part(), other.vector_part()
        return float(np.real(np.sum(np.asarray(self.squares) * v * w)))

    def allclose(self, other, tol=1e-12):
        self._same_algebra(other)
        return bool(np.max(np.abs(self.coeffs - other.coeffs)) <= tol)

    def __repr__(self):
        terms = []
        for mask, c in enumerate(self.coeffs):
            if c == 0:
                continue
            blade = "e" if mask == 0 else "".join(
                f"v{a}" for a in range(self.sig.n) if mask >> a & 1)
            terms.append(f"{c:+g}*{blade}")
        body = " ".join(terms) if terms else "0"
        tag = f"CC({self.sig.n})" if self.field == "complex" else f"C({self.sig.p},{self.sig.q})"
        return f"<{tag} {body}>"


def geometric_product(a, b):
    """Bilinear associative product with v^a v^b + v^b v^a = 2 eta^ab e."""
    a._same_algebra(b)
    idx, sgn = _cayley(a.squares)
    contrib = (a.coeffs[:, None] * b.coeffs[None, :]) * sgn
    out = np.zeros(len(a.coeffs), dtype=contrib.dtype)
    np.add.at(out, idx.ravel(), contrib.ravel())
    return MultiVector(a.sig, out, a.field)


def complexify(a):
    """Embed C(p,q) into CC(n) along the canonical monomorphism that maps the
    first p generators to e^a and the rest to i*e^a.  Ring monomorphism."""
    if a.field != "real":
        raise ValueError("complexify expects a real multivector")
    sig = a.sig
    out = np.zeros(1 << sig.n, dtype=complex)
    neg_mask = ((1 << sig.n) - 1) & ~((1 << sig.p) - 1)
    for mask, c in enumerate(a.coeffs):
        if c != 0.0:
            k = bin(mask & neg_mask).count("1")
            out[mask] = c * (1j ** k)
    return MultiVector(sig, out, "complex")


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

MAT_R = "Mat(d,R)"
MAT_R2 = "Mat(d,R)+Mat(d,R)"
MAT_C = "Mat(d,C)"
MAT_H = "Mat(d,H)"
MAT_H2 = "Mat(d,H)+Mat(d,H)"


@dataclass(frozen=True)
class AlgebraClass:
    """Matrix-algebra type of a Clifford algebra as a ring."""

    kind: str
    d: int

    @property
    def real_dimension(self):
        base = self.d * self.d
        return {MAT_R: base, MAT_R2: 2 * base, MAT_C: 2 * base,
                MAT_H: 4 * base, MAT_H2: 8 * base}[self.kind]

    @property
    def center_real_dimension(self):
        """Dimension over R of the ring's center."""
        return {MAT_R: 1, MAT_H: 1, MAT_C: 2, MAT_R2: 2, MAT_H2: 2}[self.kind]

    def __str__(self):
        return self.kind.replace("d", str(self.d), 1) if "d" in self.kind else self.kind


def classify(sig):
    """Ring type of C(p,q), by lookup on (p - q) mod 8."""
    p, q, n = sig.p, sig.q, sig.n
    r = (p - q) % 8
    if r in (0, 2):
        return AlgebraClass(MAT_R, 2 ** (n // 2))
    if r == 1:
        return AlgebraClass(MAT_R2, 2 ** ((n - 1) // 2))
    if r in (3, 7):
        return AlgebraClass(MAT_C, 2 ** ((n - 1) // 2))
    if r in (4, 6):
        return AlgebraClass(MAT_H, 2 ** ((n - 2) // 2))
    return AlgebraClass(MAT_H2, 2 ** ((n - 3) // 2))


def classify_complex(n):
    """Ring type of CC(n), by lookup on n mod 2."""
    if n % 2 == 0:
        return AlgebraClass(MAT_C, 2 ** (n // 2))
    return AlgebraClass(MAT_C + "+" + MAT_C, 2 ** ((n - 1) // 2))


def center_dimension(sig, field="real"):
    """Dimension over the scalar field of {z : zq = qz for all basis blades q},
    found by solving the linear commutation system."""
    if sig.n > 6:
        raise ValueError("center_dimension supports n <= 6")
    squares = (1.0,) * sig.n if field == "complex" else sig.squares
    idx, sgn = _cayley(squares)
    dim = 1 << sig.n
    dtype = complex if field == "complex" else float
    rows = []
    for blade in range(dim):
        left = np.zeros((dim, dim), dtype=dtype)   # coeffs of blade * z
        right = np.zeros((dim, dim), dtype=dtype)  # coeffs of z * blade
        for j in range(dim):
            left[idx[blade, j], j] += sgn[blade, j]
            right[idx[j, blade], j] += sgn[j, blade]
        rows.append(left - right)
    system = np.concatenate(rows, axis=0)
    s = np.linalg.svd(system, compute_uv=False)
    rank = int(np.sum(s > 1e-9 * max(1.0, s[0])))
    return dim - rank
