"""Matrix representations of Clifford algebras, gamma matrices, Pin/Spin
versors with their adjoint action on the generating space, Lorentz generators
on spinors, and spinor spaces as minimal left ideals."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clifford import MultiVector, Signature, geometric_product

__all__ = [
    "MatrixRep",
    "VersorElement",
    "SpinorSpaceBasis",
    "build_rep",
    "dirac_gammas",
    "majorana_gammas",
    "adjoint_action",
    "adjoint_matrix",
    "lorentz_generators",
    "spinor_space",
]

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA1, SIGMA2, SIGMA3)


@dataclass(frozen=True)
class MatrixRep:
    """Faithful matrix representation of a Clifford algebra.

    ``eta`` holds the generator squares in order (all +1 for the Euclidean
    complex algebra); gen_images extend multiplicatively to all blades.
    """

    n: int
    dim: int
    gen_images: tuple
    eta: tuple

    def blade_image(self, mask):
        out = np.eye(self.dim, dtype=complex)
        for a in range(self.n):
            if mask >> a & 1:
                out = out @ self.gen_images[a]
        return out

    def image(self, mv):
        """Extend to an arbitrary multivector by linearity."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for mask, c in enumerate(mv.coeffs):
            if c != 0.0:
                out = out + c * self.blade_image(mask)
        return out

    def anticommutator_defect(self):
        """max |g^a g^b + g^b g^a - 2 eta^ab| over all generator pairs."""
        worst = 0.0
        for a in range(self.n):
            for b in range(self.n):
                acomm = self.gen_images[a] @ self.gen_images[b] \
                    + self.gen_images[b] @ self.gen_images[a]
                target = 2.0 * (self.eta[a] if a == b else 0.0) * np.eye(self.dim)
                worst = max(worst, float(np.max(np.abs(acomm - target))))
        return worst


def build_rep(n):
    """Representation of CC(n) on 2^(n/2) dimensions by iterated doubling.

    Start from the n = 2 block {sigma1, sigma2}; each doubling keeps the old
    generator images on the first tensor factor and appends two new
    generators built from the chirality element, which anticommutes with
    everything already present.  Generator entries stay in {0, +-1, +-i}.
    """
    if n % 2 != 0 or not 2 <= n <= 8:
        raise ValueError("build_rep needs even n with 2 <= n <= 8")
    gens = [SIGMA1.copy(), SIGMA2.copy()]
    chirality = SIGMA3.copy()  # = -i * sigma1 sigma2
    eye2 = np.eye(2, dtype=complex)
    while len(gens) < n:
        gens = [np.kron(g, eye2) for g in gens]
        gens.append(np.kron(chirality, SIGMA1))
        gens.append(np.kron(chirality, SIGMA2))
        chirality = np.kron(chirality, SIGMA3)
    return MatrixRep(n=n, dim=2 ** (n // 2),
                     gen_images=tuple(g for g in gens), eta=(1.0,) * n)


def dirac_gammas():
    """The four 4x4 Dirac matrices in the chiral block form, as images of the
    C(1,3) generators: off-diagonal identity blocks for gamma^0 and
    off-diagonal +-sigma^j blocks for gamma^j."""
    zero = np.zeros((2, 2), dtype=complex)
    eye = np.eye(2, dtype=complex)
    g0 = np.block([[zero, eye], [eye, zero]])
    gj = [np.block([[zero, -s], [s, zero]]) for s in PAULI]
    return MatrixRep(n=4, dim=4, gen_images=(g0, *gj), eta=(1.0, -1.0, -1.0, -1.0))


def majorana_gammas():
    """The irreducible real 4x4 representation; entries in {-1, 0, 1}.

    The realized anticommutation signature, read off the matrix squares in
    the given order, is eta = diag(+1, -1, +1, +1).
    """
    zero = np.zeros((2, 2))
    eye = np.eye(2)
    s1 = np.real(SIGMA1)
    s3 = np.real(SIGMA3)
    m0 = np.block([[zero, eye], [eye, zero]])
    m1 = np.block([[zero, -eye], [eye, zero]])
    m2 = np.block([[s1, zero], [zero, -s1]])
    m3 = np.block([[s3, zero], [zero, -s3]])
    return MatrixRep(n=4, dim=4, gen_images=(m0, m1, m2, m3),
                     eta=(1.0, -1.0, 1.0, 1.0))


# ---------------------------------------------------------------------------
# Pin/Spin versors and the adjoint action
# ---------------------------------------------------------------------------


class VersorError(ValueError):
    pass


@dataclass(frozen=True)
class VersorElement:
    """Product of unit-norm vectors in the generating space of C(p,q).

    Lies in Pin; lies in Spin iff the factor count is even.
    """

    sig: Signature
    factors: tuple  # of length-n float arrays with |eta(v,v)| = 1
    mv: MultiVector = field(repr=False)

    @classmethod
    def from_vectors(cls, sig, vectors, normalize=True):
        squares = np.asarray(sig.squares)
        factors = []
        prod = MultiVector.unit(sig)
        for raw in vectors:
            v = np.asarray(raw, dtype=float)
            norm2 = float(np.sum(squares * v * v))
            if abs(norm2) < 1e-12:
                raise VersorError("null vector cannot be a versor factor")
            if normalize:
                v = v / np.sqrt(abs(norm2))
                norm2 = float(np.sum(squares * v * v))
            if abs(abs(norm2) - 1.0) > 1e-12:
                raise VersorError("versor factors need |eta(v,v)| = 1")
            factors.append(v)
            prod = prod * MultiVector.from_vector(sig, v)
        return cls(sig=sig, factors=tuple(map(tuple, factors)), mv=prod)

    @property
    def in_spin(self):
        return len(self.factors) % 2 == 0

    def inverse_mv(self):
        """Inverse as a multivector: reversed product of v / eta(v,v)."""
        squares = np.asarray(self.sig.squares)
        out = MultiVector.unit(self.sig)
        for v in reversed(self.factors):
            v = np.asarray(v)
            norm2 = float(np.sum(squares * v * v))
            out = out * MultiVector.from_vector(self.sig, v / norm2)
        return out

    def negated(self):
        """-g as a versor: flip one factor, or realize -e on the empty versor
        as (v, v) with eta(v,v) = -1, falling back to (v, -v) with +1."""
        if not self.factors:
            if self.sig.q >= 1:
                v = np.eye(self.sig.n)[self.sig.p]
                return VersorElement.from_vectors(self.sig, [v, v])
            v = np.eye(self.sig.n)[0]
            return VersorElement.from_vectors(self.sig, [v, -v])
        flipped = (tuple(-c for c in self.factors[0]),) + self.factors[1:]
        return VersorElement(sig=self.sig, factors=flipped, mv=-self.mv)


def adjoint_action(g, w):
    """g w g^-1 re-expressed in the generating space.

    Preserves eta; raises if the conjugate leaves grade 1 (cannot happen for
    true versors, so it signals internal inconsistency).
    """
    sig = g.sig
    w_mv = MultiVector.from_vector(sig, np.asarray(w, dtype=float))
    out = g.mv * w_mv * g.inverse_mv()
    norms = out.grade_norms()
    impurity = float(np.sqrt(np.sum(norms**2) - norms[1] ** 2))
    scale = max(1.0, float(norms[1]))
    if impurity > 1e-9 * scale:
        raise VersorError(f"conjugation left the generating space (defect {impurity:.3g})")
    return out.vector_part()


def adjoint_matrix(g):
    """Matrix of the induced orthogonal map, columns = images of generators."""
    n = g.sig.n
    cols = [adjoint_action(g, np.eye(n)[a]) for a in range(n)]
    return np.stack(cols, axis=1)


def lorentz_generators(rep):
    """Spinor-space generators I_ab = (1/4)[gamma_a, gamma_b] with the first
    index lowered by the representation's eta.  Returns shape (4,4,d,d) with
    I[a,b] = -I[b,a]."""
    eta = np.asarray(rep.eta)
    if rep.n != 4:
        raise ValueError("lorentz_generators expects a 4-generator representation")
    gam_up = [np.asarray(g, dtype=complex) for g in rep.gen_images]
    gam_dn = [eta[a] * gam_up[a] for a in range(4)]
    out = np.zeros((4, 4, rep.dim, rep.dim), dtype=complex)
    for a in range(4):
        for b in range(4):
            out[a, b] = 0.25 * (gam_dn[a] @ gam_dn[b] - gam_dn[b] @ gam_dn[a])
    return out


# ---------------------------------------------------------------------------
# Spinor spaces as minimal left ideals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpinorSpaceBasis:
    idempotent: MultiVector
    basis: tuple  # MultiVectors spanning the minimal left ideal

    @property
    def complex_dimension(self):
        return len(self.basis)

    def basis_matrix(self):
        return np.stack([b.coeffs for b in self.basis], axis=0)


def spinor_space(n):
    """Primitive idempotent and a basis of the minimal left ideal CC(n)*p.

    The idempotent is a product of commuting rank-1 projectors (e + s_k)/2
    built from the maximal commuting blade set {i e^0 e^1, i e^2 e^3, ...};
    each s_k squares to +e.
    """
    if n not in (2, 4):
        raise ValueError("spinor_space supports n in {2, 4}")
    sig = Signature(n, 0)
    p = MultiVector.unit(sig, field="complex")
    half_e = MultiVector.unit(sig, field="complex").scale(0.5)
    for k in range(n // 2):
        mask = (1 << (2 * k)) | (1 << (2 * k + 1))
        s = MultiVector.blade(sig, mask, 1j, field="complex")
        p = p * (half_e + s.scale(0.5))
    # ideal: row space of {q_i * p} over all basis blades q_i
    rows = []
    for mask in range(1 << n):
        q = MultiVector.blade(sig, mask, 1.0, field="complex")
        rows.append((q * p).coeffs)
    matrix = np.array(rows)
    u, s, vh = np.linalg.svd(matrix)
    rank = int(np.sum(s > 1e-10 * s[0]))
    basis = tuple(MultiVector(sig, vh[i], field="complex") for i in range(rank))
    return SpinorSpaceBasis(idempotent=p, basis=basis)
