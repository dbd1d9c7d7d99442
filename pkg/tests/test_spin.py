"""Tests for matrix representations, gamma matrices and Pin/Spin versors."""

import numpy as np
import pytest
from scipy.linalg import expm

from tetradkit.clifford import MultiVector, Signature
from tetradkit.spin import (
    VersorElement,
    VersorError,
    adjoint_action,
    adjoint_matrix,
    build_rep,
    dirac_gammas,
    lorentz_generators,
    majorana_gammas,
    spinor_space,
)

ETA = np.diag([1.0, -1.0, -1.0, -1.0])


def random_versor(sig, rng, n_factors):
    """Random versor with the requested factor count.

    Factors are rejected while |eta(v,v)| < 0.2 of the Euclidean-unit vector:
    near-null factors blow up under eta-normalization and are numerically
    pathological (they correspond to unboundedly large boosts).
    """
    squares = np.asarray(sig.squares)
    vectors = []
    while len(vectors) < n_factors:
        v = rng.normal(size=sig.n)
        v /= np.linalg.norm(v)
        if abs(np.sum(squares * v * v)) > 0.2:
            vectors.append(v)
    return VersorElement.from_vectors(sig, vectors)


class TestBuildRep:
    def test_n2_is_pauli_pair(self):
        rep = build_rep(2)
        assert np.array_equal(rep.gen_images[0], np.array([[0, 1], [1, 0]], dtype=complex))
        assert np.array_equal(rep.gen_images[1], np.array([[0, -1j], [1j, 0]], dtype=complex))
        for g in rep.gen_images:
            assert np.array_equal(g @ g, np.eye(2, dtype=complex))

    def test_n4_dimension(self):
        assert build_rep(4).dim == 4

    @pytest.mark.parametrize("n", [2, 4, 6, 8])
    def test_generators_anticommute_exactly(self, n):
        rep = build_rep(n)
        assert rep.anticommutator_defect() == 0.0

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_entries_are_gaussian_units(self, n):
        rep = build_rep(n)
        for g in rep.gen_images:
            assert set(np.unique(g)) <= {0, 1, -1, 1j, -1j}

    def test_odd_or_large_n_rejected(self):
        with pytest.raises(ValueError):
            build_rep(3)
        with pytest.raises(ValueError):
            build_rep(10)

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_homomorphism_on_random_blade_pairs(self, n):
        # oracle: blade products computed in the coefficient algebra
        rep = build_rep(n)
        sig = Signature(n, 0)
        rng = np.random.default_rng(23)
        for _ in range(50):
            m1, m2 = rng.integers(0, 1 << n, size=2)
            a = MultiVector.blade(sig, int(m1), 1.0, field="complex")
            b = MultiVector.blade(sig, int(m2), 1.0, field="complex")
            lhs = rep.image(a * b)
            rhs = rep.blade_image(int(m1)) @ rep.blade_image(int(m2))
            assert np.array_equal(lhs, rhs)


class TestDiracGammas:
    def test_gamma0_block_structure(self):
        g0 = dirac_gammas().gen_images[0]
        assert np.array_equal(g0[:2, 2:], np.eye(2)) and np.array_equal(g0[2:, :2], np.eye(2))
        assert np.all(g0[:2, :2] == 0) and np.all(g0[2:, 2:] == 0)

    def test_gamma_squares(self):
        rep = dirac_gammas()
        eye = np.eye(4, dtype=complex)
        assert np.array_equal(rep.gen_images[0] @ rep.gen_images[0], eye)
        assert np.array_equal(rep.gen_images[1] @ rep.gen_images[1], -eye)

    def test_anticommutation_exact(self):
        assert dirac_gammas().anticommutator_defect() == 0.0


class TestMajoranaGammas:
    def test_first_matrix_block_form(self):
        m0 = majorana_gammas().gen_images[0]
        assert np.array_equal(m0, np.block([[np.zeros((2, 2)), np.eye(2)],
                                            [np.eye(2), np.zeros((2, 2))]]))

    def test_entries_real_unit(self):
        rep = majorana_gammas()
        for m in rep.gen_images:
            assert np.isrealobj(m)
            assert set(np.unique(m)) <= {-1.0, 0.0, 1.0}

    def test_anticommutators_match_recorded_eta(self):
        # matrix oracle over all pairs; realized signature diag(+,-,+,+)
        rep = majorana_gammas()
        assert rep.eta == (1.0, -1.0, 1.0, 1.0)
        assert rep.anticommutator_defect() == 0.0

    def test_three_plus_one_signs(self):
        assert sorted(majorana_gammas().eta) == [-1.0, 1.0, 1.0, 1.0]


class TestAdjointAction:
    def test_identity_versor(self):
        sig = Signature(1, 3)
        g = VersorElement.from_vectors(sig, [])
        w = np.array([0.3, -1.2, 0.5, 2.0])
        assert np.array_equal(adjoint_action(g, w), w)

    def test_euclidean_rotation_matches_2x2_oracle(self):
        # two unit factors at angle theta/2 give cos(t/2) e + sin(t/2) v0v1
        # and rotate the (0,1)-plane by theta (orientation set by factor order)
        sig = Signature(4, 0)
        theta = 0.6
        u = np.array([1.0, 0.0, 0.0, 0.0])
        w = np.array([np.cos(theta / 2), np.sin(theta / 2), 0.0, 0.0])
        g = VersorElement.from_vectors(sig, [u, w])
        expected_mv = (MultiVector.unit(sig).scale(np.cos(theta / 2))
                       + MultiVector.blade(sig, 0b11, np.sin(theta / 2)))
        assert g.mv.allclose(expected_mv, tol=1e-15)
        R = adjoint_matrix(g)
        rot = np.array([[np.cos(theta), np.sin(theta)],
                        [-np.sin(theta), np.cos(theta)]])
        assert np.allclose(R[:2, :2], rot, atol=1e-14)
        assert np.allclose(R[2:, 2:], np.eye(2), atol=1e-14)
        assert np.allclose(R[:2, 2:], 0, atol=1e-14) and np.allclose(R[2:, :2], 0, atol=1e-14)

    def test_sign_of_versor_irrelevant(self):
        rng = np.random.default_rng(4)
        sig = Signature(1, 3)
        g = random_versor(sig, rng, 4)
        w = rng.normal(size=4)
        assert np.allclose(adjoint_action(g, w), adjoint_action(g.negated(), w), atol=1e-13)

    @pytest.mark.parametrize("sig", [Signature(1, 3), Signature(4, 0), Signature(0, 4)])
    def test_eta_preserved_on_random_spin_versors(self, sig):
        rng = np.random.default_rng(19)
        eta = np.diag(sig.squares)
        for _ in range(25):
            g = random_versor(sig, rng, int(rng.choice([2, 4, 6])))
            w1, w2 = rng.normal(size=(2, sig.n))
            gw1, gw2 = adjoint_action(g, w1), adjoint_action(g, w2)
            before = w1 @ eta @ w2
            after = gw1 @ eta @ gw2
            assert abs(after - before) < 1e-12 * max(1.0, abs(before))

    def test_spin_versors_have_unit_determinant(self):
        rng = np.random.default_rng(31)
        for sig in (Signature(1, 3), Signature(4, 0)):
            for _ in range(10):
                g = random_versor(sig, rng, 4)
                assert g.in_spin
                assert np.linalg.det(adjoint_matrix(g)) == pytest.approx(1.0, abs=1e-10)

    def test_kernel_is_plus_minus_unit(self):
        # versors acting as the identity must have product +-e
        sig = Signature(1, 3)
        rng = np.random.default_rng(8)
        unit = MultiVector.unit(sig)
        for _ in range(20):
            v = rng.normal(size=4)
            g = VersorElement.from_vectors(sig, [v, v])  # v v = eta(v,v) e = +-e
            assert np.allclose(adjoint_matrix(g), np.eye(4), atol=1e-12)
            assert g.mv.allclose(unit, tol=1e-12) or g.mv.allclose(-unit, tol=1e-12)

    def test_null_factor_rejected(self):
        sig = Signature(1, 1)
        with pytest.raises(VersorError):
            VersorElement.from_vectors(sig, [np.array([1.0, 1.0])])


class TestLorentzGenerators:
    def test_antisymmetry(self):
        I = lorentz_generators(dirac_gammas())
        for a in range(4):
            for b in range(4):
                assert np.array_equal(I[a, b], -I[b, a])

    def test_commutation_relations_full(self):
        # matrix-commutator oracle against the stated bracket
        I = lorentz_generators(dirac_gammas())
        for a in range(4):
            for b in range(4):
                for c in range(4):
                    for d in range(4):
                        lhs = I[a, b] @ I[c, d] - I[c, d] @ I[a, b]
                        rhs = (ETA[a, d] * I[b, c] + ETA[b, c] * I[a, d]
                               - ETA[a, c] * I[b, d] - ETA[b, d] * I[a, c])
                        assert np.max(np.abs(lhs - rhs)) < 1e-14

    def test_specific_bracket_value(self):
        # [I_01, I_12] = eta_11 I_02 = -I_02 (other bracket terms vanish)
        I = lorentz_generators(dirac_gammas())
        lhs = I[0, 1] @ I[1, 2] - I[1, 2] @ I[0, 1]
        assert np.max(np.abs(lhs + I[0, 2])) < 1e-15

    def test_exponential_matches_adjoint_rotation(self):
        # matrix-exponential oracle: S gamma_c S^-1 = gamma_d Lambda^d_c with
        # Lambda = exp(theta L), L the vector generator of the same (a,b)
        theta = 0.3
        rep = dirac_gammas()
        I = lorentz_generators(rep)
        S = expm(theta * I[1, 2])
        Lvec = np.zeros((4, 4))
        for c in range(4):
            for d in range(4):
                Lvec[c, d] = ETA[2, d] * (c == 1) - ETA[1, d] * (c == 2)
        Lam = expm(theta * Lvec)
        gam_dn = [ETA[a, a] * np.asarray(rep.gen_images[a]) for a in range(4)]
        Sinv = np.linalg.inv(S)
        for c in range(4):
            rhs = sum(gam_dn[d] * Lam[d, c] for d in range(4))
            assert np.max(np.abs(S @ gam_dn[c] @ Sinv - rhs)) < 1e-12
        # the same Lambda is realized by the adjoint action of the
        # corresponding Spin versor cos(t/2) e + sin(t/2) v1 v2
        sig = Signature(1, 3)
        u = np.array([0.0, 1.0, 0.0, 0.0])
        w = np.array([0.0, np.cos(theta / 2), np.sin(theta / 2), 0.0])
        g = VersorElement.from_vectors(sig, [u, w])
        R = adjoint_matrix(g)
        assert np.allclose(R, np.linalg.inv(Lam), atol=1e-12)


class TestSpinorSpace:
    @pytest.mark.parametrize("n,dim", [(2, 2), (4, 4)])
    def test_ideal_dimension(self, n, dim):
        assert spinor_space(n).complex_dimension == dim

    @pytest.mark.parametrize("n", [2, 4])
    def test_idempotent_exact(self, n):
        p = spinor_space(n).idempotent
        assert (p * p).allclose(p, tol=0)

    @pytest.mark.parametrize("n", [2, 4])
    def test_left_multiplication_closes(self, n):
        space = spinor_space(n)
        sig = Signature(n, 0)
        B = space.basis_matrix()  # rows orthonormal
        rng = np.random.default_rng(41)
        for _ in range(30):
            q = MultiVector(sig, rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n),
                            field="complex")
            for b in space.basis:
                img = (q * b).coeffs
                # projection onto the row span of B (rows orthonormal)
                residual = img - B.T @ (B.conj() @ img)
                assert np.max(np.abs(residual)) < 1e-12
