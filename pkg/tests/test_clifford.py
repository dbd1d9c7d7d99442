"""Tests for the blade-coefficient Clifford algebra core."""

import itertools

import numpy as np
import pytest

from tetradkit.clifford import (
    MAT_C,
    MAT_H,
    MAT_R,
    MultiVector,
    Signature,
    center_dimension,
    classify,
    classify_complex,
    complexify,
    geometric_product,
)

SIG13 = Signature(1, 3)


def naive_blade_product(indices_a, indices_b, squares):
    """Independent blade-product oracle: concatenate generator lists, bubble
    into ascending order counting transpositions, cancel equal neighbours."""
    seq = list(indices_a) + list(indices_b)
    sign = 1.0
    # bubble sort with transposition count
    changed = True
    while changed:
        changed = False
        for i in range(len(seq) - 1):
            if seq[i] > seq[i + 1]:
                seq[i], seq[i + 1] = seq[i + 1], seq[i]
                sign = -sign
                changed = True
    # cancel adjacent duplicates using the generator squares
    out = []
    i = 0
    while i < len(seq):
        if i + 1 < len(seq) and seq[i] == seq[i + 1]:
            sign *= squares[seq[i]]
            i += 2
        else:
            out.append(seq[i])
            i += 1
    return tuple(out), sign


def mask_of(indices):
    m = 0
    for i in indices:
        m |= 1 << i
    return m


class TestGeneratorRelations:
    def test_timelike_generator_squares_to_unit(self):
        v0 = MultiVector.generator(SIG13, 0)
        assert (v0 * v0).allclose(MultiVector.unit(SIG13), tol=0)

    def test_off_diagonal_anticommute(self):
        v0 = MultiVector.generator(SIG13, 0)
        v1 = MultiVector.generator(SIG13, 1)
        zero = MultiVector.zero(SIG13)
        assert (v0 * v1 + v1 * v0).allclose(zero, tol=0)

    def test_bivector_square(self):
        # blade reordering sign oracle: v0 v1 v0 v1 -> -(v0 v0)(v1 v1) = +e
        v0 = MultiVector.generator(SIG13, 0)
        v1 = MultiVector.generator(SIG13, 1)
        b = v0 * v1
        indices, sign = naive_blade_product((0, 1), (0, 1), SIG13.squares)
        assert indices == () and sign == 1.0
        assert (b * b).allclose(MultiVector.unit(SIG13), tol=0)

    def test_signature_mismatch_rejected(self):
        with pytest.raises(ValueError):
            geometric_product(MultiVector.unit(SIG13), MultiVector.unit(Signature(4, 0)))

    @pytest.mark.parametrize("sig", [Signature(2, 0), Signature(1, 3), Signature(0, 3)])
    def test_blade_products_match_naive_oracle(self, sig):
        names = list(range(sig.n))
        for subset_a in itertools.chain.from_iterable(
                itertools.combinations(names, k) for k in range(sig.n + 1)):
            for subset_b in itertools.chain.from_iterable(
                    itertools.combinations(names, k) for k in range(sig.n + 1)):
                a = MultiVector.blade(sig, mask_of(subset_a))
                b = MultiVector.blade(sig, mask_of(subset_b))
                indices, sign = naive_blade_product(subset_a, subset_b, sig.squares)
                expected = MultiVector.blade(sig, mask_of(indices), sign)
                assert (a * b).allclose(expected, tol=0), (subset_a, subset_b)


class TestAlgebraLaws:
    @pytest.mark.parametrize("sig", [Signature(1, 3), Signature(3, 2), Signature(0, 5)])
    def test_associativity_exact_on_integer_coefficients(self, sig):
        rng = np.random.default_rng(11)
        for _ in range(20):
            a, b, c = (MultiVector(sig, rng.integers(-3, 4, size=1 << sig.n).astype(float))
                       for _ in range(3))
            assert ((a * b) * c).allclose(a * (b * c), tol=0)

    @pytest.mark.parametrize("sig", [Signature(1, 3), Signature(2, 2)])
    def test_unit_law_exact(self, sig):
        rng = np.random.default_rng(5)
        e = MultiVector.unit(sig)
        a = MultiVector(sig, rng.normal(size=1 << sig.n))
        assert (e * a).allclose(a, tol=0)
        assert (a * e).allclose(a, tol=0)

    def test_bilinearity(self):
        rng = np.random.default_rng(3)
        a, b, c = (MultiVector(SIG13, rng.normal(size=16)) for _ in range(3))
        lhs = a * (b + c)
        rhs = a * b + a * c
        assert lhs.allclose(rhs, tol=1e-12)


class TestComplexify:
    def test_unit_maps_to_unit(self):
        e = MultiVector.unit(SIG13)
        assert complexify(e).allclose(MultiVector.unit(SIG13, field="complex"), tol=0)

    def test_negative_square_generator_gets_i(self):
        v1 = MultiVector.generator(SIG13, 1)  # squares to -e
        img = complexify(v1)
        expected = MultiVector.blade(SIG13, 1 << 1, 1j, field="complex")
        assert img.allclose(expected, tol=0)
        sq = img * img
        minus_e = MultiVector.unit(SIG13, field="complex").scale(-1.0)
        assert sq.allclose(minus_e, tol=0)

    @pytest.mark.parametrize("sig", [Signature(1, 3), Signature(2, 1), Signature(0, 4)])
    def test_ring_monomorphism_on_random_pairs(self, sig):
        rng = np.random.default_rng(17)
        for _ in range(20):
            a = MultiVector(sig, rng.integers(-3, 4, size=1 << sig.n).astype(float))
            b = MultiVector(sig, rng.integers(-3, 4, size=1 << sig.n).astype(float))
            lhs = complexify(a * b)
            rhs = complexify(a) * complexify(b)
            assert lhs.allclose(rhs, tol=0)

    def test_injective_on_basis(self):
        imgs = [complexify(MultiVector.blade(SIG13, m)).coeffs for m in range(16)]
        assert np.linalg.matrix_rank(np.array(imgs)) == 16


class TestClassification:
    def test_dirac_signature_is_quaternionic(self):
        cls = classify(Signature(1, 3))
        assert cls.kind == MAT_H and cls.d == 2

    def test_majorana_signature_is_real(self):
        cls = classify(Signature(3, 1))
        assert cls.kind == MAT_R and cls.d == 4

    def test_complex_four_dimensional(self):
        cls = classify_complex(4)
        assert cls.kind == MAT_C and cls.d == 4

    @pytest.mark.parametrize("p,q", [(p, q) for p in range(7) for q in range(7)
                                     if 1 <= p + q <= 6])
    def test_real_dimension_matches_table(self, p, q):
        sig = Signature(p, q)
        assert classify(sig).real_dimension == 2 ** sig.n

    def test_str_formats(self):
        assert str(classify(Signature(1, 3))) == "Mat(2,H)"
        assert str(classify(Signature(3, 1))) == "Mat(4,R)"


class TestCenter:
    def test_complex_cc4_is_central(self):
        assert center_dimension(Signature(4, 0), field="complex") == 1

    def test_dirac_algebra_has_real_center(self):
        # consistent with Mat(2,H): center = R
        assert center_dimension(SIG13) == 1

    def test_c01_center_spans_e_and_generator(self):
        # C(0,1) is C as a real algebra: center spanned by {e, v0}
        assert center_dimension(Signature(0, 1)) == 2

    @pytest.mark.parametrize("p,q", [(p, q) for p in range(5) for q in range(5)
                                     if 1 <= p + q <= 4])
    def test_center_matches_classification(self, p, q):
        sig = Signature(p, q)
        assert center_dimension(sig) == classify(sig).center_real_dimension

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_complex_center_matches_classification(self, n):
        sig = Signature(n, 0)
        expected = 1 if n % 2 == 0 else 2
        assert center_dimension(sig, field="complex") == expected
