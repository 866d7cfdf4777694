import math

import numpy as np
import pytest

import graphminimax as gm
from graphminimax.errors import NumericError, ValidationError
from graphminimax.spectral import Spectrum


def synthetic_spectrum(lams):
    """Spectrum with the identity-like basis sqrt(n) * I (orthonormal in <.,.>_n)."""
    lams = np.asarray(lams, dtype=float)
    n = len(lams)
    return Spectrum(n=n, lambdas=lams, basis=np.sqrt(n) * np.eye(n))


class TestEigendecompose:
    def test_path2_by_hand(self):
        s = gm.eigendecompose(gm.build_path(2))
        assert np.allclose(s.lambdas, [0.0, 2.0], atol=1e-12)
        assert np.allclose(s.basis[:, 0], [1.0, 1.0], atol=1e-12)
        assert np.allclose(s.basis[:, 1], [1.0, -1.0], atol=1e-12)

    def test_path64_matches_closed_form(self, path64_eig):
        cf = gm.path_spectrum_closed_form(64)
        assert np.max(np.abs(path64_eig.lambdas - cf.lambdas)) < 1e-8
        assert np.max(np.abs(path64_eig.basis - cf.basis)) < 1e-8

    def test_closed_form_agreement_across_sizes(self):
        for n in (16, 64, 256):
            s = gm.eigendecompose(gm.build_path(n))
            cf = gm.path_spectrum_closed_form(n)
            assert np.max(np.abs(s.lambdas - cf.lambdas)) < 1e-8

    def test_grid88_eigenvalues_are_pairwise_sums(self, grid8_eig):
        cf = gm.path_spectrum_closed_form(8)
        expected = np.sort(np.add.outer(cf.lambdas, cf.lambdas).ravel())
        assert np.max(np.abs(grid8_eig.lambdas - expected)) < 1e-8

    def test_orthonormality(self, path64_eig, grid8_eig):
        for s in (path64_eig, grid8_eig):
            gram = s.basis.T @ s.basis / s.n
            assert np.max(np.abs(gram - np.eye(s.n))) < 1e-9

    def test_eigen_residuals(self, path64_eig, grid8_eig):
        for s, g in ((path64_eig, gm.build_path(64)), (grid8_eig, gm.build_grid([8, 8]))):
            L = gm.laplacian(g)
            resid = np.linalg.norm(L @ s.basis - s.basis * s.lambdas, axis=0)
            assert np.max(resid / np.maximum(1.0, s.lambdas)) < 1e-8

    def test_sign_convention(self, path64_eig):
        for j in range(64):
            col = path64_eig.basis[:, j]
            first = col[np.abs(col) > 1e-12][0]
            assert first > 0

    def test_deterministic(self):
        g = gm.build_grid([5, 5])
        s1, s2 = gm.eigendecompose(g), gm.eigendecompose(g)
        assert np.array_equal(s1.lambdas, s2.lambdas)
        assert np.array_equal(s1.basis, s2.basis)

    def test_degenerate_eigenspaces_match_as_projectors(self):
        # the 4x4 torus has repeated eigenvalues, so individual vectors are
        # basis-dependent; eigenspace projectors are not
        s = gm.eigendecompose(gm.build_torus([4, 4]))
        c4 = gm.eigendecompose(gm.build_torus([4]))
        kron_basis = np.empty((16, 16))
        kron_lams = np.empty(16)
        k = 0
        for a in range(4):
            for b in range(4):
                kron_basis[:, k] = np.kron(c4.basis[:, a], c4.basis[:, b])
                kron_lams[k] = c4.lambdas[a] + c4.lambdas[b]
                k += 1
        order = np.argsort(kron_lams, kind="stable")
        kron_lams, kron_basis = kron_lams[order], kron_basis[:, order]
        assert np.max(np.abs(s.lambdas - kron_lams)) < 1e-8
        for lam in np.unique(np.round(kron_lams, 6)):
            sel_n = np.abs(s.lambdas - lam) < 1e-6
            sel_k = np.abs(kron_lams - lam) < 1e-6
            p_numeric = s.basis[:, sel_n] @ s.basis[:, sel_n].T / s.n
            p_kron = kron_basis[:, sel_k] @ kron_basis[:, sel_k].T / s.n
            assert np.max(np.abs(p_numeric - p_kron)) < 1e-8


class TestClosedFormBasis:
    def test_j0_is_constant_with_zero_eigenvalue(self):
        s = gm.path_spectrum_closed_form(32)
        assert s.lambdas[0] == 0.0
        assert np.allclose(s.basis[:, 0], 1.0, atol=1e-15)

    def test_unnormalized_norm_identity(self):
        # (1/n) sum_i cos^2(pi j (2i-1) / (2n)) is exactly 1/2 for j >= 1
        for n in (16, 64, 256):
            i = np.arange(1, n + 1)
            for j in range(n):
                raw = np.cos(np.pi * j * (2 * i - 1) / (2 * n))
                target = 1.0 if j == 0 else 0.5
                assert abs(np.mean(raw**2) - target) < 1e-12

    def test_sup_norm_exact_value(self):
        # the largest entry is sqrt(2) cos(pi / (2n)) when n is a power of
        # two (the cosine grid never hits a lattice point), and exactly
        # sqrt(2) for sizes like 6, 10, 18 where it does
        for n in (16, 64, 256):
            got = gm.sup_norm_bound(gm.path_spectrum_closed_form(n))
            assert abs(got - math.sqrt(2) * math.cos(math.pi / (2 * n))) < 1e-12
            assert got <= math.sqrt(2) + 1e-12
        for n in (6, 10, 18):
            got = gm.sup_norm_bound(gm.path_spectrum_closed_form(n))
            assert abs(got - math.sqrt(2)) < 1e-12


class TestSupNormBound:
    def test_product_basis_value(self):
        # Kronecker product of two path bases: sup is the product of sups
        p8 = gm.path_spectrum_closed_form(8)
        kron = np.kron(p8.basis, p8.basis)
        expected = 2.0 * math.cos(math.pi / 16) ** 2
        assert abs(np.abs(kron).max() - expected) < 1e-12

    def test_lower_bound_one(self, path64_eig, grid8_eig):
        # <psi_j, psi_j>_n = 1 forces max |psi_j| >= 1
        for s in (path64_eig, grid8_eig, gm.path_spectrum_closed_form(10)):
            assert gm.sup_norm_bound(s) >= 1.0


class TestGft:
    def test_eigenvector_maps_to_unit_coefficient(self, path64_eig):
        c = gm.gft_forward(path64_eig, path64_eig.basis[:, 3])
        expected = np.zeros(64)
        expected[3] = 1.0
        assert np.max(np.abs(c - expected)) < 1e-10

    def test_constant_signal(self):
        s = gm.path_spectrum_closed_form(32)
        c = gm.gft_forward(s, np.full(32, 2.5))
        assert abs(c[0] - 2.5) < 1e-12
        assert np.max(np.abs(c[1:])) < 1e-12

    def test_parseval(self, path64_eig):
        rng = np.random.default_rng(1)
        for _ in range(50):
            f = rng.standard_normal(64)
            c = gm.gft_forward(path64_eig, f)
            assert abs(np.mean(f**2) - np.sum(c**2)) < 1e-10

    def test_round_trip(self, path64_eig):
        rng = np.random.default_rng(2)
        for _ in range(100):
            f = rng.standard_normal(64)
            back = gm.gft_inverse(path64_eig, gm.gft_forward(path64_eig, f))
            assert np.max(np.abs(back - f)) < 1e-9

    def test_zero_coefficients(self, path64_eig):
        assert np.array_equal(gm.gft_inverse(path64_eig, np.zeros(64)), np.zeros(64))

    def test_length_mismatch(self, path64_eig):
        with pytest.raises(ValidationError):
            gm.gft_forward(path64_eig, np.zeros(12))
        with pytest.raises(ValidationError):
            gm.gft_inverse(path64_eig, np.zeros(12))


class TestFitGeometry:
    def test_path2048(self, path2048_eig):
        fit = gm.fit_geometry(path2048_eig)
        assert 0.95 <= fit.r_hat <= 1.05
        assert abs(fit.r_hat - 2.0 / fit.slope) < 1e-12
        assert fit.c1_hat <= fit.c2_hat

    def test_grid32(self, grid32_eig):
        assert 1.8 <= gm.fit_geometry(grid32_eig).r_hat <= 2.2

    def test_exact_power_law(self):
        n = 400
        i = np.arange(n)
        s = synthetic_spectrum((i / n) ** (2.0 / 3.0))
        fit = gm.fit_geometry(s, i0=5, kappa=0.5)
        assert abs(fit.r_hat - 3.0) < 1e-9
        assert fit.rss < 1e-18
        assert abs(fit.c1_hat - 1.0) < 1e-9 and abs(fit.c2_hat - 1.0) < 1e-9

    def test_invalid_range(self):
        s = synthetic_spectrum(np.arange(64) / 64.0)
        with pytest.raises(ValidationError):
            gm.fit_geometry(s, i0=0)
        with pytest.raises(ValidationError):
            gm.fit_geometry(s, i0=40, kappa=0.5)
        with pytest.raises(ValidationError):
            gm.fit_geometry(s, kappa=1.5)

    def test_flat_spectrum_is_degenerate(self):
        s = synthetic_spectrum(np.concatenate([[0.0], np.ones(63)]))
        with pytest.raises(NumericError):
            gm.fit_geometry(s)


def test_spectrum_csv_text():
    s = gm.path_spectrum_closed_form(4)
    text = gm.spectrum_csv_text(s)
    lines = text.strip().split("\n")
    assert lines[0] == "j,lambda"
    assert len(lines) == 5
    values = [float(line.split(",")[1]) for line in lines[1:]]
    assert np.allclose(values, [0.0, 2.0 - math.sqrt(2), 2.0, 2.0 + math.sqrt(2)], atol=1e-9)
