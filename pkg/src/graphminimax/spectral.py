"""Laplacian eigendecomposition under the (1/n)-weighted inner product.

Throughout the package signals live in R^n with norm ||f||_n^2 = mean(f^2)
and inner product <f, g>_n = mean(f * g).  Eigenbases are normalized so
that <psi_j, psi_j>_n = 1, i.e. the standard Euclidean eigenvectors scaled
by sqrt(n).  With this convention the graph Fourier coefficients of a
bounded signal stay O(1) as the graph grows.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ValidationError
from .graphs import DEFAULT_DENSE_CAP, Graph, laplacian

_SIGN_EPS = 1e-12
_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues and a <.,.>_n-orthonormal eigenbasis of a Laplacian.

    ``lambdas`` is non-decreasing with lambdas[0] == 0.  ``basis[:, j]`` is
    the eigenvector psi_j; the first component of each psi_j whose magnitude
    exceeds 1e-12 is positive.  For repeated eigenvalues any orthonormal
    basis of the eigenspace is acceptable, so comparisons on degenerate
    spectra should use eigenvalue multisets or eigenspace projectors.
    """

    n: int
    lambdas: np.ndarray
    basis: np.ndarray


@dataclass(frozen=True)
class GeometryFit:
    """Fitted eigenvalue growth law lambda_i ~ (i/n)^(2/r_hat).

    ``slope`` is the log-log OLS slope (equal to 2/r_hat), ``c1_hat`` and
    ``c2_hat`` are the empirical envelope constants min/max of
    lambda_i / (i/n)^slope over the fitted range, and ``rss`` is the
    residual sum of squares of the line fit.
    """

    r_hat: float
    slope: float
    i0: int
    kappa: float
    c1_hat: float
    c2_hat: float
    rss: float


def _fix_signs(basis: np.ndarray) -> np.ndarray:
    """Make the first non-negligible component of each column positive."""
    firsts = np.argmax(np.abs(basis) > _SIGN_EPS, axis=0)
    signs = np.sign(basis[firsts, np.arange(basis.shape[1])])
    signs[signs == 0] = 1.0
    return basis * signs


def _freeze(s: Spectrum) -> Spectrum:
    s.lambdas.setflags(write=False)
    s.basis.setflags(write=False)
    return s


def eigendecompose(g: Graph, max_n: int = DEFAULT_DENSE_CAP) -> Spectrum:
    """Full dense symmetric eigendecomposition of the graph Laplacian.

    All n eigenpairs are computed because the shrinkage estimators and the
    smoothness form need the whole spectrum.  Raises NumericError if the
    solver output fails the residual check ||L psi - lambda psi|| /
    max(1, lambda) <= 1e-8 or if the null eigenvalue is out of tolerance.
    """
    L = laplacian(g, max_n=max_n)
    lams, vecs = np.linalg.eigh(L)
    if lams[0] < -1e-9:
        raise NumericError(f"negative eigenvalue {lams[0]:.3e} from eigensolver")
    lams = np.maximum(lams, 0.0)
    if lams[0] > 1e-9:
        raise NumericError(f"null eigenvalue missing: lambda_0 = {lams[0]:.3e}")
    lams[0] = 0.0
    if g.n > 1 and lams[1] <= 0.0:
        raise NumericError("second eigenvalue is not positive; graph should be connected")
    basis = _fix_signs(vecs * np.sqrt(g.n))
    resid = L @ basis - basis * lams
    rel = np.linalg.norm(resid, axis=0) / np.maximum(1.0, lams)
    worst = float(rel.max())
    if worst > _RESIDUAL_TOL:
        raise NumericError(f"eigendecomposition residual too large: {worst:.3e}")
    return _freeze(Spectrum(n=g.n, lambdas=lams, basis=basis))


def path_spectrum_closed_form(n: int) -> Spectrum:
    """Exact spectrum of the path graph on n vertices.

    lambda_j = 4 sin^2(pi j / (2n)) and, for vertex i = 1..n (stored
    0-based), psi_j(i) = c_j cos(pi j (2i - 1) / (2n)) with c_0 = 1 and
    c_j = sqrt(2) for j >= 1, which makes <psi_j, psi_j>_n = 1.
    """
    if n < 2:
        raise ValidationError(f"path graph needs n >= 2, got {n!r}")
    j = np.arange(n)
    lams = 4.0 * np.sin(np.pi * j / (2 * n)) ** 2
    lams[0] = 0.0
    odd = 2.0 * np.arange(1, n + 1) - 1.0
    basis = np.cos(np.pi * np.outer(odd, j) / (2 * n))
    basis[:, 1:] *= np.sqrt(2.0)
    return _freeze(Spectrum(n=n, lambdas=lams, basis=_fix_signs(basis)))


def fit_geometry(s: Spectrum, i0: int = 5, kappa: float = 0.5) -> GeometryFit:
    """Least-squares fit of log(lambda_i) against log(i/n).

    The fitted range is i in {i0, ..., floor(kappa * n)} (clipped to n-1).
    The defaults skip the non-power-law head and tail; both are overridable
    because the right range is graph-dependent.
    """
    if i0 < 1:
        raise ValidationError(f"i0 must be >= 1, got {i0}")
    if not 0.0 < kappa <= 1.0:
        raise ValidationError(f"kappa must be in (0, 1], got {kappa}")
    hi = min(int(np.floor(kappa * s.n)), s.n - 1)
    if i0 >= kappa * s.n or hi - i0 + 1 < 2:
        raise ValidationError(f"empty fitting range: i0={i0}, kappa={kappa}, n={s.n}")
    idx = np.arange(i0, hi + 1)
    lams = s.lambdas[idx]
    if np.any(lams <= 0.0):
        raise ValidationError("fitted range contains non-positive eigenvalues")
    x = np.log(idx / s.n)
    y = np.log(lams)
    xc = x - x.mean()
    slope = float(np.dot(xc, y) / np.dot(xc, xc))
    if slope <= 0.0:
        raise NumericError(f"degenerate geometry fit: slope {slope:.3e} <= 0")
    intercept = float(y.mean() - slope * x.mean())
    rss = float(np.sum((y - (slope * x + intercept)) ** 2))
    ratios = lams / (idx / s.n) ** slope
    return GeometryFit(
        r_hat=2.0 / slope,
        slope=slope,
        i0=int(i0),
        kappa=float(kappa),
        c1_hat=float(ratios.min()),
        c2_hat=float(ratios.max()),
        rss=rss,
    )


def sup_norm_bound(s: Spectrum) -> float:
    """Exact maximum absolute entry over the whole eigenbasis."""
    return float(np.abs(s.basis).max())


def gft_forward(s: Spectrum, f: np.ndarray) -> np.ndarray:
    """Coefficients <f, psi_j>_n of a signal in the eigenbasis."""
    f = np.asarray(f, dtype=float)
    if f.shape != (s.n,):
        raise ValidationError(f"signal length {f.shape} does not match n={s.n}")
    return s.basis.T @ f / s.n


def gft_inverse(s: Spectrum, coeffs: np.ndarray) -> np.ndarray:
    """Signal sum_j coeffs_j psi_j; inverts gft_forward."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (s.n,):
        raise ValidationError(f"coefficient length {coeffs.shape} does not match n={s.n}")
    return s.basis @ coeffs


def spectrum_csv_text(s: Spectrum) -> str:
    """Eigenvalues as CSV with header ``j,lambda``."""
    lines = ["j,lambda"]
    lines.extend(f"{j},{lam:.12g}" for j, lam in enumerate(s.lambdas))
    return "\n".join(lines) + "\n"
