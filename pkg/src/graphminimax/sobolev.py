"""Laplacian-Sobolev smoothness class and its coefficient-space ellipsoid.

A signal f belongs to the ball of radius Q at smoothness beta when

    <f, (I + (n^(2/r) L)^beta) f>_n  <=  Q^2,

where r is the graph's geometry parameter.  In the eigenbasis this is the
ellipsoid sum_j a_j^2 c_j^2 <= Q^2 with a_j^2 = 1 + n^(2 beta / r)
lambda_j^beta, which is what the shrinkage estimator consumes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .spectral import Spectrum, gft_forward, gft_inverse


@dataclass(frozen=True)
class SobolevSpec:
    """Smoothness ball parameters: exponent beta, radius Q, geometry r."""

    beta: float
    Q: float
    r: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ValidationError(f"beta must be positive, got {self.beta!r}")
        if not self.Q > 0:
            raise ValidationError(f"Q must be positive, got {self.Q!r}")
        if not self.r >= 1:
            raise ValidationError(f"r must be >= 1, got {self.r!r}")


@dataclass(frozen=True)
class EllipsoidWeights:
    """Non-decreasing weights a_j with a_0 = 1 and squared radius R.

    Membership in the smoothness ball is equivalent to
    sum_j a_j^2 c_j^2 <= R for the eigenbasis coefficients c of a signal.
    R is the squared radius Q^2.
    """

    a: np.ndarray
    R: float


def _spectral_weights_sq(s: Spectrum, spec: SobolevSpec) -> np.ndarray:
    return 1.0 + s.n ** (2.0 * spec.beta / spec.r) * s.lambdas ** spec.beta


def sobolev_form(s: Spectrum, spec: SobolevSpec, f: np.ndarray) -> float:
    """Quadratic form <f, (I + (n^(2/r) L)^beta) f>_n, evaluated spectrally."""
    c = gft_forward(s, f)
    return float(np.sum(_spectral_weights_sq(s, spec) * c**2))


def ellipsoid_weights(s: Spectrum, spec: SobolevSpec) -> EllipsoidWeights:
    """Coefficient-space ellipsoid equivalent to the smoothness ball."""
    a = np.sqrt(_spectral_weights_sq(s, spec))
    a.setflags(write=False)
    return EllipsoidWeights(a=a, R=float(spec.Q**2))


def sample_ball(s: Spectrum, spec: SobolevSpec, fill: float, seed: int) -> np.ndarray:
    """Draw a test signal whose Sobolev form equals exactly fill * Q^2.

    A standard normal vector g is scaled coefficient-wise by
    sqrt(fill) * Q / (a_j ||g||_2), which places the draw on the boundary
    of the ball of radius sqrt(fill) * Q.  Deterministic given the seed.
    """
    if not 0.0 < fill <= 1.0:
        raise ValidationError(f"fill must be in (0, 1], got {fill!r}")
    w = ellipsoid_weights(s, spec)
    rng = np.random.default_rng(seed)
    g = rng.standard_normal(s.n)
    coeffs = np.sqrt(fill) * spec.Q * g / (w.a * np.linalg.norm(g))
    return gft_inverse(s, coeffs)
