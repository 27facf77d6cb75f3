"""SNR distributions for Nakagami-m RF hops and Exponentiated Weibull FSO hops.

Both families are written in the SNR domain. Samplers come in two forms:
``*_sample`` takes a :class:`numpy.random.Generator`, while ``*_from_uniforms``
maps a block of U[0, 1) variates, which is what the Monte Carlo engine uses
to keep its streams positional.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

# Below this sigma_I^2 the shape fit's Gamma argument leaves (0, inf).
_MIN_SCINTILLATION = (0.104 / 2.487) ** 6


@dataclass(frozen=True)
class NakagamiParams:
    m: float
    mean_snr: float

    def __post_init__(self):
        if not (math.isfinite(self.m) and self.m >= 1):
            raise ValueError(f"Nakagami m must be >= 1, got {self.m}")
        if not (math.isfinite(self.mean_snr) and self.mean_snr > 0):
            raise ValueError(f"mean SNR must be positive, got {self.mean_snr}")


@dataclass(frozen=True)
class EwParams:
    """Exponentiated Weibull shape (alpha, beta) and scale (eta)."""

    alpha: float
    beta: float
    eta: float

    def __post_init__(self):
        for name in ("alpha", "beta", "eta"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"EW {name} must be positive and finite, got {value}")


def _check_gamma(gamma):
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0) or np.any(np.isnan(g)):
        raise ValueError("SNR argument must be non-negative")
    return g


def _scalar(out):
    return out[()] if out.ndim == 0 else out


def nakagami_snr_cdf(gamma, params: NakagamiParams):
    """CDF of the SNR of a Nakagami-m hop, i.e. P(m, m*gamma/mean)."""
    g = _check_gamma(gamma)
    return _scalar(np.asarray(special.gammainc(params.m, params.m * g / params.mean_snr)))


def nakagami_uniforms_per_draw(m: float) -> int:
    return int(m) if float(m).is_integer() else 1


def nakagami_from_uniforms(u, params: NakagamiParams):
    """Map uniforms of shape (n, k) to n Gamma(m, mean/m) SNR draws.

    Integer m sums k = m exponentials; other m falls back to the
    inverse regularized incomplete gamma with k = 1.
    """
    u = np.asarray(u, dtype=float)
    scale = params.mean_snr / params.m
    if float(params.m).is_integer():
        return -scale * np.log1p(-u).sum(axis=-1)
    return scale * special.gammaincinv(params.m, u[..., 0])


def nakagami_snr_sample(params: NakagamiParams, rng: np.random.Generator, size=None):
    n = 1 if size is None else size
    u = rng.random((n, nakagami_uniforms_per_draw(params.m)))
    out = nakagami_from_uniforms(u, params)
    return float(out[0]) if size is None else out


def ew_snr_cdf(gamma, ew: EwParams, mean_snr: float):
    """CDF of the SNR of an Exponentiated Weibull FSO hop."""
    g = _check_gamma(gamma)
    x = (g / (ew.eta ** 2 * mean_snr)) ** (ew.beta / 2.0)
    # -expm1(-x) keeps deep-fade values (x ~ 1e-12) accurate.
    with np.errstate(divide="ignore"):
        out = np.exp(ew.alpha * np.log(-np.expm1(-x)))
    return _scalar(np.asarray(out))


def ew_snr_quantile(u, ew: EwParams, mean_snr: float):
    u = np.asarray(u, dtype=float)
    if np.any(u < 0) or np.any(u >= 1) or np.any(np.isnan(u)):
        raise ValueError("quantile level must lie in [0, 1)")
    y = -np.log1p(-(u ** (1.0 / ew.alpha)))
    return _scalar(ew.eta ** 2 * mean_snr * y ** (2.0 / ew.beta))


def ew_from_uniforms(u, ew: EwParams, mean_snr: float):
    u = np.asarray(u, dtype=float)
    return ew_snr_quantile(u[..., 0], ew, mean_snr)


def ew_snr_sample(ew: EwParams, mean_snr: float, rng: np.random.Generator, size=None):
    return ew_snr_quantile(rng.random(size), ew, mean_snr)


def ew_irradiance_moment(alpha: float, beta: float, order: float = 1.0) -> float:
    """E[I**order] of a unit-scale EW irradiance, by quadrature over the quantile."""

    def integrand(u):
        return (-math.log1p(-(u ** (1.0 / alpha)))) ** (order / beta)

    value, _ = integrate.quad(integrand, 0.0, 1.0, limit=400, epsabs=0.0, epsrel=1e-12)
    return value


@functools.lru_cache(maxsize=4096)
def ew_params_from_scintillation(sigma_i2: float) -> EwParams:
    """Unit-mean EW parameters for a given scintillation index.

    Shape parameters follow the Barrios-Dios aperture-averaging fits;
    eta is then set so that E[I] = 1.
    """
    s = float(sigma_i2)
    if not (math.isfinite(s) and s > 0):
        raise ValueError(f"scintillation index must be positive, got {sigma_i2}")
    if s <= _MIN_SCINTILLATION:
        raise ValueError(f"scintillation index {s:g} is below the fit's range")
    alpha = 7.220 * s ** (1.0 / 3.0) / special.gamma(2.487 * s ** (1.0 / 6.0) - 0.104)
    beta = 1.012 * (alpha * s) ** (-13.0 / 25.0) + 0.142
    eta = 1.0 / ew_irradiance_moment(alpha, beta, 1.0)
    return EwParams(float(alpha), float(beta), float(eta))
