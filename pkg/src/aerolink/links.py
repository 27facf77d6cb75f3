"""Per-hop SNR models for the RF ground-to-air and FSO air-to-air/air-to-ground hops.

Every hop is reduced to a :class:`LinkCdf` (mean SNR plus fading family), or
to a :class:`HybridCdf` for an FSO hop with an RF backup. Internally all SNR
arithmetic is linear; dB only appears at the config and report boundary.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .atmosphere import (
    SPEED_OF_LIGHT,
    TurbulenceProfile,
    beer_lambert,
    fog_class,
    hv_cn2,
    kim_attenuation,
    rytov_variance,
    scintillation_index,
)
from .fading import (
    EwParams,
    NakagamiParams,
    ew_from_uniforms,
    ew_params_from_scintillation,
    ew_snr_cdf,
    nakagami_from_uniforms,
    nakagami_snr_cdf,
    nakagami_uniforms_per_draw,
)


def to_db(x):
    return 10.0 * np.log10(x)


def to_linear(x_db):
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)


class CrMode(str, enum.Enum):
    OVERLAY = "overlay"
    UNDERLAY = "underlay"


@dataclass(frozen=True)
class RfLinkSpec:
    tx_power_dbm: float = 32.0
    noise_power_dbm: float = -100.0
    carrier_hz: float = 2e9
    pl_exponent: float = 2.32
    horizontal_m: float = 2500.0
    altitude_m: float = 200.0
    nakagami_m: float = 4
    cr_mode: CrMode = CrMode.OVERLAY
    interference_channel_gain: float = 1.0
    primary_interference_db: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "cr_mode", CrMode(self.cr_mode))
        if self.horizontal_m < 0 or self.altitude_m < 0:
            raise ValueError("horizontal distance and altitude must be non-negative")
        if self.distance_m == 0:
            raise ValueError("link endpoints coincide (r = 0)")
        if not self.carrier_hz > 0:
            raise ValueError("carrier frequency must be positive")
        if not self.pl_exponent >= 0:
            raise ValueError("path-loss exponent must be non-negative")
        if not self.nakagami_m >= 1:
            raise ValueError("Nakagami m must be >= 1")
        if not self.interference_channel_gain > 0:
            raise ValueError("interference channel gain must be positive")
        if not self.primary_interference_db >= 0:
            raise ValueError("primary interference must be >= 0 dB")
        if self.cr_mode is CrMode.OVERLAY and (
            self.interference_channel_gain != 1.0 or self.primary_interference_db != 0.0
        ):
            warnings.warn("underlay interference fields are ignored in overlay mode", stacklevel=3)

    @property
    def distance_m(self) -> float:
        return math.hypot(self.horizontal_m, self.altitude_m)


def reference_path_loss(carrier_hz: float) -> float:
    """Path loss at the 1 m reference point, (2*pi*f_c/c)**2."""
    return (2.0 * math.pi * carrier_hz / SPEED_OF_LIGHT) ** 2


def path_loss(spec: RfLinkSpec) -> float:
    """Linear path loss zeta * r**rho."""
    r = spec.distance_m
    if r <= 0:
        raise ValueError("path loss undefined at r = 0")
    return reference_path_loss(spec.carrier_hz) * r ** spec.pl_exponent


def gta_mean_snr(spec: RfLinkSpec) -> float:
    budget = float(to_linear(spec.tx_power_dbm - spec.noise_power_dbm)) / path_loss(spec)
    if spec.cr_mode is CrMode.OVERLAY:
        return budget
    interference = float(to_linear(spec.primary_interference_db))
    return budget / spec.interference_channel_gain / (1.0 + interference)


@dataclass(frozen=True)
class NakagamiErlang:
    m: float


@dataclass(frozen=True)
class ExpWeibull:
    params: EwParams


@dataclass(frozen=True)
class LinkCdf:
    """SNR distribution of one hop: a mean SNR (linear) and a fading family."""

    mean_snr: float
    family: NakagamiErlang | ExpWeibull

    def __post_init__(self):
        if not (math.isfinite(self.mean_snr) and self.mean_snr > 0):
            raise ValueError(f"mean SNR must be positive and finite, got {self.mean_snr}")

    def cdf(self, gamma):
        if isinstance(self.family, NakagamiErlang):
            return nakagami_snr_cdf(gamma, NakagamiParams(self.family.m, self.mean_snr))
        return ew_snr_cdf(gamma, self.family.params, self.mean_snr)

    @property
    def uniforms_per_draw(self) -> int:
        if isinstance(self.family, NakagamiErlang):
            return nakagami_uniforms_per_draw(self.family.m)
        return 1

    def from_uniforms(self, u):
        if isinstance(self.family, NakagamiErlang):
            return nakagami_from_uniforms(u, NakagamiParams(self.family.m, self.mean_snr))
        return ew_from_uniforms(u, self.family.params, self.mean_snr)

    def sample(self, rng: np.random.Generator, size: int):
        return self.from_uniforms(rng.random((size, self.uniforms_per_draw)))

    def with_mean(self, mean_snr: float) -> LinkCdf:
        return LinkCdf(mean_snr, self.family)


@dataclass(frozen=True)
class HybridCdf:
    """FSO hop with an RF backup; the hop fails only if both media fail."""

    fso: LinkCdf
    rf: LinkCdf

    def cdf(self, gamma):
        return self.fso.cdf(gamma) * self.rf.cdf(gamma)

    @property
    def uniforms_per_draw(self) -> int:
        return self.fso.uniforms_per_draw + self.rf.uniforms_per_draw

    def from_uniforms(self, u):
        u = np.asarray(u, dtype=float)
        k = self.fso.uniforms_per_draw
        return np.maximum(self.fso.from_uniforms(u[..., :k]), self.rf.from_uniforms(u[..., k:]))

    def sample(self, rng: np.random.Generator, size: int):
        return self.from_uniforms(rng.random((size, self.uniforms_per_draw)))


def gta_link_cdf(spec: RfLinkSpec) -> LinkCdf:
    return LinkCdf(gta_mean_snr(spec), NakagamiErlang(spec.nakagami_m))


@dataclass(frozen=True)
class FsoLinkSpec:
    """One optical hop.

    Attenuation comes from exactly one of ``fog`` (label), ``attenuation``
    (coefficient per km) or ``visibility_km`` (Kim's model). Fading comes
    from exactly one of ``ew`` or ``altitude_m`` (derived through the
    Hufnagel-Valley / Rytov chain with ``turbulence``).
    """

    length_m: float
    tx_power_dbm: float = 32.0
    noise_power_dbm: float = -100.0
    fog: str | None = None
    attenuation: float | None = None
    visibility_km: float | None = None
    attenuation_convention: str = "db"
    ew: EwParams | None = None
    altitude_m: float | None = None
    turbulence: TurbulenceProfile = field(default_factory=TurbulenceProfile)
    wave: str = "spherical"
    oe_ratio: float = 1.0

    def __post_init__(self):
        if not self.length_m > 0:
            raise ValueError("FSO link length must be positive")
        sources = [self.fog, self.attenuation, self.visibility_km]
        if sum(s is not None for s in sources) != 1:
            raise ValueError("specify exactly one of fog, attenuation, visibility_km")
        if (self.ew is None) == (self.altitude_m is None):
            raise ValueError("specify exactly one of ew or altitude_m")
        if self.attenuation_convention not in ("db", "literal"):
            raise ValueError(f"unknown attenuation convention {self.attenuation_convention!r}")
        if not self.oe_ratio > 0:
            raise ValueError("optical-to-electrical ratio must be positive")


def fso_attenuation(spec: FsoLinkSpec) -> float:
    """Attenuation coefficient per km from whichever source the spec names."""
    if spec.fog is not None:
        return fog_class(spec.fog).attenuation_db_per_km
    if spec.visibility_km is not None:
        return kim_attenuation(spec.visibility_km, spec.turbulence.wavelength_m * 1e9)
    if spec.attenuation < 0:
        raise ValueError("attenuation must be non-negative")
    return float(spec.attenuation)


def fso_transmittance(spec: FsoLinkSpec) -> float:
    return float(beer_lambert(fso_attenuation(spec), spec.length_m / 1000.0,
                              spec.attenuation_convention))


def fso_ew_params(spec: FsoLinkSpec) -> EwParams:
    if spec.ew is not None:
        return spec.ew
    cn2 = hv_cn2(spec.altitude_m, spec.turbulence)
    rytov = rytov_variance(cn2, spec.turbulence.wavelength_m, spec.length_m, spec.wave)
    return ew_params_from_scintillation(float(scintillation_index(rytov, spec.wave)))


def fso_mean_snr(spec: FsoLinkSpec) -> float:
    """(P_s/P_n) * I_l**2, scaled by the squared optical-to-electrical ratio."""
    ratio = float(to_linear(spec.tx_power_dbm - spec.noise_power_dbm))
    return ratio * spec.oe_ratio ** 2 * fso_transmittance(spec) ** 2


def fso_link_cdf(spec: FsoLinkSpec) -> LinkCdf:
    return LinkCdf(fso_mean_snr(spec), ExpWeibull(fso_ew_params(spec)))


def hybrid_atg_cdf(fso: FsoLinkSpec, rf: RfLinkSpec) -> HybridCdf:
    return HybridCdf(fso_link_cdf(fso), gta_link_cdf(rf))
