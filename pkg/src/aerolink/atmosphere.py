"""Optical propagation physics: fog attenuation and the turbulence strength chain.

Attenuation coefficients are carried in dB/km. The turbulence chain runs
altitude -> Cn^2 (Hufnagel-Valley) -> Rytov variance -> scintillation index,
and the last step feeds the Exponentiated Weibull fit in :mod:`aerolink.fading`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s
NEPER_TO_DB = 10.0 / math.log(10.0)

MAX_HV_ALTITUDE_M = 30_000.0

_RYTOV_CONSTANT = {"plane": 1.23, "spherical": 0.5}


@dataclass(frozen=True)
class FogClass:
    label: str
    visibility_km: float
    attenuation_db_per_km: float


# Attenuation at 1550 nm for the standard fog classes.
FOG_CLASSES = {
    "dense": FogClass("Dense", 0.05, 339.62),
    "thick": FogClass("Thick", 0.20, 84.90),
    "moderate": FogClass("Moderate", 0.50, 33.96),
    "light": FogClass("Light", 0.77, 16.67),
    "thin": FogClass("Thin", 1.90, 4.59),
}


def fog_class(label: str) -> FogClass:
    """Look up a fog class by its (case-insensitive) label."""
    try:
        return FOG_CLASSES[label.strip().lower()]
    except KeyError:
        known = ", ".join(FOG_CLASSES)
        raise ValueError(f"unknown fog class {label!r}; expected one of: {known}") from None


def beer_lambert(attenuation_per_km, distance_km, convention: str = "db"):
    """Deterministic atmospheric transmittance over a path.

    With ``convention="db"`` the coefficient is in dB/km and the
    transmittance is ``10**(-sigma*L/10)``. With ``convention="literal"``
    the coefficient is applied as ``exp(-sigma*L)``, i.e. read as a
    per-km extinction coefficient in nepers.
    """
    sigma = np.asarray(attenuation_per_km, dtype=float)
    dist = np.asarray(distance_km, dtype=float)
    if not (np.all(np.isfinite(sigma)) and np.all(np.isfinite(dist))):
        raise ValueError("attenuation and distance must be finite")
    if np.any(sigma < 0) or np.any(dist < 0):
        raise ValueError("attenuation and distance must be non-negative")
    if convention == "db":
        out = 10.0 ** (-sigma * dist / 10.0)
    elif convention == "literal":
        out = np.exp(-sigma * dist)
    else:
        raise ValueError(f"unknown attenuation convention {convention!r}")
    return out[()] if out.ndim == 0 else out


def kim_exponent(visibility_km: float) -> float:
    """Wavelength exponent q of Kim's visibility model."""
    v = visibility_km
    if v > 50.0:
        return 1.6
    if v > 6.0:
        return 1.3
    if v > 1.0:
        return 0.16 * v + 0.34
    if v > 0.5:
        return v - 0.5
    return 0.0


def kim_attenuation(visibility_km: float, wavelength_nm: float = 1550.0) -> float:
    """Attenuation coefficient in dB/km from visibility (Kim's model).

    The model is continuous at V = 0.5, 1 and 6 km and jumps at
    V = 50 km, where q switches from 1.3 to 1.6.
    """
    if not visibility_km > 0:
        raise ValueError("visibility must be positive")
    if not wavelength_nm > 0:
        raise ValueError("wavelength must be positive")
    q = kim_exponent(visibility_km)
    sigma_np = 3.91 / visibility_km * (wavelength_nm / 550.0) ** (-q)
    return NEPER_TO_DB * sigma_np


@dataclass(frozen=True)
class TurbulenceProfile:
    """Hufnagel-Valley daytime profile parameters."""

    wind_speed_mps: float = 21.0
    ground_cn2: float = 1.7e-14  # m^(-2/3)
    wavelength_m: float = 1550e-9

    def __post_init__(self):
        if not self.wind_speed_mps >= 0:
            raise ValueError("wind speed must be non-negative")
        if not self.ground_cn2 > 0:
            raise ValueError("ground Cn2 must be positive")
        if not 100e-9 < self.wavelength_m < 10e-6:
            raise ValueError("wavelength must lie in (100 nm, 10 um)")


def hv_cn2(altitude_m, profile: TurbulenceProfile = TurbulenceProfile()):
    """Refractive-index structure parameter Cn^2(h) in m^(-2/3)."""
    h = np.asarray(altitude_m, dtype=float)
    if np.any(~np.isfinite(h)) or np.any(h < 0) or np.any(h > MAX_HV_ALTITUDE_M):
        raise ValueError(f"altitude must lie in [0, {MAX_HV_ALTITUDE_M:g}] m")
    wind = 0.00594 * (profile.wind_speed_mps / 27.0) ** 2 * (1e-5 * h) ** 10 * np.exp(-h / 1000.0)
    out = wind + 2.7e-16 * np.exp(-h / 1500.0) + profile.ground_cn2 * np.exp(-h / 100.0)
    return out[()] if out.ndim == 0 else out


def rytov_variance(cn2, wavelength_m, path_length_m, wave: str = "plane"):
    """Rytov variance of a horizontal path of constant Cn^2.

    ``wave`` selects the plane-wave (1.23) or spherical-wave (0.5) constant.
    """
    try:
        const = _RYTOV_CONSTANT[wave]
    except KeyError:
        raise ValueError(f"wave must be 'plane' or 'spherical', got {wave!r}") from None
    cn2 = np.asarray(cn2, dtype=float)
    lam = np.asarray(wavelength_m, dtype=float)
    length = np.asarray(path_length_m, dtype=float)
    if np.any(~(cn2 > 0)) or np.any(~(lam > 0)) or np.any(~(length > 0)):
        raise ValueError("Cn2, wavelength and path length must be positive")
    k = 2.0 * np.pi / lam
    out = const * cn2 * k ** (7.0 / 6.0) * length ** (11.0 / 6.0)
    return out[()] if out.ndim == 0 else out


def scintillation_index(rytov, wave: str = "plane"):
    """Point-receiver scintillation index from the Rytov variance.

    Zero-inner-scale expressions valid from weak to strong fluctuations;
    they reduce to sigma_I^2 ~ rytov in the weak limit.
    """
    r = np.asarray(rytov, dtype=float)
    if np.any(r < 0) or np.any(~np.isfinite(r)):
        raise ValueError("Rytov variance must be finite and non-negative")
    if wave == "plane":
        small = 0.49 * r / (1.0 + 1.11 * r ** 1.2) ** (7.0 / 6.0)
        large = 0.51 * r / (1.0 + 0.69 * r ** 1.2) ** (5.0 / 6.0)
    elif wave == "spherical":
        small = 0.49 * r / (1.0 + 0.56 * r ** 1.2) ** (7.0 / 6.0)
        large = 0.51 * r / (1.0 + 0.69 * r ** 1.2) ** (5.0 / 6.0)
    else:
        raise ValueError(f"wave must be 'plane' or 'spherical', got {wave!r}")
    out = np.expm1(small + large)
    return out[()] if out.ndim == 0 else out
