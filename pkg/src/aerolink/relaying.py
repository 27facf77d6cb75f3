"""Decode-and-forward composition of hops into serial and parallel topologies."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fading import EwParams
from .links import (
    CrMode,
    FsoLinkSpec,
    LinkCdf,
    RfLinkSpec,
    fso_link_cdf,
    gta_link_cdf,
    hybrid_atg_cdf,
    to_linear,
)
from .atmosphere import TurbulenceProfile
from .scenario import ScenarioConfig

PRESETS = {
    "fig2a": ("parallel", CrMode.OVERLAY),
    "fig2b": ("serial", CrMode.OVERLAY),
    "fig2c": ("parallel", CrMode.UNDERLAY),
    "fig2d": ("serial", CrMode.UNDERLAY),
}


def e2e_snr_serial(hop_snrs):
    """End-to-end SNR of a DF serial chain: the weakest hop.

    Accepts a sequence of hop SNRs, or an array whose first axis runs over hops.
    """
    snrs = np.asarray(hop_snrs, dtype=float)
    if snrs.ndim == 0 or snrs.shape[0] == 0:
        raise ValueError("serial chain needs at least one hop")
    out = snrs.min(axis=0)
    return out[()] if np.ndim(out) == 0 else out


def e2e_snr_parallel(branch_snrs):
    """max over branches of min over the two hops of each branch.

    Input shape is (K, 2) or (K, 2, n) for n realizations.
    """
    snrs = np.asarray(branch_snrs, dtype=float)
    if snrs.ndim < 2 or snrs.shape[0] == 0:
        raise ValueError("parallel stage needs at least one branch")
    if snrs.shape[1] != 2:
        raise ValueError("each parallel branch must have exactly two hops")
    out = snrs.min(axis=1).max(axis=0)
    return out[()] if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class Serial:
    hops: tuple

    def __post_init__(self):
        object.__setattr__(self, "hops", tuple(self.hops))
        if not self.hops:
            raise ValueError("serial topology needs N >= 1 hops")


@dataclass(frozen=True)
class Parallel:
    """K dual-hop branches, optionally preceded by serial ``head`` hops."""

    branches: tuple
    head: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(tuple(b) for b in self.branches))
        object.__setattr__(self, "head", tuple(self.head))
        if not self.branches:
            raise ValueError("parallel topology needs K >= 1 branches")
        if any(len(b) != 2 for b in self.branches):
            raise ValueError("each parallel branch must have exactly two hops")


@dataclass(frozen=True)
class TopologySpec:
    scheme: Serial | Parallel
    cr_mode: CrMode = CrMode.OVERLAY
    threshold_db: float = 3.0
    label: str = ""

    @property
    def threshold(self) -> float:
        return float(to_linear(self.threshold_db))

    def links(self) -> list:
        """All hops in a fixed order: head/serial hops, then branch hops."""
        if isinstance(self.scheme, Serial):
            return list(self.scheme.hops)
        return list(self.scheme.head) + [h for b in self.scheme.branches for h in b]


@dataclass(frozen=True)
class OutageEstimate:
    p_out: float
    method: str
    ci95_halfwidth: float = 0.0
    samples: int = 0
    ci95_low: float | None = None
    ci95_high: float | None = None
    failures: int | None = None


def _any_fails(probs) -> float:
    """1 - prod(1 - F), computed so that tiny F keep full precision."""
    probs = [float(f) for f in probs]
    if any(f >= 1.0 for f in probs):
        return 1.0
    return -math.expm1(math.fsum(math.log1p(-f) for f in probs))


def outage_analytical(topology: TopologySpec) -> OutageEstimate:
    g = topology.threshold
    scheme = topology.scheme
    if isinstance(scheme, Serial):
        p = _any_fails(h.cdf(g) for h in scheme.hops)
    else:
        stage = math.prod(_any_fails((a.cdf(g), b.cdf(g))) for a, b in scheme.branches)
        p = _any_fails([h.cdf(g) for h in scheme.head] + [stage]) if scheme.head else stage
    assert 0.0 <= p <= 1.0, p
    return OutageEstimate(p_out=p, method="analytical")


def _turbulence(s: ScenarioConfig) -> TurbulenceProfile:
    return TurbulenceProfile(s.wind_speed_mps, s.ground_cn2, s.wavelength_m)


def _fixed_ew(s: ScenarioConfig) -> EwParams | None:
    if s.ew_alpha is None:
        return None
    return EwParams(s.ew_alpha, s.ew_beta, s.ew_eta)


def rf_spec(s: ScenarioConfig, mode: CrMode, horizontal_m: float, altitude_m: float) -> RfLinkSpec:
    underlay = mode is CrMode.UNDERLAY
    return RfLinkSpec(
        tx_power_dbm=s.tx_power_dbm,
        noise_power_dbm=s.noise_power_dbm,
        carrier_hz=s.carrier_hz,
        pl_exponent=s.pl_exponent,
        horizontal_m=horizontal_m,
        altitude_m=altitude_m,
        nakagami_m=s.nakagami_m,
        cr_mode=mode,
        interference_channel_gain=s.interference_gain if underlay else 1.0,
        primary_interference_db=s.interference_db if underlay else 0.0,
    )


def fso_spec(s: ScenarioConfig, length_m: float, altitude_m: float) -> FsoLinkSpec:
    """Optical hop of the given length, turbulence taken at ``altitude_m``."""
    fixed = _fixed_ew(s)
    if isinstance(s.attenuation, str):
        attenuation = {"fog": s.attenuation}
    elif s.attenuation is not None:
        attenuation = {"attenuation": s.attenuation}
    else:
        attenuation = {"visibility_km": s.visibility_km}
    return FsoLinkSpec(
        length_m=length_m,
        tx_power_dbm=s.tx_power_dbm,
        noise_power_dbm=s.noise_power_dbm,
        attenuation_convention=s.attenuation_convention,
        ew=fixed,
        altitude_m=None if fixed is not None else altitude_m,
        turbulence=_turbulence(s),
        wave=s.wave,
        oe_ratio=s.oe_ratio,
        **attenuation,
    )


def _atg_hop(s: ScenarioConfig, fso: FsoLinkSpec, altitude_m: float):
    if s.atg_mode == "hybrid":
        return hybrid_atg_cdf(fso, rf_spec(s, CrMode.OVERLAY, s.horizontal_m, altitude_m))
    return fso_link_cdf(fso)


def reference_fso_hop(s: ScenarioConfig) -> LinkCdf:
    """URN-to-URN air-to-air hop: length d at the URN altitude."""
    return fso_link_cdf(fso_spec(s, s.horizontal_m, s.urn_altitude_m))


def _fso_hops(s: ScenarioConfig, scheme: str) -> list:
    """Optical hop handles in preset order (serial: AtA, AtG; parallel: per branch)."""
    d, hu, hs = s.horizontal_m, s.urn_altitude_m, s.haps_altitude_m
    if s.equal_mean_snr:
        ref_spec = fso_spec(s, d, hu)
        ref = fso_link_cdf(ref_spec)
        atg = _atg_hop(s, ref_spec, hu) if s.atg_mode == "hybrid" else ref
        n = 1 if scheme == "serial" else s.parallel_branches
        return [(ref, atg)] * n
    urn = (
        fso_link_cdf(fso_spec(s, d, hu)),
        _atg_hop(s, fso_spec(s, math.hypot(d, hu), hu), hu),
    )
    if scheme == "serial":
        return [urn]
    # HAPS slant hops are treated as horizontal at the mid-path altitude.
    haps = (
        fso_link_cdf(fso_spec(s, math.hypot(d, hs - hu), 0.5 * (hs + hu))),
        _atg_hop(s, fso_spec(s, math.hypot(d, hs), 0.5 * hs), hs),
    )
    return [urn if k % 2 == 0 else haps for k in range(s.parallel_branches)]


def build_fig2_config(which: str, scenario: ScenarioConfig | None = None) -> TopologySpec:
    """One of the four CR RF/FSO relaying configurations.

    ``which`` is ``a``-``d`` or ``fig2a``-``fig2d``: (a) overlay parallel,
    (b) overlay serial, (c) underlay parallel, (d) underlay serial.
    Serial configs chain GtA -> AtA -> AtG. Parallel configs put the GtA
    hop in series with K dual-hop branches alternating URN-direct and
    HAPS-assisted. With ``equal_mean_snr`` every optical hop is a copy of
    the URN-to-URN hop.
    """
    s = ScenarioConfig() if scenario is None else scenario
    key = which if which.startswith("fig2") else f"fig2{which}"
    try:
        scheme, mode = PRESETS[key]
    except KeyError:
        raise ValueError(f"unknown preset {which!r}; expected a-d or fig2a-fig2d") from None
    gta = gta_link_cdf(rf_spec(s, mode, s.horizontal_m, s.urn_altitude_m))
    optical = _fso_hops(s, scheme)
    if scheme == "serial":
        topo = Serial((gta,) + optical[0])
    else:
        topo = Parallel(branches=optical, head=(gta,))
    return TopologySpec(topo, mode, s.threshold_db, key)
