"""Outage analysis of cognitive-radio RF / FSO aerial relay networks."""
from .atmosphere import (
    FOG_CLASSES,
    FogClass,
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
    ew_params_from_scintillation,
    ew_snr_cdf,
    ew_snr_quantile,
    ew_snr_sample,
    nakagami_snr_cdf,
    nakagami_snr_sample,
)
from .links import (
    CrMode,
    FsoLinkSpec,
    HybridCdf,
    LinkCdf,
    RfLinkSpec,
    fso_link_cdf,
    fso_mean_snr,
    gta_link_cdf,
    gta_mean_snr,
    hybrid_atg_cdf,
    path_loss,
)
from .relaying import (
    OutageEstimate,
    Parallel,
    Serial,
    TopologySpec,
    build_fig2_config,
    e2e_snr_parallel,
    e2e_snr_serial,
    outage_analytical,
)
from .montecarlo import McConfig, RngStream, mc_outage, mc_vs_analytical
from .scenario import ConfigError, ScenarioConfig, SweepSpec
from .experiments import emit_csv, run_sweep

__version__ = "0.1.0"
