"""Monte Carlo outage estimation, independent of the closed-form CDFs.

Each hop draws from its own counter-based Philox stream keyed on
``(master_seed, *stream_key, hop_index)``. Stream positions are addressed by
sample index, so a batch ``[start, stop)`` sees the same variates no matter
how the run is split into batches or spread over workers, and the reduction
is a sum of integer failure counts.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .relaying import (
    OutageEstimate,
    Parallel,
    TopologySpec,
    e2e_snr_parallel,
    e2e_snr_serial,
    outage_analytical,
)

DEFAULT_SEED = 0xAE01
DEFAULT_BATCH = 1 << 16
RARE_EVENT_LEVEL = 1e-6
Z95 = 1.959963984540054


class RareEventWarning(UserWarning):
    pass


@dataclass(frozen=True)
class McConfig:
    samples: int = 1_000_000
    master_seed: int = DEFAULT_SEED
    batch_size: int | None = None
    workers: int = 1

    def __post_init__(self):
        if not isinstance(self.samples, int) or self.samples <= 0:
            raise ValueError("samples must be a positive integer")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if self.batch_size is not None and not 0 < self.batch_size <= self.samples:
            raise ValueError("batch_size must lie in [1, samples]")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.samples < 1000:
            warnings.warn("fewer than 1000 samples; confidence intervals are unreliable",
                          stacklevel=3)

    @property
    def batch(self) -> int:
        return self.batch_size or min(DEFAULT_BATCH, self.samples)


class RngStream:
    """Counter-based stream addressed by position (in doubles)."""

    def __init__(self, master_seed: int, stream_index=()):
        if isinstance(stream_index, int):
            stream_index = (stream_index,)
        entropy = [int(master_seed)] + [int(i) for i in stream_index]
        self.key = np.random.SeedSequence(entropy).generate_state(2, np.uint64)

    def generator_at(self, position: int = 0) -> np.random.Generator:
        bitgen = np.random.Philox(key=self.key)
        # Philox4x64 yields four 64-bit words per counter step.
        bitgen.advance(position // 4)
        if position % 4:
            bitgen.random_raw(position % 4)
        return np.random.Generator(bitgen)

    def uniforms(self, start: int, count: int):
        return self.generator_at(start).random(count)


def _batch_failures(topology: TopologySpec, streams, start: int, stop: int) -> int:
    n = stop - start
    draws = []
    for link, stream in zip(topology.links(), streams):
        k = link.uniforms_per_draw
        u = stream.generator_at(start * k).random((n, k))
        draws.append(link.from_uniforms(u))
    scheme = topology.scheme
    if isinstance(scheme, Parallel):
        h = len(scheme.head)
        branches = np.stack(draws[h:]).reshape(len(scheme.branches), 2, n)
        e2e = e2e_snr_parallel(branches)
        if h:
            e2e = np.minimum(e2e, e2e_snr_serial(np.stack(draws[:h])))
    else:
        e2e = e2e_snr_serial(np.stack(draws))
    return int(np.count_nonzero(np.asarray(e2e) < topology.threshold))


def wilson_interval(failures: int, n: int, z: float = Z95):
    p = failures / n
    denom = 1.0 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    lo = 0.0 if failures == 0 else max(0.0, centre - half)
    hi = 1.0 if failures == n else min(1.0, centre + half)
    return lo, hi


def required_samples(p: float, rel_halfwidth: float = 0.1) -> int:
    """Samples needed for a 95% half-width of ``rel_halfwidth * p``."""
    if p <= 0:
        return math.inf
    return math.ceil(Z95 ** 2 * (1 - p) / (rel_halfwidth ** 2 * p))


def mc_outage(topology: TopologySpec, cfg: McConfig = McConfig(), stream_key=()) -> OutageEstimate:
    streams = [RngStream(cfg.master_seed, tuple(stream_key) + (j,))
               for j in range(len(topology.links()))]
    bounds = [(s, min(s + cfg.batch, cfg.samples)) for s in range(0, cfg.samples, cfg.batch)]
    if cfg.workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            counts = pool.map(lambda b: _batch_failures(topology, streams, *b), bounds)
            failures = sum(counts)
    else:
        failures = sum(_batch_failures(topology, streams, *b) for b in bounds)
    n = cfg.samples
    p = failures / n
    low, high = wilson_interval(failures, n)
    if p < RARE_EVENT_LEVEL:
        target = p if p > 0 else high
        warnings.warn(
            f"{topology.label or 'topology'}: outage estimate {p:.3g} from {failures} failures "
            f"is in the rare-event regime; at least {required_samples(target):.3g} samples "
            f"are needed for a 10% relative CI",
            RareEventWarning,
            stacklevel=2,
        )
    return OutageEstimate(
        p_out=p,
        method="montecarlo",
        ci95_halfwidth=0.5 * (high - low),
        samples=n,
        ci95_low=low,
        ci95_high=high,
        failures=failures,
    )


@dataclass(frozen=True)
class ValidationReport:
    label: str
    p_analytical: float
    p_mc: float
    z_score: float
    samples: int

    @property
    def passed(self) -> bool:
        return abs(self.z_score) <= 4.0


def z_score(p_mc: float, p_analytical: float, n: int) -> float:
    sigma = math.sqrt(p_analytical * (1.0 - p_analytical) / n)
    if sigma == 0.0:
        return 0.0 if p_mc == p_analytical else math.copysign(math.inf, p_mc - p_analytical)
    return (p_mc - p_analytical) / sigma


def mc_vs_analytical(topology: TopologySpec, cfg: McConfig = McConfig(),
                     p_analytical: float | None = None, stream_key=()) -> ValidationReport:
    """Compare the Monte Carlo estimate with the closed form; |z| <= 4 passes."""
    p = outage_analytical(topology).p_out if p_analytical is None else p_analytical
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RareEventWarning)
        est = mc_outage(topology, cfg, stream_key)
    return ValidationReport(topology.label, p, est.p_out, z_score(est.p_out, p, cfg.samples),
                            cfg.samples)
