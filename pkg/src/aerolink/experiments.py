"""Parameter sweeps over the relaying presets and their CSV output."""
from __future__ import annotations

import csv
import dataclasses
import io
import os
import tempfile
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .montecarlo import McConfig, RareEventWarning, mc_outage
from .relaying import PRESETS, build_fig2_config, outage_analytical
from .scenario import ConfigError, ScenarioConfig, SweepSpec

CSV_COLUMNS = ("variable", "value", "config", "method", "p_out", "ci95", "samples")


@dataclass(frozen=True)
class SweepRow:
    variable: str
    value: float
    config: str
    method: str
    p_out: float
    ci95: float
    samples: int


def _point(scenario, sweep, value_index, value, config_index, config, mc):
    s = dataclasses.replace(scenario, **{sweep.variable: value})
    topology = build_fig2_config(config, s)
    rows = []
    if sweep.method in ("analytical", "both"):
        est = outage_analytical(topology)
        rows.append(SweepRow(sweep.variable, value, config, "analytical", est.p_out, 0.0, 0))
    if sweep.method in ("montecarlo", "both"):
        est = mc_outage(topology, mc, stream_key=(value_index, config_index))
        rows.append(SweepRow(sweep.variable, value, config, "montecarlo", est.p_out,
                             est.ci95_halfwidth, est.samples))
    return (value_index, config_index), rows


def run_sweep(scenario: ScenarioConfig, sweep: SweepSpec, mc: McConfig | None = None,
              workers: int = 1) -> list[SweepRow]:
    """Evaluate every (value, preset, method) combination of a sweep.

    Rows are ordered by sweep value, then preset order in ``sweep.configs``,
    then analytical before Monte Carlo, whatever the completion order.
    """
    for c in sweep.configs:
        if c not in PRESETS:
            raise ConfigError(f"unknown preset {c!r}")
    mc = mc or McConfig()
    # Fail on an invalid scenario before doing any work.
    for value in (sweep.start, sweep.stop):
        dataclasses.replace(scenario, **{sweep.variable: value})
    jobs = [(i, v, j, c) for i, v in enumerate(sweep.values()) for j, c in enumerate(sweep.configs)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RareEventWarning)
        if workers > 1:
            with ThreadPoolExecutor(workers) as pool:
                results = list(pool.map(lambda job: _point(scenario, sweep, *job, mc), jobs))
        else:
            results = [_point(scenario, sweep, *job, mc) for job in jobs]
    results.sort(key=lambda r: r[0])
    return [row for _, rows in results for row in rows]


def _format_row(row: SweepRow) -> list[str]:
    return [
        row.variable,
        repr(float(row.value)),
        row.config,
        row.method,
        f"{row.p_out:.8e}",
        f"{row.ci95:.8e}",
        str(row.samples),
    ]


def csv_text(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(_format_row(row))
    return buf.getvalue()


def emit_csv(rows, destination) -> bytes:
    """Write rows as CSV to a path or binary stream and return the bytes.

    Paths are written through a temporary file in the same directory and
    renamed into place, so a failure never leaves a partial file.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("refusing to write an empty result table")
    data = csv_text(rows).encode("ascii")
    if hasattr(destination, "write"):
        destination.write(data)
        return data
    path = Path(destination)
    try:
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from None
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except OSError as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise OSError(f"cannot write {path}: {exc.strerror}") from None
    return data


def read_csv(source) -> list[SweepRow]:
    """Parse CSV produced by :func:`emit_csv` back into rows."""
    text = Path(source).read_text() if not hasattr(source, "read") else source.read()
    if isinstance(text, bytes):
        text = text.decode("ascii")
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {header}")
    return [
        SweepRow(r[0], float(r[1]), r[2], r[3], float(r[4]), float(r[5]), int(r[6]))
        for r in reader
    ]
