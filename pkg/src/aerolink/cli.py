"""Command-line interface: ``aerolink {presets,outage,sweep,validate}``.

Exit status is 0 on success, 1 on invalid input or a failed validation,
and 2 on runtime errors (I/O and the like).

Seed precedence: ``--seed`` > ``[montecarlo] master_seed`` in the config >
``AEROLINK_SEED`` > the built-in default 0xAE01.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
import warnings

from . import scenario as config_io
from .experiments import emit_csv, run_sweep
from .links import HybridCdf, NakagamiErlang, to_db
from .montecarlo import DEFAULT_SEED, McConfig, RareEventWarning, mc_outage, mc_vs_analytical
from .relaying import PRESETS, Serial, build_fig2_config, outage_analytical
from .scenario import ConfigError, SweepSpec

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="scenario/sweep config file (INI)")
    common.add_argument("--seed", type=lambda s: int(s, 0), help="Monte Carlo master seed")
    common.add_argument("--samples", type=int, help="Monte Carlo sample count")
    common.add_argument("--output", help="output file (default: stdout)")
    common.add_argument("--workers", type=int, default=1, help="parallel workers")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a scenario parameter (repeatable)")

    parser = _Parser(prog="aerolink", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("presets", parents=[common], help="list fig2a-fig2d with resolved parameters")

    p = sub.add_parser("outage", parents=[common], help="outage probability of one preset")
    p.add_argument("--preset", default="fig2b", choices=sorted(PRESETS))
    p.add_argument("--mc", action="store_true", help="also run the Monte Carlo estimator")

    p = sub.add_parser("sweep", parents=[common], help="run a parameter sweep to CSV")
    p.add_argument("--variable", choices=SweepSpec.VARIABLES)
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--configs", help="comma-separated preset ids")
    p.add_argument("--method", choices=SweepSpec.METHODS)

    p = sub.add_parser("validate", parents=[common], help="Monte Carlo vs closed form")
    p.add_argument("--presets", default="fig2a,fig2b,fig2c,fig2d")
    return parser


def _mc_config(args, cfg_file, default_samples=1_000_000) -> McConfig:
    mc = dict(cfg_file.montecarlo)
    if args.seed is not None:
        mc["master_seed"] = args.seed
    elif "master_seed" not in mc:
        env = os.environ.get("AEROLINK_SEED")
        try:
            mc["master_seed"] = int(env, 0) if env else DEFAULT_SEED
        except ValueError:
            raise ConfigError(f"AEROLINK_SEED is not an integer: {env!r}") from None
    if args.samples is not None:
        mc["samples"] = args.samples
    mc.setdefault("samples", default_samples)
    if mc.get("batch_size") and mc["batch_size"] > mc["samples"]:
        mc["batch_size"] = mc["samples"]
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return McConfig(workers=args.workers, **mc)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _describe_hop(link) -> str:
    if isinstance(link, HybridCdf):
        return f"hybrid[{_describe_hop(link.fso)} | {_describe_hop(link.rf)}]"
    fam = link.family
    if isinstance(fam, NakagamiErlang):
        name = f"Nakagami(m={fam.m})"
    else:
        e = fam.params
        name = f"EW(alpha={e.alpha:.4g}, beta={e.beta:.4g}, eta={e.eta:.4g})"
    return f"{name} mean={to_db(link.mean_snr):.2f} dB"


def _cmd_presets(args, scenario, out) -> int:
    print("scenario: " + ", ".join(f"{k}={v}" for k, v in
                                   config_io.scenario_items(scenario).items()), file=out)
    for key in PRESETS:
        topo = build_fig2_config(key, scenario)
        kind = "serial" if isinstance(topo.scheme, Serial) else "parallel"
        print(f"{key}: {topo.cr_mode.value} {kind}, threshold {topo.threshold_db:g} dB", file=out)
        if isinstance(topo.scheme, Serial):
            for i, hop in enumerate(topo.scheme.hops, 1):
                print(f"  hop {i}: {_describe_hop(hop)}", file=out)
        else:
            for hop in topo.scheme.head:
                print(f"  head: {_describe_hop(hop)}", file=out)
            for k, (a, b) in enumerate(topo.scheme.branches, 1):
                print(f"  branch {k}: {_describe_hop(a)} -> {_describe_hop(b)}", file=out)
    return EXIT_OK


def _cmd_outage(args, scenario, cfg_file, out) -> int:
    topo = build_fig2_config(args.preset, scenario)
    est = outage_analytical(topo)
    print(f"{topo.label} analytical p_out = {est.p_out!r}", file=out)
    if args.mc:
        mc = _mc_config(args, cfg_file)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", RareEventWarning)
            sim = mc_outage(topo, mc)
        print(f"{topo.label} montecarlo p_out = {sim.p_out!r} "
              f"(95% CI [{sim.ci95_low:.3e}, {sim.ci95_high:.3e}], n={sim.samples})", file=out)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
    return EXIT_OK


def _sweep_spec(args, cfg_file) -> SweepSpec:
    base = cfg_file.sweep
    fields = {}
    if base is not None:
        fields = {k: getattr(base, k) for k in ("variable", "start", "stop", "steps",
                                                "configs", "method")}
    for name in ("variable", "start", "stop", "steps", "method"):
        if getattr(args, name) is not None:
            fields[name] = getattr(args, name)
    if args.configs:
        fields["configs"] = tuple(c.strip() for c in args.configs.split(",") if c.strip())
    missing = [k for k in ("variable", "start", "stop", "steps") if k not in fields]
    if missing:
        raise ConfigError("sweep needs " + ", ".join(missing) +
                          " (from the [sweep] config section or flags)")
    return SweepSpec(**fields)


def _cmd_sweep(args, scenario, cfg_file, out) -> int:
    sweep = _sweep_spec(args, cfg_file)
    mc = _mc_config(args, cfg_file)
    rows = run_sweep(scenario, sweep, mc, workers=args.workers)
    if args.output:
        emit_csv(rows, args.output)
    else:
        emit_csv(rows, out.buffer if hasattr(out, "buffer") else _TextSink(out))
    return EXIT_OK


class _TextSink:
    def __init__(self, stream):
        self.stream = stream

    def write(self, data: bytes):
        self.stream.write(data.decode("ascii"))


def _cmd_validate(args, scenario, cfg_file, out) -> int:
    mc = _mc_config(args, cfg_file)
    ok = True
    for j, key in enumerate(p.strip() for p in args.presets.split(",") if p.strip()):
        if key not in PRESETS:
            raise ConfigError(f"unknown preset {key!r}")
        report = mc_vs_analytical(build_fig2_config(key, scenario), mc, stream_key=(j,))
        status = "PASS" if report.passed else "FAIL"
        ok &= report.passed
        z = report.z_score
        print(f"{key} {status} analytical={report.p_analytical:.6e} "
              f"montecarlo={report.p_mc:.6e} z={z if math.isinf(z) else round(z, 3)} "
              f"n={report.samples}", file=out)
    return EXIT_OK if ok else EXIT_INVALID


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_INVALID
    try:
        cfg_file = config_io.load(args.config) if args.config else config_io.ConfigFile()
        scenario = config_io.apply_overrides(cfg_file.scenario, args.set)
        if args.command == "presets":
            return _cmd_presets(args, scenario, out)
        if args.command == "outage":
            return _cmd_outage(args, scenario, cfg_file, out)
        if args.command == "sweep":
            return _cmd_sweep(args, scenario, cfg_file, out)
        return _cmd_validate(args, scenario, cfg_file, out)
    except (ConfigError, ValueError) as exc:
        print(f"aerolink: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:
        print(f"aerolink: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
