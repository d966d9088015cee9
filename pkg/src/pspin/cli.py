"""Command-line surface: pattern generation, descents, scans, sweeps, and
the cross-module verification suite.

Every command that writes files also writes a run manifest JSON beside the
outputs (command, canonical config digest, master seed, tool version,
timestamps, output list).  Exit codes: 0 success, 1 runtime failure,
2 usage error, 3 config parse failure, 4 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import os
import sys

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import __version__
from .dynamics import DescentPolicy, descend, perturb
from .energy import energy_full
from .experiments import (
    SweepConfig,
    barrier_profile_experiment,
    non_retrieval_probe,
    retrieval_sweep,
    write_barrier_csv,
    write_records_csv,
)
from .landscape import DEFAULT_SAMPLE_CAP, BarrierProfile, BudgetError, sphere_scan
from .model import exponents
from .patterns import PatternFileError, generate, hamming, load_patterns, save_patterns
from .priors import PriorSpec, growth_ratio, psi_norm
from .verify import run_all

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_BUDGET = 4


class ConfigError(Exception):
    pass


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


def _digest(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _write_manifest(path, command, payload, master_seed, outputs, started):
    manifest = {
        "command": command,
        "config_digest": _digest(payload),
        "master_seed": master_seed,
        "tool_version": __version__,
        "started_at": started,
        "finished_at": _now(),
        "outputs": [os.path.basename(str(o)) for o in outputs],
    }
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _default_seed(value):
    if value is not None:
        return int(value)
    return int(os.environ.get("PSPIN_SEED", "0"))


def _policy_from_dict(raw: dict) -> DescentPolicy:
    try:
        return DescentPolicy(
            rule=raw.get("rule", "first-improvement"),
            sweep_order=raw.get("sweep_order", "random-permutation-per-sweep"),
            max_sweeps=int(raw.get("max_sweeps", 10_000)),
            tie_epsilon=raw.get("tie_epsilon"),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad policy section: {exc}") from exc


def load_sweep_config(path, seed_override=None, trials_override=None) -> tuple[SweepConfig, dict]:
    """Parse the declarative TOML config; flags override file values."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse failure: {exc}") from exc
    try:
        if "p" in raw and "q" in raw:
            raise ConfigError("config sets both p and q; choose one")
        if "p" in raw:
            p_values = tuple(exponents(float(v), "p").p for v in raw["p"])
        elif "q" in raw:
            p_values = tuple(exponents(float(v), "q").p for v in raw["q"])
        else:
            raise ConfigError("config needs a 'p' or 'q' list")
        alpha_values = tuple(float(v) for v in raw["alpha"])
        n1_values = tuple(int(v) for v in raw["n1"])
        r = float(raw.get("r", 0.1))
        trials = int(raw.get("trials", 10))
        seed = int(raw.get("seed", 0))
        policy = _policy_from_dict(raw.get("policy", {}))
        if seed_override is not None:
            seed = int(seed_override)
        if trials_override is not None:
            trials = int(trials_override)
        config = SweepConfig(
            p_values=p_values, alpha_values=alpha_values, n1_values=n1_values,
            r=r, trials=trials, master_seed=seed, policy=policy,
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value: {exc}") from exc
    payload = {
        "p": list(config.p_values), "alpha": list(config.alpha_values),
        "n1": list(config.n1_values), "r": config.r, "trials": config.trials,
        "seed": config.master_seed,
        "policy": {
            "rule": config.policy.rule,
            "sweep_order": config.policy.sweep_order,
            "max_sweeps": config.policy.max_sweeps,
            "tie_epsilon": config.policy.tie_epsilon,
        },
    }
    return config, payload


def _cmd_gen_patterns(args) -> int:
    started = _now()
    seed = _default_seed(args.seed)
    matrix = generate(args.n1, args.n2, seed)
    save_patterns(matrix, args.out)
    payload = {"n1": args.n1, "n2": args.n2, "seed": seed}
    _write_manifest(
        str(args.out) + ".manifest.json", "gen-patterns", payload, seed,
        [args.out], started,
    )
    print(f"wrote {args.out}: n1={args.n1} n2={args.n2} seed={seed}")
    return EXIT_OK


def _cmd_energy(args) -> int:
    matrix = load_patterns(args.patterns)
    exps = exponents(args.p)
    value = energy_full(matrix.row_state(args.mu), matrix, exps)
    print(f"H(pattern {args.mu}) = {value!r}  (p={exps.p}, q={exps.q}, n1={matrix.n1}, n2={matrix.n2})")
    return EXIT_OK


def _cmd_descend(args) -> int:
    started = _now()
    seed = _default_seed(args.seed)
    matrix = load_patterns(args.patterns)
    exps = exponents(args.p)
    policy = DescentPolicy(rule=args.rule, max_sweeps=args.max_sweeps)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    pattern = matrix.row_state(args.mu)
    sigma0 = perturb(pattern, args.r, rng)
    res = descend(sigma0, matrix, exps, policy, rng)
    dist = hamming(res.endpoint, pattern)
    summary = {
        "mu": args.mu, "r": args.r, "flips": res.flips, "sweeps": res.sweeps,
        "converged": res.converged, "final_distance_to_pattern": dist,
        "endpoint_energy": energy_full(res.endpoint, matrix, exps),
        "pattern_energy": energy_full(pattern, matrix, exps),
        "certificate": res.certificate,
    }
    print(json.dumps(summary, indent=2, sort_keys=True))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        out_json = os.path.join(args.out, "descend.json")
        with open(out_json, "w") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
        payload = {"p": args.p, "mu": args.mu, "r": args.r, "seed": seed,
                   "rule": args.rule, "patterns": os.path.basename(str(args.patterns))}
        _write_manifest(
            os.path.join(args.out, "descend.manifest.json"), "descend",
            payload, seed, [out_json], started,
        )
    return EXIT_OK


def _cmd_scan(args) -> int:
    started = _now()
    seed = _default_seed(args.seed)
    matrix = load_patterns(args.patterns)
    exps = exponents(args.p)
    radii = [int(v) for v in args.radii.split(",")]
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    samples = args.samples
    if samples is None:
        samples = DEFAULT_SAMPLE_CAP if args.mode == "sampled" else 0
    gaps = [
        sphere_scan(matrix, exps, args.mu, radius, mode=args.mode,
                    samples=samples or None, rng=rng)
        for radius in radii
    ]
    profile = BarrierProfile(
        mu=args.mu, radii=radii, min_gap=gaps, mode=args.mode,
        samples_per_radius=samples, seed=seed,
    )
    os.makedirs(args.out, exist_ok=True)
    out_csv = os.path.join(args.out, "scan.csv")
    with open(out_csv, "w") as fh:
        fh.write(",".join(BarrierProfile.CSV_HEADER) + "\n")
        for row in profile.csv_rows():
            fh.write(",".join(repr(v) if isinstance(v, float) else str(v) for v in row) + "\n")
    payload = {"p": args.p, "mu": args.mu, "radii": radii, "mode": args.mode,
               "samples": args.samples, "seed": seed}
    _write_manifest(
        os.path.join(args.out, "scan.manifest.json"), "scan", payload, seed,
        [out_csv], started,
    )
    for radius, gap in zip(radii, gaps):
        print(f"radius {radius}: min gap {gap!r}")
    return EXIT_OK


def _cmd_sweep(args, probe: bool = False) -> int:
    started = _now()
    config, payload = load_sweep_config(args.config, args.seed, args.trials)
    name = "probe" if probe else "sweep"
    runner = non_retrieval_probe if probe else retrieval_sweep
    records = runner(config, threads=args.threads)
    os.makedirs(args.out, exist_ok=True)
    out_csv = os.path.join(args.out, f"{name}.csv")
    write_records_csv(records, out_csv)
    outputs = [out_csv]
    if args.barriers:
        out_barrier = os.path.join(args.out, f"{name}-barriers.csv")
        write_barrier_csv(barrier_profile_experiment(config), out_barrier)
        outputs.append(out_barrier)
    _write_manifest(
        os.path.join(args.out, f"{name}.manifest.json"), name, payload,
        config.master_seed, outputs, started,
    )
    n_warn = sum(1 for rec in records if rec.trial < 0)
    print(f"{name}: {len(records) - n_warn} records, {n_warn} warnings -> {out_csv}")
    return EXIT_OK


def _cmd_prior(args) -> int:
    started = _now()
    if args.family == "gaussian":
        prior = PriorSpec.gaussian()
    elif args.family == "rademacher":
        prior = PriorSpec.rademacher()
    elif args.family == "stretched_exp":
        if args.q is None:
            raise ConfigError("stretched_exp requires --q")
        prior = PriorSpec.stretched_exp(args.q)
    elif args.family == "gauss_bernoulli_mix":
        if args.weight is None:
            raise ConfigError("gauss_bernoulli_mix requires --weight")
        prior = PriorSpec.gauss_bernoulli_mix(args.weight)
    else:
        raise ConfigError(f"unknown family {args.family}")
    report = growth_ratio(prior, args.p)
    print(f"growth ratio u(x)/x^{args.p}: limit {report.limit_estimate!r}, converged={report.converged}")
    if args.psi_r is not None:
        print(f"psi_{args.psi_r} norm: {psi_norm(prior, args.psi_r)!r}")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        out_csv = os.path.join(args.out, "prior.csv")
        with open(out_csv, "w") as fh:
            fh.write(",".join(report.CSV_HEADER) + "\n")
            for x, u, ratio in report.csv_rows():
                fh.write(f"{x!r},{u!r},{ratio!r}\n")
        payload = {"family": args.family, "q": args.q, "weight": args.weight, "p": args.p}
        _write_manifest(
            os.path.join(args.out, "prior.manifest.json"), "prior", payload,
            0, [out_csv], started,
        )
    return EXIT_OK


def _cmd_verify(args) -> int:
    started = _now()
    seed = _default_seed(args.seed)
    report = run_all(seed=seed, fast=args.fast)
    for check in report["checks"]:
        print(f"[{check['status']:>8}] {check['name']}: margin {check['worst_margin']:.3e}"
              + (f" at {check['location']}" if check["location"] else ""))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        out_json = os.path.join(args.out, "verify.json")
        with open(out_json, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
        _write_manifest(
            os.path.join(args.out, "verify.manifest.json"), "verify",
            {"seed": seed, "fast": args.fast}, seed, [out_json], started,
        )
    if report["failed"]:
        print(f"FAILED: {', '.join(report['failed'])}")
        return EXIT_FAILURE
    print(f"verify: all {len(report['checks'])} checks pass (backend={report['backend']})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pspin",
        description="Zero-temperature p-spin landscape simulator and verifier",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-patterns", help="generate and save a pattern matrix")
    g.add_argument("--n1", type=int, required=True)
    g.add_argument("--n2", type=int, required=True)
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out", required=True)

    e = sub.add_parser("energy", help="energy of a stored pattern")
    e.add_argument("--patterns", required=True)
    e.add_argument("--p", type=float, required=True)
    e.add_argument("--mu", type=int, default=0)

    d = sub.add_parser("descend", help="greedy descent from a perturbed pattern")
    d.add_argument("--patterns", required=True)
    d.add_argument("--p", type=float, required=True)
    d.add_argument("--mu", type=int, default=0)
    d.add_argument("--r", type=float, default=0.1)
    d.add_argument("--seed", type=int, default=None)
    d.add_argument("--rule", default="first-improvement",
                   choices=["first-improvement", "steepest"])
    d.add_argument("--max-sweeps", type=int, default=10_000)
    d.add_argument("--out", default=None)

    s = sub.add_parser("scan", help="Hamming-sphere barrier scan")
    s.add_argument("--patterns", required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--mu", type=int, default=0)
    s.add_argument("--radii", required=True, help="comma-separated radii")
    s.add_argument("--mode", default="sampled", choices=["exhaustive", "sampled"])
    s.add_argument("--samples", type=int, default=None)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--out", required=True)

    for name, help_text in (
        ("sweep", "retrieval sweep from perturbed patterns"),
        ("probe", "non-retrieval probe from exact patterns"),
    ):
        c = sub.add_parser(name, help=help_text)
        c.add_argument("--config", required=True)
        c.add_argument("--out", required=True)
        c.add_argument("--seed", type=int, default=None)
        c.add_argument("--trials", type=int, default=None)
        c.add_argument("--threads", type=int, default=os.cpu_count() or 1)
        c.add_argument("--barriers", action="store_true",
                       help="also emit per-cell barrier profiles")

    p = sub.add_parser("prior", help="hidden-prior cumulant growth analytics")
    p.add_argument("--family", required=True,
                   choices=["gaussian", "rademacher", "stretched_exp", "gauss_bernoulli_mix"])
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--weight", type=float, default=None)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--psi-r", type=float, default=None)
    p.add_argument("--out", default=None)

    v = sub.add_parser("verify", help="run the cross-module invariant suite")
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--fast", action="store_true")
    v.add_argument("--out", default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "gen-patterns": _cmd_gen_patterns,
        "energy": _cmd_energy,
        "descend": _cmd_descend,
        "scan": _cmd_scan,
        "sweep": lambda a: _cmd_sweep(a, probe=False),
        "probe": lambda a: _cmd_sweep(a, probe=True),
        "prior": _cmd_prior,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetError as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except PatternFileError as exc:
        print(f"pattern file error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
