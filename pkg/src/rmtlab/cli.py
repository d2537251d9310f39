"""Command-line front end.

Subcommands: ``sample``, ``law``, ``dpp``, ``distance``, ``rates``,
``rigidity``, ``check`` and ``report``.  Exit codes: 0 success, 1 runtime or
assertion failure, 2 configuration error.  ``RMT_SEED`` overrides the
master seed of any command; the override is recorded in the provenance.

Every run is described by an effective config dict (built from flags or
read from a strict JSON file).  Its canonical JSON hash tags every output
file, and rows CSVs depend only on that config, so reruns are
byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, checks, dpp, ensembles, experiments, limits
from .ensembles import EnsembleSpec
from .errors import BudgetExceeded, ConfigError, InvalidSpec, RmtError
from .rng import MASK64, RngStream

SCHEMA_VERSION = 1

ENSEMBLE_ALIASES = {
    "gue": ("GUE", {}), "goe": ("GOE", {}), "wigner": ("WignerGeneric", {}),
    "wishart": ("Wishart", {}), "haar": ("Haar", {}),
    "haar-o": ("Haar", {"group": "O"}), "haar-so": ("Haar", {"group": "SO"}),
    "haar-u": ("Haar", {"group": "U"}), "haar-su": ("Haar", {"group": "SU"}),
    "haar-sp": ("Haar", {"group": "Sp"}), "haar-power": ("HaarPower", {}),
    "sum": ("RandomizedSum", {}), "compression": ("Compression", {}),
    "qsg": ("QuantumSpinGlass", {}), "ginibre": ("Ginibre", {}),
}
LAW_ALIASES = {"semicircle": "Semicircle", "mp": "MarchenkoPastur", "gaussian": "StdGaussian",
               "circle": "UniformCircle", "disc": "UniformDisc"}
FAMILY_ALIASES = {"hermite": "HermiteGUE", "dyson": "DysonCircle", "ginibre": "Ginibre"}
ENSEMBLE_KEYS = {"kind", "n", "m", "k", "group", "entry", "field", "a_tag", "b_tag",
                 "paper_literal_goe"}
COMMON_KEYS = {"schema_version": True, "command": True, "master_seed": True,
               "output_dir": False, "threads": False, "record_timings": False}
COMMAND_KEYS = {
    "rates": {"ensemble": True, "experiment": True, "window": False},
    "distance": {"ensemble": True, "reps": True, "p": False, "target": False, "pool_reps": False},
    "sample": {"ensemble": True, "reps": True, "dump_matrices": False},
}
EXPERIMENT_KEYS = {"sizes": True, "reps": True, "p": False, "target": False,
                   "pool_reps": False, "budget_seconds": False}


# --- formatting and provenance ------------------------------------------------------

def fmt(x) -> str:
    """17 significant digits: exact round trip for doubles."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def config_hash(config: dict) -> str:
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()


def provenance(config: dict, seed_source: str) -> dict:
    return {"config_hash": config_hash(config), "code_version": __version__,
            "master_seed": config.get("master_seed"), "seed_source": seed_source,
            "command": config.get("command")}


def write_csv(path: Path, header: list[str], rows, prov: dict) -> None:
    buf = io.StringIO()
    buf.write(f"# rmtlab {prov['code_version']} config_hash={prov['config_hash']} "
              f"seed={prov['master_seed']}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    path.write_text(buf.getvalue(), encoding="utf-8")


def write_summary(path: Path, summary: dict, config: dict, prov: dict) -> None:
    body = {"provenance": prov, "config": config, **summary}
    path.write_text(json.dumps(body, indent=2, sort_keys=True, allow_nan=False) + "\n",
                    encoding="utf-8")


# --- config validation ---------------------------------------------------------------------

def _check_keys(obj, spec: dict, where: str) -> None:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a JSON object")
    unknown = set(obj) - set(spec)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {sorted(unknown)}")
    missing = [k for k, req in spec.items() if req and k not in obj]
    if missing:
        raise ConfigError(f"missing key(s) in {where}: {missing}")


def _int(v, what: str, lo: int | None = None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{what} must be an integer")
    if lo is not None and v < lo:
        raise ConfigError(f"{what} must be >= {lo}")
    return v


def ensemble_from_dict(d: dict) -> EnsembleSpec:
    if not isinstance(d, dict):
        raise ConfigError("ensemble must be a JSON object")
    unknown = set(d) - ENSEMBLE_KEYS
    if unknown:
        raise ConfigError(f"unknown key(s) in ensemble: {sorted(unknown)}")
    if "kind" not in d or "n" not in d:
        raise ConfigError("ensemble needs kind and n")
    d = dict(d)
    kind = d.pop("kind")
    if not isinstance(kind, str):
        raise ConfigError("ensemble kind must be a string")
    if kind.lower() in ENSEMBLE_ALIASES:
        kind, extra = ENSEMBLE_ALIASES[kind.lower()]
        for key, val in extra.items():
            d.setdefault(key, val)
    for key in ("n", "m", "k"):
        if d.get(key) is not None:
            _int(d[key], f"ensemble.{key}", 1)
    try:
        return EnsembleSpec(kind, **d)
    except InvalidSpec as exc:
        raise ConfigError(str(exc)) from exc
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def ensemble_to_dict(spec: EnsembleSpec) -> dict:
    return {"kind": spec.kind, "n": spec.n, "m": spec.m, "k": spec.k, "group": spec.group,
            "entry": spec.entry, "field": spec.field, "a_tag": spec.a_tag, "b_tag": spec.b_tag,
            "paper_literal_goe": spec.paper_literal_goe}


def validate_config(cfg, command: str) -> dict:
    """Check a run config against the strict schema; returns it normalized."""
    if command not in COMMAND_KEYS:
        raise ConfigError(f"no JSON config schema for command {command!r}")
    _check_keys(cfg, {**COMMON_KEYS, **COMMAND_KEYS[command]}, "config")
    if cfg["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {cfg['schema_version']!r}")
    if cfg["command"] != command:
        raise ConfigError(f"config is for {cfg['command']!r}, not {command!r}")
    seed = _int(cfg["master_seed"], "master_seed", 0)
    if seed > MASK64:
        raise ConfigError("master_seed must fit in 64 bits")
    if cfg.get("threads") is not None:
        _int(cfg["threads"], "threads", 1)
    if "record_timings" in cfg and not isinstance(cfg["record_timings"], bool):
        raise ConfigError("record_timings must be a boolean")
    if "output_dir" in cfg and not isinstance(cfg["output_dir"], str):
        raise ConfigError("output_dir must be a string")
    out = dict(cfg)
    out["ensemble"] = ensemble_to_dict(ensemble_from_dict(cfg["ensemble"]))
    if command == "rates":
        exp = cfg["experiment"]
        _check_keys(exp, EXPERIMENT_KEYS, "experiment")
        if not isinstance(exp["sizes"], list) or not exp["sizes"]:
            raise ConfigError("experiment.sizes must be a nonempty list")
        for s in exp["sizes"]:
            _int(s, "experiment.sizes[]", 1)
        _int(exp["reps"], "experiment.reps", 1)
        if "window" in cfg and cfg["window"] is not None:
            w = cfg["window"]
            if not (isinstance(w, list) and len(w) == 2 and all(isinstance(v, (int, float)) for v in w)):
                raise ConfigError("window must be [low, high]")
        try:
            build_experiment(out)
        except InvalidSpec as exc:
            raise ConfigError(str(exc)) from exc
    else:
        _int(cfg["reps"], "reps", 1)
        if command == "distance":
            try:
                distance_experiment(out)
            except InvalidSpec as exc:
                raise ConfigError(str(exc)) from exc
    return out


def build_experiment(cfg: dict) -> experiments.ExperimentConfig:
    exp = cfg["experiment"]
    return experiments.ExperimentConfig(
        ensemble=ensemble_from_dict(cfg["ensemble"]), sizes=tuple(exp["sizes"]),
        reps=exp["reps"], p=float(exp.get("p", 2.0)), target=exp.get("target", "law"),
        master_seed=cfg["master_seed"], pool_reps=exp.get("pool_reps", 200),
        budget_seconds=exp.get("budget_seconds"), threads=cfg.get("threads"))


def distance_experiment(cfg: dict) -> experiments.ExperimentConfig:
    spec = ensemble_from_dict(cfg["ensemble"])
    return experiments.ExperimentConfig(
        ensemble=spec, sizes=(spec.n,), reps=cfg["reps"], p=float(cfg.get("p", 2.0)),
        target=cfg.get("target", "law"), master_seed=cfg["master_seed"],
        pool_reps=cfg.get("pool_reps", 200), threads=cfg.get("threads"))


def load_config_file(path: str, command: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from exc
    return validate_config(cfg, command)


def apply_seed_override(cfg: dict) -> tuple[dict, str]:
    env = os.environ.get("RMT_SEED")
    if env is None or env == "":
        return cfg, "config"
    try:
        seed = int(env, 0)
    except ValueError as exc:
        raise ConfigError(f"RMT_SEED is not an integer: {env!r}") from exc
    if not 0 <= seed <= MASK64:
        raise ConfigError("RMT_SEED must fit in 64 bits")
    return {**cfg, "master_seed": seed}, "env:RMT_SEED"


def output_dir(args, cfg: dict) -> Path:
    out = Path(args.out if getattr(args, "out", None) else cfg.get("output_dir", "results"))
    out.mkdir(parents=True, exist_ok=True)
    return out


# --- flag-built configs ------------------------------------------------------------------

def ensemble_from_args(args) -> dict:
    name = args.ensemble.lower()
    if name not in ENSEMBLE_ALIASES:
        raise ConfigError(f"unknown ensemble {args.ensemble!r}")
    kind, extra = ENSEMBLE_ALIASES[name]
    d = {"kind": kind, "n": args.n}
    for key in ("m", "k", "group", "entry", "field", "a_tag", "b_tag"):
        v = getattr(args, key, None)
        if v is not None:
            d[key] = v
    d.update({k: v for k, v in extra.items() if getattr(args, k, None) is None})
    if getattr(args, "paper_literal_goe", False):
        d["paper_literal_goe"] = True
    return ensemble_to_dict(ensemble_from_dict(d))


def add_ensemble_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ensemble", choices=sorted(ENSEMBLE_ALIASES))
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--group", choices=ensembles.GROUPS)
    p.add_argument("--entry", choices=ensembles.ENTRY_DISTS)
    p.add_argument("--field", choices=ensembles.FIELDS)
    p.add_argument("--a-tag", dest="a_tag", choices=ensembles.INGREDIENTS)
    p.add_argument("--b-tag", dest="b_tag", choices=ensembles.INGREDIENTS)
    p.add_argument("--paper-literal-goe", action="store_true")


def _base(command: str, args) -> dict:
    seed = args.seed if args.seed is not None else 0
    cfg = {"schema_version": SCHEMA_VERSION, "command": command, "master_seed": seed}
    if getattr(args, "threads", None) is not None:
        cfg["threads"] = args.threads
    return cfg


def _config_for(command: str, args, payload) -> dict:
    if getattr(args, "config", None):
        return load_config_file(args.config, command)
    if args.ensemble is None or args.n is None:
        raise ConfigError("--ensemble and --n are required without --config")
    cfg = {**_base(command, args), "ensemble": ensemble_from_args(args), **payload}
    return validate_config(cfg, command)


# --- commands --------------------------------------------------------------------------------

def cmd_sample(args) -> int:
    cfg = _config_for("sample", args, {"reps": args.reps, "dump_matrices": args.dump_matrices})
    cfg, source = apply_seed_override(cfg)
    prov = provenance(cfg, source)
    spec = ensemble_from_dict(cfg["ensemble"])
    stream = RngStream(cfg["master_seed"], spec.tag, spec.n)
    rows, mats = [], []
    for r in range(cfg["reps"]):
        M = ensembles.sample(spec, stream.child(rep=r))
        if spec.kind == "Ginibre":
            M = M / math.sqrt(spec.n)
        z = ensembles.spectrum_of(M, ensembles.hermitian_kind(spec))
        rows.extend((r, j, float(np.real(v)), float(np.imag(v))) for j, v in enumerate(z))
        if cfg.get("dump_matrices"):
            mats.append(M)
    out = output_dir(args, cfg)
    write_csv(out / "eigenvalues.csv", ["rep", "index", "re", "im"], rows, prov)
    for r, M in enumerate(mats):
        buf = io.StringIO()
        buf.write(f"# config_hash={prov['config_hash']} rep={r}\n")
        for row in np.asarray(M, dtype=complex):
            buf.write(",".join(f"{fmt(v.real)}{'+' if v.imag >= 0 else '-'}{fmt(abs(v.imag))}i"
                               for v in row) + "\n")
        (out / f"matrix_rep{r}.csv").write_text(buf.getvalue(), encoding="utf-8")
    write_summary(out / "summary.json", {"rows": len(rows)}, cfg, prov)
    print(f"wrote {len(rows)} eigenvalue rows to {out / 'eigenvalues.csv'}")
    return 0


def cmd_law(args) -> int:
    law_tag = LAW_ALIASES[args.law]
    if law_tag == "MarchenkoPastur" and args.rho is None:
        raise ConfigError("--rho is required for the Marchenko-Pastur law")
    if args.n < 1:
        raise ConfigError("--n must be >= 1")
    cfg = {"schema_version": SCHEMA_VERSION, "command": "law", "master_seed": 0,
           "law": law_tag, "rho": args.rho, "n": args.n}
    prov = provenance(cfg, "none")
    try:
        law = limits.LimitLaw(law_tag, args.rho)
    except InvalidSpec as exc:
        raise ConfigError(str(exc)) from exc
    atoms = limits.discretize_law(law, args.n).atoms
    out = output_dir(args, cfg)
    write_csv(out / "law.csv", ["law", "n", "atom_re", "atom_im"],
              [(law_tag, args.n, float(a.real), float(a.imag)) for a in atoms], prov)
    write_summary(out / "summary.json", {"atoms": int(atoms.size)}, cfg, prov)
    print(f"wrote {atoms.size} atoms to {out / 'law.csv'}")
    return 0


def cmd_dpp(args) -> int:
    family = FAMILY_ALIASES[args.family]
    xs = [float(v) for v in args.x]
    t_grid = [float(v) for v in args.t] if args.t else [0.0, 1.0, 2.0, 4.0, 8.0]
    cfg = {"schema_version": SCHEMA_VERSION, "command": "dpp", "master_seed": 0,
           "family": family, "n": args.n, "x": xs, "t": t_grid}
    try:
        spec = dpp.KernelSpec(family, args.n)
    except InvalidSpec as exc:
        raise ConfigError(str(exc)) from exc
    if any(t < 0 for t in t_grid):
        raise ConfigError("t must be nonnegative")
    prov = provenance(cfg, "none")
    rows, brows = [], []
    for x in xs:
        st = dpp.counting_stats(spec, x)
        rows.append((family, args.n, x, st.mean, st.variance))
        brows.extend((family, args.n, x, t, dpp.bernstein_tail(st.variance, t)) for t in t_grid)
        print(f"{family} n={args.n} x={fmt(x)} mean={fmt(st.mean)} variance={fmt(st.variance)}")
    out = output_dir(args, cfg)
    write_csv(out / "dpp.csv", ["family", "n", "x", "mean", "variance"], rows, prov)
    write_csv(out / "dpp_bernstein.csv", ["family", "n", "x", "t", "bound"], brows, prov)
    write_summary(out / "summary.json", {"points": len(rows)}, cfg, prov)
    return 0


def _rate_rows(ensemble_name: str, report: experiments.RateReport, p: float, timings: bool):
    return [(ensemble_name, r.n, r.rep, p, r.distance, r.tail_bound,
             r.runtime_ms if timings else None) for r in report.rows]


RATE_HEADER = ["ensemble", "n", "rep", "p", "distance", "tail_bound", "runtime_ms"]


def cmd_distance(args) -> int:
    cfg = _config_for("distance", args, {"reps": args.reps, "p": args.p, "target": args.target})
    cfg, source = apply_seed_override(cfg)
    prov = provenance(cfg, source)
    ecfg = distance_experiment(cfg)
    report = experiments.run_distance_scan(ecfg)
    out = output_dir(args, cfg)
    rows = _rate_rows(ecfg.ensemble.tag, report, ecfg.p, cfg.get("record_timings", False))
    write_csv(out / "distances.csv", RATE_HEADER, rows, prov)
    mean = report.mean_by_n()[ecfg.ensemble.n]
    write_summary(out / "summary.json", {"mean_distance": mean}, cfg, prov)
    print(f"mean W_{fmt(ecfg.p)} over {ecfg.reps} reps: {fmt(mean)}")
    return 0


def cmd_rates(args) -> int:
    cfg = load_config_file(args.config_file, "rates")
    cfg, source = apply_seed_override(cfg)
    prov = provenance(cfg, source)
    ecfg = build_experiment(cfg)
    status = 0
    try:
        report = experiments.run_distance_scan(ecfg)
    except BudgetExceeded as exc:
        report = exc.report
        status = 1
    out = output_dir(args, cfg)
    rows = _rate_rows(ecfg.ensemble.tag, report, ecfg.p, cfg.get("record_timings", False))
    write_csv(out / "rows.csv", RATE_HEADER, rows, prov)
    summary = {"slope": report.slope, "intercept": report.intercept, "stderr": report.stderr,
               "complete": report.complete,
               "mean_by_n": {str(n): v for n, v in sorted(report.mean_by_n().items())},
               "runtime_ms_total": float(sum(r.runtime_ms for r in report.rows))}
    window = cfg.get("window")
    if window is not None:
        ok = report.slope is not None and window[0] <= report.slope <= window[1]
        summary["window"] = {"low": window[0], "high": window[1], "pass": bool(ok)}
    write_summary(out / "summary.json", summary, cfg, prov)
    slope = "null" if report.slope is None else fmt(report.slope)
    print(f"{ecfg.ensemble.tag}: slope={slope} stderr={fmt(report.stderr)} complete={report.complete}")
    if not report.complete:
        print("budget exhausted; partial results written", file=sys.stderr)
    return status


def cmd_rigidity(args) -> int:
    names = {"gue": "GUE", "haar-u": "HaarU"}
    if args.reps < 1 or args.n < 1:
        raise ConfigError("--n and --reps must be >= 1")
    cfg = {"schema_version": SCHEMA_VERSION, "command": "rigidity",
           "master_seed": args.seed if args.seed is not None else 0,
           "ensemble": names[args.ensemble], "n": args.n, "reps": args.reps}
    cfg, source = apply_seed_override(cfg)
    prov = provenance(cfg, source)
    try:
        prof = experiments.rigidity_profile(cfg["ensemble"], args.n, args.reps, cfg["master_seed"])
    except InvalidSpec as exc:
        raise ConfigError(str(exc)) from exc
    out = output_dir(args, cfg)
    write_csv(out / "rigidity.csv", ["n", "j", "msd"],
              [(args.n, j + 1, v) for j, v in enumerate(prof.msd)], prov)
    write_summary(out / "summary.json", {"bulk_msd": prof.bulk}, cfg, prov)
    print(f"bulk mean squared deviation: {fmt(prof.bulk)}")
    return 0


def cmd_check(args) -> int:
    results = checks.run_suite(args.suite)
    lines = [r.line() for r in results]
    failed = [r for r in results if not r.passed]
    lines.append(f"{args.suite}: {len(results) - len(failed)}/{len(results)} passed")
    text = "\n".join(lines) + "\n"
    print(text, end="")
    out = Path(args.out) if args.out else Path("results")
    out.mkdir(parents=True, exist_ok=True)
    (out / f"check_{args.suite}.txt").write_text(text, encoding="utf-8")
    return 1 if failed else 0


def cmd_report(args) -> int:
    root = Path(args.directory)
    files = sorted(root.rglob("summary.json"))
    if not files:
        raise ConfigError(f"no summary.json under {root}")
    bad = 0
    for f in files:
        body = json.loads(f.read_text(encoding="utf-8"))
        prov, cfg = body.get("provenance", {}), body.get("config", {})
        ok = prov.get("config_hash") == config_hash(cfg)
        bad += not ok
        fields = {k: body[k] for k in ("slope", "stderr", "complete", "mean_distance", "bulk_msd")
                  if k in body}
        print(f"{f}: command={prov.get('command')} seed={prov.get('master_seed')} "
              f"hash={'ok' if ok else 'MISMATCH'} {json.dumps(fields, sort_keys=True)}")
    return 1 if bad else 0


# --- entry point -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rmtlab", description="Random matrix spectral laboratory.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="eigenvalues of sampled matrices")
    add_ensemble_flags(p)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--dump-matrices", action="store_true")
    p.add_argument("--config")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("law", help="n-point discretization of a limiting law")
    p.add_argument("--law", choices=sorted(LAW_ALIASES), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rho", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_law)

    p = sub.add_parser("dpp", help="counting-function mean and variance from a kernel")
    p.add_argument("--family", choices=sorted(FAMILY_ALIASES), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=float, nargs="+", required=True)
    p.add_argument("--t", type=float, nargs="*")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dpp)

    p = sub.add_parser("distance", help="Wasserstein distances of sampled spectra to a target")
    add_ensemble_flags(p)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--target", choices=experiments.TARGETS, default="law")
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--config")
    p.add_argument("--out")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("rates", help="distance scan over sizes with a log-log fit")
    p.add_argument("config_file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("rigidity", help="per-index mean squared deviation from predictions")
    p.add_argument("--ensemble", choices=("gue", "haar-u"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--reps", type=int, default=30)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_rigidity)

    p = sub.add_parser("check", help="run an invariant suite")
    p.add_argument("suite", choices=checks.SUITES)
    p.add_argument("--out")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("report", help="summarize result directories and verify hashes")
    p.add_argument("directory")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except InvalidSpec as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except RmtError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
