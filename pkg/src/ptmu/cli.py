"""Command line runner: ``ptmu validate``, ``ptmu run``, ``ptmu goldens``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import shutil
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import BoundedFunctionSpec, Region, companion_function
from .config import ExperimentConfig, load, parse
from .cyclicity import (
    calibrate_c1,
    certify,
    classify,
    companion_checks,
    corona_hypothesis_check,
    distance_curve,
    hardy_distance,
)
from .errors import PtmuError
from .measures import roberts_decompose
from .norms import monomial_decay

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def shipped_dir() -> Path:
    return Path(str(resources.files("ptmu") / "configs"))


def goldens_dir() -> Path:
    return Path(str(resources.files("ptmu") / "goldens"))


def shipped_configs() -> list[Path]:
    return sorted(shipped_dir().glob("*.json"))


# ---------------------------------------------------------------------------
# serialization


def plain(obj):
    """JSON-safe copy: numpy scalars to Python, complex to ``[re, im]``, non-finite to strings."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [plain(float(obj.real)), plain(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def dumps(obj) -> str:
    return json.dumps(plain(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _fmt(x) -> str:
    return "" if x is None else format(float(x), ".17g")


def curve_csv(degrees, values, bound, verdict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "d_N", "best_dual_bound", "verdict"])
    for N, d in zip(degrees, values):
        w.writerow([N, _fmt(d), _fmt(bound), verdict])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# pipeline


def _error(stage: str, exc: Exception) -> dict:
    if isinstance(exc, PtmuError):
        return {"stage": stage, "code": exc.code, "message": str(exc), "context": plain(exc.context)}
    return {"stage": stage, "code": type(exc).__name__, "message": str(exc), "context": {}}


def _function_stage(cfg: ExperimentConfig, entry, info: dict, errors: list) -> dict:
    q = cfg.quadrature
    out: dict = {"role": entry.role, "rho": info["rho"].get(entry.label)}
    try:
        curve = distance_curve(
            entry.spec,
            cfg.measure,
            cfg.degrees,
            q["angular_power"],
            q["radial_nodes"],
            q["contour_nodes"],
            q["radial_depth"],
        )
    except Exception as exc:  # noqa: BLE001 - every failure goes into the report
        errors.append(_error(f"distance:{entry.label}", exc))
        return out
    out["curve"] = curve.to_dict()
    certs = []
    if entry.certificate is not None:
        try:
            cert = certify(entry.spec, cfg.measure, entry.certificate)
            certs.append(cert)
            out["certificate"] = cert.to_dict()
        except Exception as exc:  # noqa: BLE001
            errors.append(_error(f"certificate:{entry.label}", exc))
            out["certificate"] = None
    else:
        out["certificate"] = None
    th = cfg.thresholds
    verdict = classify(curve, certs, th["evidence_cyclic"], th["residual"])
    out["verdict"] = verdict.to_dict()
    bound = max((c.bound for c in certs), default=None)
    out["best_dual_bound"] = bound
    if bound is not None:
        gap = min(d - bound for d in curve.values)
        out["weak_duality"] = {"min_gap": gap, "holds": gap >= -th["weak_duality_slack"]}
    out["_curve"] = curve
    return out


def _hardy_check(cfg: ExperimentConfig, funcs: dict, spec: dict) -> dict:
    tol = spec.get("tol", 1e-6)
    rows = {}
    for label in spec["labels"]:
        target = hardy_distance(cfg.function(label).spec) ** 2
        curve = funcs[label].get("curve")
        if curve is None:
            rows[label] = {"passed": False, "reason": "no curve"}
            continue
        err = max(abs(d * d - target) for d in curve["values"])
        rows[label] = {"target_d_squared": target, "max_error": err, "passed": err <= tol}
    return {"tol": tol, "functions": rows, "passed": all(r["passed"] for r in rows.values())}


def _dichotomy_check(cfg: ExperimentConfig, funcs: dict, spec: dict) -> dict:
    good, bad = funcs[spec["good"]], funcs[spec["bad"]]
    if "curve" not in good or "curve" not in bad:
        return {"passed": False, "reason": "missing curve"}
    Nc = spec.get("compare_degree", cfg.degrees[-1])
    Ne = spec.get("early_degree", 16)
    gd = dict(zip(good["curve"]["degrees"], good["curve"]["values"]))
    bd = dict(zip(bad["curve"]["degrees"], bad["curve"]["values"]))
    ratio = spec.get("ratio", 0.5)
    cert = bad.get("certificate") or {}
    res_max = spec.get("residual_max", cfg.thresholds["residual"])
    a = bool(cert) and cert["bound"] > 0 and cert["max_residual"] <= res_max
    b = gd[Nc] <= ratio * bd[Nc] and gd[Nc] < gd[Ne]
    c = bad["verdict"]["verdict"] == "certified-noncyclic" and good["verdict"]["verdict"] == "evidence-cyclic"
    return {
        "good_at_compare": gd[Nc],
        "bad_at_compare": bd[Nc],
        "good_at_early": gd[Ne],
        "ratio": ratio,
        "certificate_positive": a,
        "separation": b,
        "verdicts": c,
        "passed": a and b and c,
    }


def _section5(cfg: ExperimentConfig, s5: dict, errors: list) -> dict:
    entry = cfg.function(s5["function"])
    nu = entry.spec.singular_part
    rob = s5.get("roberts", {"c": 1.0, "N": 2, "M": 3})
    out: dict = {}
    try:
        res = roberts_decompose(nu, float(rob["c"]), int(rob["N"]), int(rob["M"]))
        out["roberts"] = res.report()
        cal = calibrate_c1(res)
        out["calibration"] = {"c1": cal.c1, "per_piece": cal.per_piece, "min_moduli": cal.min_moduli, "slope": cal.slope}
        beta = monomial_decay(cfg.measure).beta
        comp = s5.get("companion", {})
        checks = companion_checks(
            nu,
            cfg.measure,
            float(rob["c"]),
            cal.c1,
            beta,
            tuple(comp.get("ns", (16, 64, 256))),
            float(comp.get("sigma_fraction", 0.5)),
        )
        checks["beta"] = beta
        out["companion"] = checks
        corona = []
        for piece in res.pieces:
            S = BoundedFunctionSpec(singular_part=piece.measure)
            f = companion_function(piece.n, cfg.measure.boundary.carrier, checks["sigma"])
            grid = Region("omega", piece.n, piece.measure, checks["rho"]).grid(12, 512)
            delta = corona_hypothesis_check(S, f, grid)
            corona.append({"n_k": piece.n, "delta": delta, "predicted_floor": piece.n ** (-float(rob["c"]) * cal.c1)})
        xs = [math.log(r["n_k"]) for r in corona]
        ys = [-math.log(r["delta"]) for r in corona]
        out["corona"] = {"pieces": corona, "fitted_exponent": float(np.polyfit(xs, ys, 1)[0]) if len(xs) > 1 else None}
    except Exception as exc:  # noqa: BLE001
        errors.append(_error("section5", exc))
    return out


def run_experiment(cfg: ExperimentConfig, info: dict) -> tuple[dict[str, str], int]:
    """Execute one experiment; returns ``({file name: text}, exit code)``."""
    errors: list = []
    funcs = {}
    for entry in cfg.functions:
        funcs[entry.label] = _function_stage(cfg, entry, info, errors)
    checks = {}
    if "hardy_oracle" in cfg.checks:
        checks["hardy_oracle"] = _hardy_check(cfg, funcs, cfg.checks["hardy_oracle"])
    if "dichotomy" in cfg.checks:
        checks["dichotomy"] = _dichotomy_check(cfg, funcs, cfg.checks["dichotomy"])
    s5 = _section5(cfg, cfg.section5, errors) if cfg.section5 else None
    files = {}
    prefix = cfg.outputs["csv_prefix"]
    for label, data in funcs.items():
        curve = data.pop("_curve", None)
        if curve is not None:
            files[f"{prefix}_{label}.csv"] = curve_csv(
                curve.degrees, curve.values, data.get("best_dual_bound"), data["verdict"]["verdict"]
            )
    report = {
        "name": cfg.name,
        "version": __version__,
        "config": cfg.to_dict(),
        "functions": funcs,
        "checks": checks,
        "section5": s5,
        "errors": errors,
        "log": "natural",
        "normalization": {"circle": "m(T) = 1", "disk": "A(D) = 1"},
    }
    files[cfg.outputs["report"]] = dumps(report)
    return files, (EXIT_NUMERIC if errors else EXIT_OK)


def write_atomic(directory: Path, files: dict[str, str]) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, directory / name)


def _run_one(path: str, out: str) -> tuple[str, int, list]:
    try:
        data = load(path)
    except OSError as exc:
        return path, EXIT_IO, [{"code": "IO_ERROR", "path": "$", "message": str(exc)}]
    except json.JSONDecodeError as exc:
        return path, EXIT_VALIDATION, [{"code": "PARSE_ERROR", "path": "$", "message": str(exc)}]
    cfg, diags, info = parse(data)
    if diags:
        return path, EXIT_VALIDATION, [d.to_dict() for d in diags]
    files, code = run_experiment(cfg, info)
    try:
        write_atomic(Path(out) / cfg.name, files)
    except OSError as exc:
        return path, EXIT_IO, [{"code": "IO_ERROR", "path": "$", "message": str(exc)}]
    return path, code, []


# ---------------------------------------------------------------------------
# golden files


def _close(a, b, rtol: float, atol: float) -> bool:
    if isinstance(a, dict) and isinstance(b, dict):
        return a.keys() == b.keys() and all(_close(a[k], b[k], rtol, atol) for k in a)
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(_close(x, y, rtol, atol) for x, y in zip(a, b))
    if isinstance(a, bool) or isinstance(b, bool):
        return a == b
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return abs(a - b) <= atol + rtol * max(abs(a), abs(b))
    return a == b


# optimal coefficient vectors are ill-conditioned; they are reported but not compared
_SKIP = ("coefficients",)


def _strip(obj):
    if isinstance(obj, dict):
        return {k: _strip(v) for k, v in obj.items() if k not in _SKIP}
    if isinstance(obj, list):
        return [_strip(v) for v in obj]
    return obj


def compare_file(name: str, produced: str, golden: str, rtol: float = 1e-6, atol: float = 1e-9) -> bool:
    if produced == golden:
        return True
    if name.endswith(".json"):
        return _close(_strip(json.loads(produced)), _strip(json.loads(golden)), rtol, atol)
    if name.endswith(".csv"):
        pr = list(csv.reader(io.StringIO(produced)))
        gr = list(csv.reader(io.StringIO(golden)))
        if len(pr) != len(gr) or pr[:1] != gr[:1]:
            return False
        for a, b in zip(pr[1:], gr[1:]):
            if len(a) != len(b):
                return False
            for x, y in zip(a, b):
                try:
                    if not _close(float(x), float(y), rtol, atol):
                        return False
                except ValueError:
                    if x != y:
                        return False
        return True
    return False


def check_goldens(out_dir: Path, golden_root: Path) -> list[str]:
    problems = []
    for gdir in sorted(p for p in golden_root.iterdir() if p.is_dir()):
        for gfile in sorted(gdir.iterdir()):
            produced = out_dir / gdir.name / gfile.name
            if not produced.exists():
                problems.append(f"missing {produced}")
                continue
            if not compare_file(gfile.name, produced.read_text(encoding="utf-8"), gfile.read_text(encoding="utf-8")):
                problems.append(f"mismatch {gdir.name}/{gfile.name}")
    return problems


def update_goldens(out_dir: Path, golden_root: Path) -> list[str]:
    written = []
    for sub in sorted(p for p in out_dir.iterdir() if p.is_dir()):
        dest = golden_root / sub.name
        dest.mkdir(parents=True, exist_ok=True)
        for f in sorted(sub.iterdir()):
            if f.is_file() and not f.name.startswith("."):
                shutil.copyfile(f, dest / f.name)
                written.append(f"{sub.name}/{f.name}")
    return written


# ---------------------------------------------------------------------------
# entry point


def _cmd_validate(args) -> int:
    worst = EXIT_OK
    for path in args.configs:
        try:
            data = load(path)
        except OSError as exc:
            print(json.dumps({"config": path, "diagnostics": [{"code": "IO_ERROR", "path": "$", "message": str(exc)}]}))
            worst = max(worst, EXIT_IO)
            continue
        except json.JSONDecodeError as exc:
            print(json.dumps({"config": path, "diagnostics": [{"code": "PARSE_ERROR", "path": "$", "message": str(exc)}]}))
            worst = max(worst, EXIT_VALIDATION)
            continue
        _, diags, info = parse(data)
        print(dumps({"config": path, "diagnostics": [d.to_dict() for d in diags], "rho": info["rho"]}), end="")
        if diags:
            worst = max(worst, EXIT_VALIDATION)
    return worst


def _cmd_run(args) -> int:
    configs = list(args.configs)
    if args.shipped:
        configs += [str(p) for p in shipped_configs()]
    if not configs:
        print("no configs given", file=sys.stderr)
        return EXIT_VALIDATION
    if args.jobs > 1 and len(configs) > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = list(ex.map(_run_one, configs, [args.out] * len(configs)))
    else:
        results = [_run_one(c, args.out) for c in configs]
    worst = EXIT_OK
    for path, code, diags in results:
        status = {EXIT_OK: "ok", EXIT_VALIDATION: "invalid", EXIT_NUMERIC: "numeric-failure", EXIT_IO: "io-failure"}[code]
        print(f"{path}: {status}")
        for d in diags:
            print(f"  {d['code']} {d['path']}: {d['message']}")
        worst = max(worst, code)
    return worst


def _cmd_goldens(args) -> int:
    root = Path(args.goldens) if args.goldens else goldens_dir()
    if args.update:
        out = Path(args.update)
        if not out.is_dir():
            print(f"{out} is not a directory", file=sys.stderr)
            return EXIT_IO
        for name in update_goldens(out, root):
            print(f"updated {name}")
        return EXIT_OK
    out = Path(args.check)
    if not out.is_dir() or not root.is_dir():
        print(f"missing directory {out if not out.is_dir() else root}", file=sys.stderr)
        return EXIT_IO
    problems = check_goldens(out, root)
    for p in problems:
        print(p)
    if any(p.startswith("missing") for p in problems):
        return EXIT_IO
    if problems:
        return EXIT_NUMERIC
    print("goldens match")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ptmu", description="Cyclicity experiments for inner functions in P^t(mu).")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    v = sub.add_parser("validate", help="check configs and report rho")
    v.add_argument("configs", nargs="+")
    v.set_defaults(func=_cmd_validate)
    r = sub.add_parser("run", help="run experiments and write CSV/JSON artifacts")
    r.add_argument("configs", nargs="*")
    r.add_argument("--out", required=True)
    r.add_argument("--shipped", action="store_true", help="also run every shipped config")
    r.add_argument("--jobs", type=int, default=1)
    r.set_defaults(func=_cmd_run)
    g = sub.add_parser("goldens", help="compare artifacts with golden files")
    mode = g.add_mutually_exclusive_group(required=True)
    mode.add_argument("--check", metavar="DIR")
    mode.add_argument("--update", metavar="DIR")
    g.add_argument("--goldens", metavar="DIR", help="golden root (default: the packaged goldens)")
    g.set_defaults(func=_cmd_goldens)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
