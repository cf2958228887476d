"""Experiment configs: parsing, canonical serialization and validation."""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field
from typing import Any

from .analytic import BoundedFunctionSpec
from .cyclicity import DEFAULT_DEGREES, CertificateOptions, support_gap
from .measures import SpaceMeasure

ROLES = ("noncyclic-candidate", "cyclic-candidate", "reference")

DEFAULT_QUADRATURE = {"angular_power": 13, "radial_nodes": None, "radial_depth": 16, "contour_nodes": 512}
DEFAULT_THRESHOLDS = {"evidence_cyclic": 1e-2, "residual": 1e-5, "weak_duality_slack": 1e-10}


@dataclass
class Diagnostic:
    code: str
    path: str
    message: str

    def to_dict(self) -> dict:
        return {"code": self.code, "path": self.path, "message": self.message}


@dataclass
class FunctionEntry:
    label: str
    role: str
    spec: BoundedFunctionSpec
    certificate: CertificateOptions | None
    raw: dict


@dataclass
class ExperimentConfig:
    """A validated experiment.  ``raw`` keeps the canonical dictionary."""

    name: str
    measure: SpaceMeasure
    degrees: list[int]
    functions: list[FunctionEntry]
    quadrature: dict
    thresholds: dict
    checks: dict
    section5: dict | None
    outputs: dict
    raw: dict = field(repr=False)

    def to_dict(self) -> dict:
        return copy.deepcopy(self.raw)

    def to_json(self) -> str:
        return json.dumps(self.raw, sort_keys=True, indent=2) + "\n"

    def function(self, label: str) -> FunctionEntry:
        for f in self.functions:
            if f.label == label:
                return f
        raise KeyError(label)


def canonical(data: dict) -> dict:
    """Fill defaults so that two spellings of one experiment compare equal."""
    out = copy.deepcopy(data)
    out.setdefault("description", "")
    out.setdefault("degrees", list(DEFAULT_DEGREES))
    out["quadrature"] = {**DEFAULT_QUADRATURE, **out.get("quadrature", {})}
    out["thresholds"] = {**DEFAULT_THRESHOLDS, **out.get("thresholds", {})}
    out.setdefault("checks", {})
    out.setdefault("section5", None)
    out["outputs"] = {"csv_prefix": "curve", "report": "report.json", **out.get("outputs", {})}
    funcs = []
    for f in out.get("functions", []):
        f = dict(f)
        f.setdefault("role", "reference")
        if f.get("certificate") is not None:
            f["certificate"] = CertificateOptions.from_dict(f["certificate"]).to_dict()
        else:
            f["certificate"] = None
        funcs.append(f)
    out["functions"] = funcs
    return out


def _spec(data: dict, path: str, diags: list[Diagnostic]) -> BoundedFunctionSpec | None:
    for i, a in enumerate(data.get("blaschke_zeros", [])):
        if math.hypot(a[0], a[1]) >= 1.0:
            diags.append(Diagnostic("ZERO_RANGE", f"{path}.blaschke_zeros[{i}]", "Blaschke zeros must lie in the open disk"))
            return None
    try:
        return BoundedFunctionSpec.from_dict(data)
    except (ValueError, KeyError, TypeError) as exc:
        diags.append(Diagnostic("SPEC_INVALID", path, str(exc)))
        return None


def _measure(data: Any, diags: list[Diagnostic]) -> SpaceMeasure | None:
    path = "$.measure"
    if not isinstance(data, dict):
        diags.append(Diagnostic("FIELD_MISSING", path, "measure object is required"))
        return None
    alpha = data.get("disk_alpha", 0.0)
    ok = True
    if not isinstance(alpha, (int, float)) or not alpha > -1.0:
        diags.append(Diagnostic("ALPHA_RANGE", f"{path}.disk_alpha", f"disk_alpha must exceed -1, got {alpha}"))
        ok = False
    t = data.get("t", 2.0)
    if not isinstance(t, (int, float)) or not t > 0:
        diags.append(Diagnostic("T_RANGE", f"{path}.t", f"t must be positive, got {t}"))
        ok = False
    elif t != 2.0:
        diags.append(Diagnostic("T_UNSUPPORTED", f"{path}.t", "distance curves are computed for t = 2 only"))
        ok = False
    scale = data.get("disk_mass_scale", 1.0)
    if not isinstance(scale, (int, float)) or scale < 0:
        diags.append(Diagnostic("MASS_RANGE", f"{path}.disk_mass_scale", "disk_mass_scale must be nonnegative"))
        ok = False
    if not ok:
        return None
    try:
        return SpaceMeasure.from_dict(data)
    except (ValueError, KeyError, TypeError) as exc:
        diags.append(Diagnostic("MEASURE_INVALID", path, str(exc)))
        return None


def parse(data: dict) -> tuple[ExperimentConfig | None, list[Diagnostic], dict]:
    """Build the config; returns ``(config or None, diagnostics, info)``.

    ``info`` carries computed quantities such as ``rho`` per function.
    """
    diags: list[Diagnostic] = []
    info: dict = {"rho": {}}
    if not isinstance(data, dict):
        return None, [Diagnostic("FIELD_TYPE", "$", "config must be a JSON object")], info
    raw = canonical(data)
    name = raw.get("name")
    if not isinstance(name, str) or not name or any(c in name for c in "/\\"):
        diags.append(Diagnostic("NAME_INVALID", "$.name", "name must be a nonempty string without path separators"))
    mu = _measure(raw.get("measure"), diags)
    degrees = raw["degrees"]
    if not isinstance(degrees, list) or not degrees or not all(isinstance(d, int) and d >= 0 for d in degrees):
        diags.append(Diagnostic("DEGREES_INVALID", "$.degrees", "degrees must be a nonempty list of nonnegative integers"))
        degrees = []
    elif sorted(set(degrees)) != degrees:
        diags.append(Diagnostic("DEGREES_ORDER", "$.degrees", "degrees must be strictly increasing"))
    quad = raw["quadrature"]
    if degrees and (1 << int(quad["angular_power"])) < 8 * (degrees[-1] + 1):
        diags.append(
            Diagnostic("GRID_ALIASING", "$.quadrature.angular_power", "angular grid needs at least 8(N+1) nodes")
        )
    funcs: list[FunctionEntry] = []
    labels = set()
    if not raw["functions"]:
        diags.append(Diagnostic("FIELD_MISSING", "$.functions", "at least one function is required"))
    for i, f in enumerate(raw["functions"]):
        path = f"$.functions[{i}]"
        label = f.get("label")
        if not isinstance(label, str) or not label or label in labels:
            diags.append(Diagnostic("LABEL_INVALID", f"{path}.label", "labels must be unique nonempty strings"))
            continue
        labels.add(label)
        if f["role"] not in ROLES:
            diags.append(Diagnostic("ROLE_INVALID", f"{path}.role", f"role must be one of {ROLES}"))
            continue
        spec = _spec(f.get("spec", {}), f"{path}.spec", diags)
        if spec is None:
            continue
        cert = None
        if f["certificate"] is not None:
            cert = CertificateOptions.from_dict(f["certificate"])
            if cert.E not in (None, "carrier"):
                diags.append(Diagnostic("CERT_INVALID", f"{path}.certificate.E", "E must be 'carrier' or null"))
            elif cert.E == "carrier" and mu is not None and mu.boundary.is_zero:
                diags.append(Diagnostic("CERT_INVALID", f"{path}.certificate.E", "measure has no boundary carrier"))
        if mu is not None:
            rho = support_gap(spec, mu)
            info["rho"][label] = rho
            if f["role"] == "cyclic-candidate" and rho <= 1e-12:
                diags.append(
                    Diagnostic(
                        "RHO_ZERO",
                        f"{path}.spec.singular",
                        "singular support meets the boundary carrier; restrict the measure first",
                    )
                )
        funcs.append(FunctionEntry(label, f["role"], spec, cert, f))
    hardy = raw["checks"].get("hardy_oracle")
    if hardy is not None:
        if not hardy.get("labels") or any(lab not in labels for lab in hardy["labels"]):
            diags.append(Diagnostic("CHECK_INVALID", "$.checks.hardy_oracle.labels", "unknown function label"))
        elif mu is not None and (mu.disk_mass_scale != 0 or mu.boundary.is_zero or mu.boundary.carrier.complementary_arcs):
            diags.append(Diagnostic("CHECK_INVALID", "$.checks.hardy_oracle", "the Hardy oracle needs circle-only Lebesgue measure"))
    dich = raw["checks"].get("dichotomy")
    if dich is not None:
        for key in ("good", "bad"):
            if dich.get(key) not in labels:
                diags.append(Diagnostic("CHECK_INVALID", f"$.checks.dichotomy.{key}", "unknown function label"))
        for key in ("compare_degree", "early_degree"):
            if key in dich and dich[key] not in degrees:
                diags.append(Diagnostic("CHECK_INVALID", f"$.checks.dichotomy.{key}", "degree not in the degree list"))
    s5 = raw["section5"]
    if s5 is not None:
        rob = s5.get("roberts", {})
        if s5.get("function") not in labels:
            diags.append(Diagnostic("CHECK_INVALID", "$.section5.function", "unknown function label"))
        if not rob.get("c", 0) > 0 or not int(rob.get("N", 0)) >= 1 or not int(rob.get("M", 0)) >= 1:
            diags.append(Diagnostic("ROBERTS_PARAMS", "$.section5.roberts", "need c > 0, N >= 1 and M >= 1"))
    if diags:
        return None, diags, info
    cfg = ExperimentConfig(
        name, mu, list(degrees), funcs, quad, raw["thresholds"], raw["checks"], s5, raw["outputs"], raw
    )
    return cfg, [], info


def validate(data: dict) -> list[Diagnostic]:
    return parse(data)[1]


def load(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
