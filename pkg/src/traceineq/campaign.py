"""Seeded campaigns: generate instances, run every checker, summarise slacks.

A check is a pair of functions. ``generate(cfg, trial)`` draws an instance
(a dict of matrices, maps and scalars) from the per-trial generator, and
``evaluate(instance, instance_id, cfg)`` turns it into :class:`Record` rows
without touching any randomness, so a serialised instance replays exactly.
"""

from __future__ import annotations

import dataclasses
import functools
import json
import logging
import math
import os
import tempfile
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from traceineq import __version__, inequalities as ineq, maps, samplers, serialize, variational as var
from traceineq.hermitian import PDFloorViolation, hermitize, mat_fn

log = logging.getLogger(__name__)

MAP_FAMILIES = ("cp_unital", "positive_noncp", "transpose", "block_embed")
WITNESS_CAP = 100
EXCLUSION_WARN = 0.05

# tolerance per (check, metric); normalized values below -tol fail
DEFAULT_TOLERANCES = {
    "monotonicity.slack": 1e-8,
    "dpi.slack": 1e-8,
    "dpi.transpose_invariance": 1e-9,
    "proof_chain.pairing": 1e-10,
    "proof_chain.dpi": 1e-8,
    "proof_chain.chain": 1e-8,
    "superadditivity.slack": 1e-8,
    "superadditivity.block_embed_route": 1e-9,
    "homogeneity.deviation": 1e-10,
    "concavity.slack": 1e-8,
    "concavity.superadditivity_route": 1e-9,
    "concavity.block_embed_route": 1e-9,
    "golden_thompson.slack": 1e-10,
    "gibbs.weak_duality": 1e-9,
    "gibbs.strong_duality": 1e-8,
    "gibbs.ascent_gap": 1e-4,
    "gibbs.ascent_monotone": 1e-10,
    "curvature.d2f": 1e-6,
    "curvature.d2logf": 1e-6,
    "curvature.identity": 1e-4,
}
# metrics whose misses are reported as flagged diagnostics, not failures
FLAG_ONLY = {"gibbs.ascent_gap"}


class ConfigError(ValueError):
    pass


@dataclass
class CampaignConfig:
    seed: int = 0
    trials: dict | int = 200
    dim_range: tuple = (2, 6)
    condition_cap: float = 1e4
    spectrum_scale: float = 2.0
    tolerances: dict = field(default_factory=dict)
    map_families: tuple = MAP_FAMILIES
    checks: tuple | None = None  # None: every registered check
    out_dir: str | None = None
    csv: bool = False
    jobs: int = 1
    gibbs_samples: int = 10
    chain_samples: int = 3

    def __post_init__(self):
        try:
            self.seed = int(self.seed)
            self.dim_range = tuple(int(d) for d in self.dim_range)
            samplers.SamplerConfig(self.seed, self.dim_range, self.spectrum_scale, self.condition_cap)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid sampler settings (seed/dim_range/spectrum_scale/condition_cap): {exc}")
        checks = tuple(CHECKS) if self.checks is None else tuple(self.checks)
        unknown = [c for c in checks if c not in CHECKS]
        if unknown or not checks:
            raise ConfigError(f"checks: unknown or empty selection {unknown or checks}; known: {sorted(CHECKS)}")
        self.checks = checks
        self.map_families = tuple(self.map_families)
        bad = [f for f in self.map_families if f not in MAP_FAMILIES]
        if bad:
            raise ConfigError(f"map_families: unknown {bad}; known: {list(MAP_FAMILIES)}")
        if not self.map_families and set(checks) & MAP_CHECKS:
            raise ConfigError("map_families: must be nonempty when map-dependent checks are enabled")
        trials = self.trials if isinstance(self.trials, dict) else {c: self.trials for c in checks}
        for c in checks:
            t = trials.get(c)
            if not isinstance(t, int) or isinstance(t, bool) or t < 1:
                raise ConfigError(f"trials: need an integer >= 1 for check {c!r}, got {t!r}")
        self.trials = {c: trials[c] for c in checks}
        for key, tol in self.tolerances.items():
            if key not in DEFAULT_TOLERANCES and f"{key}.slack" not in DEFAULT_TOLERANCES:
                raise ConfigError(f"tolerances: unknown key {key!r}")
            if not isinstance(tol, (int, float)) or isinstance(tol, bool):
                raise ConfigError(f"tolerances: value for {key!r} must be a number")
        if int(self.jobs) < 1:
            raise ConfigError("jobs: must be >= 1")
        self.jobs = int(self.jobs)

    def tol(self, check: str, metric: str) -> float:
        key = f"{check}.{metric}"
        if key in self.tolerances:
            return float(self.tolerances[key])
        if check in self.tolerances and metric in ("slack", "deviation"):
            return float(self.tolerances[check])
        return DEFAULT_TOLERANCES[key]

    def to_json(self) -> dict:
        d = dataclasses.asdict(self)
        d["dim_range"] = list(self.dim_range)
        d["map_families"] = list(self.map_families)
        d["checks"] = list(self.checks)
        d["tolerances"] = dict(sorted(self.tolerances.items()))
        for transient in ("out_dir", "jobs", "csv"):
            d.pop(transient)
        return d

    @classmethod
    def from_json(cls, obj: dict) -> "CampaignConfig":
        if not isinstance(obj, dict):
            raise ConfigError("config: top level must be a JSON object")
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(obj) - names)
        if unknown:
            raise ConfigError(f"config: unknown field(s) {unknown}")
        return cls(**obj)


@dataclass
class Record:
    instance_id: str
    check: str
    metric: str
    slack: float
    scale: float
    status: str  # pass | fail | excluded | flagged
    note: str = ""

    @property
    def normalized(self) -> float:
        return self.slack / self.scale


def _record(cfg, iid, check, metric, slack, scale=1.0, note="", retry: Callable | None = None) -> Record:
    tol = cfg.tol(check, metric)
    slack, scale = float(slack), float(scale)
    if slack / scale < -tol and retry is not None:
        # independent Schur-Pade kernel before calling it a violation
        res = retry()
        slack, scale, note = res.slack, res.scale, (note + " re-evaluated(pade)").strip()
    ok = slack / scale >= -tol
    key = f"{check}.{metric}"
    status = "pass" if ok else ("flagged" if key in FLAG_ONLY else "fail")
    return Record(iid, check, metric, slack, scale, status, note)


def _excluded(iid, check, exc) -> list[Record]:
    return [Record(iid, check, "slack", 0.0, 1.0, "excluded", str(exc))]


def _rng(cfg, check, trial):
    return samplers.trial_rng(cfg.seed, trial, zlib.crc32(check.encode()))


def _dim_pairs(cfg):
    return _pairs(*cfg.dim_range)


@functools.lru_cache(maxsize=None)
def _pairs(lo, hi):
    return [(n, m) for n in range(lo, hi + 1) for m in range(lo, hi + 1)]


def _pick_family(cfg, trial, n):
    P = len(_dim_pairs(cfg))
    fams = list(cfg.map_families)
    fam = fams[(trial // P) % len(fams)]
    if n < 2 and fam in ("positive_noncp", "transpose"):
        fam = "cp_unital"
    return fam


# -- monotonicity -----------------------------------------------------------


def gen_monotonicity(cfg, trial):
    rng = _rng(cfg, "monotonicity", trial)
    pairs = _dim_pairs(cfg)
    n, m = pairs[trial % len(pairs)]
    fam = _pick_family(cfg, trial, n)
    return {
        "H": samplers.random_hermitian(n, cfg.spectrum_scale, rng),
        "Y": samplers.random_pd(m, cfg.condition_cap, rng),
        "map": samplers.random_unital_map(fam, n, m, rng),
        "family": fam,
    }


def eval_monotonicity(inst, iid, cfg):
    H, Y, phi = inst["H"], inst["Y"], inst["map"]
    try:
        res = ineq.check_monotonicity(H, Y, phi, iid)
    except ineq.AdjointNotPD as exc:
        return _excluded(iid, "monotonicity", exc)
    retry = lambda: ineq.check_monotonicity(H, Y, phi, iid, kernel="pade")  # noqa: E731
    return [_record(cfg, iid, "monotonicity", "slack", res.slack, res.scale, inst.get("family", ""), retry)]


# -- data processing ---------------------------------------------------------


def gen_dpi(cfg, trial):
    rng = _rng(cfg, "dpi", trial)
    lo, hi = cfg.dim_range
    fams = list(cfg.map_families)
    fam = fams[trial % len(fams)]
    n = int(rng.integers(lo, hi + 1))
    if n < 2 and fam in ("positive_noncp", "transpose"):
        fam = "cp_unital"
    if fam == "cp_unital" and rng.uniform() < 0.2:
        fam, m = "depolarizing", n
    elif fam == "transpose":
        m = n
    else:
        m = int(rng.integers(lo, hi + 1))
    return {
        "X": samplers.random_density(n, rng, cfg.condition_cap),
        "Y": samplers.random_density(n, rng, cfg.condition_cap),
        "map": samplers.random_tp_positive_map(fam, n, m, rng),
        "family": fam,
    }


def eval_dpi(inst, iid, cfg):
    X, Y, psi = inst["X"], inst["Y"], inst["map"]
    try:
        res = ineq.check_dpi(X, Y, psi, iid)
    except PDFloorViolation as exc:
        return _excluded(iid, "dpi", exc)
    retry = lambda: ineq.check_dpi(X, Y, psi, iid, kernel="pade")  # noqa: E731
    out = [_record(cfg, iid, "dpi", "slack", res.slack, res.scale, inst.get("family", ""), retry)]
    if isinstance(psi, maps.Transpose):
        out.append(_record(cfg, iid, "dpi", "transpose_invariance", -abs(res.slack)))
    return out


# -- proof chain -------------------------------------------------------------


def gen_proof_chain(cfg, trial):
    inst = gen_monotonicity(cfg, trial)
    rng = _rng(cfg, "proof_chain", trial)
    m = inst["Y"].shape[0]
    inst["W"] = [samplers.random_density(m, rng, cfg.condition_cap) for _ in range(cfg.chain_samples)]
    return inst


def eval_proof_chain(inst, iid, cfg):
    try:
        steps = ineq.check_proof_chain(inst["H"], inst["Y"], inst["map"], inst["W"], iid)
    except PDFloorViolation as exc:
        return _excluded(iid, "proof_chain", exc)
    out = []
    for s in steps:
        out.append(_record(cfg, iid, "proof_chain", "pairing", -s.pairing_gap, max(s.pairing_scale, 1e-300)))
        out.append(_record(cfg, iid, "proof_chain", "dpi", s.dpi.slack, s.dpi.scale))
        out.append(_record(cfg, iid, "proof_chain", "chain", s.chain.slack, s.chain.scale))
    return out


# -- superadditivity, homogeneity, concavity ------------------------------------


def _hy1y2(cfg, check, trial):
    rng = _rng(cfg, check, trial)
    lo, hi = cfg.dim_range
    n = int(rng.integers(lo, hi + 1))
    inst = {
        "H": samplers.random_hermitian(n, cfg.spectrum_scale, rng),
        "Y1": samplers.random_pd(n, cfg.condition_cap, rng),
        "Y2": samplers.random_pd(n, cfg.condition_cap, rng),
    }
    return inst, rng


def _block_route(H, A, B, iid):
    n = A.shape[0]
    D = np.zeros((2 * n, 2 * n), dtype=complex)
    D[:n, :n], D[n:, n:] = A, B
    return ineq.check_monotonicity(H, D, maps.BlockEmbed(n, 2), iid)


def gen_superadditivity(cfg, trial):
    return _hy1y2(cfg, "superadditivity", trial)[0]


def eval_superadditivity(inst, iid, cfg):
    H, Y1, Y2 = inst["H"], inst["Y1"], inst["Y2"]
    res = ineq.check_superadditivity(H, Y1, Y2, iid)
    retry = lambda: ineq.check_superadditivity(H, Y1, Y2, iid, kernel="pade")  # noqa: E731
    blk = _block_route(H, Y1, Y2, iid)
    scale = max(res.scale, blk.scale)
    return [
        _record(cfg, iid, "superadditivity", "slack", res.slack, res.scale, retry=retry),
        _record(cfg, iid, "superadditivity", "block_embed_route", -abs(res.slack - blk.slack), scale),
    ]


def gen_homogeneity(cfg, trial):
    rng = _rng(cfg, "homogeneity", trial)
    lo, hi = cfg.dim_range
    n = int(rng.integers(lo, hi + 1))
    return {
        "H": samplers.random_hermitian(n, cfg.spectrum_scale, rng),
        "Y": samplers.random_pd(n, cfg.condition_cap, rng),
        "t": float(np.exp(rng.uniform(np.log(0.1), np.log(10.0)))),
    }


def eval_homogeneity(inst, iid, cfg):
    dev = ineq.check_homogeneity(inst["H"], inst["Y"], inst["t"])
    return [_record(cfg, iid, "homogeneity", "deviation", -dev)]


def gen_concavity(cfg, trial):
    inst, rng = _hy1y2(cfg, "concavity", trial)
    inst["lam"] = float(rng.uniform(0.05, 0.95))
    return inst


def eval_concavity(inst, iid, cfg):
    H, Y1, Y2, lam = inst["H"], inst["Y1"], inst["Y2"], inst["lam"]
    res = ineq.check_concavity(H, Y1, Y2, lam, iid)
    retry = lambda: ineq.check_concavity(H, Y1, Y2, lam, iid, kernel="pade")  # noqa: E731
    blk = _block_route(H, lam * Y1, (1 - lam) * Y2, iid)
    scale = max(res.scale, blk.scale)
    return [
        _record(cfg, iid, "concavity", "slack", res.slack, res.scale, retry=retry),
        _record(cfg, iid, "concavity", "superadditivity_route", -res.details["route_gap"], scale),
        _record(cfg, iid, "concavity", "block_embed_route", -abs(res.slack - blk.slack), scale),
    ]


# -- Golden-Thompson ------------------------------------------------------------


def gen_golden_thompson(cfg, trial):
    rng = _rng(cfg, "golden_thompson", trial)
    lo, hi = cfg.dim_range
    n = int(rng.integers(lo, hi + 1))
    return {
        "A": samplers.random_hermitian(n, cfg.spectrum_scale, rng),
        "B": samplers.random_hermitian(n, cfg.spectrum_scale, rng),
    }


def eval_golden_thompson(inst, iid, cfg):
    res = ineq.check_golden_thompson(inst["A"], inst["B"], iid)
    return [_record(cfg, iid, "golden_thompson", "slack", res.slack, res.scale)]


# -- Gibbs variational principle ----------------------------------------------


def gen_gibbs(cfg, trial):
    rng = _rng(cfg, "gibbs", trial)
    lo, hi = cfg.dim_range
    n = int(rng.integers(lo, hi + 1))
    inst = {"K": samplers.random_hermitian(n, cfg.spectrum_scale, rng)}
    if trial % 2:
        inst["W"] = samplers.random_pd(n, cfg.condition_cap, rng)
    inst["X"] = [samplers.random_density(n, rng, cfg.condition_cap) for _ in range(cfg.gibbs_samples)]
    inst["X0"] = samplers.random_density(n, rng, cfg.condition_cap)
    return inst


def eval_gibbs(inst, iid, cfg):
    p = var.GibbsProblem(inst["K"], inst.get("W"))
    value = var.gibbs_value(p)
    worst_weak = min(value - var.gibbs_objective(X, p) for X in inst["X"])
    strong = abs(var.gibbs_objective(var.gibbs_maximizer(p), p) - value)
    asc = var.mirror_ascent(p, inst["X0"], gap_tol=cfg.tol("gibbs", "ascent_gap"))
    steps = np.diff(asc.objectives)
    worst_step = float(steps.min()) if len(steps) else 0.0
    return [
        _record(cfg, iid, "gibbs", "weak_duality", worst_weak),
        _record(cfg, iid, "gibbs", "strong_duality", -strong),
        _record(cfg, iid, "gibbs", "ascent_gap", -asc.gap, note=f"steps={len(asc.objectives) - 1}"),
        _record(cfg, iid, "gibbs", "ascent_monotone", min(worst_step, 0.0)),
    ]


# -- curvature ------------------------------------------------------------------


def random_path(n, rng, spectrum_scale=2.0, condition_cap=1e4) -> var.ScalarPath:
    """Path Y0 + t Y0^1/2 G Y0^1/2 on [-1, 1] with ||G|| <= 1/2, so Y(t) >= Y0/2."""
    H = samplers.random_hermitian(n, spectrum_scale, rng)
    Y0 = samplers.random_pd(n, condition_cap, rng)
    G = hermitize(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    G *= rng.uniform(0.1, 0.5) / np.max(np.abs(np.linalg.eigvalsh(G)))
    R = mat_fn(Y0, np.sqrt)
    return var.ScalarPath(H, Y0, hermitize(R @ G @ R))


def gen_curvature(cfg, trial):
    rng = _rng(cfg, "curvature", trial)
    lo, hi = cfg.dim_range
    path = random_path(int(rng.integers(lo, hi + 1)), rng, cfg.spectrum_scale, cfg.condition_cap)
    return {"H": path.H, "Y0": path.Y0, "direction": path.direction, "t": float(rng.uniform(-0.5, 0.5))}


def eval_curvature(inst, iid, cfg):
    path = var.ScalarPath(inst["H"], inst["Y0"], inst["direction"])
    try:
        path.validate()
    except PDFloorViolation as exc:
        return _excluded(iid, "curvature", exc)
    r = var.second_derivative_probe(path, inst["t"])
    note = f"h={r.h:g}"
    return [
        _record(cfg, iid, "curvature", "d2f", -r.d2f, max(1.0, abs(r.f)), note),
        _record(cfg, iid, "curvature", "d2logf", -r.d2g, max(1.0, abs(math.log(r.f))), note),
        _record(cfg, iid, "curvature", "identity", -r.identity_residual, max(r.identity_scale, 1e-300), note),
    ]


CHECKS = {
    "monotonicity": (gen_monotonicity, eval_monotonicity),
    "dpi": (gen_dpi, eval_dpi),
    "proof_chain": (gen_proof_chain, eval_proof_chain),
    "superadditivity": (gen_superadditivity, eval_superadditivity),
    "homogeneity": (gen_homogeneity, eval_homogeneity),
    "concavity": (gen_concavity, eval_concavity),
    "golden_thompson": (gen_golden_thompson, eval_golden_thompson),
    "gibbs": (gen_gibbs, eval_gibbs),
    "curvature": (gen_curvature, eval_curvature),
}
MAP_CHECKS = {"monotonicity", "dpi", "proof_chain"}


def instance_id(cfg, check, trial) -> str:
    return f"{check}:{cfg.seed}:{trial}"


def evaluate(check: str, instance: dict, iid: str = "", cfg: CampaignConfig | None = None) -> list[Record]:
    """Recompute a check on a given instance (used for witness replay)."""
    if check not in CHECKS:
        raise KeyError(f"unknown check {check!r}; known: {sorted(CHECKS)}")
    cfg = cfg or CampaignConfig(checks=(check,), trials=1)
    return CHECKS[check][1](instance, iid, cfg)


def run_trials(cfg: CampaignConfig, check: str, start: int, stop: int):
    """Evaluate trials [start, stop); return records and serialised failing instances."""
    gen, ev = CHECKS[check]
    records, witnesses = [], {}
    for trial in range(start, stop):
        iid = instance_id(cfg, check, trial)
        try:
            inst = gen(cfg, trial)
        except PDFloorViolation as exc:
            records.extend(_excluded(iid, check, exc))
            continue
        recs = ev(inst, iid, cfg)
        records.extend(recs)
        if any(r.status == "fail" for r in recs):
            witnesses[iid] = serialize.instance_to_json(inst)
    return records, witnesses


def _run_chunk(args):
    cfg, check, start, stop = args
    return run_trials(cfg, check, start, stop)


def collect(cfg: CampaignConfig, check: str):
    total = cfg.trials[check]
    if cfg.jobs == 1:
        return run_trials(cfg, check, 0, total)
    chunk = max(1, math.ceil(total / (cfg.jobs * 8)))
    tasks = [(cfg, check, s, min(s + chunk, total)) for s in range(0, total, chunk)]
    records, witnesses = [], {}
    with ProcessPoolExecutor(cfg.jobs) as pool:
        for recs, wit in pool.map(_run_chunk, tasks):
            records.extend(recs)
            witnesses.update(wit)
    return records, witnesses


def _stats(values):
    if not values:
        return {"min": None, "mean": None, "max": None}
    arr = np.asarray(values, dtype=float)
    return {"min": float(arr.min()), "mean": float(arr.mean()), "max": float(arr.max())}


def summarize(cfg, check, records, witnesses, witness_dir: Path | None):
    instances = sorted({r.instance_id for r in records}, key=lambda s: int(s.rsplit(":", 1)[1]))
    excluded = sorted({r.instance_id for r in records if r.status == "excluded"})
    metrics = {}
    for r in records:
        if r.status == "excluded":
            continue
        metrics.setdefault(r.metric, []).append(r)
    section = {
        "count": len(instances),
        "excluded": len(excluded),
        "exclusion_rate": len(excluded) / len(instances) if instances else 0.0,
        "metrics": {},
        "failures": [],
        "flagged": [],
    }
    if section["exclusion_rate"] > EXCLUSION_WARN:
        log.warning("%s: %.1f%% of instances excluded at the PD floor", check, 100 * section["exclusion_rate"])
    written = 0
    for metric in sorted(metrics):
        recs = metrics[metric]
        entry = {"tol": cfg.tol(check, metric), "count": len(recs)}
        entry.update(_stats([r.normalized for r in recs]))
        entry["failures"] = sum(r.status == "fail" for r in recs)
        entry["flagged"] = sum(r.status == "flagged" for r in recs)
        section["metrics"][metric] = entry
        for r in recs:
            if r.status not in ("fail", "flagged"):
                continue
            item = {
                "instance_id": r.instance_id,
                "metric": r.metric,
                "slack": r.slack,
                "scale": r.scale,
                "normalized": r.normalized,
                "note": r.note,
            }
            if r.status == "flagged":
                section["flagged"].append(item)
                continue
            if witness_dir is not None and r.instance_id in witnesses and written < WITNESS_CAP:
                name = r.instance_id.replace(":", "_") + ".json"
                path = witness_dir / name
                if not path.exists():
                    witness_dir.mkdir(parents=True, exist_ok=True)
                    payload = {
                        "check": check,
                        "instance_id": r.instance_id,
                        "records": [dataclasses.asdict(x) for x in records if x.instance_id == r.instance_id],
                        "instance": witnesses[r.instance_id],
                    }
                    _atomic_write(path, json.dumps(payload, indent=1, sort_keys=True) + "\n")
                    written += 1
                item["witness"] = f"witnesses/{name}"
            section["failures"].append(item)
    return section


def _atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


@dataclass
class CampaignReport:
    fingerprint: dict
    config: dict
    checks: dict
    records: list = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return all(not s["failures"] for s in self.checks.values())

    def to_json(self) -> str:
        body = {"fingerprint": self.fingerprint, "config": self.config, "passed": self.passed, "checks": self.checks}
        return json.dumps(body, indent=2, sort_keys=True) + "\n"

    def table(self) -> str:
        lines = [f"{'check':<34}{'count':>8}{'excl':>6}{'min norm':>14}{'mean norm':>14}{'tol':>10}{'fail':>6}{'flag':>6}"]
        for check, sec in self.checks.items():
            for metric, m in sec["metrics"].items():
                name = check if metric in ("slack", "deviation") else f"{check}.{metric}"
                fmt = lambda v: "-" if v is None else f"{v:.3e}"  # noqa: E731
                lines.append(
                    f"{name:<34}{m['count']:>8}{sec['excluded']:>6}{fmt(m['min']):>14}{fmt(m['mean']):>14}"
                    f"{m['tol']:>10.0e}{m['failures']:>6}{m['flagged']:>6}"
                )
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines) + "\n"

    def csv_rows(self) -> str:
        out = ["instance_id,check,slack,scale,normalized"]
        for r in self.records:
            if r.status == "excluded":
                continue
            name = r.check if r.metric in ("slack", "deviation") else f"{r.check}.{r.metric}"
            out.append(f"{r.instance_id},{name},{r.slack!r},{r.scale!r},{r.normalized!r}")
        return "\n".join(out) + "\n"


def run_campaign(cfg: CampaignConfig) -> CampaignReport:
    out = Path(cfg.out_dir) if cfg.out_dir else None
    witness_dir = out / "witnesses" if out else None
    sections, all_records = {}, []
    for check in cfg.checks:
        records, witnesses = collect(cfg, check)
        sections[check] = summarize(cfg, check, records, witnesses, witness_dir)
        all_records.extend(records)
    report = CampaignReport(
        fingerprint={"package": "traceineq", "version": __version__, "numpy": np.__version__, "seed": cfg.seed},
        config=cfg.to_json(),
        checks=sections,
        records=all_records,
    )
    if out is not None:
        _atomic_write(out / "report.json", report.to_json())
        _atomic_write(out / "report.txt", report.table())
        if cfg.csv:
            _atomic_write(out / "slacks.csv", report.csv_rows())
    return report
