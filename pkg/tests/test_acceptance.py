"""Full-size acceptance campaigns. Each test prints one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or ``-m acceptance``.
"""

import time

import numpy as np
import pytest

from traceineq import campaign, inequalities as ineq, maps, samplers
from traceineq.campaign import CampaignConfig

pytestmark = pytest.mark.acceptance


@pytest.fixture
def verdict(capsys):
    def emit(name, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        return ok

    return emit


def run(check, trials, **kw):
    t0 = time.perf_counter()
    report = campaign.run_campaign(CampaignConfig(seed=20240, trials=trials, checks=[check], **kw))
    return report.checks[check], report, time.perf_counter() - t0


def metric_ok(section, metric):
    m = section["metrics"][metric]
    return m["failures"] == 0 and m["min"] >= -m["tol"], m


def test_monotonicity_campaign(verdict):
    pairs = 7 * 7
    sec, report, secs = run("monotonicity", 10_000 * pairs, dim_range=(2, 8))
    ok, m = metric_ok(sec, "slack")
    per_family = {}
    for r in report.records:
        if r.status != "excluded":
            per_family[r.note] = per_family.get(r.note, 0) + 1
    ok = ok and sec["exclusion_rate"] < 0.05 and sec["count"] == 10_000 * pairs and not sec["failures"]
    ok = ok and {"cp_unital", "positive_noncp", "block_embed"} <= set(per_family) and secs < 300
    detail = (
        f"{sec['count']} instances over (n, m) in {{2..8}}^2, min normalized {m['min']:.3e} (tol {m['tol']:g}), "
        f"excluded {sec['exclusion_rate']:.2%}, families {dict(sorted(per_family.items()))}, {secs:.0f}s single-threaded"
    )
    assert verdict("monotonicity under unital positive maps", ok, detail)


def test_concavity_three_routes(verdict):
    cfg = CampaignConfig(seed=20240, trials=1000, checks=["concavity"])
    worst_gap, worst_norm = 0.0, np.inf
    for trial in range(1000):
        inst = campaign.gen_concavity(cfg, trial)
        H, Y1, Y2, lam = inst["H"], inst["Y1"], inst["Y2"], inst["lam"]
        A, B = lam * Y1, (1 - lam) * Y2
        conc = ineq.check_concavity(H, Y1, Y2, lam)
        sup = ineq.check_superadditivity(H, A, B)
        blk = campaign._block_route(H, A, B, "")
        routes = [conc, sup, blk]
        scale = max(r.scale for r in routes)
        for i in range(3):
            for j in range(i + 1, 3):
                worst_gap = max(worst_gap, abs(routes[i].slack - routes[j].slack) / scale)
        worst_norm = min(worst_norm, *(r.normalized for r in routes))
    ok = worst_gap <= 1e-9 and worst_norm >= -1e-8
    detail = f"1000 instances, worst pairwise route gap {worst_gap:.3e}*scale (tol 1e-9), min normalized {worst_norm:.3e}"
    assert verdict("concavity via block embedding and superadditivity", ok, detail)


def test_gibbs_duality(verdict):
    sec, report, _ = run("gibbs", 1000)
    weak_ok, weak = metric_ok(sec, "weak_duality")
    strong_ok, strong = metric_ok(sec, "strong_duality")
    mono_ok, _ = metric_ok(sec, "ascent_monotone")
    asc = [r for r in report.records if r.metric == "ascent_gap"]
    tol = sec["metrics"]["ascent_gap"]["tol"]
    converged = sum(r.status == "pass" for r in asc) / len(asc)
    # a run short of the value must be flagged, never counted as a pass
    silent = sum((r.status == "pass") != (-r.slack <= tol) for r in asc)
    ok = weak_ok and strong_ok and mono_ok and len(asc) == 1000 and converged >= 0.99 and silent == 0
    detail = (
        f"weak min {weak['min']:.3e} (tol {weak['tol']:g}), strong worst {strong['min']:.3e} (tol {strong['tol']:g}), "
        f"ascent converged {converged:.1%} ({len(asc) - round(converged * len(asc))} flagged, {silent} silent)"
    )
    assert verdict("Gibbs variational duality", ok, detail)


def test_dpi_campaign(verdict):
    sec, report, _ = run("dpi", 10_000)
    ok, m = metric_ok(sec, "slack")
    t_ok, t = metric_ok(sec, "transpose_invariance")
    worst_t = max(abs(r.slack) for r in report.records if r.metric == "transpose_invariance")
    ok = ok and t_ok and worst_t <= 1e-9 and t["count"] > 0 and sec["exclusion_rate"] < 0.05
    detail = (
        f"{sec['count']} instances, min normalized {m['min']:.3e}, "
        f"{t['count']} pure transpose with max |slack| {worst_t:.3e} (tol 1e-9)"
    )
    assert verdict("relative entropy contraction under positive trace-preserving maps", ok, detail)


def test_proof_chain(verdict):
    sec, _, _ = run("proof_chain", 1000)
    results = {k: metric_ok(sec, k) for k in ("pairing", "dpi", "chain")}
    ok = all(r[0] for r in results.values()) and sec["exclusion_rate"] < 0.05
    detail = ", ".join(f"{k} min {r[1]['min']:.3e} (tol {r[1]['tol']:g})" for k, r in results.items())
    assert verdict("adjoint pairing and chain dominance", ok, f"{sec['count']} instances, {detail}")


def test_homogeneity(verdict):
    sec, _, _ = run("homogeneity", 10_000)
    ok, m = metric_ok(sec, "deviation")
    detail = f"{m['count']} draws, max relative deviation {-m['min']:.3e} (tol {m['tol']:g})"
    assert verdict("positive homogeneity", ok, detail)


def test_curvature(verdict):
    sec, _, _ = run("curvature", 1000)
    results = {k: metric_ok(sec, k) for k in ("d2f", "d2logf", "identity")}
    ok = all(r[0] for r in results.values()) and sec["exclusion_rate"] < 0.05
    detail = ", ".join(f"{k} worst {r[1]['min']:.3e} (tol {r[1]['tol']:g})" for k, r in results.items())
    assert verdict("concavity and log-concavity along lines", ok, f"{sec['count']} paths, {detail}")


def test_class_hierarchy(verdict):
    lam = np.linalg.eigvalsh(maps.choi(maps.Transpose(2)))
    choi_ok = lam[0] <= -0.99 and abs(lam[0] + 1) <= 1e-10
    probe = maps.schwarz_probe(maps.Transpose(2), trials=1000, seed=0)
    rng = np.random.default_rng(20240)
    cp_worst, cp_ok = 0.0, True
    for i in range(200):
        n = int(rng.integers(2, 7))
        m = int(rng.integers(2, 7))
        if i % 2:
            phi = samplers.random_unital_cp(n, int(rng.integers(1, 5)), rng)
        else:
            phi = samplers.random_unital_cp(n, samplers.stinespring_kraus_count(n, m), rng, "stinespring", m)
        res = maps.schwarz_probe(phi, trials=200, seed=i)
        cp_ok &= res.witnessed
        cp_worst = min(cp_worst, res.worst)
    ok = choi_ok and not probe.witnessed and probe.witness is not None and cp_ok
    detail = (
        f"transpose Choi min eig {lam[0]:.12f}, Schwarz violation {probe.worst:.3e} found in 1000 probes, "
        f"200 unital CP maps witnessed Schwarz (worst {cp_worst:.1e})"
    )
    assert verdict("positive map class hierarchy", ok, detail)


def test_default_campaign_determinism(verdict, tmp_path):
    reports = []
    for name in ("a", "b"):
        out = tmp_path / name
        campaign.run_campaign(CampaignConfig(seed=0, out_dir=str(out)))
        reports.append((out / "report.json").read_bytes())
    ok = reports[0] == reports[1]
    assert verdict("deterministic reports", ok, f"two default runs, {len(reports[0])} bytes each, identical={ok}")
