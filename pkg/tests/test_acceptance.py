"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run standalone with ``python tests/test_acceptance.py`` or through pytest,
where the lines are also collected into the terminal summary.
"""
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))
from conftest import ACCEPTANCE_LINES, random_config  # noqa: E402

from sea_passivity import bounds as bnd  # noqa: E402
from sea_passivity.freq import bode, bode_arrays, phase_extrema  # noqa: E402
from sea_passivity.guidelines import accoto, vallery  # noqa: E402
from sea_passivity.model import (  # noqa: E402
    ControllerGains,
    PlantParams,
    RenderTarget,
    assemble_block_diagram,
    build_impedance,
)
from sea_passivity.passivity import (  # noqa: E402
    SamplerConfig,
    agreement_sweep,
    check_closed_form,
    check_numeric,
    draw_samples,
)
from sea_passivity.polyalg import coefficients_close, residue_simple_pole  # noqa: E402

PLANT = PlantParams(J=0.2, b=3.0, K=250.0)
NULL_GAINS = ControllerGains(Pm=20.0, Im=10.0, Pt=5.0, It=5.0)
SPRING_GAINS = ControllerGains(Pm=20.0, Im=100.0, Pt=30.0, It=5.0)
NULL = RenderTarget.null()
SWEEP_SEED = 2024


def _record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def _sweep_config(target):
    return SamplerConfig(n_samples=10_000, target=target, seed=SWEEP_SEED)


def _rel(a, b):
    return abs(a - b) / abs(b)


def test_criterion_1_closed_form_numeric_equivalence():
    t0 = time.perf_counter()
    reps = {t: agreement_sweep(_sweep_config(t)) for t in ("null", "spring")}
    secs = time.perf_counter() - t0
    bad = sum(len(r.disagreements) for r in reps.values())
    detail = ", ".join(
        f"{t}: {r.n_compared} compared, {r.n_marginal} marginal, {len(r.disagreements)} disagreements"
        for t, r in reps.items()
    )
    _record(1, bad == 0 and secs < 60.0, f"{detail}; {secs:.1f} s")


def test_criterion_2_counterexample_phase():
    t0 = time.perf_counter()
    out = []
    for it in (15.0, 80.0):
        tf = build_impedance(PLANT, ControllerGains(20.0, 10.0, 5.0, it), NULL)
        out.append(phase_extrema(bode(tf), tf).max_phase_deg)
    secs = time.perf_counter() - t0
    p1, p2 = out
    ok = p1 <= 90.000001 and 93.2 <= p2 <= 93.8 and secs < 1.0
    _record(2, ok, f"It=15 max phase {p1:.6f} deg (<= 90.000001), It=80 max phase {p2:.6f} deg (want [93.2, 93.8]); {secs:.2f} s")


def _bisect(passive_at, lo, hi, rel=1e-7):
    assert passive_at(lo) and not passive_at(hi)
    while hi - lo > rel * hi:
        mid = 0.5 * (lo + hi)
        if passive_at(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _numeric(plant, gains, target):
    return check_numeric(build_impedance(plant, gains, target)).passive


def test_criterion_3_bounds_match_search():
    rng = np.random.default_rng(33)
    t0 = time.perf_counter()
    worst = {"b_max": 0.0, "j_max_null": 0.0, "j_max_spring": 0.0, "kd_max": 0.0}
    for _ in range(100):
        plant, g = random_config(rng)
        K = plant.K
        # damping: J below the undamped inertia bound keeps the inertia condition slack for all b
        bm = bnd.b_max(g)
        J = 0.5 * bnd.j_max_null(0.0, g)
        found = _bisect(lambda b: _numeric(PlantParams(J, b, K), g, NULL), 0.0, 2 * bm)
        worst["b_max"] = max(worst["b_max"], _rel(found, bm))
        # null inertia
        b = 0.5 * bm
        jm = bnd.j_max_null(b, g)
        found = _bisect(lambda j: _numeric(PlantParams(j, b, K), g, NULL), 1e-9 * jm, 2 * jm)
        worst["j_max_null"] = max(worst["j_max_null"], _rel(found, jm))
        # spring inertia at half the stiffness bound
        kdm = bnd.kd_max(PlantParams(1.0, b, K), g)
        kd = 0.5 * kdm
        tgt = RenderTarget.spring(kd)
        js = bnd.j_max_spring(b, g, K, kd)
        found = _bisect(lambda j: _numeric(PlantParams(j, b, K), g, tgt), 1e-9 * js, 2 * js)
        worst["j_max_spring"] = max(worst["j_max_spring"], _rel(found, js))
        # stiffness with J below the spring inertia bound for every Kd
        Jk = 0.5 * jm
        found = _bisect(lambda k: _numeric(PlantParams(Jk, b, K), g, RenderTarget.spring(k)), 0.0, K * (1 - 1e-12))
        worst["kd_max"] = max(worst["kd_max"], _rel(found, kdm))
    secs = time.perf_counter() - t0
    ok = max(worst.values()) <= 1e-3 and secs < 30.0
    _record(3, ok, "worst relative error " + ", ".join(f"{k} {v:.2e}" for k, v in worst.items()) + f"; {secs:.1f} s")


def test_criterion_4_fixed_point_fixtures():
    parts = []
    null_pass = check_closed_form(PLANT, NULL_GAINS, NULL).passive and _numeric(PLANT, NULL_GAINS, NULL)
    parts.append(("null passive", null_pass))
    parts.append(("b_max = 10", bnd.b_max(NULL_GAINS) == 10.0))
    jm = bnd.j_max_null(PLANT.b, NULL_GAINS)
    parts.append(("J_max = 2323/150", _rel(jm, float(Fraction(2323, 150))) <= 1e-12))
    spr = RenderTarget.spring(50.0)
    spr_pass = check_closed_form(PLANT, SPRING_GAINS, spr).passive and _numeric(PLANT, SPRING_GAINS, spr)
    parts.append(("spring passive", spr_pass))
    kdm = bnd.kd_max(PLANT, SPRING_GAINS)
    parts.append(("Kd_max = 74625000/1073500", _rel(kdm, 74625000 / 1073500) <= 1e-12))
    res = residue_simple_pole(build_impedance(PLANT, SPRING_GAINS, spr), 0.0)
    parts.append((f"origin residue = 10 (got {res.real:.12g})", abs(res - 10.0) <= 1e-9 * 10.0))
    failed = [name for name, ok in parts if not ok]
    _record(4, not failed, "all fixtures hold" if not failed else "failed: " + "; ".join(failed))


def test_criterion_5_prior_guidelines_imply_ours():
    counts = {"vallery": 0, "accoto": 0}
    n = 0
    for t in ("null", "spring"):
        for s in draw_samples(_sweep_config(t)):
            n += 1
            ours = check_closed_form(s.plant, s.gains, s.target).passive
            if ours:
                continue
            counts["vallery"] += vallery(s.plant, s.gains, s.target).passed
            counts["accoto"] += accoto(s.plant, s.gains, s.target).passed
    ok = counts["vallery"] == 0 and counts["accoto"] == 0
    _record(5, ok, f"{n} samples; Vallery passes but ours fails: {counts['vallery']}; Accoto passes but ours fails: {counts['accoto']}")


def test_criterion_6_degenerate_cases():
    rng = np.random.default_rng(66)
    fails = []
    for _ in range(100):
        plant, g = random_config(rng)
        g0 = ControllerGains(g.Pm, 0.0, g.Pt, 0.0)
        if not (check_closed_form(plant, g0, NULL).passive and _numeric(plant, g0, NULL)):
            fails.append("Im=It=0 null not passive")
    for _ in range(100):
        plant, g = random_config(rng)
        g0 = ControllerGains(g.Pm, 0.0, g.Pt, g.It)
        kd = float(rng.uniform(0.0, 2 * plant.K)) or 1e-3
        t = RenderTarget.spring(kd)
        if check_closed_form(plant, g0, t).passive or _numeric(plant, g0, t):
            fails.append("Im=0 spring passive")
    for _ in range(100):
        plant, g = random_config(rng)
        a = check_closed_form(plant, g, RenderTarget.spring(0.0)).passive
        b = check_closed_form(plant, g, NULL).passive
        c = _numeric(plant, g, RenderTarget.spring(0.0))
        d = _numeric(plant, g, NULL)
        if not a == b == c == d:
            fails.append("Kd=0 spring differs from null")
    _record(6, not fails, "300 configurations consistent" if not fails else f"{len(fails)} failures, first: {fails[0]}")


def test_criterion_7_structural_oracle():
    rng = np.random.default_rng(77)
    bad = 0
    for i in range(1000):
        plant, g = random_config(rng)
        t = NULL if i % 2 == 0 else RenderTarget.spring(float(rng.uniform(0.0, 2 * plant.K)))
        if not coefficients_close(assemble_block_diagram(plant, g, t), build_impedance(plant, g, t), rtol=1e-9):
            bad += 1
    _record(7, bad == 0, f"{1000 - bad}/1000 block-diagram assemblies match the closed-form builders")


def test_criterion_8_phase_bound():
    accepted = []
    for t, n in (("null", 4000), ("spring", 12000)):
        kept = 0
        for s in draw_samples(SamplerConfig(n_samples=n, target=t, seed=88)):
            if kept == 500:
                break
            if check_closed_form(s.plant, s.gains, s.target).passive:
                accepted.append(s)
                kept += 1
    worst = 0.0
    for s in accepted:
        _, _, ph = bode_arrays(build_impedance(s.plant, s.gains, s.target), 1e-3, 1e6)
        worst = max(worst, float(np.max(np.abs(ph))) - 90.0)
    ok = len(accepted) == 1000 and worst <= 1e-6
    _record(8, ok, f"{len(accepted)} accepted configurations; largest excursion beyond 90 deg: {max(worst, 0.0):.3e} deg")


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_criterion_")):
        try:
            fn()
        except AssertionError:
            failures += 1
    sys.exit(1 if failures else 0)
