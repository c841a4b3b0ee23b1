"""Named reproduction scenarios built on the reference SEA parameter sets.

Gain sweep factors are an implementation choice: each nominal gain is
scaled by 0.5, 1, 2 and 4 with the other three held fixed.
"""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction

from . import bounds as bnd
from .exceptions import UnknownScenario
from .export import bode_csv_text, bode_rows, write_text
from .freq import DEFAULT_PPD, DEFAULT_WMAX, DEFAULT_WMIN, phase_extrema
from .guidelines import evaluate_prior_guidelines
from .model import ControllerGains, PlantParams, RenderTarget, build_impedance
from .passivity import check_both

REFERENCE_PLANT = PlantParams(J=0.2, b=3.0, K=250.0)
NULL_GAINS = ControllerGains(Pm=20.0, Im=10.0, Pt=5.0, It=5.0)
SPRING_GAINS = ControllerGains(Pm=20.0, Im=100.0, Pt=30.0, It=5.0)
SPRING_KD = 50.0
COUNTEREXAMPLE_GAINS = (
    ControllerGains(Pm=20.0, Im=10.0, Pt=5.0, It=15.0),
    ControllerGains(Pm=20.0, Im=10.0, Pt=5.0, It=80.0),
)
SWEEP_FACTORS = (0.5, 1.0, 2.0, 4.0)
PHASE_CEILING_DEG = 90.000001
CTRL2_PHASE_WINDOW = (93.2, 93.8)

SCENARIOS = ("null-gain-sweeps", "spring-gain-sweeps", "damping-counterexample", "bounds-tables")


@dataclass
class Assertion:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ScenarioResult:
    scenario: str
    files: list = field(default_factory=list)
    assertions: list = field(default_factory=list)

    @property
    def ok(self):
        return all(a.passed for a in self.assertions)

    def summary_dict(self):
        return {
            "scenario": self.scenario,
            "ok": self.ok,
            "files": list(self.files),
            "assertions": [asdict(a) for a in self.assertions],
        }


def _emit_bode(outdir, name, tf, target, res):
    samples, labels = bode_rows(tf, target, DEFAULT_WMIN, DEFAULT_WMAX, DEFAULT_PPD)
    path = os.path.join(outdir, name)
    write_text(path, bode_csv_text(samples, labels))
    res.files.append(name)
    return samples


def _gain_sweeps(outdir, prefix, gains, target, res):
    for gname in ("Pm", "Im", "Pt", "It"):
        for f in SWEEP_FACTORS:
            g = replace(gains, **{gname: getattr(gains, gname) * f})
            cf, nm = check_both(REFERENCE_PLANT, g, target)
            verdict = "passive" if cf.passive else "not passive"
            res.assertions.append(
                Assertion(
                    f"{prefix} {gname} x{f:g}: routes agree",
                    cf.passive == nm.passive or cf.marginal,
                    f"{gname}={getattr(g, gname):g}: {verdict}",
                )
            )
            _emit_bode(outdir, f"{prefix}_{gname}_x{f:g}.csv", build_impedance(REFERENCE_PLANT, g, target), target, res)


def _counterexample(outdir, res):
    target = RenderTarget.null()
    report = {}
    for idx, g in enumerate(COUNTEREXAMPLE_GAINS, start=1):
        tf = build_impedance(REFERENCE_PLANT, g, target)
        samples = _emit_bode(outdir, f"counterexample_ctrl{idx}_It{g.It:g}.csv", tf, target, res)
        ext = phase_extrema(samples, tf)
        cf, _ = check_both(REFERENCE_PLANT, g, target)
        report[f"ctrl{idx}"] = {
            "It": g.It,
            "max_phase_deg": ext.max_phase_deg,
            "argmax_w": ext.argmax_w,
            "passive": cf.passive,
            "failed": cf.failed_ids,
        }
    p1 = report["ctrl1"]["max_phase_deg"]
    p2 = report["ctrl2"]["max_phase_deg"]
    lo, hi = CTRL2_PHASE_WINDOW
    res.assertions.append(Assertion("ctrl1 max phase <= 90 deg", p1 <= PHASE_CEILING_DEG, f"{p1:.6f} deg"))
    res.assertions.append(Assertion(f"ctrl2 max phase in [{lo}, {hi}] deg", lo <= p2 <= hi, f"{p2:.6f} deg"))
    write_text(os.path.join(outdir, "counterexample.json"), json.dumps(report, indent=2) + "\n")
    res.files.append("counterexample.json")


def _bounds_tables(outdir, res):
    null_t = RenderTarget.null()
    spr_t = RenderTarget.spring(SPRING_KD)
    null_rep = bnd.bounds_report(REFERENCE_PLANT, NULL_GAINS, null_t)
    spr_rep = bnd.bounds_report(REFERENCE_PLANT, SPRING_GAINS, spr_t)
    doc = {
        "plant": asdict(REFERENCE_PLANT),
        "null": {
            "gains": asdict(NULL_GAINS),
            "bounds": null_rep.as_dict(),
            "guidelines": {k: v.as_dict() for k, v in evaluate_prior_guidelines(REFERENCE_PLANT, NULL_GAINS, null_t).items()},
        },
        "spring": {
            "gains": asdict(SPRING_GAINS),
            "Kd": SPRING_KD,
            "bounds": spr_rep.as_dict(),
            "guidelines": {k: v.as_dict() for k, v in evaluate_prior_guidelines(REFERENCE_PLANT, SPRING_GAINS, spr_t).items()},
        },
    }
    write_text(os.path.join(outdir, "bounds_tables.json"), json.dumps(doc, indent=2) + "\n")
    res.files.append("bounds_tables.json")

    def rel(a, b):
        return abs(a - b) / abs(b)

    jm = float(Fraction(2323, 150))
    km = 74625000 / 1073500
    res.assertions += [
        Assertion("null b_max = 10", null_rep.b_max == 10.0, str(null_rep.b_max)),
        Assertion("null J_max = 2323/150", rel(null_rep.J_max, jm) <= 1e-12, repr(null_rep.J_max)),
        Assertion("spring Kd_max = 74625000/1073500", rel(spr_rep.Kd_max, km) <= 1e-12, repr(spr_rep.Kd_max)),
    ]


def run_scenario(scenario: str, outdir) -> ScenarioResult:
    """Regenerate the files of ``scenario`` into ``outdir`` and evaluate its assertions."""
    if scenario not in SCENARIOS:
        raise UnknownScenario(f"unknown scenario {scenario!r}; choose from {', '.join(SCENARIOS)}")
    os.makedirs(outdir, exist_ok=True)
    res = ScenarioResult(scenario)
    if scenario == "null-gain-sweeps":
        _gain_sweeps(outdir, "null", NULL_GAINS, RenderTarget.null(), res)
    elif scenario == "spring-gain-sweeps":
        _gain_sweeps(outdir, "spring", SPRING_GAINS, RenderTarget.spring(SPRING_KD), res)
    elif scenario == "damping-counterexample":
        _counterexample(outdir, res)
    else:
        _bounds_tables(outdir, res)
    write_text(os.path.join(outdir, "summary.json"), json.dumps(res.summary_dict(), indent=2) + "\n")
    return res
