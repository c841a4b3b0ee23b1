"""Command-line front end.

Exit codes: 0 passive or success, 1 usage or config error, 2 not passive
(or a failed reproduction assertion), 3 marginal.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import bounds as bnd
from .config import AnalysisConfig, load_config
from .exceptions import ConfigError, EvalAtPole, UnknownScenario
from .export import bode_csv_text, bode_rows, write_text
from .freq import phase_extrema
from .guidelines import evaluate_prior_guidelines
from .passivity import check_closed_form, check_numeric
from .reproduce import SCENARIOS, run_scenario

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_PASSIVE = 2
EXIT_MARGINAL = 3

_BOUND_NAMES = {
    "damping": "damping bound",
    "inertia": "inertia bound",
    "stiffness": "stiffness bound",
    "coincident_boundary": "coincident boundary",
    "stability": "stability",
    "imaginary_pole": "imaginary-axis pole multiplicity",
    "residue": "imaginary-axis residue",
    "positive_real": "positive real part",
}


class CliUsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliUsageError(message)


def exit_code(passive: bool, marginal: bool, config_valid: bool = True) -> int:
    """Total map from the verdict triple to a process exit code."""
    if not config_valid:
        return EXIT_USAGE
    if marginal:
        return EXIT_MARGINAL
    return EXIT_OK if passive else EXIT_NOT_PASSIVE


def _fmt_num(x):
    if x is None:
        return "none"
    if x is bnd.UNBOUNDED:
        return "unbounded"
    return f"{x:.6g}"


def _fmt_margin(m):
    return "none" if m is None else f"{100 * m:.1f}%"


def _emit(text, output):
    if output:
        write_text(output, text)
    else:
        sys.stdout.write(text)


# check --------------------------------------------------------------------


def check_report(cfg: AnalysisConfig):
    """Run both routes; return ``(exit code, report dict)``."""
    band = cfg.tolerances.boundary_band
    nm = check_numeric(cfg.impedance(), band)
    report = {"numeric": nm.as_dict()}
    if cfg.transfer_function is None:
        cf = check_closed_form(cfg.plant, cfg.gains, cfg.target, band)
        rep = bnd.bounds_report(cfg.plant, cfg.gains, cfg.target)
        report["closed_form"] = cf.as_dict()
        report["bounds"] = rep.as_dict()
        passive = cf.passive
        marginal = cf.marginal
        report["routes_agree"] = cf.passive == nm.passive
        if not report["routes_agree"]:
            # only expected inside the boundary band
            marginal = True
        failed = cf.failed_ids or nm.failed_ids
        binding = rep.binding
        report["binding"] = binding
        report["binding_margin"] = rep.margins.get(binding) if binding else None
    else:
        passive, marginal, failed = nm.passive, nm.marginal, nm.failed_ids
        report["routes_agree"] = None
    report["passive"] = passive
    report["marginal"] = marginal
    report["failed"] = list(failed)
    report["witness_frequency"] = nm.witness_frequency
    return exit_code(passive, marginal), report


def _check_table(report):
    verdict = "marginal" if report["marginal"] else ("passive" if report["passive"] else "not passive")
    lines = []
    head = verdict
    if report.get("binding"):
        head += f"; binding: {_BOUND_NAMES[report['binding']]}, margin {_fmt_margin(report['binding_margin'])}"
    lines.append(head)
    if report["failed"]:
        lines.append("failed: " + ", ".join(_BOUND_NAMES.get(f, f) for f in report["failed"]))
    if "bounds" in report:
        for k, v in report["bounds"]["margins"].items():
            lines.append(f"margin {k}: {_fmt_margin(v)}")
        lines.append(f"closed-form: {'passive' if report['closed_form']['passive'] else 'not passive'}")
    lines.append(f"numeric: {'passive' if report['numeric']['passive'] else 'not passive'}")
    w = report["witness_frequency"]
    lines.append(f"witness frequency: {'none' if w is None else f'{w:.6g} rad/s'}")
    return "\n".join(lines) + "\n"


def cmd_check(cfg, fmt="table", output=None) -> int:
    code, report = check_report(cfg)
    _emit(json.dumps(report, indent=2) + "\n" if fmt == "json" else _check_table(report), output)
    return code


# bounds -------------------------------------------------------------------


def cmd_bounds(cfg, fmt="table", output=None) -> int:
    rep = bnd.bounds_report(cfg.plant, cfg.gains, cfg.target)
    if fmt == "json":
        text = json.dumps(rep.as_dict(), indent=2) + "\n"
    else:
        rows = [f"b_max: {_fmt_num(rep.b_max)}", f"J_max: {_fmt_num(rep.J_max)}"]
        if not cfg.target.is_null_equivalent:
            rows.append(f"Kd_max: {_fmt_num(rep.Kd_max)}")
        for k, v in rep.margins.items():
            rows.append(f"margin {k}: {_fmt_margin(v)}")
        rows.append(f"binding: {rep.binding or 'none'}")
        text = "\n".join(rows) + "\n"
    _emit(text, output)
    return EXIT_OK


# bode ---------------------------------------------------------------------


def cmd_bode(cfg, output=None, fmt="table") -> int:
    s = cfg.sweep
    tf = cfg.impedance()
    samples, labels = bode_rows(tf, cfg.target, s.wmin, s.wmax, s.points_per_decade)
    text = bode_csv_text(samples, labels)
    if output is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        write_text(output, text)
    except OSError as exc:
        raise CliUsageError(f"cannot write {output}: {exc.strerror}") from None
    ext = phase_extrema(samples, tf)
    summary = {"rows": len(samples), "max_phase_deg": ext.max_phase_deg, "min_phase_deg": ext.min_phase_deg,
               "regimes": sorted(set(labels))}
    if fmt == "json":
        print(json.dumps(summary))
    else:
        print(f"wrote {len(samples)} rows to {output}; phase range [{ext.min_phase_deg:.4f}, {ext.max_phase_deg:.4f}] deg")
    return EXIT_OK


# compare ------------------------------------------------------------------


def cmd_compare(cfg, fmt="table", output=None) -> int:
    res = evaluate_prior_guidelines(cfg.plant, cfg.gains, cfg.target)
    if fmt == "json":
        text = json.dumps({k: v.as_dict() for k, v in res.items()}, indent=2) + "\n"
    else:
        rows = []
        for name, v in res.items():
            ms = ", ".join(f"{k}={_fmt_margin(m)}" for k, m in v.margins.items())
            rows.append(f"{name:8s} {'pass' if v.passed else 'fail':4s}  {ms}")
        text = "\n".join(rows) + "\n"
    _emit(text, output)
    return EXIT_OK


# reproduce ----------------------------------------------------------------


def cmd_reproduce(scenario, output_dir, fmt="table") -> int:
    res = run_scenario(scenario, output_dir)
    if fmt == "json":
        print(json.dumps(res.summary_dict(), indent=2))
    else:
        print(f"scenario {scenario}: {len(res.files)} files in {output_dir}")
        for a in res.assertions:
            print(f"  [{'PASS' if a.passed else 'FAIL'}] {a.name}: {a.detail}")
        print("all assertions passed" if res.ok else "some assertions failed")
    return EXIT_OK if res.ok else EXIT_NOT_PASSIVE


# entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--output", metavar="PATH", default=None)
    cfg_parent = _Parser(add_help=False)
    cfg_parent.add_argument("--config", metavar="PATH", required=True)

    p = _Parser(prog="sea-passivity", description="Passivity analysis of velocity-sourced SEA impedance control.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("check", parents=[common, cfg_parent], help="decide passivity with both routes")
    sub.add_parser("bounds", parents=[common, cfg_parent], help="closed-form parameter bounds")
    sub.add_parser("bode", parents=[common, cfg_parent], help="Bode sweep as CSV")
    sub.add_parser("compare", parents=[common, cfg_parent], help="prior design guidelines side by side")
    rp = sub.add_parser("reproduce", parents=[common], help="regenerate a reference scenario")
    rp.add_argument("--scenario", required=True, metavar="NAME", help="one of: " + ", ".join(SCENARIOS))
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "reproduce":
            return cmd_reproduce(args.scenario, args.output or ".", args.format)
        cfg = load_config(args.config)
        if args.command == "check":
            return cmd_check(cfg, args.format, args.output)
        if args.command == "bounds":
            return cmd_bounds(cfg, args.format, args.output)
        if args.command == "bode":
            return cmd_bode(cfg, args.output, args.format)
        return cmd_compare(cfg, args.format, args.output)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
    except (CliUsageError, UnknownScenario) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"usage error: {msg}", file=sys.stderr)
    except EvalAtPole as exc:
        print(f"error: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
