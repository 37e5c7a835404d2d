"""Command-line interface: verification suites and report emission.

Commands: ``verify`` (run a check suite), ``spectrum`` (exact-rational
Casimir spectrum tables), ``classify`` (the 32-state charge table),
``conventions`` (the sign/pairing sweep matrix), ``report`` (everything).

Exit codes: 0 all checks passed, 1 at least one check failed, 2 bad
arguments or configuration, 3 internal numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from . import boson as bos
from . import fermion as fer
from . import hybrid as hyb
from .linalg import OffDiagonalResidual, ToleranceConfig
from .suites import RunConfig, SUITE_NAMES, SuiteReport, run_suite

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

_CONFIG_KEYS = {
    "cutoff": int,
    "safe_margin": int,
    "seed": int,
    "num_tol": float,
    "exact_tol": float,
    "approx_tol": float,
    "format": str,
}


class UsageError(Exception):
    pass


def parse_config_file(path: str) -> dict:
    """Read a ``key = value`` config file; unknown keys are rejected."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return values


def build_config(args) -> RunConfig:
    """Merge defaults, config-file values and command-line flags."""
    values = parse_config_file(args.config) if args.config else {}
    if getattr(args, "cutoff", None) is not None:
        values["cutoff"] = args.cutoff
    if getattr(args, "seed", None) is not None:
        values["seed"] = args.seed
    if getattr(args, "tol", None) is not None:
        values["num_tol"] = args.tol
    if getattr(args, "format", None) is not None:
        values["format"] = args.format
    tol_kwargs = {k: values[k] for k in ("exact_tol", "num_tol", "approx_tol")
                  if k in values}
    try:
        tolerances = ToleranceConfig(**tol_kwargs)
        return RunConfig(
            cutoff=values.get("cutoff", 3),
            safe_margin=values.get("safe_margin", 2),
            seed=values.get("seed", 42),
            tolerances=tolerances,
            format=values.get("format", "md"),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _config_dict(cfg: RunConfig) -> dict:
    return {
        "cutoff": cfg.cutoff,
        "safe_margin": cfg.safe_margin,
        "seed": cfg.seed,
        "exact_tol": cfg.tolerances.exact_tol,
        "num_tol": cfg.tolerances.num_tol,
        "approx_tol": cfg.tolerances.approx_tol,
        "format": cfg.format,
    }


def _check_dicts(reports, qualify: bool) -> list:
    rows = []
    for report in reports:
        for c in report.checks:
            name = f"{report.suite}.{c.name}" if qualify else c.name
            rows.append({
                "name": name,
                "paper_anchor": c.anchor,
                "passed": c.passed,
                "max_residual": c.max_residual,
                "tolerance": c.tolerance,
                "wall_ms": c.wall_ms,
            })
    return rows


def _convention_header(cfg: RunConfig) -> str:
    d = cfg.convention.as_dict()
    return ("convention: zeta* signs {} | z* signs {} | fermion pairing {} "
            "| boson pairing {}").format(
        "".join("+" if s > 0 else "-" for s in d["zeta_star_sign"]),
        "".join("+" if s > 0 else "-" for s in d["z_star_sign"]),
        d["fermionic_c2_pairing"], d["bosonic_c2_pairing"])


def emit_verify(cfg: RunConfig, reports, out) -> None:
    qualify = len(reports) > 1
    checks = _check_dicts(reports, qualify)
    passed = all(r.passed for r in reports)
    if cfg.format == "json":
        doc = {
            "tool_version": __version__,
            "config": _config_dict(cfg),
            "conventions": cfg.convention.as_dict(),
            "checks": checks,
            "passed": passed,
        }
        out.write(json.dumps(doc, indent=2) + "\n")
    elif cfg.format == "csv":
        out.write("name,paper_anchor,passed,max_residual,tolerance,wall_ms\n")
        for c in checks:
            out.write("{},{},{},{},{},{}\n".format(
                c["name"], c["paper_anchor"], str(c["passed"]).lower(),
                repr(c["max_residual"]), repr(c["tolerance"]), repr(c["wall_ms"])))
    else:
        out.write(f"# Verification report\n\n{_convention_header(cfg)}\n\n")
        out.write("| check | anchor | passed | max residual | tolerance | wall ms |\n")
        out.write("|---|---|---|---|---|---|\n")
        for c in checks:
            out.write("| {} | {} | {} | {} | {} | {:.1f} |\n".format(
                c["name"], c["paper_anchor"], "PASS" if c["passed"] else "FAIL",
                repr(c["max_residual"]), repr(c["tolerance"]), c["wall_ms"]))
        out.write(f"\noverall: {'PASS' if passed else 'FAIL'}\n")


def _spectrum_rows(cfg: RunConfig, rep: str, order: int) -> list:
    """(eigenvalue, multiplicity, label) rows, ascending by eigenvalue."""
    rows = []
    if rep == "fermion":
        if order == 1:
            counts = {}
            for f in fer.all_occupations():
                counts[f.total] = counts.get(f.total, 0) + 1
            rows = [(Fraction(2 * k - 5, 2), counts[k], f"ftotal={k}")
                    for k in sorted(counts)]
        else:
            rows = [(Fraction(5, 4), fer.DIM, "all")]
    elif rep == "boson":
        space = bos.TruncatedFockSpace(cfg.cutoff, cfg.safe_margin)
        counts = {}
        for i in space.safe_indices():
            n = space.occupation(i).total
            counts[n] = counts.get(n, 0) + 1
        for n in sorted(counts):
            value = Fraction(2 * n + 5, 2) if order == 1 \
                else Fraction(n * n + 5 * n) + Fraction(5, 4)
            rows.append((value, counts[n], f"N={n}"))
    elif rep == "hybrid":
        space = bos.TruncatedFockSpace(cfg.cutoff, cfg.safe_margin)
        for r in hyb.hybrid_spectrum_table(space, max_total=2):
            value = r.c1 if order == 1 else r.c2
            rows.append((value, r.degeneracy, f"ntotal={r.n_total};ftotal={r.f_total}"))
    else:
        raise UsageError(f"unknown representation {rep!r}")
    return sorted(rows, key=lambda r: (r[0], r[2]))


def emit_spectrum(cfg: RunConfig, rep: str, order: int, out) -> None:
    rows = _spectrum_rows(cfg, rep, order)
    if cfg.format == "json":
        doc = [{"eigenvalue_num": r[0].numerator, "eigenvalue_den": r[0].denominator,
                "multiplicity": r[1], "label_class": r[2]} for r in rows]
        out.write(json.dumps(doc, indent=2) + "\n")
    elif cfg.format == "csv":
        out.write("eigenvalue_num,eigenvalue_den,multiplicity,label_class\n")
        for value, mult, label in rows:
            out.write(f"{value.numerator},{value.denominator},{mult},{label}\n")
    else:
        out.write(f"# Spectrum: {rep} Casimir order {order}\n\n")
        out.write(f"{_convention_header(cfg)}\n\n")
        out.write("| eigenvalue | multiplicity | class |\n|---|---|---|\n")
        for value, mult, label in rows:
            out.write(f"| {value} | {mult} | {label} |\n")


def emit_classification(cfg: RunConfig, out) -> None:
    rows = fer.classify_states()
    if cfg.format == "json":
        doc = [{
            "f": list(r.occupation.f), "ftotal": r.total,
            "i3_sixths": r.charge.i3_sixths, "yw_sixths": r.charge.yw_sixths,
            "q_sixths": r.charge.q_sixths, "sterile": r.sterile,
        } for r in rows]
        out.write(json.dumps(doc, indent=2) + "\n")
    elif cfg.format == "csv":
        out.write("f0,f1,f2,f3,f4,ftotal,i3_sixths,yw_sixths,q_sixths,sterile_flag\n")
        for r in rows:
            out.write("{},{},{},{},{},{},{},{},{},{}\n".format(
                *r.occupation.f, r.total, r.charge.i3_sixths,
                r.charge.yw_sixths, r.charge.q_sixths, str(r.sterile).lower()))
    else:
        out.write(f"# Charge classification\n\n{_convention_header(cfg)}\n\n")
        out.write("| f | total | I3 | Y_W | Q | sterile |\n|---|---|---|---|---|---|\n")
        for r in rows:
            out.write("| {} | {} | {} | {} | {} | {} |\n".format(
                "".join(map(str, r.occupation.f)), r.total,
                r.charge.i3, r.charge.yw, r.charge.q,
                "yes" if r.sterile else "no"))


def emit_conventions(cfg: RunConfig, out) -> None:
    report = hyb.resolve_conventions(cfg.cutoff, cfg.safe_margin,
                                     cfg.tolerances.num_tol)

    def combo_label(c):
        d = c.as_dict()
        return "zeta*:{} z*:{} f:{} b:{}".format(
            "".join("+" if s > 0 else "-" for s in d["zeta_star_sign"]),
            "".join("+" if s > 0 else "-" for s in d["z_star_sign"]),
            d["fermionic_c2_pairing"][:5], d["bosonic_c2_pairing"][:5])

    if cfg.format == "json":
        doc = {
            "battery": list(hyb.BATTERY),
            "combinations": [{
                "convention": c.as_dict(),
                "results": row,
                "selected": i == report.selected,
            } for i, (c, row) in enumerate(zip(report.combos, report.battery))],
            "deviations": list(report.deviations),
        }
        out.write(json.dumps(doc, indent=2) + "\n")
    elif cfg.format == "csv":
        out.write("combination,selected," + ",".join(hyb.BATTERY) + "\n")
        for i, (c, row) in enumerate(zip(report.combos, report.battery)):
            out.write("{},{},{}\n".format(
                combo_label(c).replace(",", ";"), str(i == report.selected).lower(),
                ",".join(str(row[k]).lower() for k in hyb.BATTERY)))
        out.write("\ndeviation\n")
        for d in report.deviations:
            out.write(d + "\n")
    else:
        out.write(f"# Convention sweep\n\n{_convention_header(cfg)}\n\n")
        out.write("| combination | selected | " + " | ".join(hyb.BATTERY) + " |\n")
        out.write("|" + "---|" * (len(hyb.BATTERY) + 2) + "\n")
        for i, (c, row) in enumerate(zip(report.combos, report.battery)):
            out.write("| {} | {} | {} |\n".format(
                combo_label(c), "*" if i == report.selected else "",
                " | ".join("PASS" if row[k] else "FAIL" for k in hyb.BATTERY)))
        out.write("\nLiteral source choices the selected convention departs from:\n")
        for d in report.deviations:
            out.write(f"- {d}\n")


def _cmd_verify(cfg: RunConfig, args, out) -> int:
    reports = run_suite(cfg, args.suite)
    emit_verify(cfg, reports, out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


def _cmd_spectrum(cfg: RunConfig, args, out) -> int:
    emit_spectrum(cfg, args.rep, args.casimir, out)
    return EXIT_OK


def _cmd_classify(cfg: RunConfig, args, out) -> int:
    emit_classification(cfg, out)
    return EXIT_OK


def _cmd_conventions(cfg: RunConfig, args, out) -> int:
    emit_conventions(cfg, out)
    return EXIT_OK


def _cmd_report(cfg: RunConfig, args, out) -> int:
    reports = run_suite(cfg, "all")
    emit_verify(cfg, reports, out)
    out.write("\n")
    for rep in ("fermion", "boson", "hybrid"):
        for order in (1, 2):
            emit_spectrum(cfg, rep, order, out)
            out.write("\n")
    emit_classification(cfg, out)
    out.write("\n")
    emit_conventions(cfg, out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qps-casimir",
        description="Verify Casimir spectra of the U(1,4) phase-space algebra.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--cutoff", type=int, default=None,
                       help="bosonic per-mode occupation cutoff (default 3)")
        p.add_argument("--seed", type=int, default=None,
                       help="seed for randomized probes (default 42)")
        p.add_argument("--tol", type=float, default=None,
                       help="override the numerical tolerance")
        p.add_argument("--format", choices=("json", "csv", "md"), default=None,
                       help="output format (default md)")
        p.add_argument("--config", default=None, help="path to a key = value config file")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=SUITE_NAMES + ("all",), default="all")
    add_common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("spectrum", help="emit an exact-rational spectrum table")
    p.add_argument("--rep", choices=("fermion", "boson", "hybrid"), required=True)
    p.add_argument("--casimir", type=int, choices=(1, 2), default=1)
    add_common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("classify", help="emit the 32-state charge table")
    add_common(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("conventions", help="emit the convention sweep matrix")
    add_common(p)
    p.set_defaults(func=_cmd_conventions)

    p = sub.add_parser("report", help="run everything and emit all tables")
    add_common(p)
    p.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(cfg, args, sys.stdout)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, OffDiagonalResidual) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
