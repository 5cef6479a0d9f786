"""Command line entry point: verification suites, table emission, evolution runs.

Exit status discipline: 0 on success, 1 when a check fails, 2 on usage or
configuration errors.  All outputs are deterministic for a fixed seed.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import octahedron, suites
from .errors import OctalineError

_SNAP_VALUES = [0, 1, -1, 1j, -1j, 1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]


def _snap_matrix(m: np.ndarray) -> list[list[list[float]]]:
    """Projective normalization of a group matrix to exact Gaussian integers."""
    m = np.asarray(m, dtype=complex)
    flat = m.reshape(-1)
    pivot = flat[int(np.argmax(np.abs(flat)))]
    m = m / pivot
    snapped = np.empty_like(m)
    for idx, val in np.ndenumerate(m):
        best = min(_SNAP_VALUES, key=lambda c: abs(val - c))
        snapped[idx] = best if abs(val - best) < 1e-6 else val
    # canonical phase: first nonzero entry becomes 1 when possible
    flat = snapped.reshape(-1)
    lead = next(v for v in flat if abs(v) > 1e-9)
    if abs(abs(lead) - 1.0) < 1e-9:
        snapped = snapped / lead
        snapped = np.array([[min(_SNAP_VALUES, key=lambda c: abs(v - c)) for v in row]
                            for row in snapped])
    return [[[float(v.real), float(v.imag)] for v in row] for row in snapped]


def derived_table_json(n: int = 1) -> str:
    poles = octahedron.standard_poles(n)
    group = octahedron.generate_group(poles)
    rows = []
    for e in group.elements:
        rows.append(
            {
                "label": e.label,
                "cycle": octahedron.cycle_string(e.perm),
                "permutation": list(e.perm),
                "order": e.order,
                "holomorphic": e.holomorphic,
                "matrix": _snap_matrix(e.map.matrix),
            }
        )
    rows.sort(key=lambda r: (not r["holomorphic"], r["order"], r["cycle"]))
    return json.dumps({"n": n, "count": len(rows), "rows": rows}, sort_keys=True, indent=2) + "\n"


def audit_markdown() -> str:
    lines = [
        "# Reference-table audit",
        "",
        "Permutations are recomputed from each row's printed chart formula and",
        "compared with the row's printed cycle (parsed left to right).",
        "MISMATCH rows cross-reference the row whose printed cycle the formula",
        "does realize, which exposes label swaps inside the source table.",
        "",
        "| section | printed cycle | formula | derived | status | matrix agrees | formula realizes row |",
        "|---|---|---|---|---|---|---|",
    ]
    for row in octahedron.table_diff_report():
        lines.append(
            f"| {row.section} | {row.cycle} | {row.formula_text} | "
            f"{row.derived_cycle or 'not a pole permutation'} | {row.status} | "
            f"{'yes' if row.matrix_agrees_formula else 'NO'} | {row.realizes_row or ''} |"
        )
    lines.append("")
    return "\n".join(lines)


def _evolution_csv(run: suites.EvolutionRun) -> str:
    cfg = run.config
    header = {
        "n": cfg.n, "seed": cfg.seed, "hbar": cfg.hbar, "t_max": run.t_max,
        "steps": run.steps, "tol": cfg.tol,
    }
    out = [f"# config-json: {json.dumps(header, sort_keys=True)}"]
    out.append("t,re_schrodinger,re_heisenberg,re_geometric,dev_s_h,dev_s_g,dev_h_g")
    rep = run.report
    for k, t in enumerate(rep.times):
        out.append(
            f"{t:.12e},{rep.schrodinger[k].real:.12e},{rep.heisenberg[k].real:.12e},"
            f"{rep.geometric[k].real:.12e},"
            f"{abs(rep.schrodinger[k] - rep.heisenberg[k]):.12e},"
            f"{abs(rep.schrodinger[k] - rep.geometric[k]):.12e},"
            f"{abs(rep.heisenberg[k] - rep.geometric[k]):.12e}"
        )
    out.append(f"# max_dev_pictures: {max(rep.max_dev_s_h, rep.max_dev_s_g, rep.max_dev_h_g):.12e}")
    out.append(f"# rk4_vs_closed: {run.rk4_deviation:.12e}")
    out.append(f"# unitarity_closed: {run.unitarity_closed:.12e}")
    out.append(f"# hbar_covariance: {run.hbar_covariance:.12e}")
    return "\n".join(out) + "\n"


def _evolution_json(run: suites.EvolutionRun) -> str:
    cfg = run.config
    rep = run.report
    payload = {
        "config": {"n": cfg.n, "seed": cfg.seed, "hbar": cfg.hbar,
                   "t_max": run.t_max, "steps": run.steps, "tol": cfg.tol},
        "times": [float(t) for t in rep.times],
        "schrodinger": [[v.real, v.imag] for v in rep.schrodinger],
        "heisenberg": [[v.real, v.imag] for v in rep.heisenberg],
        "geometric": [[v.real, v.imag] for v in rep.geometric],
        "max_dev_pictures": max(rep.max_dev_s_h, rep.max_dev_s_g, rep.max_dev_h_g),
        "rk4_vs_closed": run.rk4_deviation,
        "unitarity_closed": run.unitarity_closed,
        "unitarity_rk4": run.unitarity_rk4,
        "hbar_covariance": run.hbar_covariance,
        "ok": run.ok,
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _parse_signature(text: str | None, n: int) -> tuple[int, int] | None:
    if text is None:
        return None
    p, q = (int(x) for x in text.split(","))
    return (p, q)


def _config_from_args(args) -> suites.RunConfig:
    return suites.RunConfig(
        n=args.n,
        signature=_parse_signature(getattr(args, "signature", None), args.n),
        seed=args.seed,
        tol=args.tol,
        hbar=getattr(args, "hbar", 1.0),
        trials=getattr(args, "trials", 100),
        output_path=getattr(args, "out", None),
        format=getattr(args, "format", "markdown"),
        parallel=getattr(args, "parallel", False),
    )


SUITES = {
    "jordanlie": suites.run_jordanlie_suite,
    "octahedron": suites.run_octahedron_suite,
    "unitary": suites.run_unitary_suite,
}


def cmd_verify(args) -> int:
    try:
        config = _config_from_args(args)
    except OctalineError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    names = list(SUITES) if args.suite == "all" else [args.suite]
    checks = []
    if config.parallel and len(names) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=len(names)) as pool:
            for batch in pool.map(lambda name: SUITES[name](config), names):
                checks.extend(batch)
    else:
        for name in names:
            checks.extend(SUITES[name](config))
    title = f"verification: {', '.join(names)} (n={config.n}, seed={config.seed})"
    if config.format == "json":
        text = suites.render_checks_json(title, checks)
    elif config.format == "csv":
        text = suites.render_checks_csv(checks)
    else:
        text = suites.render_checks_markdown(title, checks)
    _write(config.output_path, text)
    bad = suites.failures(checks)
    if bad:
        print(f"FAILED: {bad[0].check_id}: {bad[0].description}", file=sys.stderr)
        return 1
    return 0


def cmd_tables(args) -> int:
    out_dir = Path(args.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "derived_table.json").write_text(derived_table_json(args.n), encoding="utf-8")
        (out_dir / "table_audit.md").write_text(audit_markdown(), encoding="utf-8")
    except OSError as exc:
        print(f"cannot write tables: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out_dir / 'derived_table.json'} and {out_dir / 'table_audit.md'}")
    return 0


def cmd_evolve(args) -> int:
    try:
        config = _config_from_args(args)
        hamiltonian = None
        if args.hamiltonian != "random":
            blob = json.loads(Path(args.hamiltonian).read_text(encoding="utf-8"))
            hamiltonian = np.asarray(blob["re"], dtype=float) + 1j * np.asarray(blob["im"], dtype=float)
        run = suites.run_evolution(config, args.t_max, args.steps, hamiltonian)
    except (OctalineError, OSError, KeyError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    text = _evolution_json(run) if config.format == "json" else _evolution_csv(run)
    _write(config.output_path, text)
    if not run.ok:
        print("FAILED: an evolution threshold was exceeded", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="octaline",
        description="verification workbench for two-product algebras and unitary torsor geometry",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=2, help="matrix size")
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--out", type=str, default=None, help="output file (default stdout)")

    p_verify = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p_verify.add_argument("suite", choices=[*SUITES, "all"])
    p_verify.add_argument("--signature", type=str, default=None, help="involution signature p,q")
    p_verify.add_argument("--trials", type=int, default=100)
    p_verify.add_argument("--hbar", type=float, default=1.0)
    p_verify.add_argument("--format", choices=["markdown", "json", "csv"], default="markdown")
    p_verify.add_argument("--parallel", action="store_true",
                          help="run independent suites concurrently (output order unchanged)")
    p_verify.set_defaults(func=cmd_verify)

    p_tables = sub.add_parser("tables", help="emit the derived 48-map table and the audit")
    p_tables.add_argument("--n", type=int, default=1)
    p_tables.add_argument("--out-dir", type=str, default="tables-out")
    p_tables.set_defaults(func=cmd_tables)

    p_evolve = sub.add_parser("evolve", parents=[common], help="run the three-picture evolution")
    p_evolve.add_argument("--hbar", type=float, default=1.0)
    p_evolve.add_argument("--t-max", type=float, default=10.0)
    p_evolve.add_argument("--steps", type=int, default=1000)
    p_evolve.add_argument("--hamiltonian", type=str, default="random",
                          help="'random' or a JSON file with keys re, im")
    p_evolve.add_argument("--format", choices=["csv", "json"], default="csv")
    p_evolve.set_defaults(func=cmd_evolve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
