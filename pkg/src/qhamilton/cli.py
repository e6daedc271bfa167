"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 numerical blow-up, 3 verification
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import diagnostics, field_qham, integrate, rotate_hamiltonian, route_defect
from .errors import NonFiniteState
from .hyperkahler import build_structure
from .quaternion import make_triple
from .scenario import ParseError, ValidationError, load_scenario, write_trajectory_csv, write_trajectory_json
from .verify import run_suites

EXIT_OK, EXIT_INPUT, EXIT_BLOWUP, EXIT_VERIFY = 0, 1, 2, 3
PROBE_POINTS = 16


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _write_trajectory(traj, out: Path, fmt: str) -> Path:
    path = out / f"trajectory.{fmt}"
    (write_trajectory_csv if fmt == "csv" else write_trajectory_json)(traj, path)
    return path


def cmd_run(scenario_file, out_dir, fmt: str = "csv") -> int:
    try:
        sc = load_scenario(scenario_file)
    except OSError as exc:
        print(f"error: cannot read scenario {scenario_file}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ParseError, ValidationError) as exc:
        print(f"error: {scenario_file}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output directory {out}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_INPUT

    s = build_structure(sc.n)
    H = sc.hamiltonian
    try:
        traj = integrate(s, H, sc.x0, sc.dt, sc.steps, sc.method)
    except NonFiniteState as exc:
        path = _write_trajectory(exc.trajectory, out, fmt)
        print(f"error: integration diverged: {exc}; partial trajectory written to {path}", file=sys.stderr)
        return EXIT_BLOWUP

    _write_trajectory(traj, out, fmt)
    report = diagnostics(s, H, traj)
    doc = report.to_json()
    if report.conserved_drift is not None:
        doc["conserved_drift"] = report.conserved_drift
    if sc.triple is not None:
        triple = make_triple(sc.triple)
        sr, Hr = s.rotated(triple), rotate_hamiltonian(H, triple)
        doc["rotation_max_defect"] = max(
            float(np.max(np.abs(field_qham(sr, Hr, x) - field_qham(s, H, x)))) for x in traj.states)
    if sc.seed is not None:
        rng = np.random.default_rng(sc.seed)
        lo, hi = traj.states.min(axis=0), traj.states.max(axis=0)
        doc["probe_route_max_defect"] = max(
            route_defect(s, H, rng.uniform(lo, hi)) for _ in range(PROBE_POINTS))
    (out / "diagnostics.json").write_text(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_verify(n: int, cases: int, seed: int) -> int:
    if n not in (1, 2):
        print(f"error: --dim must be 1 or 2, got {n}", file=sys.stderr)
        return EXIT_INPUT
    if cases < 1:
        print(f"error: --cases must be at least 1, got {cases}", file=sys.stderr)
        return EXIT_INPUT
    results = run_suites(n, cases, seed)
    print(f"verify n={n} cases={cases} seed={seed}")
    print(f"{'suite':<24}{'max defect':>14}{'tolerance':>12}  status")
    for r in results:
        print(f"{r.name:<24}{r.max_defect:>14.3e}{r.tolerance:>12.0e}  {'pass' if r.passed else 'FAIL'}")
    failed = [r for r in results if not r.passed]
    for r in failed:
        print(f"error: suite {r.name} failed (seed={seed}, instance={r.first_failure}, "
              f"defect={r.defects[r.first_failure]:.3e})", file=sys.stderr)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_info() -> int:
    s = build_structure(1)
    print(f"qhamilton {__version__}")
    print("flat structure on R^4 (coordinates t, x1, x2, x3)")
    with np.printoptions(formatter={"float": lambda v: f"{v:+.0f}"}):
        for a, J in enumerate(s.J, 1):
            print(f"J{a} =")
            print(J)
    for a, w in enumerate(s.symplectic_forms(), 1):
        terms = " ".join(f"{c:+g} dx{i}^dx{j}" for (i, j), c in sorted(w.items()))
        print(f"omega{a} = {terms}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qhamilton", description="Quaternionic Hamilton dynamics on flat H^n.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="integrate a scenario and write trajectory and diagnostics")
    r.add_argument("--scenario", required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--format", choices=("csv", "json"), default="csv")

    v = sub.add_parser("verify", help="run the randomized property suites")
    v.add_argument("--dim", type=int, required=True)
    v.add_argument("--cases", type=int, required=True)
    v.add_argument("--seed", type=int, required=True)

    sub.add_parser("info", help="print version and the n=1 structure tables")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args.scenario, args.out, args.format)
    if args.command == "verify":
        return cmd_verify(args.dim, args.cases, args.seed)
    return cmd_info()


if __name__ == "__main__":
    sys.exit(main())
