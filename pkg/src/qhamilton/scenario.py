"""Scenario documents: JSON parsing, validation and output writers."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .dynamics import HamiltonianField, Trajectory
from .errors import QHamiltonError
from .polynomial import ScalarField
from .quaternion import ORTHOGONALITY_TOL

MAX_VARIABLE_DEGREE = 8
METHODS = ("euler", "rk4")

_REQUIRED = ("n", "hamiltonian", "x0", "dt", "steps")
_OPTIONAL = ("method", "triple", "seed")


class ParseError(QHamiltonError, ValueError):
    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class ValidationError(QHamiltonError, ValueError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class Scenario:
    n: int
    hamiltonian: HamiltonianField
    x0: np.ndarray
    dt: float
    steps: int
    method: str = "rk4"
    triple: Optional[np.ndarray] = None
    seed: Optional[int] = None

    @property
    def dim(self) -> int:
        return 4 * self.n

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "hamiltonian": [f.to_spec() for f in self.hamiltonian.h],
            "x0": [float(v) for v in self.x0],
            "dt": self.dt,
            "steps": self.steps,
            "method": self.method,
        }
        if self.triple is not None:
            out["triple"] = self.triple.tolist()
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_real(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _real(v, where) -> float:
    if not _is_real(v) or not np.isfinite(v):
        raise ValidationError(where, f"expected a finite number, got {v!r}")
    return float(v)


def _scalar_field(spec, where, dim) -> ScalarField:
    if isinstance(spec, dict):
        extra = set(spec) - {"terms"}
        if extra:
            raise ValidationError(where, f"unknown key {sorted(extra)[0]!r}")
        if "terms" not in spec:
            raise ValidationError(where, "missing key 'terms'")
        terms = spec["terms"]
        base = f"{where}.terms"
    else:
        terms = spec
        base = where
    if not isinstance(terms, list):
        raise ValidationError(base, "expected a list of terms")
    out = []
    for k, term in enumerate(terms):
        tw = f"{base}[{k}]"
        if not isinstance(term, dict):
            raise ValidationError(tw, "expected an object with 'coeff' and 'exponents'")
        extra = set(term) - {"coeff", "exponents"}
        if extra:
            raise ValidationError(tw, f"unknown key {sorted(extra)[0]!r}")
        for key in ("coeff", "exponents"):
            if key not in term:
                raise ValidationError(tw, f"missing key {key!r}")
        coeff = _real(term["coeff"], f"{tw}.coeff")
        exps = term["exponents"]
        ew = f"{tw}.exponents"
        if not isinstance(exps, list) or len(exps) != dim:
            length = len(exps) if isinstance(exps, list) else "non-list"
            raise ValidationError(ew, f"expected {dim} exponents, got {length}")
        if not all(_is_int(e) and e >= 0 for e in exps):
            raise ValidationError(ew, "exponents must be nonnegative integers")
        if max(exps, default=0) > MAX_VARIABLE_DEGREE:
            raise ValidationError(ew, f"degree above {MAX_VARIABLE_DEGREE} in a single variable")
        out.append((coeff, exps))
    return ScalarField(dim, out)


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document.

    Raises:
        ParseError: malformed JSON (line and column in the message).
        ValidationError: a field is missing, unknown or out of range.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
                         exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ValidationError("<root>", "scenario must be a JSON object")
    unknown = set(doc) - set(_REQUIRED) - set(_OPTIONAL)
    if unknown:
        raise ValidationError(sorted(unknown)[0], "unknown key")
    for key in _REQUIRED:
        if key not in doc:
            raise ValidationError(key, "missing required key")

    n = doc["n"]
    if not _is_int(n) or n < 1:
        raise ValidationError("n", f"expected a positive integer, got {n!r}")
    dim = 4 * n

    ham = doc["hamiltonian"]
    if not isinstance(ham, list) or len(ham) != 3:
        raise ValidationError("hamiltonian", "expected a list of three polynomial specs")
    H = HamiltonianField(tuple(_scalar_field(spec, f"hamiltonian[{a}]", dim) for a, spec in enumerate(ham)))

    x0 = doc["x0"]
    if not isinstance(x0, list) or len(x0) != dim:
        raise ValidationError("x0", f"expected {dim} numbers")
    x0 = np.array([_real(v, f"x0[{i}]") for i, v in enumerate(x0)])

    dt = _real(doc["dt"], "dt")
    if dt <= 0:
        raise ValidationError("dt", f"must be positive, got {dt!r}")
    steps = doc["steps"]
    if not _is_int(steps) or steps < 1:
        raise ValidationError("steps", f"expected a positive integer, got {steps!r}")
    method = doc.get("method", "rk4")
    if method not in METHODS:
        raise ValidationError("method", f"expected one of {METHODS}, got {method!r}")

    triple = None
    if "triple" in doc:
        c = doc["triple"]
        if (not isinstance(c, list) or len(c) != 3
                or not all(isinstance(r, list) and len(r) == 3 for r in c)):
            raise ValidationError("triple", "expected a 3x3 matrix")
        triple = np.array([[_real(v, f"triple[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(c)])
        if np.max(np.abs(triple.T @ triple - np.eye(3))) > ORTHOGONALITY_TOL:
            raise ValidationError("triple", "matrix is not orthogonal")
        if abs(np.linalg.det(triple) - 1.0) > ORTHOGONALITY_TOL:
            raise ValidationError("triple", "matrix reverses orientation (det = -1)")
    seed = doc.get("seed")
    if seed is not None and not _is_int(seed):
        raise ValidationError("seed", f"expected an integer, got {seed!r}")

    return Scenario(n, H, x0, dt, steps, method, triple, seed)


def load_scenario(path) -> Scenario:
    return parse_scenario(Path(path).read_text())


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_trajectory_csv(traj: Trajectory, path) -> None:
    m = traj.states.shape[1]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t"] + [f"x{a}" for a in range(m)])
        for t, x in zip(traj.times, traj.states):
            w.writerow([_fmt(t)] + [_fmt(v) for v in x])


def write_trajectory_json(traj: Trajectory, path) -> None:
    doc = {
        "method": traj.method,
        "dt": traj.dt,
        "times": [float(t) for t in traj.times],
        "states": traj.states.tolist(),
    }
    Path(path).write_text(json.dumps(doc) + "\n")


def read_trajectory_csv(path) -> tuple[np.ndarray, np.ndarray]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1:]
