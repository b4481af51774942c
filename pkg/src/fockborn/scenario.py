"""Scenario files: the experiment configurations the CLI runs on.

A scenario is a JSON object describing two observables on the same
d-dimensional space (measurement ``observable_a`` and preparation
``observable_psi``), the prepared outcome, and run parameters. Complex
matrix entries are encoded as ``[re, im]`` pairs; each basis matrix is
unitary with the outcome kets as columns.

Schema (defaults in parentheses)::

    {
      "dim": 2,                          // optional, checked if present
      "observable_a":   {"labels": [..], "values": [..], "basis": [[[re,im],..],..]},
      "observable_psi": {"labels": [..], "values": [..], "basis": [[[re,im],..],..]},
      "initial_outcome": "<label of observable_psi>",
      "fock_cutoff": 3,                  // (3)
      "trials": 100000,                  // (100000)
      "seed": 0,                         // optional, see seed resolution
      "tolerances": {
        "structural": 1e-10,             // (1e-10)
        "cross_term": 1e-12,             // (1e-12)
        "statistical_sigma": 3.0         // (3.0)
      }
    }

Two reference scenarios ship with the package, see :func:`bundled_scenarios`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError
from .linalg import ProjectorFamily, is_unitary
from .representation import ObservableSpec

DEFAULT_FOCK_CUTOFF = 3
DEFAULT_TRIALS = 100_000
DEFAULT_TOLERANCES = {
    "structural": 1e-10,
    "cross_term": 1e-12,
    "statistical_sigma": 3.0,
}


@dataclass(frozen=True)
class Tolerances:
    structural: float = 1e-10
    cross_term: float = 1e-12
    statistical_sigma: float = 3.0


@dataclass(frozen=True)
class Scenario:
    """A validated experiment configuration."""

    dim: int
    observable_a: ObservableSpec
    observable_psi: ObservableSpec
    initial_outcome: str
    fock_cutoff: int
    trials: int
    seed: int | None
    tolerances: Tolerances

    @property
    def initial_index(self) -> int:
        return self.observable_psi.index_of(self.initial_outcome)


def _complex_matrix(entries, where: str) -> np.ndarray:
    try:
        arr = np.asarray(entries, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: matrix entries must be [re, im] pairs") from exc
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(
            f"{where}: expected a square matrix of [re, im] pairs, got shape {arr.shape}"
        )
    return arr[..., 0] + 1j * arr[..., 1]


def _observable(node: dict, where: str, tol: float) -> ObservableSpec:
    for key in ("labels", "values", "basis"):
        if key not in node:
            raise ValidationError(f"{where}: missing field {key!r}")
    basis = _complex_matrix(node["basis"], f"{where}.basis")
    if not is_unitary(basis, tol):
        raise ValidationError(f"{where}: basis not unitary")
    labels = [str(x) for x in node["labels"]]
    values = node["values"]
    if len(labels) != basis.shape[0] or len(values) != basis.shape[0]:
        raise ValidationError(f"{where}: labels/values length must match basis dim")
    if len(set(labels)) != len(labels):
        raise ValidationError(f"{where}: labels must be distinct")
    projectors = [
        np.outer(basis[:, n], basis[:, n].conj()) for n in range(basis.shape[0])
    ]
    try:
        family = ProjectorFamily(projectors, tol=tol)
    except Exception as exc:
        raise ValidationError(f"{where}: basis columns do not form a valid frame: {exc}") from exc
    return ObservableSpec(labels, values, family)


def scenario_from_dict(data: dict, where: str = "scenario") -> Scenario:
    """Validate a parsed scenario object and fill defaults."""
    if not isinstance(data, dict):
        raise ValidationError(f"{where}: top level must be an object")
    for key in ("observable_a", "observable_psi", "initial_outcome"):
        if key not in data:
            raise ValidationError(f"{where}: missing field {key!r}")

    tol_node = dict(DEFAULT_TOLERANCES)
    tol_node.update(data.get("tolerances", {}))
    unknown = set(tol_node) - set(DEFAULT_TOLERANCES)
    if unknown:
        raise ValidationError(f"{where}.tolerances: unknown keys {sorted(unknown)}")
    tolerances = Tolerances(**{k: float(v) for k, v in tol_node.items()})

    obs_a = _observable(data["observable_a"], f"{where}.observable_a", tolerances.structural)
    obs_psi = _observable(data["observable_psi"], f"{where}.observable_psi", tolerances.structural)
    if obs_a.dim != obs_psi.dim:
        raise ValidationError(f"{where}: observables have different dimensions")
    if "dim" in data and int(data["dim"]) != obs_a.dim:
        raise ValidationError(
            f"{where}: declared dim {data['dim']} != basis dim {obs_a.dim}"
        )

    initial = str(data["initial_outcome"])
    if initial not in obs_psi.labels:
        raise ValidationError(
            f"{where}: initial_outcome {initial!r} not among observable_psi labels"
        )

    fock_cutoff = int(data.get("fock_cutoff", DEFAULT_FOCK_CUTOFF))
    if fock_cutoff < 1:
        raise ValidationError(f"{where}: fock_cutoff must be >= 1")
    trials = int(data.get("trials", DEFAULT_TRIALS))
    if trials < 1:
        raise ValidationError(f"{where}: trials must be >= 1")
    seed = data.get("seed")
    if seed is not None:
        seed = int(seed)

    return Scenario(
        dim=obs_a.dim,
        observable_a=obs_a,
        observable_psi=obs_psi,
        initial_outcome=initial,
        fock_cutoff=fock_cutoff,
        trials=trials,
        seed=seed,
        tolerances=tolerances,
    )


def load_scenario(path) -> Scenario:
    """Load and validate a scenario file.

    Raises :class:`ParseError` for unreadable or malformed JSON (with
    line/column context) and :class:`ValidationError` naming the violated
    invariant.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(data, where=str(path))


def bundled_scenarios() -> dict[str, Path]:
    """Paths of the reference scenarios shipped with the package."""
    base = resources.files(__package__) / "scenarios"
    return {
        "hadamard_d2": Path(str(base / "hadamard_d2.json")),
        "random_d3": Path(str(base / "random_d3.json")),
    }
