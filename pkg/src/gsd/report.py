"""Analysis reports: decomposition, region, per-qubit predicates and the teleportation flag."""

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES
from .decomposition import build_gsd, is_qubit_separable, is_reduction_mixed
from .families import GhzExtParams, W3Params, WnParams, ghz_gsd, w3_classify, w3_gsd, wn_gsd
from .oracle import MAX_ORACLE_QUBITS, brute_force_g
from .serialize import decomposition_to_dict, fmt, state_to_dict
from .solver import SolverConfig
from .states import bloch_vector


@dataclass
class AnalysisReport:
    source: str
    params: tuple
    state: object
    decomposition: object
    classification: dict
    predicates: list
    teleportation_receivers: list
    oracle_g: float = None
    solver: dict = field(default_factory=dict)

    @property
    def teleportation_applicable(self):
        """True iff some qubit has a completely mixed reduction (three qubits only)."""
        return bool(self.teleportation_receivers)

    def to_dict(self):
        return {
            "input": {
                "source": self.source,
                "params": [fmt(x) for x in self.params],
                "state": state_to_dict(self.state),
            },
            "decomposition": decomposition_to_dict(self.decomposition),
            "classification": self.classification,
            "predicates": self.predicates,
            "teleportation_applicable": self.teleportation_applicable,
            "teleportation_receivers": self.teleportation_receivers,
            "oracle_g": fmt(self.oracle_g),
            "solver": self.solver,
        }

    def to_text(self):
        d = self.decomposition
        lines = [f"source: {self.source} {' '.join(f'{x:.12g}' for x in self.params)}".rstrip()]
        lines.append(f"n: {d.n}")
        lines.append(f"g: {d.g:.12g}")
        lines.extend(f"t{k + 1}: {x:.12g}" for k, x in enumerate(d.t))
        lines.append(f"h: {d.h:.12g}")
        lines.append(f"phi: {d.phi:.12g}")
        lines.append(f"region: {self.classification['label']}")
        for pred in self.predicates:
            mixed = pred["reduction_mixed"]
            lines.append(
                f"qubit {pred['qubit']}: separable={pred['separable']} "
                f"reduction_mixed={'n/a' if mixed is None else mixed} bloch={pred['bloch_norm']:.12g}"
            )
        receivers = ",".join(str(k) for k in self.teleportation_receivers) or "-"
        lines.append(f"teleportation_applicable: {self.teleportation_applicable} (receiver qubits: {receivers})")
        if self.oracle_g is not None:
            lines.append(f"oracle_g: {self.oracle_g:.12g} (diff {self.oracle_g - d.g:.3g})")
        for key, val in self.solver.items():
            lines.append(f"solver.{key}: {val}")
        return "\n".join(lines)


def family_params(family, values):
    """Build the parameter record of a named family from CLI-style numbers."""
    if family == "w3":
        if len(values) != 4:
            raise ValueError("w3 needs four parameters a b c d")
        return W3Params.normalized(*values)
    if family == "ghz-ext":
        if len(values) != 4:
            raise ValueError("ghz-ext needs four parameters a b c d")
        return GhzExtParams.normalized(*values)
    if family == "wn":
        if len(values) not in (2, 3):
            raise ValueError("wn needs n a [b]")
        n = int(values[0])
        if n != values[0]:
            raise ValueError(f"wn qubit count must be an integer, got {values[0]}")
        if len(values) == 2:
            return WnParams(n, float(values[1]))
        a, b = float(values[1]), float(values[2])
        scale = np.sqrt((n - 1) * a * a + b * b)
        if scale == 0:
            raise ValueError("wn parameters are all zero")
        return WnParams(n, a / scale, b / scale)
    raise ValueError(f"unknown family {family!r}")


def _closed_form(params):
    if isinstance(params, W3Params):
        return w3_gsd(params)
    if isinstance(params, WnParams):
        return wn_gsd(params)
    return ghz_gsd(params)


def _generic_label(separable):
    if all(separable):
        return "product"
    if any(separable):
        return "has-unentangled-qubit"
    return "no-unentangled-qubit"


def analyze(state, *, params=None, source="state", numeric=False, cfg=None, verify_oracle=False, tol=None):
    """Decompose ``state`` and evaluate every predicate.

    With ``params`` from a named family and ``numeric=False`` the closed-form
    decomposition is used; otherwise the numerical solver runs.
    """
    tol = DEFAULT_TOLERANCES.classify if tol is None else tol
    cfg = cfg or SolverConfig()
    solver_info = {}
    if params is not None and not numeric:
        dec = _closed_form(params)
        solver_info["method"] = "closed-form"
        solver_info["branch"] = dec.info.get("branch", "")
    else:
        dec = build_gsd(state, cfg)
        solver_info = {
            "method": "power-iteration",
            "restarts": cfg.restarts,
            "seed": cfg.rng_seed,
            "residual": fmt(dec.info["residual"]),
            "iterations": dec.info["iterations"],
            "converged": dec.info["converged"],
        }

    n = state.n
    separable = [is_qubit_separable(dec, k, tol) for k in range(n)]
    mixed = [is_reduction_mixed(dec, k, tol) if n == 3 else None for k in range(n)]
    predicates = [
        {
            "qubit": k + 1,
            "separable": separable[k],
            "reduction_mixed": mixed[k],
            "bloch_norm": fmt(bloch_vector(state, k).norm),
        }
        for k in range(n)
    ]
    if isinstance(params, W3Params):
        region = w3_classify(params)
        classification = {
            "label": region.label.value,
            "highly_entangled_region": region.highly_entangled,
            "boundary_distances": [fmt(x) for x in region.boundary_distances],
        }
    else:
        classification = {"label": _generic_label(separable)}

    oracle_g = None
    if verify_oracle and n <= MAX_ORACLE_QUBITS:
        oracle_g = brute_force_g(state)

    param_values = _param_values(params)
    return AnalysisReport(
        source=source,
        params=param_values,
        state=state,
        decomposition=dec,
        classification=classification,
        predicates=predicates,
        teleportation_receivers=[k + 1 for k in range(n) if mixed[k]],
        oracle_g=oracle_g,
        solver=solver_info,
    )


def _param_values(params):
    if params is None:
        return ()
    if isinstance(params, WnParams):
        return (params.n, params.a, params.b)
    return params.as_tuple()
