"""Scenario configuration: JSON-syntax files with units in the key names.

Unknown keys are rejected; all physical values are validated and unit
conversions (N/m fracture energies) happen at parse time.  The resolved
configuration (defaults filled in) is what run manifests echo.
"""

import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .driving import VARIANTS
from .errors import ParseError, ValidationError
from .linear_elastic import critical_stress
from .meshing import disc_h_estimate, plate_h_estimate

SCENARIOS = ("mode_I", "mode_II", "brazilian", "conchoidal", "bar_1d")

_MESH_KEYS = {
    "mode_I": {"nx", "ny", "size_mm", "slit_half_length_mm"},
    "mode_II": {"nx", "ny", "size_mm", "slit_half_length_mm"},
    "brazilian": {"diameter_mm", "m_core", "n_rings", "arc_b_mm"},
    "conchoidal": {"nx", "ny", "nz", "a_mm", "patch_mm"},
    "bar_1d": {"n", "half_length_mm"},
}
_MATERIAL_KEYS = {"model", "E_MPa", "nu", "plane_mode", "k_ratio", "finite_split"}
_DRIVING_KEYS = {
    "variant", "sigma_c_MPa", "tau_c_MPa", "R_m_t_MPa", "R_m_c_MPa",
    "m_ratio", "eps_c", "lam_c", "stress_model",
}
_EVOLUTION_KEYS = {
    "l_c_mm", "Gc_N_per_mm", "Gc_N_per_m", "c_rule", "dt_s", "du_mm",
    "steps", "eps_res",
}
_OUTPUT_KEYS = {"dir", "field_every"}
_TOP_KEYS = {"scenario", "mesh", "material", "driving", "evolution", "output", "stop"}
_STOP_KEYS = {"post_peak_fraction", "max_z_for_stop"}

_DEFAULT_MESH = {
    "mode_I": {"nx": 100, "ny": 100, "size_mm": 100.0, "slit_half_length_mm": None},
    "mode_II": {"nx": 100, "ny": 100, "size_mm": 100.0, "slit_half_length_mm": None},
    "brazilian": {"diameter_mm": 50.0, "m_core": 26, "n_rings": 13, "arc_b_mm": None},
    "conchoidal": {"nx": 20, "ny": 20, "nz": 10, "a_mm": 500.0, "patch_mm": None},
    "bar_1d": {"n": 160, "half_length_mm": None},
}


@dataclass
class ScenarioConfig:
    scenario: str
    mesh: dict
    material: dict
    driving: dict
    evolution: dict
    output: dict = field(default_factory=dict)
    stop: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "scenario": self.scenario,
            "mesh": dict(self.mesh),
            "material": dict(self.material),
            "driving": dict(self.driving),
            "evolution": dict(self.evolution),
            "output": dict(self.output),
            "stop": dict(self.stop),
        }


def mesh_h_estimate(scenario, mesh, l_c):
    if scenario in ("mode_I", "mode_II"):
        return plate_h_estimate(mesh["nx"], mesh["ny"], mesh["size_mm"])
    if scenario == "brazilian":
        return disc_h_estimate(
            mesh["diameter_mm"] / 2.0, mesh["m_core"], mesh["n_rings"]
        )
    if scenario == "conchoidal":
        a = mesh["a_mm"]
        return min(4.0 * a / mesh["nx"], 4.0 * a / mesh["ny"], 2.0 * a / mesh["nz"])
    if scenario == "bar_1d":
        L = mesh["half_length_mm"] if mesh["half_length_mm"] else 8.0 * l_c
        return 2.0 * L / mesh["n"]
    raise ValueError(scenario)


def _reject_unknown(block, allowed, name, problems):
    for key in block:
        if key not in allowed:
            problems.append(f"unknown key {name}.{key}")


def _positive(block, name, keys, problems, allow_missing=()):
    for key in keys:
        v = block.get(key)
        if v is None:
            if key not in allow_missing:
                problems.append(f"{name}.{key} is required")
            continue
        if not isinstance(v, (int, float)) or v <= 0:
            problems.append(f"{name}.{key} must be positive, got {v!r}")


def parse_config(path):
    """Read, validate and resolve a scenario configuration file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if not text.strip():
        raise ParseError(f"{path}: empty config file")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: top level must be an object")
    return validate_config(raw)


def validate_config(raw):
    """Validate a raw config dict; returns the resolved ScenarioConfig."""
    problems = []
    _reject_unknown(raw, _TOP_KEYS, "<top>", problems)
    scenario = raw.get("scenario")
    if scenario not in SCENARIOS:
        problems.append(f"scenario must be one of {SCENARIOS}, got {scenario!r}")
        raise ValidationError(problems)

    mesh = dict(_DEFAULT_MESH[scenario])
    mesh.update(raw.get("mesh", {}))
    _reject_unknown(raw.get("mesh", {}), _MESH_KEYS[scenario], "mesh", problems)

    material = {
        "model": "linear", "plane_mode": "plane_stress", "k_ratio": 0.0,
        "finite_split": "invariant_split",
    }
    material.update(raw.get("material", {}))
    _reject_unknown(raw.get("material", {}), _MATERIAL_KEYS, "material", problems)

    driving = {"stress_model": None}
    driving.update(raw.get("driving", {}))
    _reject_unknown(raw.get("driving", {}), _DRIVING_KEYS, "driving", problems)

    evolution = {"c_rule": 1.0, "dt_s": 1e-3, "eps_res": 1e-5}
    evolution.update(raw.get("evolution", {}))
    _reject_unknown(raw.get("evolution", {}), _EVOLUTION_KEYS, "evolution", problems)

    output = {"dir": None, "field_every": 0}
    output.update(raw.get("output", {}))
    _reject_unknown(raw.get("output", {}), _OUTPUT_KEYS, "output", problems)

    stop = {"post_peak_fraction": 0.05, "max_z_for_stop": 0.9}
    stop.update(raw.get("stop", {}))
    _reject_unknown(raw.get("stop", {}), _STOP_KEYS, "stop", problems)

    # material
    _positive(material, "material", ("E_MPa",), problems)
    nu = material.get("nu")
    if nu is None or not -1.0 < nu < 0.5:
        problems.append(f"material.nu must lie in (-1, 0.5), got {nu!r}")
    if material["model"] not in ("linear", "neo_hooke", "mooney_rivlin"):
        problems.append(f"unknown material.model {material['model']!r}")
    if material["model"] == "neo_hooke":
        material["k_ratio"] = 0.0
    if material["plane_mode"] not in ("plane_stress", "plane_strain"):
        problems.append(f"unknown material.plane_mode {material['plane_mode']!r}")
    if material["finite_split"] not in ("invariant_split", "stretch_split"):
        problems.append(f"unknown material.finite_split {material['finite_split']!r}")

    # fracture energy units
    if evolution.get("Gc_N_per_mm") is not None and evolution.get("Gc_N_per_m") is not None:
        problems.append("give only one of evolution.Gc_N_per_mm / Gc_N_per_m")
    if evolution.get("Gc_N_per_m") is not None:
        evolution["Gc_N_per_mm"] = evolution.pop("Gc_N_per_m") * 1e-3
    else:
        evolution.pop("Gc_N_per_m", None)
    _positive(evolution, "evolution", ("l_c_mm", "Gc_N_per_mm", "c_rule", "dt_s"),
              problems)
    steps = evolution.get("steps")
    if not isinstance(steps, int) or steps < 0:
        problems.append(f"evolution.steps must be a nonnegative integer, got {steps!r}")
    if scenario != "bar_1d":
        _positive(evolution, "evolution", ("du_mm",), problems)
    else:
        evolution.setdefault("du_mm", 0.0)
    eres = evolution.get("eps_res")
    if not (isinstance(eres, (int, float)) and 0 < eres <= 1e-2):
        problems.append(f"evolution.eps_res must lie in (0, 1e-2], got {eres!r}")

    # driving force: fill calibrated defaults, then check thresholds
    variant = driving.get("variant")
    if variant not in VARIANTS:
        problems.append(f"unknown driving.variant {variant!r}")
    if problems:
        raise ValidationError(problems)

    l_c = evolution["l_c_mm"]
    G_c = evolution["Gc_N_per_mm"]
    E = material["E_MPa"]
    sigma_c_default = critical_stress(E, G_c, l_c)
    if driving.get("sigma_c_MPa") is None:
        driving["sigma_c_MPa"] = sigma_c_default
    if driving.get("tau_c_MPa") is None:
        driving["tau_c_MPa"] = driving["sigma_c_MPa"] / 2.0
    if variant == "mohr_coulomb":
        rmt, rmc, m = driving.get("R_m_t_MPa"), driving.get("R_m_c_MPa"), driving.get("m_ratio")
        if rmt is None:
            rmt = driving["R_m_t_MPa"] = driving["sigma_c_MPa"]
        if rmc is None and m is not None:
            driving["R_m_c_MPa"] = m * rmt
        elif rmc is None:
            problems.append("mohr_coulomb needs R_m_c_MPa or m_ratio")
        if m is None and driving.get("R_m_c_MPa"):
            driving["m_ratio"] = driving["R_m_c_MPa"] / rmt
    if driving.get("eps_c") is None:
        driving["eps_c"] = driving["sigma_c_MPa"] / E
    if driving.get("lam_c") is None:
        driving["lam_c"] = 1.0 + driving["sigma_c_MPa"] / E
    for key in ("sigma_c_MPa", "tau_c_MPa", "eps_c"):
        if driving.get(key) is not None and driving[key] <= 0:
            problems.append(f"driving.{key} must be positive")
    if driving.get("lam_c") is not None and driving["lam_c"] <= 1.0:
        problems.append("driving.lam_c must exceed 1")
    if driving["stress_model"] is None:
        driving["stress_model"] = _default_stress_model(variant)
    if driving["stress_model"] not in ("degrade_all", "kg_split", "lambda_mu_split"):
        problems.append(f"unknown driving.stress_model {driving['stress_model']!r}")
    if variant == "beltrami_stretch" and material["model"] == "linear":
        problems.append("beltrami_stretch needs a finite-strain material")

    # scenario geometry defaults
    if scenario in ("mode_I", "mode_II"):
        if mesh["slit_half_length_mm"] is None:
            mesh["slit_half_length_mm"] = mesh["size_mm"] / 2.0
        _positive(mesh, "mesh", ("size_mm", "slit_half_length_mm"), problems)
        for key in ("nx", "ny"):
            if not isinstance(mesh[key], int) or mesh[key] < 4:
                problems.append(f"mesh.{key} must be an integer >= 4")
        if isinstance(mesh["ny"], int) and mesh["ny"] % 2 != 0:
            problems.append("mesh.ny must be even (slit lies on a mesh line)")
        if isinstance(mesh["nx"], int) and isinstance(mesh["size_mm"], (int, float)):
            dx = mesh["size_mm"] / mesh["nx"]
            ratio = mesh["slit_half_length_mm"] / dx
            if abs(ratio - round(ratio)) > 1e-9:
                problems.append(
                    "mesh.slit_half_length_mm must be a multiple of the cell size"
                )
    elif scenario == "brazilian":
        if mesh["arc_b_mm"] is None:
            mesh["arc_b_mm"] = 0.1 * mesh["diameter_mm"]
        _positive(mesh, "mesh", ("diameter_mm", "arc_b_mm"), problems)
    elif scenario == "conchoidal":
        if mesh["patch_mm"] is None:
            mesh["patch_mm"] = mesh["a_mm"]
        _positive(mesh, "mesh", ("a_mm", "patch_mm"), problems)
    elif scenario == "bar_1d":
        if mesh["half_length_mm"] is None:
            mesh["half_length_mm"] = 8.0 * l_c
        _positive(mesh, "mesh", ("half_length_mm",), problems)
        if mesh["n"] % 2 != 0:
            problems.append("mesh.n must be even for the 1D bar")

    if problems:
        raise ValidationError(problems)

    # regularization vs mesh resolution
    h = mesh_h_estimate(scenario, mesh, l_c)
    if l_c < 2.0 * h - 1e-12:
        problems.append(
            f"l_c = {l_c} must be at least twice the mesh size h = {h:.4g}"
        )

    if not isinstance(output.get("field_every"), int) or output["field_every"] < 0:
        problems.append("output.field_every must be a nonnegative integer")
    if not 0.0 < stop["post_peak_fraction"] < 1.0:
        problems.append("stop.post_peak_fraction must lie in (0, 1)")

    if problems:
        raise ValidationError(problems)
    return ScenarioConfig(scenario, mesh, material, driving, evolution, output, stop)


def _default_stress_model(variant):
    """Assembly degradation model when the config does not choose one.

    Energy-split drives degrade the tensile part of their own split in
    the hybrid solve; the Griffith and failure-criterion drives use the
    fully degraded stiffness.
    """
    return {
        "lambda_mu_split": "lambda_mu_split",
        "spectral_split": "lambda_mu_split",
        "KG_split": "kg_split",
    }.get(variant, "degrade_all")
