"""Flat key-value config files (YAML; JSON is accepted as a subset).

Units are carried by the key suffix: ``C_T_fF``, ``L_R1_nH``,
``E_J_over_EC``, ``phi_ext_over_phi0``. Example::

    C_T_fF: 100
    C_R1_fF: 400
    C_R2_fF: 400
    C_q1_fF: 8
    C_q2_fF: 8
    L_R1_nH: 0.8
    L_R2_nH: 0.8
    E_J_over_EC: 70
    phi_ext_over_phi0: 0.0
"""
from __future__ import annotations

import math

import yaml

from .optical import CavityParams
from .params import SI, CircuitParams, PhysicalConstants

__all__ = ["ConfigError", "read_config", "circuit_from_config", "circuit_to_config",
           "cavity_from_config", "CIRCUIT_REQUIRED"]

fF, nH = 1e-15, 1e-9
CIRCUIT_REQUIRED = ("C_T_fF", "C_q1_fF", "C_q2_fF", "C_R1_fF", "C_R2_fF", "L_R1_nH", "L_R2_nH")
CIRCUIT_OPTIONAL = ("E_J_over_EC", "E_J1_over_EC", "E_J2_over_EC", "C_R1R2_fF",
                    "phi_ext_over_phi0", "convention")
CAVITY_KEYS = ("volume_um3", "omega_over_2pi_hz", "linewidth_rad_s", "linewidth_over_2pi_hz",
               "dipole_Cm")


class ConfigError(ValueError):
    pass


class Config(dict):
    """Mapping of key -> value that remembers each key's line number."""

    def __init__(self, values: dict, lines: dict, source: str):
        super().__init__(values)
        self.lines = lines
        self.source = source

    def where(self, key: str) -> str:
        line = self.lines.get(key)
        return f"{self.source}:{line}" if line else self.source

    def number(self, key: str, default=None) -> float:
        if key not in self:
            if default is None:
                raise ConfigError(f"{self.source}: missing required key {key!r}")
            return default
        value = self[key]
        if isinstance(value, str):
            # YAML 1.1 leaves forms like 1.0e4 (no exponent sign) as strings
            try:
                value = float(value)
            except ValueError:
                pass
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            raise ConfigError(f"{self.where(key)}: {key} must be a finite number, got {value!r}")
        return float(value)


def read_config(path) -> Config:
    path = str(path)
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from None
    try:
        node = yaml.compose(text)
        values = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        loc = f"{path}:{mark.line + 1}" if mark is not None else path
        raise ConfigError(f"{loc}: parse error: {getattr(exc, 'problem', exc)}") from None
    if values is None:
        values, node = {}, None
    if not isinstance(values, dict) or (node is not None and not isinstance(node, yaml.MappingNode)):
        raise ConfigError(f"{path}: config must be a flat key-value mapping")
    lines = {}
    for key_node, value_node in (node.value if node is not None else []):
        if isinstance(value_node, (yaml.MappingNode, yaml.SequenceNode)):
            raise ConfigError(f"{path}:{key_node.start_mark.line + 1}: "
                              f"{key_node.value} must be a scalar (flat namespace)")
        lines[key_node.value] = key_node.start_mark.line + 1
    return Config(values, lines, path)


def circuit_from_config(cfg: Config, constants: PhysicalConstants = SI) -> CircuitParams:
    for key in CIRCUIT_REQUIRED:
        cfg.number(key)
    if "E_J_over_EC" in cfg:
        r1 = r2 = cfg.number("E_J_over_EC")
    elif "E_J1_over_EC" in cfg or "E_J2_over_EC" in cfg:
        r1, r2 = cfg.number("E_J1_over_EC"), cfg.number("E_J2_over_EC")
    else:
        raise ConfigError(f"{cfg.source}: missing required key 'E_J_over_EC'")
    C_T = cfg.number("C_T_fF") * fF
    E_C = constants.elementary_charge**2 / (2 * C_T)
    try:
        cp = CircuitParams(
            C_T=C_T,
            C_q1=cfg.number("C_q1_fF") * fF, C_q2=cfg.number("C_q2_fF") * fF,
            C_R1=cfg.number("C_R1_fF") * fF, C_R2=cfg.number("C_R2_fF") * fF,
            L_R1=cfg.number("L_R1_nH") * nH, L_R2=cfg.number("L_R2_nH") * nH,
            E_J1=r1 * E_C, E_J2=r2 * E_C,
            C_R1R2=cfg.number("C_R1R2_fF", 0.0) * fF,
        )
    except ValueError as exc:
        raise ConfigError(f"{cfg.source}: {exc}") from None
    return cp.at_flux(cfg.number("phi_ext_over_phi0", 0.0), constants)


def circuit_to_config(cp: CircuitParams, constants: PhysicalConstants = SI) -> dict:
    """Inverse of `circuit_from_config` (up to float round-off)."""
    E_C = constants.elementary_charge**2 / (2 * cp.C_T)
    return {
        "C_T_fF": cp.C_T / fF,
        "C_q1_fF": cp.C_q1 / fF,
        "C_q2_fF": cp.C_q2 / fF,
        "C_R1_fF": cp.C_R1 / fF,
        "C_R2_fF": cp.C_R2 / fF,
        "L_R1_nH": cp.L_R1 / nH,
        "L_R2_nH": cp.L_R2 / nH,
        "E_J1_over_EC": cp.E_J1 / E_C,
        "E_J2_over_EC": cp.E_J2 / E_C,
        "C_R1R2_fF": cp.C_R1R2 / fF,
        "phi_ext_over_phi0": cp.flux_over_phi0(constants),
    }


def cavity_from_config(cfg: Config) -> CavityParams:
    """Resonant crossed-cavity parameters.

    The linewidth is given either as ``linewidth_rad_s`` (decay rate) or
    ``linewidth_over_2pi_hz``.
    """
    volume = cfg.number("volume_um3") * 1e-18
    omega = 2 * math.pi * cfg.number("omega_over_2pi_hz")
    if "linewidth_rad_s" in cfg:
        gamma, unit = cfg.number("linewidth_rad_s"), "rad/s"
    elif "linewidth_over_2pi_hz" in cfg:
        gamma, unit = cfg.number("linewidth_over_2pi_hz"), "hz"
    else:
        raise ConfigError(f"{cfg.source}: missing required key 'linewidth_rad_s'")
    dipole = cfg.number("dipole_Cm") if "dipole_Cm" in cfg else None
    try:
        return CavityParams.resonant(volume, omega, gamma, unit, dipole)
    except ValueError as exc:
        raise ConfigError(f"{cfg.source}: {exc}") from None
