"""Run configuration: plain-text key = value files with flag overrides.

The echoed form lists every key (defaults made explicit, derived
``zeta`` included) and parses back to an identical configuration, which
is what the output manifests hash.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional

from .params import PhysParams

FORMAT_VERSION = "1"


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if value is None:
        return "none"
    return str(value)


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "1", "yes"):
        return True
    if t in ("false", "0", "no"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


@dataclass(frozen=True)
class RunConfig:
    """Flattened configuration for every subcommand."""

    # physical parameters
    G: float = 1.0
    nu: float = 0.25
    b: float = 1.0
    d: float = 1.0
    # grid
    L_over_zeta: float = 200.0
    N: int = 4096
    # potential: "frenkel" or "table:<path>"
    potential: str = "frenkel"
    # orchestration
    seed: int = 1234
    output: str = "out"
    overwrite: bool = False
    format_version: str = FORMAT_VERSION
    # extension block
    ylevels_y_min_over_zeta: float = 0.1
    ylevels_y_max_over_zeta: float = 10.0
    ylevels_count: int = 24
    ylevels_mirrored: bool = True
    # energy block
    energy_box_radii_over_zeta: str = "5,10,20,40"
    energy_n_perturbations: int = 10
    energy_quad_levels: int = 192
    energy_y_max_over_zeta: float = 400.0
    energy_pert_seed: int = 2024
    # dynamics block
    dynamics_dt: float = 0.1
    dynamics_T_end: float = 50.0
    dynamics_adapt: bool = True
    dynamics_method: str = "semi_implicit"
    dynamics_bump_amp: float = 0.1
    dynamics_bump_width_over_zeta: float = 1.0
    dynamics_snapshot_times: str = ""
    # static block
    static_dt0: float = 0.5
    static_res_tol: Optional[float] = None
    static_max_iters: int = 20000
    static_newton: bool = True
    static_init: str = "tanh"  # tanh | analytic | background:<width_over_zeta>

    def validate(self) -> None:
        if self.G <= 0:
            raise ValueError("config key 'G' must be positive")
        if not 0.0 < self.nu < 0.5:
            raise ValueError(f"config key 'nu' must lie in (0, 1/2), got {self.nu}")
        if self.b <= 0:
            raise ValueError("config key 'b' must be positive")
        if self.d <= 0:
            raise ValueError("config key 'd' must be positive")
        if self.L_over_zeta <= 0:
            raise ValueError("config key 'L_over_zeta' must be positive")
        if self.N % 2 != 0 or self.N < 4:
            raise ValueError(f"config key 'N' must be even and >= 4, got {self.N}")
        if self.dynamics_method not in ("semi_implicit", "etd"):
            raise ValueError("config key 'dynamics_method' must be semi_implicit or etd")
        if not (self.potential == "frenkel" or self.potential.startswith("table:")):
            raise ValueError("config key 'potential' must be 'frenkel' or 'table:<path>'")

    @property
    def params(self) -> PhysParams:
        return PhysParams(G=self.G, nu=self.nu, b=self.b, d=self.d)

    @property
    def zeta(self) -> float:
        return self.params.zeta

    def echo(self) -> str:
        """Canonical text form; every key explicit, derived zeta included."""
        lines = []
        for f in sorted(fields(self), key=lambda f: f.name):
            lines.append(f"{f.name} = {_fmt(getattr(self, f.name))}")
        lines.append(f"zeta = {_fmt(self.zeta)}")
        return "\n".join(lines) + "\n"


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, text: str):
    ftype = _FIELD_TYPES[key]
    text = text.strip()
    if ftype == "bool":
        return _parse_bool(text)
    if ftype == "int":
        return int(text)
    if ftype == "float":
        return float(text)
    if ftype == "Optional[float]":
        return None if text.lower() == "none" else float(text)
    return text


def parse_config_text(text: str, base: RunConfig | None = None) -> RunConfig:
    """Parse key = value lines; unknown keys are rejected by name."""
    cfg = base or RunConfig()
    updates = {}
    zeta_seen = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "zeta":
            zeta_seen = float(value)
            continue
        if key not in _FIELD_TYPES:
            raise ValueError(f"line {lineno}: unknown config key '{key}'")
        updates[key] = _coerce(key, value)
    cfg = replace(cfg, **updates)
    cfg.validate()
    if zeta_seen is not None and abs(zeta_seen - cfg.zeta) > 1e-12 * max(1.0, cfg.zeta):
        raise ValueError(
            f"config key 'zeta' = {zeta_seen} inconsistent with d/(2(1-nu)) = {cfg.zeta}"
        )
    return cfg


def parse_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Load a config file (optional) and apply flag overrides on top."""
    cfg = RunConfig()
    if path is not None:
        text = Path(path).read_text()
        cfg = parse_config_text(text, cfg)
    if overrides:
        updates = {}
        for key, value in overrides.items():
            if key not in _FIELD_TYPES:
                raise ValueError(f"unknown config key '{key}'")
            updates[key] = _coerce(key, str(value))
        cfg = replace(cfg, **updates)
    cfg.validate()
    return cfg


def box_radii(cfg: RunConfig) -> list[float]:
    return [float(tok) * cfg.zeta for tok in cfg.energy_box_radii_over_zeta.split(",") if tok.strip()]


def snapshot_times(cfg: RunConfig) -> list[float]:
    if not cfg.dynamics_snapshot_times.strip():
        return []
    return [float(tok) for tok in cfg.dynamics_snapshot_times.split(",") if tok.strip()]
