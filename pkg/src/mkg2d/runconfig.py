"""Run configuration: line-oriented `key = value` files plus overrides.

The config format is deliberately dependency-free: one `key = value`
per line, `#` starts a comment, blank lines ignored.  Unknown keys are
rejected.  All keys are documented in the CLI --help text.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dynamics import EvolveConfig
from .errors import ConfigurationError
from .gauge import RegularityTriple
from .spectral import GridSpec

__all__ = ["RunConfig", "parse_config_text", "load_config", "CONFIG_KEYS"]

# key -> (type, default)
CONFIG_KEYS = {
    "grid_n": (int, 64),
    "period": (float, 6.283185307179586),
    "dealias_fraction": (float, 2.0 / 3.0),
    "s": (float, 1.0),
    "r": (float, 1.0),
    "l": (float, 1.0),
    "eps_tilde": (float, 0.01),
    "dt": (float, 1e-3),
    "t_end": (float, 1.0),
    "rhs_form": (str, "direct"),
    "integrator": (str, "etd_rk4"),
    "snapshot_stride": (int, 0),
    "diag_stride": (int, 1),
    "cfl_limit": (float, 5.0),
    "seed": (int, 0),
    "data_kind": (str, "smooth_gaussian"),
    "data_file": (str, ""),
    "out_dir": (str, "out"),
    "mass": (float, 1.0),
    "amplitude": (float, 0.25),
    "k0": (float, 2.0),
    "override_admissibility": (bool, False),
}

_DATA_KINDS = ("rough_random", "smooth_gaussian", "file")


def _coerce(key: str, raw: str):
    typ, _ = CONFIG_KEYS[key]
    if typ is bool:
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigurationError(f"{key}: cannot parse boolean from {raw!r}")
    try:
        return typ(raw.strip())
    except ValueError:
        raise ConfigurationError(f"{key}: cannot parse {typ.__name__} from {raw!r}")


def parse_config_text(text: str) -> dict:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigurationError(f"line {lineno}: expected `key = value`")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        values[key] = _coerce(key, raw)
    return values


@dataclass
class RunConfig:
    """Everything a `simulate` run needs; seed fixes the data bitwise."""

    grid: GridSpec
    regularity: RegularityTriple
    evolve: EvolveConfig
    seed: int = 0
    data_kind: str = "smooth_gaussian"
    data_file: str = ""
    out_dir: str = "out"
    mass: float = 1.0
    amplitude: float = 0.25
    k0: float = 2.0
    override_admissibility: bool = False
    raw: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.data_kind not in _DATA_KINDS:
            raise ConfigurationError(f"unknown data_kind {self.data_kind!r}")
        if self.data_kind == "file" and not self.data_file:
            raise ConfigurationError("data_kind=file requires data_file")

    @classmethod
    def from_values(cls, values: dict) -> "RunConfig":
        merged = {k: d for k, (_, d) in CONFIG_KEYS.items()}
        for k, v in values.items():
            if k not in CONFIG_KEYS:
                raise ConfigurationError(f"unknown config key {k!r}")
            merged[k] = v
        grid = GridSpec(
            nx=merged["grid_n"],
            ny=merged["grid_n"],
            period=merged["period"],
            dealias_fraction=merged["dealias_fraction"],
        )
        reg = RegularityTriple(
            s=merged["s"], r=merged["r"], l=merged["l"], eps_tilde=merged["eps_tilde"]
        )
        evolve = EvolveConfig(
            dt=merged["dt"],
            t_end=merged["t_end"],
            rhs_form=merged["rhs_form"],
            integrator=merged["integrator"],
            snapshot_stride=merged["snapshot_stride"],
            diag_stride=merged["diag_stride"],
            cfl_limit=merged["cfl_limit"],
        )
        return cls(
            grid=grid,
            regularity=reg,
            evolve=evolve,
            seed=merged["seed"],
            data_kind=merged["data_kind"],
            data_file=merged["data_file"],
            out_dir=merged["out_dir"],
            mass=merged["mass"],
            amplitude=merged["amplitude"],
            k0=merged["k0"],
            override_admissibility=merged["override_admissibility"],
            raw=dict(merged),
        )


def load_config(path) -> RunConfig:
    try:
        with open(path, "r") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}")
    return RunConfig.from_values(parse_config_text(text))
