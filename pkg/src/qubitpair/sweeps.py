"""Parameter sweeps over (time, temperature, coupling) with CSV/JSON output.

A sweep evaluates one quantity -- the state entries ("rho"), entanglement of
formation ("eof"), quantum discord ("qd") or normalised specific heat
("cs") -- over a one- or two-axis grid, always through the closed-form
propagator (never the ODE integrator; that is the validation suite's job).

Output rows follow a frozen schema (see ``SWEEP_HEADER``): populations and
the inner coherence are always present; measure columns not requested stay
empty (never 0).  Files are written with 17 significant digits, '.' decimal
separator, LF line endings and a mandatory header row, so identical specs
produce byte-identical files regardless of the worker count.
"""

from __future__ import annotations

import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import logsumexp

from .config import ConfigError, ConfigView, dump_config, load_config
from .correlations import binary_entropy, discord_xstate_batch
from .errors import DomainError, SingularSpectrumError
from .model import ModelParams
from .thermo import FLAG_OK, FLAG_SINGULAR, FLAG_UNCONVERGED, FLAG_DOMAIN, specific_heat_normalized

__all__ = [
    "GridSpec",
    "SweepSpec",
    "SWEEP_HEADER",
    "QUANTITIES",
    "AXES",
    "run_sweep",
    "run_figures",
    "FIGURE_NAMES",
]

SWEEP_HEADER = (
    "t",
    "beta",
    "K",
    "rho11",
    "rho22",
    "rho33",
    "rho44",
    "re_rho23",
    "im_rho23",
    "eof",
    "qd",
    "cc",
    "tc",
    "cs_n",
    "quality_flag",
)

QUANTITIES = ("rho", "eof", "qd", "cs")
AXES = ("time", "beta", "kbT", "K")
FORMATS = ("csv", "json")

_MEASURE_COLUMNS = {
    "rho": (),
    "eof": ("eof",),
    "qd": ("qd", "cc", "tc"),
    "cs": ("cs_n",),
}


@dataclass(frozen=True)
class GridSpec:
    """One sweep axis: either (lo, hi, count, scale) or an explicit value list."""

    lo: float = 0.0
    hi: float = 0.0
    count: int = 1
    scale: str = "linear"
    values: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.values is not None:
            if len(self.values) < 1:
                raise ValueError("explicit value list must be nonempty")
            return
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count!r}")
        if self.scale not in ("linear", "log"):
            raise ValueError(f"scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and self.lo <= 0:
            raise ValueError(f"log grids require min > 0, got {self.lo!r}")
        if self.hi < self.lo:
            raise ValueError(f"max {self.hi!r} below min {self.lo!r}")

    def build(self) -> np.ndarray:
        if self.values is not None:
            return np.asarray(self.values, dtype=float)
        if self.count == 1:
            return np.array([self.lo])
        if self.scale == "log":
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)

    def describe(self) -> dict[str, str]:
        if self.values is not None:
            return {"values": ", ".join(_fmt(v) for v in self.values)}
        return {
            "min": _fmt(self.lo),
            "max": _fmt(self.hi),
            "count": str(self.count),
            "scale": self.scale,
        }


@dataclass(frozen=True)
class SweepSpec:
    """Validated description of one sweep run."""

    quantity: str
    axes: tuple[str, ...]
    grids: dict[str, GridSpec]
    fixed: dict[str, float] = field(default_factory=dict)
    epsilon: float = 0.001
    gamma: float = 10.0
    gamma0: float = 0.1
    output: Path = Path("sweep.csv")
    fmt: str = "csv"

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise ValueError(f"field 'quantity': expected one of {QUANTITIES}, got {self.quantity!r}")
        if not 1 <= len(self.axes) <= 2:
            raise ValueError(f"field 'axes': expected one or two axes, got {self.axes!r}")
        for axis in self.axes:
            if axis not in AXES:
                raise ValueError(f"field 'axes': unknown axis {axis!r} (choices: {AXES})")
            if axis not in self.grids:
                raise ValueError(f"field '{axis}': swept axis needs a grid (min/max/count or values)")
        if len(set(self.axes)) != len(self.axes):
            raise ValueError(f"field 'axes': duplicate axis in {self.axes!r}")
        if "beta" in self.axes and "kbT" in self.axes:
            raise ValueError("field 'axes': beta and kbT are two spellings of one axis; pick one")
        for axis in self.axes:
            if axis in self.fixed or (axis == "beta" and "kbT" in self.fixed) or (
                axis == "kbT" and "beta" in self.fixed
            ):
                raise ValueError(f"field '{axis}': swept axis also given as a fixed value")
        if "beta" in self.fixed and "kbT" in self.fixed:
            raise ValueError("field 'beta': beta and kbT both fixed; they are mutually exclusive")
        has_temp = "beta" in self.axes or "kbT" in self.axes or "beta" in self.fixed or "kbT" in self.fixed
        if not has_temp:
            raise ValueError("field 'beta': temperature missing (fix beta or kbT, or sweep one)")
        for name in ("time", "K"):
            if name not in self.axes and name not in self.fixed:
                raise ValueError(f"field '{name}': missing (fix it or sweep it)")
        if self.fmt not in FORMATS:
            raise ValueError(f"field 'format': expected one of {FORMATS}, got {self.fmt!r}")
        if "kbT" in self.fixed and self.fixed["kbT"] <= 0:
            raise ValueError("field 'kbT': must be > 0")
        if "time" in self.fixed and self.fixed["time"] < 0:
            raise ValueError("field 'time': must be >= 0")
        if "beta" in self.fixed and self.fixed["beta"] < 0:
            raise ValueError("field 'beta': must be >= 0")

    @classmethod
    def from_file(cls, path: str | Path) -> "SweepSpec":
        cfg = ConfigView(load_config(path), source=str(path))
        return cls.from_config(cfg)

    @classmethod
    def from_config(cls, cfg: ConfigView) -> "SweepSpec":
        quantity = cfg.get_enum("quantity", QUANTITIES)
        if quantity is None:
            raise ConfigError(f"{cfg.source}: missing required field 'quantity'")
        axes = cfg.get_str_list("axes")
        if not axes:
            raise ConfigError(f"{cfg.source}: missing required field 'axes'")
        grids: dict[str, GridSpec] = {}
        for axis in axes:
            values = cfg.get_float_list(f"{axis}.values")
            if values is not None:
                grids[axis] = GridSpec(values=values)
                continue
            lo = cfg.get_float(f"{axis}.min")
            hi = cfg.get_float(f"{axis}.max")
            if lo is None or hi is None:
                raise ConfigError(
                    f"{cfg.source}: field '{axis}': swept axis needs {axis}.min/{axis}.max "
                    f"(or {axis}.values)"
                )
            grids[axis] = GridSpec(
                lo=lo,
                hi=hi,
                count=cfg.get_int(f"{axis}.count", 101),
                scale=cfg.get_enum(f"{axis}.scale", ("linear", "log"), "linear"),
            )
        fixed = {}
        for name in ("time", "beta", "kbT", "K"):
            if name in axes:
                continue
            value = cfg.get_float(name)
            if value is not None:
                fixed[name] = value
        try:
            return cls(
                quantity=quantity,
                axes=tuple(axes),
                grids=grids,
                fixed=fixed,
                epsilon=cfg.get_float("epsilon", 0.001),
                gamma=cfg.get_float("gamma", 10.0),
                gamma0=cfg.get_float("gamma0", 0.1),
                output=Path(cfg.raw("output", "sweep.csv")),
                fmt=cfg.get_enum("format", FORMATS, "csv"),
            )
        except ValueError as exc:
            raise ConfigError(f"{cfg.source}: {exc}") from exc


# ---------------------------------------------------------------------------
# Grid evaluation
# ---------------------------------------------------------------------------


def _resolve_points(spec: SweepSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Flattened row-major (t, beta, K) arrays for the whole grid."""
    axis_values = [spec.grids[a].build() for a in spec.axes]
    mesh = np.meshgrid(*axis_values, indexing="ij") if axis_values else []
    n = mesh[0].size if mesh else 1
    cols: dict[str, np.ndarray] = {}
    for name, grid in zip(spec.axes, mesh):
        cols[name] = grid.reshape(-1)
    t = cols.get("time", np.full(n, spec.fixed.get("time", 0.0)))
    k = cols.get("K", np.full(n, spec.fixed.get("K", 0.0)))
    if "beta" in cols:
        beta = cols["beta"]
    elif "kbT" in cols:
        beta = 1.0 / cols["kbT"]
    elif "beta" in spec.fixed:
        beta = np.full(n, spec.fixed["beta"])
    else:
        beta = np.full(n, 1.0 / spec.fixed["kbT"])
    return t, beta, k


def _xstate_entries(t, beta, k, epsilon, gamma, gamma0):
    """Vectorised closed-form state entries for per-point (t, beta, K).

    Same algebra as ``evolve_closed_form``, broadcast over arrays; the
    absorbing population closes the trace exactly.
    """
    exponents = np.stack([beta * k, -beta * k, beta * epsilon, -beta * epsilon], axis=-1)
    log_z = logsumexp(exponents, axis=-1, keepdims=True)
    w_singlet, w_triplet, w11, w00 = np.moveaxis(np.exp(exponents - log_z), -1, 0)
    wc = 0.5 * (w_singlet + w_triplet)
    ws = 0.5 * (w_singlet - w_triplet)
    d = 0.5 * gamma0 * t + (0.5 * gamma0 / gamma) * np.expm1(-gamma * t)
    e2 = np.exp(-2.0 * d)
    p00 = w00 * e2 * e2
    p_mid = e2 * ((1.0 - e2) * w00 + wc)
    coh = -e2 * ws
    p11 = 1.0 - p00 - 2.0 * p_mid
    return p00, p_mid, p11, coh


def _eval_chunk(spec: SweepSpec, t, beta, k) -> dict[str, np.ndarray | list]:
    p00, p_mid, p11, coh = _xstate_entries(t, beta, k, spec.epsilon, spec.gamma, spec.gamma0)
    out: dict[str, np.ndarray | list] = {
        "t": t,
        "beta": beta,
        "K": k,
        "rho11": p00,
        "rho22": p_mid,
        "rho33": p_mid,
        "rho44": p11,
        "re_rho23": coh,
        "im_rho23": np.zeros_like(coh),
        "quality_flag": [FLAG_OK] * len(t),
    }
    if spec.quantity == "eof":
        conc = np.maximum(0.0, 2.0 * (np.abs(coh) - np.sqrt(np.clip(p00 * p11, 0.0, None))))
        out["eof"] = binary_entropy(0.5 * (1.0 + np.sqrt(1.0 - np.clip(conc, 0.0, 1.0) ** 2)))
    elif spec.quantity == "qd":
        tc, cc, qd = discord_xstate_batch(p00, p_mid, p_mid, p11, np.abs(coh))
        out["tc"], out["cc"], out["qd"] = tc, cc, qd
    elif spec.quantity == "cs":
        params_cache: dict[float, ModelParams] = {}
        cs = np.empty(len(t))
        flags = out["quality_flag"]
        for i in range(len(t)):
            params = params_cache.get(k[i])
            if params is None:
                params = ModelParams(
                    coupling_k=float(k[i]), epsilon=spec.epsilon,
                    gamma=spec.gamma, gamma0=spec.gamma0,
                )
                params_cache[float(k[i])] = params
            try:
                value, converged = specific_heat_normalized(
                    float(t[i]), float(beta[i]), params, full_output=True
                )
                cs[i] = value
                if not converged:
                    flags[i] = FLAG_UNCONVERGED
            except SingularSpectrumError:
                cs[i] = math.nan
                flags[i] = FLAG_SINGULAR
            except DomainError:
                cs[i] = math.nan
                flags[i] = FLAG_DOMAIN
        out["cs_n"] = cs
    return out


def evaluate_sweep(spec: SweepSpec, threads: int = 1) -> list[dict]:
    """Rows (dicts keyed by SWEEP_HEADER) in deterministic row-major order.

    Worker count never changes values: chunks are elementwise-independent
    and reassembled in index order.
    """
    t, beta, k = _resolve_points(spec)
    n = len(t)
    threads = max(1, min(int(threads), n))
    if threads == 1:
        chunks = [_eval_chunk(spec, t, beta, k)]
    else:
        bounds = np.linspace(0, n, threads + 1, dtype=int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_eval_chunk, spec, t[a:b], beta[a:b], k[a:b])
                for a, b in zip(bounds[:-1], bounds[1:])
                if b > a
            ]
            chunks = [f.result() for f in futures]
    measure_cols = _MEASURE_COLUMNS[spec.quantity]
    rows: list[dict] = []
    for chunk in chunks:
        size = len(chunk["t"])
        for i in range(size):
            row = {name: None for name in SWEEP_HEADER}
            for name in ("t", "beta", "K", "rho11", "rho22", "rho33", "rho44",
                         "re_rho23", "im_rho23"):
                row[name] = float(chunk[name][i])
            for name in measure_cols:
                value = float(chunk[name][i])
                row[name] = None if math.isnan(value) else value
            row["quality_flag"] = chunk["quality_flag"][i]
            rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# Serialisation
# ---------------------------------------------------------------------------


def _fmt(x: float) -> str:
    return "%.17g" % x


def rows_to_csv(rows: list[dict]) -> str:
    lines = [",".join(SWEEP_HEADER)]
    for row in rows:
        fields = []
        for name in SWEEP_HEADER:
            value = row[name]
            if value is None:
                fields.append("")
            elif isinstance(value, str):
                fields.append(value)
            else:
                fields.append(_fmt(value))
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


def rows_to_json(rows: list[dict]) -> str:
    return json.dumps(rows, indent=1) + "\n"


def write_rows_csv(rows: list[dict], path: Path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(rows_to_csv(rows))


def write_rows_json(rows: list[dict], path: Path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(rows_to_json(rows))


def run_sweep(spec: SweepSpec, threads: int = 1, out=None) -> Path:
    """Evaluate the spec, write its output file, print a one-line summary."""
    if out is None:
        out = sys.stdout
    rows = evaluate_sweep(spec, threads=threads)
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    if spec.fmt == "csv":
        write_rows_csv(rows, spec.output)
    else:
        write_rows_json(rows, spec.output)
    flagged = sum(1 for r in rows if r["quality_flag"])
    print(
        f"wrote {spec.output} ({len(rows)} rows, quantity={spec.quantity}, "
        f"axes={'x'.join(spec.axes)}, flagged={flagged})",
        file=out,
    )
    return spec.output


# ---------------------------------------------------------------------------
# Figure-family sweeps
# ---------------------------------------------------------------------------

_T_AXIS = GridSpec(0.0, 5.0, 201, "linear")
_KBT_AXIS = GridSpec(0.01, 10.0, 201, "log")
_K_AXIS = GridSpec(0.0, 300.0, 201, "linear")
_BETA_AXIS = GridSpec(0.01, 50.0, 201, "log")


def _figure_specs(outdir: Path) -> dict[str, SweepSpec]:
    def spec(name, **kw):
        kw.setdefault("fmt", "csv")
        kw["output"] = outdir / f"{name}.csv"
        return SweepSpec(**kw)

    return {
        "fig1a": spec("fig1a", quantity="cs", axes=("time", "kbT"),
                      grids={"time": GridSpec(values=(0.5, 1.0, 2.0)), "kbT": _KBT_AXIS},
                      fixed={"K": 50.0}),
        "fig1b": spec("fig1b", quantity="cs", axes=("time", "kbT"),
                      grids={"time": GridSpec(values=(0.5, 1.0, 2.0)), "kbT": _KBT_AXIS},
                      fixed={"K": 100.0}),
        "fig2": spec("fig2", quantity="cs", axes=("kbT", "time"),
                     grids={"kbT": GridSpec(values=(1.0, 2.0, 5.0)), "time": _T_AXIS},
                     fixed={"K": 20.0}),
        "fig3": spec("fig3", quantity="eof", axes=("K", "time"),
                     grids={"K": _K_AXIS, "time": _T_AXIS}, fixed={"beta": 0.1}),
        "fig4a": spec("fig4a", quantity="eof", axes=("beta", "K"),
                      grids={"beta": _BETA_AXIS, "K": _K_AXIS}, fixed={"time": 0.0}),
        "fig4b": spec("fig4b", quantity="eof", axes=("beta", "K"),
                      grids={"beta": _BETA_AXIS, "K": _K_AXIS}, fixed={"time": 20.0}),
        "fig5a": spec("fig5a", quantity="eof", axes=("beta", "time"),
                      grids={"beta": GridSpec(values=(0.05, 0.1, 50.0)), "time": _T_AXIS},
                      fixed={"K": 20.0}),
        "fig5b": spec("fig5b", quantity="eof", axes=("K", "time"),
                      grids={"K": GridSpec(values=(20.0, 40.0, 250.0)), "time": _T_AXIS},
                      fixed={"beta": 0.1}),
        "fig6a": spec("fig6a", quantity="qd", axes=("K", "time"),
                      grids={"K": _K_AXIS, "time": _T_AXIS}, fixed={"beta": 0.01}),
        "fig6b": spec("fig6b", quantity="qd", axes=("K", "time"),
                      grids={"K": _K_AXIS, "time": _T_AXIS}, fixed={"beta": 0.1}),
        "fig7a": spec("fig7a", quantity="qd", axes=("beta", "time"),
                      grids={"beta": GridSpec(values=(0.01, 0.02, 10.0)), "time": _T_AXIS},
                      fixed={"K": 100.0}),
        "fig7b": spec("fig7b", quantity="qd", axes=("K", "time"),
                      grids={"K": GridSpec(values=(10.0, 20.0, 200.0)), "time": _T_AXIS},
                      fixed={"beta": 0.1}),
        "fig8a": spec("fig8a", quantity="qd", axes=("beta", "K"),
                      grids={"beta": _BETA_AXIS, "K": _K_AXIS}, fixed={"time": 0.1}),
        "fig8b": spec("fig8b", quantity="qd", axes=("beta", "K"),
                      grids={"beta": _BETA_AXIS, "K": _K_AXIS}, fixed={"time": 1.0}),
    }


FIGURE_NAMES = tuple(_figure_specs(Path(".")).keys())


def run_figures(outdir: str | Path, threads: int = 1, out=None) -> list[Path]:
    """Emit every figure-family CSV plus a manifest of all parameters used."""
    if out is None:
        out = sys.stdout
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    specs = _figure_specs(outdir)
    written = []
    manifest: dict[str, str] = {
        "epsilon": _fmt(0.001),
        "gamma": _fmt(10.0),
        "gamma0": _fmt(0.1),
    }
    for name, spec in specs.items():
        written.append(run_sweep(spec, threads=threads, out=out))
        manifest[f"{name}.file"] = spec.output.name
        manifest[f"{name}.quantity"] = spec.quantity
        manifest[f"{name}.axes"] = ", ".join(spec.axes)
        for axis in spec.axes:
            for key, value in spec.grids[axis].describe().items():
                manifest[f"{name}.{axis}.{key}"] = value
        for key, value in sorted(spec.fixed.items()):
            manifest[f"{name}.{key}"] = _fmt(value)
    manifest_path = outdir / "manifest.txt"
    with open(manifest_path, "w", newline="\n") as fh:
        fh.write(dump_config(manifest))
    print(f"wrote {manifest_path}", file=out)
    return written + [manifest_path]
