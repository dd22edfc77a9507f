"""
Scenario runner: config files, the built-in catalog, CSV/JSON output and the
``susy-dirac`` command.

Config files are plain ``key = value`` lines. Flat keys describe the system,
grid, tolerances and outputs; each ``[function]`` block adds a transformation
function and one ``[target]`` block selects the solution to transform::

    name = demo
    lambda = 5
    mu = 6

    [function]
    kind = general
    ky_squared = 313/4

    [function]
    kind = regular
    n = 2

    [target]
    kind = regular
    n = 1

``kind`` is ``regular`` or ``nonregular`` (field ``n``) or ``general``
(``ky`` or ``ky_squared``, optional complex ``c1`` and ``c2``). ``#`` starts a
comment.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from . import diracmodel as dm
from . import jetcalc as jc
from . import susyengine as se
from . import verifier as vf
from .errors import (
    BranchCutError,
    DivisionByZeroJet,
    InvalidC,
    ModeOutOfRange,
    NonTerminatingSeries,
    ParseError,
    QuadratureUnderflow,
    SpecError,
    WronskianZero,
    ZeroKy,
)
from .jetcalc import Jet
from .susyengine import General, Nonregular, Regular

__all__ = [
    "GridSpec",
    "Tolerances",
    "Outputs",
    "ScenarioConfig",
    "ScenarioResult",
    "load_config",
    "parse_config",
    "format_config",
    "builtin_config",
    "list_scenarios",
    "run_scenario",
    "write_csv",
    "write_json",
    "summary_dict",
    "main",
]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_REALITY = 2
EXIT_RESIDUAL = 3
EXIT_SINGULAR = 4

CSV_HEADER = "x,V,ReU,ImU,density_transformed,density_initial"
CHUNK_POINTS = 256
THREADS_ENV = "SUSY_DIRAC_THREADS"

SINGULAR_ERRORS = (
    WronskianZero,
    DivisionByZeroJet,
    QuadratureUnderflow,
    NonTerminatingSeries,
    BranchCutError,
    InvalidC,
    FloatingPointError,
)
CONFIG_ERRORS = (ParseError, SpecError, ModeOutOfRange, ZeroKy)


@dataclass(frozen=True)
class GridSpec:
    x_min: float = -6.0
    x_max: float = 6.0
    points: int = 1201

    def samples(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.points)


@dataclass(frozen=True)
class Tolerances:
    reality: float = se.DEFAULT_REALITY_TOL
    residual: float = 1e-7


@dataclass(frozen=True)
class Outputs:
    csv_path: str | None = None
    json_path: str | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    """A fully specified run: system, transformation, grid and gates.

    An empty ``functions`` tuple means "no transformation": the initial
    system is sampled and checked on its own.
    """

    name: str
    lam: float
    mu: float
    functions: tuple
    target: object
    grid: GridSpec = GridSpec()
    prominence_frac: float = vf.DEFAULT_PROMINENCE
    tolerances: Tolerances = Tolerances()
    outputs: Outputs = Outputs()
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "functions", tuple(self.functions))
        if not self.name:
            raise ParseError("name must be nonempty", field="name")
        for key, val in (("lambda", self.lam), ("mu", self.mu)):
            if not math.isfinite(val):
                raise ParseError(f"{key} must be finite", field=key)
        if self.grid.points < 3:
            raise ParseError(f"points must be >= 3, got {self.grid.points}", field="points")
        if not self.grid.x_min < self.grid.x_max:
            raise ParseError("x_min must be below x_max", field="x_min")
        if not self.prominence_frac >= 0:
            raise ParseError("prominence_frac must be nonnegative", field="prominence_frac")
        if not (self.tolerances.reality > 0 and self.tolerances.residual > 0):
            raise ParseError("tolerances must be positive", field="tolerances")
        if self.target is None:
            raise ParseError("a [target] block is required", field="target")
        self.validate_spec()

    @property
    def params(self) -> dm.SystemParams:
        return dm.SystemParams(self.lam, self.mu)

    def validate_spec(self):
        """Check selectors and energy distinctness; errors carry the field path."""
        if self.functions:
            self.spec()
        else:
            try:
                self.target.validate(self.params)
            except (ModeOutOfRange, SpecError) as exc:
                raise ParseError(str(exc), field="target") from exc
        if abs(self.target.ky(self.params)) <= dm.ZERO_KY_TOL:
            raise ParseError("target ky must be nonzero", field="target")

    def spec(self) -> se.TransformationSpec:
        try:
            return se.TransformationSpec(self.params, self.functions, self.target)
        except SpecError as exc:
            path = str(exc).split(":", 1)[0]
            raise ParseError(str(exc), field=path) from exc

    def energies(self) -> list:
        return [se.selector_energy(s, self.params) for s in self.functions]

    def energies_exact(self) -> list:
        lam, mu = _exact(self.lam), _exact(self.mu)
        return [se.selector_energy_exact(s, lam, mu) for s in self.functions]

    def with_overrides(self, **kw) -> ScenarioConfig:
        grid = replace(self.grid, **{k: kw[k] for k in ("x_min", "x_max", "points") if kw.get(k) is not None})
        tol = replace(
            self.tolerances,
            **{k: kw[f"{k}_tol"] for k in ("reality", "residual") if kw.get(f"{k}_tol") is not None},
        )
        out = replace(self.outputs, **{k: kw[k] for k in ("csv_path", "json_path") if kw.get(k) is not None})
        prom = kw.get("prominence_frac")
        return replace(
            self,
            grid=grid,
            tolerances=tol,
            outputs=out,
            prominence_frac=self.prominence_frac if prom is None else prom,
        )


@dataclass
class ScenarioResult:
    name: str
    reality: se.RealityReport
    energies: list
    energies_exact: list
    residuals: dict
    peaks: vf.PeakReport
    profiles: dict
    exit_code: int
    config: ScenarioConfig | None = field(default=None, repr=False)


def _exact(value) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


# config text ----------------------------------------------------------------

_TOP_KEYS = {
    "name", "description", "lambda", "mu", "x_min", "x_max", "points", "prominence_frac",
    "reality_tol", "residual_tol", "csv_path", "json_path",
}
_BLOCK_KEYS = {"kind", "n", "ky", "ky_squared", "c1", "c2"}


def _parse_real(text, line, key) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"expected a real number, got {text!r}", line, key) from None


def _parse_rational(text, line, key) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"expected a rational number, got {text!r}", line, key) from None


def _parse_int(text, line, key) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"expected an integer, got {text!r}", line, key) from None


def _parse_complex(text, line, key) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise ParseError(f"expected a complex number, got {text!r}", line, key) from None


def _build_selector(block: dict, path: str):
    start, fields = block["line"], block["fields"]

    def get(key):
        return fields[key] if key in fields else (None, None)

    kind, kline = get("kind")
    if kind is None:
        raise ParseError("missing 'kind'", start, f"{path}.kind")
    kind = kind.lower()
    if kind in ("regular", "nonregular"):
        text, line = get("n")
        if text is None:
            raise ParseError("missing 'n'", start, f"{path}.n")
        n = _parse_int(text, line, f"{path}.n")
        return Regular(n) if kind == "regular" else Nonregular(n)
    if kind == "general":
        c1 = _parse_complex(*get("c1"), f"{path}.c1") if "c1" in fields else 1.0
        c2 = _parse_complex(*get("c2"), f"{path}.c2") if "c2" in fields else 0.0
        if "ky_squared" in fields:
            q = _parse_rational(*get("ky_squared"), f"{path}.ky_squared")
            if q < 0:
                raise ParseError("ky_squared must be nonnegative", fields["ky_squared"][1], f"{path}.ky_squared")
            return General.from_ky_squared(q, c1, c2)
        if "ky" in fields:
            return General(_parse_real(*get("ky"), f"{path}.ky"), c1, c2)
        raise ParseError("general selector needs 'ky' or 'ky_squared'", start, f"{path}.ky")
    raise ParseError(f"unknown kind {kind!r}", kline, f"{path}.kind")


def parse_config(text: str) -> ScenarioConfig:
    """Parse config text into a validated :class:`ScenarioConfig`."""
    top = {}
    blocks = []
    current = None
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            header = line.strip("[] ").lower()
            if not line.endswith("]") or header not in ("function", "target"):
                raise ParseError(f"unknown section {line!r}", lineno)
            current = {"kind": header, "line": lineno, "fields": {}}
            blocks.append(current)
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        if current is None:
            if key not in _TOP_KEYS:
                raise ParseError(f"unknown key {key!r}", lineno, key)
            if key in top:
                raise ParseError(f"duplicate key {key!r}", lineno, key)
            top[key] = (value, lineno)
        else:
            if key not in _BLOCK_KEYS:
                raise ParseError(f"unknown key {key!r} in [{current['kind']}]", lineno, key)
            if key in current["fields"]:
                raise ParseError(f"duplicate key {key!r}", lineno, key)
            current["fields"][key] = (value, lineno)

    for key in ("name", "lambda", "mu"):
        if key not in top:
            raise ParseError(f"missing required key {key!r}", field=key)

    def opt(key, conv, default):
        return conv(top[key][0], top[key][1], key) if key in top else default

    functions = []
    target = None
    for block in blocks:
        if block["kind"] == "function":
            functions.append(_build_selector(block, f"functions[{len(functions)}]"))
        elif target is not None:
            raise ParseError("more than one [target] block", block["line"], "target")
        else:
            target = _build_selector(block, "target")
    if target is None:
        raise ParseError("a [target] block is required", field="target")

    grid = GridSpec(
        opt("x_min", _parse_real, GridSpec.x_min),
        opt("x_max", _parse_real, GridSpec.x_max),
        opt("points", _parse_int, GridSpec.points),
    )
    tol = Tolerances(opt("reality_tol", _parse_real, Tolerances.reality), opt("residual_tol", _parse_real, Tolerances.residual))
    outputs = Outputs(top.get("csv_path", (None,))[0], top.get("json_path", (None,))[0])
    return ScenarioConfig(
        name=top["name"][0],
        lam=_parse_real(*top["lambda"], "lambda"),
        mu=_parse_real(*top["mu"], "mu"),
        functions=tuple(functions),
        target=target,
        grid=grid,
        prominence_frac=opt("prominence_frac", _parse_real, vf.DEFAULT_PROMINENCE),
        tolerances=tol,
        outputs=outputs,
        description=top.get("description", ("",))[0],
    )


def load_config(source) -> ScenarioConfig:
    """Load a config from a path, ``"-"`` (stdin) or an open text stream."""
    if hasattr(source, "read"):
        return parse_config(source.read())
    if str(source) == "-":
        return parse_config(sys.stdin.read())
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read config: {exc}") from exc
    return parse_config(text)


def _format_selector(sel) -> list:
    if isinstance(sel, Regular):
        return ["kind = regular", f"n = {sel.n}"]
    if isinstance(sel, Nonregular):
        return ["kind = nonregular", f"n = {sel.n}"]
    lines = ["kind = general"]
    if sel.ky_squared is not None:
        lines.append(f"ky_squared = {sel.ky_squared}")
    else:
        lines.append(f"ky = {sel.ky_value!r}")
    lines += [f"c1 = {complex(sel.c1)!r}", f"c2 = {complex(sel.c2)!r}"]
    return lines


def format_config(cfg: ScenarioConfig) -> str:
    """Serialize a config so that ``parse_config(format_config(c)) == c``."""
    lines = [
        f"name = {cfg.name}",
        f"lambda = {cfg.lam!r}",
        f"mu = {cfg.mu!r}",
        f"x_min = {cfg.grid.x_min!r}",
        f"x_max = {cfg.grid.x_max!r}",
        f"points = {cfg.grid.points}",
        f"prominence_frac = {cfg.prominence_frac!r}",
        f"reality_tol = {cfg.tolerances.reality!r}",
        f"residual_tol = {cfg.tolerances.residual!r}",
    ]
    if cfg.description:
        lines.insert(1, f"description = {cfg.description}")
    if cfg.outputs.csv_path:
        lines.append(f"csv_path = {cfg.outputs.csv_path}")
    if cfg.outputs.json_path:
        lines.append(f"json_path = {cfg.outputs.json_path}")
    for sel in cfg.functions:
        lines += ["", "[function]"] + _format_selector(sel)
    lines += ["", "[target]"] + _format_selector(cfg.target)
    return "\n".join(lines) + "\n"


# built-in catalog -------------------------------------------------------------

_GENERAL_265 = General.from_ky_squared(Fraction(265, 4))

# name -> (description, lambda, mu, functions, target)
_CATALOG = {
    "fig1": ("initial system, lambda=3, mu=10, ground state", 3, 10, (), Regular(0)),
    "fig2-left": ("first order, bound state n=1 as seed; one added spike", 5, 6, (Regular(1),), Regular(2)),
    "fig2-right": ("first order, bound state n=3 as seed; three peaks", 5, 6, (Regular(3),), Regular(2)),
    "fig3": ("transformed density of the n=2 state, seed n=1", 5, 6, (Regular(1),), Regular(2)),
    "fig4-left": ("first order, nonregular lattice seed n=-1", 5, 6, (Nonregular(-1),), Regular(2)),
    "fig4-right": (
        "first order, lambda=2, mu=16, second-branch seed at ky^2=1105/4",
        2, 16, (General.from_ky_squared(Fraction(1105, 4), 0.0, 1.0),), Regular(1),
    ),
    "fig5": (
        "transformed density of the n=1 state, lambda=2, mu=16",
        2, 16, (General.from_ky_squared(Fraction(1105, 4), 0.0, 1.0),), Regular(1),
    ),
    "fig6-left": ("second order, bound seeds n=3,4; no peaks", 5, 6, (Regular(3), Regular(4)), Regular(1)),
    "fig6-right": ("second order, bound seeds n=0,3; two peaks", 5, 6, (Regular(0), Regular(3)), Regular(1)),
    "fig7-left": ("second order, nonregular seed plus n=1; two peaks", 5, 6, (_GENERAL_265, Regular(1)), Regular(2)),
    "fig7-right": (
        "second order, nonregular seed at ky^2=313/4 plus n=2; three peaks",
        5, 6, (General.from_ky_squared(Fraction(313, 4)), Regular(2)), Regular(1),
    ),
    "fig8-left": (
        "fourth order, lambda=9, mu=10, bound seeds n=1,4,6,8",
        9, 10, (Regular(1), Regular(4), Regular(6), Regular(8)), Regular(2),
    ),
    "fig8-right": (
        "fourth order, lambda=9, mu=10, nonregular seed ky=29/2 plus n=3,4,8",
        9, 10, (General.from_ky_squared(Fraction(841, 4)), Regular(3), Regular(4), Regular(8)), Regular(2),
    ),
    "sol2": ("transformed density of the n=1 state, seeds n=0,3", 5, 6, (Regular(0), Regular(3)), Regular(1)),
    "sol2n": ("transformed density of the n=2 state, nonregular seed plus n=1", 5, 6, (_GENERAL_265, Regular(1)), Regular(2)),
}


def list_scenarios() -> list:
    """Built-in scenarios as ``(name, description)`` pairs."""
    return [(name, entry[0]) for name, entry in _CATALOG.items()]


def builtin_config(name: str) -> ScenarioConfig:
    if name not in _CATALOG:
        raise ParseError(f"no built-in scenario named {name!r}", field="name")
    desc, lam, mu, functions, target = _CATALOG[name]
    return ScenarioConfig(name, float(lam), float(mu), functions, target, description=desc)


# pipeline ---------------------------------------------------------------------


def _worker_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _sample_chunk(cfg: ScenarioConfig, xs: np.ndarray) -> dict:
    """Every jet the checks need, on one chunk of the grid."""
    p = cfg.params
    ky = cfg.target.ky(p)
    order = len(cfg.functions) + 2
    xv = jc.jet_variable(xs, order)
    v = dm.potential_v_jet(xv.truncate(2), p)
    psi1 = cfg.target.jet(xv, p).truncate(2)  # cheap; the seeds come from evaluate below
    out = {
        "v": v,
        "psi1": psi1,
        "psi2": dm.psi2_jet(psi1, v.truncate(1), ky),
    }
    if not cfg.functions:
        zero = dm.psi1_zero_mode(xv.truncate(1), p)
        out["ratio"] = Jet(np.abs(zero.derivs[:1]))
        out["phi1"], out["phi2"], out["u"] = psi1, out["psi2"], v.truncate(1)
        out["v_hat"] = Jet((v.value**2 + 1j * v.deriv(1))[None])
        return out
    ev = se.evaluate(cfg.spec(), xv)
    out["ratio"] = Jet(ev.modulus_ratio[None])
    out["phi1"] = ev.phi1
    out["u"] = ev.u
    out["phi2"] = se.phi2_from_phi1(ev.phi1.truncate(2), ev.u, ky)
    out["v_hat"] = Jet(np.asarray(ev.v_hat)[None])
    for i, seed in enumerate(ev.extras["functions"]):
        out[f"seed{i}"] = seed.truncate(2)
    return out


def _sample(cfg: ScenarioConfig, grid: np.ndarray) -> dict:
    """Evaluate in fixed-size chunks (optionally threaded) and stitch the jets.

    The chunk boundaries do not depend on the worker count, so results are
    bit-identical for any ``SUSY_DIRAC_THREADS``.
    """
    chunks = [grid[i : i + CHUNK_POINTS] for i in range(0, grid.size, CHUNK_POINTS)]
    workers = min(_worker_count(), len(chunks))
    with np.errstate(over="ignore", invalid="ignore"):
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(lambda c: _sample_chunk(cfg, c), chunks))
        else:
            parts = [_sample_chunk(cfg, c) for c in chunks]
    return {k: Jet(np.concatenate([part[k].derivs for part in parts], axis=1)) for k in parts[0]}


def _fixed(jet: Jet):
    return lambda _grid: jet


def _residuals(cfg: ScenarioConfig, s: dict, grid: np.ndarray) -> dict:
    p = cfg.params
    ky = cfg.target.ky(p)
    tol = cfg.tolerances.residual
    v = s["v"]
    w_initial = v.value**2 + 1j * v.deriv(1)
    out = {
        "initial_schrodinger": vf.schrodinger_residual(_fixed(s["psi1"]), lambda g: w_initial, ky, grid, tol),
        "initial_dirac": vf.dirac_system_residual(
            _fixed(s["psi1"]), _fixed(s["psi2"]), lambda g: v.value, ky, grid, tol
        ),
    }
    if not cfg.functions:
        return out
    for i, sel in enumerate(cfg.functions):
        out[f"function{i}_schrodinger"] = vf.schrodinger_residual(
            _fixed(s[f"seed{i}"]), lambda g: w_initial, sel.ky(p), grid, tol
        )
    v_hat = s["v_hat"].value
    u = s["u"]
    out["transformed_schrodinger"] = vf.schrodinger_residual(_fixed(s["phi1"]), lambda g: v_hat, ky, grid, tol)
    out["transformed_dirac"] = vf.dirac_system_residual(
        _fixed(s["phi1"]), _fixed(s["phi2"]), lambda g: u.value, ky, grid, tol
    )
    # U must solve the Riccati equation U**2 + i U' = Vhat
    lhs = u.value**2 + 1j * u.deriv(1)
    rel = float(np.max(np.abs(lhs - v_hat)) / np.max(np.abs(lhs) + np.abs(v_hat)))
    out["riccati"] = vf.ResidualReport(
        float(np.max(np.abs(lhs - v_hat))), rel, (float(grid[0]), float(grid[-1]), int(grid.size)), rel < tol, tol
    )
    return out


def _density(x, up, down):
    return vf.normalize_density(x, np.abs(up) ** 2 + np.abs(down) ** 2)


def _predicted_peaks(cfg: ScenarioConfig):
    if not cfg.functions:
        return 0
    indices = [se.regular_index(s, cfg.params) for s in cfg.functions]
    regular = sorted(n for n in indices if n is not None)
    return vf.predicted_peak_count(regular, indices.count(None))


def run_scenario(cfg: ScenarioConfig) -> ScenarioResult:
    """Run the full pipeline; write CSV/JSON if the config names paths.

    Evaluation errors propagate; :func:`exit_code_for` maps them to codes.
    """
    grid = cfg.grid.samples()
    s = _sample(cfg, grid)
    for key in ("phi1", "u", "psi1"):
        if not np.all(np.isfinite(s[key].derivs)):
            raise WronskianZero(f"non-finite {key} on the grid")
    reality = se.reality_from_ratio(np.real(s["ratio"].value), grid, cfg.tolerances.reality)
    residuals = _residuals(cfg, s, grid)
    v = np.real(s["v"].value)
    u = s["u"].value
    peaks = vf.detect_peaks(grid, np.real(u), v, cfg.prominence_frac)
    peaks.predicted = _predicted_peaks(cfg)
    profiles = {
        "x": grid,
        "V": v,
        "ReU": np.real(u),
        "ImU": np.imag(u),
        "density_transformed": _density(grid, s["phi1"].value, s["phi2"].value),
        "density_initial": _density(grid, s["psi1"].value, s["psi2"].value),
    }
    if not reality.passed:
        code = EXIT_REALITY
    elif not all(r.passed for r in residuals.values()):
        code = EXIT_RESIDUAL
    else:
        code = EXIT_OK
    result = ScenarioResult(
        name=cfg.name,
        reality=reality,
        energies=cfg.energies(),
        energies_exact=cfg.energies_exact(),
        residuals=residuals,
        peaks=peaks,
        profiles=profiles,
        exit_code=code,
        config=cfg,
    )
    if cfg.outputs.csv_path:
        write_csv(result, cfg.outputs.csv_path)
    if cfg.outputs.json_path:
        write_json(result, cfg.outputs.json_path)
    return result


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, CONFIG_ERRORS):
        return EXIT_CONFIG
    if isinstance(exc, SINGULAR_ERRORS):
        return EXIT_SINGULAR
    raise exc


# output -----------------------------------------------------------------------


def csv_text(result: ScenarioResult) -> str:
    cols = [result.profiles[k] for k in CSV_HEADER.split(",")]
    rows = [CSV_HEADER]
    for vals in zip(*cols):
        rows.append(",".join(format(float(v), ".17g") for v in vals))
    return "\n".join(rows) + "\n"


def write_csv(result: ScenarioResult, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(csv_text(result))


def summary_dict(result: ScenarioResult) -> dict:
    return {
        "name": result.name,
        "r1": result.reality.r1,
        "max_rel_dev": result.reality.max_rel_dev,
        "energies": [float(e) for e in result.energies_exact],
        "residual_max_rel": {k: r.max_rel for k, r in result.residuals.items()},
        "peaks_detected": result.peaks.detected,
        "peaks_predicted": result.peaks.predicted,
        "exit_code": result.exit_code,
    }


def json_text(result: ScenarioResult) -> str:
    return json.dumps(summary_dict(result), indent=2) + "\n"


def write_json(result: ScenarioResult, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json_text(result))


# command line -----------------------------------------------------------------


def _resolve(source: str) -> ScenarioConfig:
    if source == "-" or os.path.exists(source):
        return load_config(source)
    if source in _CATALOG:
        return builtin_config(source)
    raise ParseError(f"{source!r} is neither a config file nor a built-in scenario")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="susy-dirac",
        description="Construct SUSY partners of the hyperbolic Dirac potential and verify them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a config file or built-in scenario")
    run.add_argument("source", help="config path, '-' for stdin, or a built-in name")
    run.add_argument("--grid-min", type=float)
    run.add_argument("--grid-max", type=float)
    run.add_argument("--points", type=int)
    run.add_argument("--csv", help="write the sampled profiles here")
    run.add_argument("--json", help="write the summary here")
    run.add_argument("--prominence", type=float, help="peak prominence as a fraction of the V range")
    run.add_argument("--reality-tol", type=float)
    run.add_argument("--residual-tol", type=float)
    sub.add_parser("list", help="list built-in scenarios")
    val = sub.add_parser("validate", help="parse and validate a config without running it")
    val.add_argument("source")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "list":
        for name, desc in list_scenarios():
            print(f"{name:12s} {desc}")
        return EXIT_OK
    try:
        cfg = _resolve(args.source)
        if args.command == "validate":
            print(f"{cfg.name}: ok ({len(cfg.functions)} function(s), grid {cfg.grid.points} points)")
            return EXIT_OK
        cfg = cfg.with_overrides(
            x_min=args.grid_min,
            x_max=args.grid_max,
            points=args.points,
            csv_path=args.csv,
            json_path=args.json,
            prominence_frac=args.prominence,
            reality_tol=args.reality_tol,
            residual_tol=args.residual_tol,
        )
        result = run_scenario(cfg)
    except Exception as exc:  # noqa: BLE001 - mapped to an exit code or re-raised
        code = exit_code_for(exc)
        print(f"error: {exc}", file=sys.stderr)
        return code
    summary = summary_dict(result)
    print(json.dumps(summary, indent=2))
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
