"""Command-line front end.

Examples::

    lfade --preset example1 --alpha 1.7 --theta 0.3 --m 5 --dt 0.001 --t-final 0.3 -o ex1.csv
    lfade --preset example2 --alpha 1.8 --theta 0.1 --m 3 --dt 0.005 --t-final 1 -o ex2.csv
    lfade --config run.cfg --theta 0.0
    lfade --preset example2 --sweep alpha=1.2,1.4,1.6 -o sweep.csv

A config file holds flat ``key = value`` lines; ``#`` starts a comment.
Keys are the long flag names with ``-`` or ``_``.  Flags override the file,
which overrides the preset defaults.

Exit codes: 0 success, 1 numeric or I/O failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import logging
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ConfigError, LfadeError, NumericError, ParameterError
from .harness import example1_problem, example2_problem, max_error
from .jacobi import JacobiParams
from .riesz_feller import RieszFellerParams
from .solver import ProblemSpec, SpectralSolution, evaluate_history, solve, zero_source

log = logging.getLogger(__name__)

PRESETS = ("example1", "example2", "custom")

EXIT_OK, EXIT_NUMERIC, EXIT_CONFIG = 0, 1, 2

_DEFAULTS: dict[str, dict[str, float | int]] = {
    "example1": dict(alpha=1.7, theta=0.3, beta=0.0, gamma=0.0, m=5, dt=1e-3, t_final=0.3, d=1.5, e=1.0),
    "example2": dict(alpha=1.4, theta=-0.5, beta=0.0, gamma=0.0, m=3, dt=0.01, t_final=0.5),
    "custom": dict(alpha=1.5, theta=0.0, beta=0.0, gamma=0.0, m=8, dt=1e-2, t_final=1.0, d=1.0, e=0.0, length=1.0),
}

_FLOAT_KEYS = ("alpha", "theta", "beta", "gamma", "dt", "t_final", "d", "e", "length")
_INT_KEYS = ("m",)
_TEXT_KEYS = ("preset", "output_path", "eval_grid")
KNOWN_KEYS = frozenset(_FLOAT_KEYS + _INT_KEYS + _TEXT_KEYS)
_ALIASES = {"output": "output_path", "t-final": "t_final", "eval-grid": "eval_grid"}


@dataclass(frozen=True)
class RunConfig:
    preset: str = "example1"
    alpha: float = 1.7
    theta: float = 0.3
    beta: float = 0.0
    gamma: float = 0.0
    m: int = 5
    dt: float = 1e-3
    t_final: float = 0.3
    d: float | None = None
    e: float | None = None
    length: float | None = None
    output_path: str = "solution.csv"
    eval_grid: str | tuple[float, ...] = "nodes"
    sweep: tuple[str, tuple[float, ...]] | None = field(default=None, compare=False)
    verbose: bool = field(default=False, compare=False)

    def validate(self) -> None:
        """Check every solver precondition, naming the offending field."""
        if self.preset not in PRESETS:
            raise ConfigError(f"preset must be one of {', '.join(PRESETS)}", "preset")
        if not 1 < self.alpha <= 2:
            raise ConfigError("alpha must lie in (1,2]", "alpha")
        bound = min(self.alpha, 2 - self.alpha)
        if not abs(self.theta) <= bound + 1e-12:
            raise ConfigError(f"theta must satisfy |theta| <= min(alpha, 2-alpha) = {bound:g}", "theta")
        for name in ("beta", "gamma"):
            if not getattr(self, name) > -1:
                raise ConfigError(f"{name} must be > -1", name)
        if self.m < 2:
            raise ConfigError("m must be >= 2", "m")
        if not self.dt > 0:
            raise ConfigError("dt must be > 0", "dt")
        if not self.t_final >= self.dt:
            raise ConfigError("t_final must be >= dt", "t_final")
        n = round(self.t_final / self.dt)
        if abs(n * self.dt - self.t_final) > 1e-12 * self.t_final:
            raise ConfigError("t_final must be an integer multiple of dt", "dt")
        if self.preset == "example2":
            if self.alpha == 2:
                raise ConfigError("alpha must lie in (1,2) for example2 (its source is undefined at 2)", "alpha")
            for name in ("d", "e", "length"):
                if getattr(self, name) is not None:
                    raise ConfigError(f"{name} is fixed by example2 and cannot be set", name)
        if self.preset == "example1" and self.length is not None:
            raise ConfigError("length is fixed to pi by example1", "length")
        if self.d is not None and not self.d > 0:
            raise ConfigError("d must be > 0", "d")
        if self.e is not None and not self.e >= 0:
            raise ConfigError("e must be >= 0", "e")
        if self.length is not None and not self.length > 0:
            raise ConfigError("length must be > 0", "length")
        if isinstance(self.eval_grid, tuple):
            L = self.domain_length
            if not self.eval_grid:
                raise ConfigError("eval_grid must not be empty", "eval_grid")
            if any(not 0 <= x <= L for x in self.eval_grid):
                raise ConfigError(f"eval_grid points must lie in [0, {L:g}]", "eval_grid")

    @property
    def domain_length(self) -> float:
        if self.preset == "example1":
            return math.pi
        if self.preset == "example2":
            return 1.0
        return self.length if self.length is not None else 1.0

    def problem(self) -> ProblemSpec:
        if self.preset == "example1":
            d = 1.5 if self.d is None else self.d
            e = 1.0 if self.e is None else self.e
            return example1_problem(self.alpha, self.theta, d, e, self.t_final, self.dt, self.beta, self.gamma)
        if self.preset == "example2":
            return example2_problem(self.alpha, self.theta, self.t_final, self.dt, self.beta, self.gamma)
        L = self.domain_length
        return ProblemSpec(
            d=1.0 if self.d is None else self.d,
            e=0.0 if self.e is None else self.e,
            rf=RieszFellerParams(self.alpha, self.theta),
            basis=JacobiParams(self.beta, self.gamma, L),
            initial=lambda x: np.sin(np.pi * np.asarray(x) / L),
            t_final=self.t_final,
            dt=self.dt,
            source=zero_source,
        )


def _parse_number(key: str, raw: str) -> float | int:
    try:
        if key in _INT_KEYS:
            return int(raw)
        v = float(raw)
    except ValueError:
        raise ConfigError(f"{key} must be {'an integer' if key in _INT_KEYS else 'a number'}, got {raw!r}", key) from None
    if not math.isfinite(v):
        raise ConfigError(f"{key} must be finite, got {raw!r}", key)
    return v


def _parse_grid(raw: str) -> str | tuple[float, ...]:
    raw = raw.strip()
    if raw == "nodes":
        return raw
    try:
        return tuple(float(v) for v in raw.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"eval_grid must be 'nodes' or a comma-separated x-list, got {raw!r}", "eval_grid") from None


def _normalize_key(key: str) -> str:
    key = key.strip()
    key = _ALIASES.get(key, key)
    return key.replace("-", "_")


def _coerce(key: str, raw: str) -> object:
    if key in _FLOAT_KEYS or key in _INT_KEYS:
        return _parse_number(key, raw)
    if key == "eval_grid":
        return _parse_grid(raw)
    return raw.strip()


def read_config_file(path: str | Path) -> dict[str, object]:
    """Parse a flat ``key = value`` file; unknown keys are rejected."""
    out: dict[str, object] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}", "config") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'", "config")
        key, value = line.split("=", 1)
        key = _normalize_key(key)
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}", key)
        out[key] = _coerce(key, value)
    return out


def _parse_sweep(raw: str) -> tuple[str, tuple[float, ...]]:
    if "=" not in raw:
        raise ConfigError("sweep must look like key=v1,v2,...", "sweep")
    key, values = raw.split("=", 1)
    key = _normalize_key(key)
    if key not in _FLOAT_KEYS and key not in _INT_KEYS:
        raise ConfigError(f"cannot sweep over {key!r}", "sweep")
    vals = tuple(_parse_number(key, v) for v in values.split(",") if v.strip())
    if not vals:
        raise ConfigError("sweep needs at least one value", "sweep")
    return key, vals


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lfade",
        description="Jacobi collocation / trapezoidal solver for the Levy-Feller advection-dispersion equation.",
    )
    ap.add_argument("--config", help="flat key=value config file")
    ap.add_argument("--preset", help="example1, example2 or custom")
    ap.add_argument("--alpha", help="order, in (1, 2]")
    ap.add_argument("--theta", help="skewness, |theta| <= min(alpha, 2 - alpha)")
    ap.add_argument("--beta", help="Jacobi index tied to x = L")
    ap.add_argument("--gamma", help="Jacobi index tied to x = 0")
    ap.add_argument("--m", help="truncation order (>= 2)")
    ap.add_argument("--dt", help="time step")
    ap.add_argument("--t-final", dest="t_final", help="final time (a multiple of dt)")
    ap.add_argument("--d", help="dispersion coefficient (example1, custom)")
    ap.add_argument("--e", help="advection velocity (example1, custom)")
    ap.add_argument("--length", help="interval length L (custom only)")
    ap.add_argument("-o", "--output", dest="output_path", help="CSV output path")
    ap.add_argument("--eval-grid", dest="eval_grid", help="'nodes' or comma-separated x values")
    ap.add_argument("--sweep", help="run once per value, e.g. alpha=1.2,1.4,1.6")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def parse_config(argv: Sequence[str] | None = None) -> RunConfig:
    """Merge preset defaults, an optional config file and command-line flags."""
    ns = build_parser().parse_args(argv)
    merged: dict[str, object] = {}
    if ns.config:
        merged.update(read_config_file(ns.config))
    for key in KNOWN_KEYS:
        raw = getattr(ns, key, None)
        if raw is not None:
            merged[key] = _coerce(key, raw)
    preset = str(merged.get("preset", "example1"))
    if preset not in PRESETS:
        raise ConfigError(f"preset must be one of {', '.join(PRESETS)}", "preset")
    values: dict[str, object] = dict(_DEFAULTS[preset])
    if preset != "custom":
        # d, e, length stay None unless given, so validation can reject them where fixed
        for k in ("d", "e", "length"):
            values.pop(k, None)
    values.update(merged)
    values["preset"] = preset
    if ns.sweep:
        values["sweep"] = _parse_sweep(ns.sweep)
    values["verbose"] = ns.verbose
    cfg = RunConfig(**values)  # type: ignore[arg-type]
    cfg.validate()
    return cfg


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def eval_points(cfg: RunConfig, sol: SpectralSolution) -> np.ndarray:
    if cfg.eval_grid == "nodes":
        return np.asarray(sol.nodes, dtype=float)
    return np.asarray(cfg.eval_grid, dtype=float)


def write_csv(path: str | Path, x: np.ndarray, t: float, u: np.ndarray, exact: np.ndarray | None) -> None:
    """Write the evaluated solution; adds ``u_exact`` and ``abs_error`` when known."""
    header = ["x", "t", "u_numeric"]
    if exact is not None:
        header += ["u_exact", "abs_error"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, delimiter=",", lineterminator="\n")
        w.writerow(header)
        for i, xi in enumerate(x):
            row = [_fmt(xi), _fmt(t), _fmt(u[i])]
            if exact is not None:
                row += [_fmt(exact[i]), _fmt(abs(exact[i] - u[i]))]
            w.writerow(row)


def _execute(cfg: RunConfig) -> tuple[int, str]:
    t0 = time.perf_counter()
    problem = cfg.problem()
    sol = solve(problem, cfg.m)
    x = eval_points(cfg, sol)
    n = sol.n_steps
    t = float(sol.times[n])
    u = evaluate_history(sol, x)[n]
    exact = None if problem.exact is None else np.asarray(problem.exact(x, t), dtype=float)
    write_csv(cfg.output_path, x, t, u, exact)
    elapsed = time.perf_counter() - t0
    lines = [f"preset={cfg.preset} alpha={cfg.alpha:g} theta={cfg.theta:g} m={cfg.m} dt={cfg.dt:g} T={t:g}"]
    if problem.exact is not None:
        lines.append(f"M1 = {max_error(sol, problem.exact, x):.4e}  (max over eval grid and all time levels)")
    lines.append(f"N steps = {n}  runtime = {elapsed:.3f} s  -> {cfg.output_path}")
    return EXIT_OK, "\n".join(lines)


def _sweep_path(path: str, key: str, value: float) -> str:
    p = Path(path)
    return str(p.with_name(f"{p.stem}_{key}{value:g}{p.suffix}"))


def run(cfg: RunConfig) -> int:
    """Execute one configuration (or a sweep); returns the process exit code."""
    if cfg.sweep is None:
        cfgs = [cfg]
    else:
        key, vals = cfg.sweep
        cfgs = [dataclasses.replace(cfg, sweep=None, output_path=_sweep_path(cfg.output_path, key, v), **{key: v}) for v in vals]
        for c in cfgs:
            try:
                c.validate()
            except ConfigError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_CONFIG

    def one(c: RunConfig) -> tuple[int, str]:
        try:
            return _execute(c)
        except (ConfigError, ParameterError) as exc:
            return EXIT_CONFIG, f"error: {exc}"
        except OSError as exc:
            return EXIT_NUMERIC, f"error: cannot write {c.output_path}: {exc}"
        except (NumericError, LfadeError, FloatingPointError, np.linalg.LinAlgError) as exc:
            return EXIT_NUMERIC, f"error: {exc}"

    with ThreadPoolExecutor(max_workers=min(len(cfgs), 8)) as pool:
        results = list(pool.map(one, cfgs))
    code = EXIT_OK
    for rc, msg in results:
        print(msg, file=sys.stdout if rc == EXIT_OK else sys.stderr)
        code = max(code, rc)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if cfg.verbose:
        logging.basicConfig(level=logging.DEBUG)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
