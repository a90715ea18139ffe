"""Command-line sweeps emitting CSV tables plus a key-value run manifest.

Usage::

    pscatter <command> [--config FILE] [--key value ...] --out FILE

Commands: ``scatter``, ``resonances``, ``limit``, ``converge``, ``octant``,
``weakconv``. Parameters come from a flat ``key = value`` file and can be
overridden on the command line. Grids are either comma lists
(``1e-3,1e-4``) or ``lin:start:stop:num`` / ``log:start:stop:num`` with
decade exponents for ``log``.

Exit codes: 0 success, 1 configuration error, 2 numeric or pole error (rows
computed so far are kept and an ``ERROR`` trailer row is appended), 3 partial
result.
"""

from __future__ import annotations

import argparse
import csv
import math
import platform
import sys
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .errors import DomainError, ScatterError
from .oracle import OVERFLOW_LIMIT
from .resonance import RESIDUAL_TOL, ROOT_RTOL, enumerate_resonances
from .scattering import POLE_TOL, DoubleLayerSystem, double_layer_exact
from .squeeze import (
    EXPONENT_TOL,
    PROBES,
    REPRESENTATIVE_EXPONENTS,
    RegionLabel,
    SqueezeParametrization,
    check_delta_prime_convergence,
    classify_region,
)
from .transmission import RESONANT_RTOL, convergence_study, transmission_limit

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_PARTIAL = 0, 1, 2, 3

COMMANDS = ("scatter", "resonances", "limit", "converge", "octant", "weakconv")

# every key a config file may set, with its default (None = required/unset)
DEFAULTS = {
    "mu": None, "nu": None, "tau": None, "region": None,
    "eta": "1", "c": "0", "gamma": None, "root": None,
    "epsilon_grid": "1e-3,1e-4,1e-5,1e-6",
    "E": None, "E_min": None, "E_max": None, "E_n": None,
    "h1": "0", "l1": "0", "h2": "0", "l2": "0", "r": "0", "x1": "0",
    "n_max": "5", "points_per_interval": "1000", "max_intervals": None,
    "mu_grid": "lin:0.5:3:11", "nu_grid": "lin:0.5:3:11", "tau_grid": "lin:0.5:3:11",
    "phi": ",".join(PROBES),
}

TOLERANCES = {
    "pole_tol": POLE_TOL,
    "root_rtol": ROOT_RTOL,
    "residual_tol": RESIDUAL_TOL,
    "resonant_rtol": RESONANT_RTOL,
    "exponent_tol": EXPONENT_TOL,
    "overflow_limit": OVERFLOW_LIMIT,
}


class ConfigError(Exception):
    pass


class PartialResult(Exception):
    pass


# ---------------------------------------------------------------------------
# config handling


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in DEFAULTS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _float(cfg, key) -> float:
    raw = cfg.get(key)
    if raw is None:
        raise ConfigError(f"missing required key {key!r}")
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{key} must be a number, got {raw!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{key} must be finite, got {raw!r}")
    return value


def _int(cfg, key) -> int:
    raw = cfg.get(key)
    if raw is None:
        raise ConfigError(f"missing required key {key!r}")
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {raw!r}") from None


def parse_grid(spec: str, key: str = "grid") -> list[float]:
    """Comma list, ``lin:a:b:n`` or ``log:a:b:n`` (``10**a .. 10**b``)."""
    spec = spec.strip()
    try:
        if spec.startswith(("lin:", "log:")):
            kind, a, b, n = spec.split(":")
            n = int(n)
            if n < 1:
                raise ConfigError(f"{key}: need at least one point")
            if kind == "lin":
                values = np.linspace(float(a), float(b), n)
            else:
                values = np.logspace(float(a), float(b), n)
            values = values.tolist()
        else:
            values = [float(x) for x in spec.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"{key}: cannot parse grid {spec!r}") from None
    if not values:
        raise ConfigError(f"{key}: grid is empty")
    if not all(math.isfinite(v) for v in values):
        raise ConfigError(f"{key}: grid values must be finite")
    return values


def _exponents(cfg) -> tuple[float, float, float]:
    if cfg.get("region") is not None:
        try:
            Q = RegionLabel.parse(cfg["region"])
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
        if Q not in REPRESENTATIVE_EXPONENTS:
            raise ConfigError(f"region {Q.value} has no representative exponents")
        return REPRESENTATIVE_EXPONENTS[Q]
    return _float(cfg, "mu"), _float(cfg, "nu"), _float(cfg, "tau")


def _region(cfg) -> RegionLabel:
    if cfg.get("region") is not None:
        try:
            return RegionLabel.parse(cfg["region"])
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
    try:
        return classify_region(*_exponents(cfg))
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def _energies(cfg) -> list[float]:
    if cfg.get("E") is not None:
        grid = parse_grid(cfg["E"], "E")
    else:
        lo, hi, n = _float(cfg, "E_min"), _float(cfg, "E_max"), _int(cfg, "E_n")
        if n < 1:
            raise ConfigError("E_n must be >= 1")
        grid = np.linspace(lo, hi, n).tolist()
    if any(e <= 0 for e in grid):
        raise ConfigError("energies must be positive")
    return grid


def _scan_options(cfg) -> dict:
    opts = {"points_per_interval": _int(cfg, "points_per_interval")}
    if cfg.get("max_intervals") is not None:
        opts["max_intervals"] = _int(cfg, "max_intervals")
    return opts


# ---------------------------------------------------------------------------
# commands: each yields the header first, then rows


def cmd_scatter(cfg):
    try:
        system = DoubleLayerSystem.from_params(
            *(_float(cfg, k) for k in ("h1", "l1", "h2", "l2", "r", "x1"))
        )
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    energies = _energies(cfg)
    yield ["E", "R", "T", "u", "v", "D_abs_sq"]
    for E in energies:
        amp = double_layer_exact(system, E)
        yield [E, amp.reflectance, amp.transmittance, amp.u, amp.v, abs(amp.d) ** 2]


def _resonance_set(cfg, n_max=None):
    Q = _region(cfg)
    n_max = _int(cfg, "n_max") if n_max is None else n_max
    if n_max < 1:
        raise ConfigError("n_max must be >= 1")
    return enumerate_resonances(
        Q, _float(cfg, "eta"), _float(cfg, "c"), n_max, **_scan_options(cfg)
    )


def cmd_resonances(cfg):
    rs = _resonance_set(cfg)
    yield ["n", "gamma_n", "residual", "bracket_lo", "bracket_hi"]
    for root in rs.roots:
        yield [root.n, root.gamma, root.residual, root.bracket[0], root.bracket[1]]
    if rs.partial:
        raise PartialResult(f"only {len(rs.roots)} of {rs.requested} roots found")


def cmd_limit(cfg):
    Q = _region(cfg)
    eta, c = _float(cfg, "eta"), _float(cfg, "c")
    header = ["Q", "n", "gamma_n", "theta_sq", "T_limit", "note"]
    if cfg.get("gamma") is not None:
        res = transmission_limit(Q, eta, c, _float(cfg, "gamma"))
        yield header
        yield [Q.value, "", res.gamma_n, res.theta_sq, res.T_limit, res.note]
        return
    rs = _resonance_set(cfg)
    yield header
    for root in rs.roots:
        res = transmission_limit(Q, eta, c, root.gamma, n=root.n)
        yield [Q.value, root.n, res.gamma_n, res.theta_sq, res.T_limit, res.note]
    if rs.partial:
        raise PartialResult(f"only {len(rs.roots)} of {rs.requested} roots found")


def _gamma(cfg) -> float:
    if cfg.get("root") is not None:
        n = _int(cfg, "root")
        rs = _resonance_set(cfg, n_max=2 * abs(n) + 2)
        try:
            return rs.by_index(n).gamma
        except KeyError:
            raise ConfigError(f"root index {n} not found in the resonance set") from None
    return _float(cfg, "gamma")


def _params(cfg, gamma) -> SqueezeParametrization:
    try:
        params = SqueezeParametrization(
            *_exponents(cfg), _float(cfg, "eta"), _float(cfg, "c"), gamma
        )
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    if not params.region.on_surface:
        raise ConfigError("exponents are off the surface; no limit to compare with")
    return params


def _eps_grid(cfg) -> list[float]:
    grid = parse_grid(cfg["epsilon_grid"], "epsilon_grid")
    if any(e <= 0 for e in grid) or any(b >= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("epsilon_grid must be positive and strictly decreasing")
    return grid


def cmd_converge(cfg):
    params = _params(cfg, _gamma(cfg))
    grid = _eps_grid(cfg)
    E = _float(cfg, "E") if cfg.get("E") is not None else 1.0
    if E <= 0:
        raise ConfigError("E must be positive")
    yield ["epsilon", "T_exact", "T_limit", "abs_diff"]
    # row by row, so a failure deep in the grid keeps the earlier rows
    for eps in grid:
        (point,) = convergence_study(params, [eps], energy=E)
        yield list(point)


def cmd_octant(cfg):
    mus = parse_grid(cfg["mu_grid"], "mu_grid")
    nus = parse_grid(cfg["nu_grid"], "nu_grid")
    taus = parse_grid(cfg["tau_grid"], "tau_grid")
    if any(v <= 0 for v in mus + nus + taus):
        raise ConfigError("exponent grids must be positive")
    yield ["mu", "nu", "tau", "Q"]
    for mu in mus:
        for nu in nus:
            for tau in taus:
                yield [mu, nu, tau, classify_region(mu, nu, tau).value]


def cmd_weakconv(cfg):
    params = _params(cfg, _gamma(cfg))
    grid = _eps_grid(cfg)
    names = [n.strip() for n in cfg["phi"].split(",") if n.strip()]
    unknown = [n for n in names if n not in PROBES]
    if unknown or not names:
        raise ConfigError(f"unknown test functions {unknown}; choose from {sorted(PROBES)}")
    if len(grid) < 3:
        raise ConfigError("epsilon_grid needs at least 3 points")
    try:
        report = check_delta_prime_convergence(params, [PROBES[n]() for n in names], grid)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    yield ["phi", "epsilon", "pairing", "abs_err", "remainder", "bound", "order"]
    for probe in report.probes:
        for eps, pairing, err, rem, bound in zip(
            probe.epsilons, probe.pairings, probe.errors, probe.remainders, probe.bounds
        ):
            yield [probe.name, eps, pairing, err, rem, bound, probe.order]


HANDLERS = {
    "scatter": cmd_scatter,
    "resonances": cmd_resonances,
    "limit": cmd_limit,
    "converge": cmd_converge,
    "octant": cmd_octant,
    "weakconv": cmd_weakconv,
}


# ---------------------------------------------------------------------------
# output


def format_cell(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % (value + 0.0)  # no "-0"
    return str(value)


def write_manifest(path: Path, command: str, cfg: dict, status: str, rows: int):
    lines = [f"command = {command}", f"status = {status}", f"rows = {rows}"]
    lines += [f"config.{k} = {v}" for k, v in sorted(cfg.items()) if v is not None]
    lines += [f"tolerance.{k} = {v!r}" for k, v in sorted(TOLERANCES.items())]
    lines += [
        f"version.pscatter = {__version__}",
        f"version.numpy = {np.__version__}",
        f"version.scipy = {scipy.__version__}",
        f"version.python = {platform.python_version()}",
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def run(command: str, cfg: dict, out: Path) -> int:
    """Execute one command, writing ``out`` and ``out.manifest``."""
    handler = HANDLERS[command]
    rows, status, code = [], "ok", EXIT_OK
    error_row = None
    try:
        for row in handler(cfg):
            rows.append(row)
    except ConfigError as exc:
        print(f"pscatter: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PartialResult as exc:
        status, code = f"partial: {exc}", EXIT_PARTIAL
        print(f"pscatter: partial result: {exc}", file=sys.stderr)
    except DomainError as exc:
        # unsupported region or similar: the request itself is invalid
        print(f"pscatter: config error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ScatterError as exc:
        status, code = f"error: {type(exc).__name__}: {exc}", EXIT_NUMERIC
        error_row = ["ERROR", f"{type(exc).__name__}: {exc}"]
        print(f"pscatter: {type(exc).__name__}: {exc}", file=sys.stderr)

    try:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            for row in rows:
                writer.writerow([format_cell(v) for v in row])
            if error_row is not None:
                writer.writerow(error_row)
        write_manifest(Path(str(out) + ".manifest"), command, cfg, status, max(len(rows) - 1, 0))
    except OSError as exc:
        print(f"pscatter: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage problems are configuration errors, not numeric ones
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="pscatter", description=__doc__.split("\n\n")[0], allow_abbrev=False
    )
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="flat key = value parameter file")
    ap.add_argument("--out", required=True, help="output CSV path")
    # negative values need the --key=value form, e.g. --h2=-40
    for key in DEFAULTS:
        ap.add_argument(f"--{key}", dest=f"opt_{key}", default=None, metavar="VALUE")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = dict(DEFAULTS)
    try:
        if args.config:
            cfg.update(read_config_file(args.config))
    except ConfigError as exc:
        print(f"pscatter: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for key in DEFAULTS:
        value = getattr(args, f"opt_{key}")
        if value is not None:
            cfg[key] = value
    return run(args.command, cfg, Path(args.out))


if __name__ == "__main__":
    raise SystemExit(main())
