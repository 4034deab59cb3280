"""Command-line driver.

Every subcommand takes its parameters from flags, from a ``key = value``
file given by ``--config``, or both (flags win).  Results go to CSV or JSON
with a metadata header carrying the config hash and tolerances.

Exit status: 0 success, 2 bad configuration, 3 numerical failure,
4 precondition violation.
"""

from __future__ import annotations

import argparse
import cmath
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .coulomb import CoulombParams, s_dyn, s_st
from .diracq import check_structure, corollary_modulus, eigensystem, h_matrix, matrix_from_json
from .ergodic import check_ergodic_dirac, check_ergodic_schrodinger
from .errors import ConfigError, NumericalError, PreconditionError
from .oscillate import bump, coupling_coefficient, fit_log_growth, s1_truncated, s2_example
from .potentials import (compact_bump, coulomb, dirac_coulomb, inverse_linear_tail,
                         inverse_square_tail, quadrature_tail, zero_potential)
from .radial import BASES, extract_s_dirac, extract_s_schrodinger
from .renorm import (DivergenceProfile, MatrixInteraction, dyson_coefficients, dyson_sum,
                     fit_divergence_profile, read_samples_csv, time_ordered_product)
from .tables import Table, render

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_PRECONDITION = 0, 2, 3, 4
MAX_GRID = 1_000_000


# ---------------------------------------------------------------------------
# value parsers


@dataclass(frozen=True)
class Grid:
    lo: float
    hi: float
    count: int
    spacing: str = "linear"

    def values(self) -> list[float]:
        if self.count == 1:
            return [self.lo]
        if self.spacing == "log":
            return [float(v) for v in np.geomspace(self.lo, self.hi, self.count)]
        return [float(v) for v in np.linspace(self.lo, self.hi, self.count)]

    def __str__(self) -> str:
        return f"{self.lo!r}:{self.hi!r}:{self.count}:{self.spacing}"


def parse_grid(text: str) -> Grid:
    """``min:max:count[:linear|log]``."""
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise ValueError("grid must look like min:max:count[:linear|log]")
    lo, hi = float(parts[0]), float(parts[1])
    count = int(parts[2])
    spacing = parts[3] if len(parts) == 4 else "linear"
    if spacing not in ("linear", "log"):
        raise ValueError(f"spacing must be linear or log, got {spacing!r}")
    if not 1 <= count <= MAX_GRID:
        raise ValueError(f"count must be in 1..{MAX_GRID}")
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise ValueError("need finite min <= max")
    if spacing == "log" and lo <= 0:
        raise ValueError("log spacing needs min > 0")
    return Grid(lo, hi, count, spacing)


def parse_float_list(text: str) -> list[float]:
    vals = [float(v) for v in text.split(",") if v.strip()]
    if not vals:
        raise ValueError("empty list")
    return vals


def parse_int_list(text: str) -> list[int]:
    vals = [int(v) for v in text.split(",") if v.strip()]
    if not vals:
        raise ValueError("empty list")
    return vals


def parse_vec3(text: str) -> tuple[float, float, float]:
    vals = parse_float_list(text)
    if len(vals) != 3:
        raise ValueError("need exactly three components")
    return tuple(vals)


def parse_pair(text: str) -> tuple[int, int]:
    vals = parse_int_list(text)
    if len(vals) != 2:
        raise ValueError("need two indices")
    return tuple(vals)


def choice(*options: str) -> Callable[[str], str]:
    def conv(text: str) -> str:
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}")
        return text

    return conv


@dataclass(frozen=True)
class Option:
    name: str
    parse: Callable[[str], Any]
    default: str | None
    help: str = ""


COMMON = [
    Option("format", choice("csv", "json"), None, "output format"),
    Option("output", str, None, "output path (default: stdout)"),
    Option("threads", int, None, "worker threads (default: GENSCATTER_THREADS or cpu count)"),
]


# ---------------------------------------------------------------------------
# subcommands


@dataclass
class Context:
    params: dict[str, Any]
    threads: int

    def map(self, fn: Callable, items: list) -> list:
        if self.threads <= 1 or len(items) <= 1:
            return [fn(it) for it in items]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(fn, items))


class OperationFailed(Exception):
    def __init__(self, operation: str, cause: Exception):
        super().__init__(f"{operation}: {cause}")
        self.operation = operation
        self.cause = cause


def _guard(operation: str, fn: Callable, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (NumericalError, PreconditionError) as exc:
        raise OperationFailed(operation, exc) from exc


def _cplx(prefix: str, value: complex) -> dict[str, float]:
    value = complex(value)
    return {f"re_{prefix}": value.real, f"im_{prefix}": value.imag}


def run_coulomb_table(ctx: Context):
    p = ctx.params
    z, lmax = p["z"], p["lmax"]
    if lmax < 0:
        raise PreconditionError("lmax must be nonnegative")
    items = [(k, ell) for k in p["k_grid"].values() for ell in range(lmax + 1)]

    def row(item):
        k, ell = item
        prm = _guard("CoulombParams", CoulombParams, z, k, ell)
        dyn, st = s_dyn(prm), s_st(prm)
        err = max(abs(abs(dyn) - 1.0), abs(abs(st) - 1.0))
        return {"k": k, "ell": ell, **_cplx("s_dyn", dyn), **_cplx("s_st", st), "abs_err_unitarity": err}

    cols = ["k", "ell", "re_s_dyn", "im_s_dyn", "re_s_st", "im_s_st", "abs_err_unitarity"]
    return cols, ctx.map(row, items), ("k", "ell"), {}


def _schrodinger_potential(p):
    kind = p["potential"]
    if kind == "zero":
        return zero_potential()
    if kind == "coulomb":
        return coulomb(p["z"])
    if kind == "inverse-square":
        return inverse_square_tail(p["strength"])
    return compact_bump(p["strength"], 0.0, 5.0)


def run_radial_extract(ctx: Context):
    p = ctx.params
    pot = _schrodinger_potential(p)
    items = [(ell, k) for ell in p["ell"] for k in p["k"]]

    def row(item):
        ell, k = item
        s = _guard("extract_s_schrodinger", extract_s_schrodinger, ell, k, pot, p["R"],
                   basis=p["basis"], rtol=p["rtol"])
        return {"ell": ell, "k": k, **_cplx("s", s), "abs_s": abs(s), "arg_s": cmath.phase(s)}

    cols = ["ell", "k", "re_s", "im_s", "abs_s", "arg_s"]
    return cols, ctx.map(row, items), ("ell", "k"), {"rtol": p["rtol"]}


def run_dirac_extract(ctx: Context):
    p = ctx.params
    pot = dirac_coulomb(p["A"])
    if p["bump_height"] != 0.0:
        pot = pot + compact_bump(p["bump_height"], 0.0, 5.0)
    items = [(kq, lam) for kq in p["kappa"] for lam in p["lam"]]

    def row(item):
        kq, lam = item
        res = _guard("extract_s_dirac", extract_s_dirac, kq, lam, p["m"], pot, p["R"],
                     basis=p["basis"], rtol=p["rtol"])
        s11, s22 = res.diagonal
        return {"kappa": kq, "lam": lam, **_cplx("s11", s11), **_cplx("s22", s22),
                "abs_s11": abs(s11), "abs_s22": abs(s22)}

    cols = ["kappa", "lam", "re_s11", "im_s11", "re_s22", "im_s22", "abs_s11", "abs_s22"]
    return cols, ctx.map(row, items), ("kappa", "lam"), {"rtol": p["rtol"]}


def run_ergodic_check(ctx: Context):
    p = ctx.params
    family, grid = p["family"], p["t_grid"].values()
    if family == "dirac":
        b_fn = inverse_square_tail(p["strength"])
        res = _guard("check_ergodic_dirac", check_ergodic_dirac, b_fn, p["p"], p["m"], grid)
        row = {"family": family, "p": p["p"], "m": p["m"],
               "constancy_deviation": res.constancy_deviation,
               "modulus_deviation": res.modulus_deviation, **_cplx("c_of_p", res.c_of_p)}
        return list(row), [row], (), {}
    pot = {
        "coulomb": lambda: coulomb(p["z"]),
        "inverse-square": lambda: inverse_square_tail(p["strength"]),
        "inverse-linear": lambda: inverse_linear_tail(p["strength"]),
        "quadrature-tail": lambda: quadrature_tail(p["strength"]),
        "bump": lambda: compact_bump(p["strength"], 0.0, 5.0),
    }[family]()
    dev = _guard("check_ergodic_schrodinger", check_ergodic_schrodinger, pot, p["k"], grid)
    row = {"family": family, "k": p["k"], "points": len(grid), "max_deviation": dev}
    return list(row), [row], (), {}


def _structure_matrix(p) -> np.ndarray:
    if p["matrix"]:
        try:
            text = Path(p["matrix"]).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"matrix: cannot read {p['matrix']!r}: {exc}") from exc
        return matrix_from_json(text)
    from scipy.linalg import expm
    from scipy.stats import unitary_group

    rng = np.random.default_rng(p["seed"])
    dim = p["dim"]
    h = h_matrix(p["q"], p["m"])
    if dim == 8:
        h = np.kron(np.eye(2), h)
    if p["kind"] == "function":
        return expm(1j * rng.normal() * h + 1j * rng.normal() * h @ h)
    if p["kind"] == "random":
        return unitary_group.rvs(dim, random_state=rng)
    dec = eigensystem(p["q"], p["m"])
    p1, p2 = dec.projector_neg, dec.projector_pos
    if dim == 8:
        p1, p2 = np.kron(np.eye(2), p1), np.kron(np.eye(2), p2)
    u1 = unitary_group.rvs(dim, random_state=rng)
    u2 = unitary_group.rvs(dim, random_state=rng)
    # a unitary on each eigenspace: compress and re-orthonormalize by polar factor
    blocks = []
    for proj, u in ((p1, u1), (p2, u2)):
        w, s, vh = np.linalg.svd(proj @ u @ proj)
        rank = int(round(np.trace(proj).real))
        blocks.append(w[:, :rank] @ vh[:rank, :])
    return blocks[0] + blocks[1]


def run_dirac_structure(ctx: Context):
    p = ctx.params
    if p["dim"] not in (4, 8):
        raise PreconditionError("dim must be 4 or 8")
    S = _structure_matrix(p)
    off, defect = _guard("check_structure", check_structure, S, p["q"], p["m"])
    row = {"q1": p["q"][0], "q2": p["q"][1], "q3": p["q"][2], "m": p["m"],
           "offblock_norm": off, "block_unitarity_defect": defect}
    if p["corollary"] is not None:
        i, j = p["corollary"]
        row["corollary_modulus"] = _guard("corollary_modulus", corollary_modulus, S, i, j)
    return list(row), [row], (), {}


def _scale_samples(scales):
    for s in scales:
        if not s > 1:
            raise PreconditionError(f"scales must exceed 1, got {s!r}")
    return sorted(scales)


def run_divergence_demo(ctx: Context):
    p = ctx.params
    k = p["k"]
    prm = _guard("CoulombParams", CoulombParams, p["z"], k, p["ell"])
    f = bump(p["c1"], p["c2"])
    fk = f(k)
    if fk == 0.0:
        raise PreconditionError("k must lie inside the test-function support")
    w_plus = lambda t, g: abs(t) ** (-1j * g / k)
    w_minus = lambda tau, g: abs(tau) ** (1j * g / k)

    def row(T):
        raw = _guard("s1_truncated", s1_truncated, k, prm, T, -T, f) / fk
        reg = coupling_coefficient(raw, T, -T, w_plus, w_minus)
        return {"t": T, "log_scale": math.log(T * T), **_cplx("raw", raw), **_cplx("reg", reg)}

    rows = ctx.map(row, _scale_samples(p["scales"]))
    raw_fit = fit_log_growth([(r["t"] ** 2, r["im_raw"]) for r in rows])
    reg_fit = fit_log_growth([(r["t"] ** 2, r["im_reg"]) for r in rows])
    meta = {"raw_slope": raw_fit.slope, "reg_slope": reg_fit.slope, "expected_raw_slope": 1.0 / k}
    cols = ["t", "log_scale", "re_raw", "im_raw", "re_reg", "im_reg"]
    return cols, rows, ("t",), meta


def run_example82(ctx: Context):
    p = ctx.params
    q, eps, level = p["q"], p["eps"], p["p_const"]
    if not level > 0:
        raise PreconditionError("p-const must be positive")
    phi = -math.pi * level * level / (2.0 * q)
    f = bump(0.5 * q, 2.0 * q)
    fq = f(q)
    w_plus = lambda t, g: abs(t) ** (1j * g * phi)
    w_minus = lambda tau, g: abs(tau) ** (-1j * g * phi)

    def row(T):
        raw = _guard("s2_example", s2_example, q, T, -T, lambda x: level, 1.0, f) / fq
        reg = coupling_coefficient(raw, T, -T, w_plus, w_minus)
        return {"t": T, "log_scale": math.log(T * T), **_cplx("raw", raw), **_cplx("reg", reg),
                "re_term": (eps * eps * raw).real, "im_term": (eps * eps * raw).imag}

    rows = ctx.map(row, _scale_samples(p["scales"]))
    raw_fit = fit_log_growth([(r["t"] ** 2, r["im_raw"]) for r in rows])
    reg_fit = fit_log_growth([(r["t"] ** 2, r["im_reg"]) for r in rows])
    meta = {"fitted_phi": -raw_fit.slope, "expected_phi": phi, "reg_slope": reg_fit.slope}
    cols = ["t", "log_scale", "re_raw", "im_raw", "re_reg", "im_reg", "re_term", "im_term"]
    return cols, rows, ("t",), meta


def run_renorm_fit(ctx: Context):
    p = ctx.params
    if p["samples"]:
        samples = _guard("read_samples_csv", read_samples_csv, p["samples"])
    else:
        phi, psi, nu, mu = p["profile"]
        prof = DivergenceProfile(phi, psi, nu, mu)
        samples = [(L, 1j * (prof(L) + p["tail"] / L)) for L in p["L_grid"].values()]
    fit = _guard("fit_divergence_profile", fit_divergence_profile, samples)
    row = {"phi": fit.phi, "psi": fit.psi, "nu": fit.nu, "mu": fit.mu,
           "residual": fit.residual, "samples": len(samples)}
    return list(row), [row], (), {}


def run_dyson(ctx: Context):
    p = ctx.params
    T, c = p["T"], p["coupling"]
    s3 = np.diag([1.0, -1.0]).astype(complex)
    s1 = np.array([[0, 1], [1, 0]], dtype=complex)
    V = MatrixInteraction(lambda t: s3 + c * (t / T) * s1, 2)
    coeffs = _guard("dyson_coefficients", dyson_coefficients, V, 0.0, T, p["K"])

    def row(eps):
        U = dyson_sum(coeffs, eps)
        oracle = time_ordered_product(V, 0.0, T, eps, p["steps"])
        return {"eps": eps, "oracle_error": float(np.max(np.abs(U - oracle))),
                "unitarity_defect": float(np.linalg.norm(U.conj().T @ U - np.eye(2), 2))}

    rows = ctx.map(row, sorted(p["eps"], reverse=True))
    meta = {}
    if len(rows) >= 2 and all(r["unitarity_defect"] > 0 for r in rows):
        x = np.log([r["eps"] for r in rows])
        y = np.log([r["unitarity_defect"] for r in rows])
        meta["unitarity_exponent"] = float(np.polyfit(x, y, 1)[0])
    return ["eps", "oracle_error", "unitarity_defect"], rows, (), meta


@dataclass(frozen=True)
class Command:
    run: Callable[[Context], tuple]
    options: list[Option]
    default_format: str
    tolerances: dict[str, float]
    help: str


COMMANDS: dict[str, Command] = {
    "coulomb-table": Command(
        run_coulomb_table,
        [Option("z", float, "1", "Coulomb strength"),
         Option("lmax", int, "5", "largest angular momentum"),
         Option("k-grid", parse_grid, "0.1:10:100:log", "momentum grid min:max:count:spacing")],
        "csv", {}, "closed-form Coulomb scattering functions"),
    "radial-extract": Command(
        run_radial_extract,
        [Option("ell", parse_int_list, "0", "comma-separated angular momenta"),
         Option("k", parse_float_list, "1", "comma-separated momenta"),
         Option("potential", choice("zero", "coulomb", "inverse-square", "bump"), "coulomb", "potential family"),
         Option("z", float, "1", "Coulomb strength"),
         Option("strength", float, "1", "amplitude for the smooth families"),
         Option("R", float, "2000", "matching radius"),
         Option("basis", choice(*BASES), "adiabatic", "asymptotic basis"),
         Option("rtol", float, "1e-10", "integrator relative tolerance")],
        "csv", {"rtol": 1e-10}, "stationary scattering function from the radial Schrodinger equation"),
    "dirac-extract": Command(
        run_dirac_extract,
        [Option("kappa", parse_float_list, "1", "comma-separated Dirac quantum numbers"),
         Option("lam", parse_float_list, "2", "comma-separated energies"),
         Option("m", float, "1", "mass"),
         Option("A", float, "0.5", "Coulomb strength in v = -A/r"),
         Option("bump-height", float, "0", "optional compact bump added to v"),
         Option("R", float, "1000", "matching radius"),
         Option("basis", choice(*BASES), "adiabatic", "asymptotic basis"),
         Option("rtol", float, "1e-10", "integrator relative tolerance")],
        "csv", {"rtol": 1e-10}, "diagonal scattering matrix of the radial Dirac system"),
    "ergodic-check": Command(
        run_ergodic_check,
        [Option("family", choice("coulomb", "inverse-square", "inverse-linear", "quadrature-tail",
                                 "bump", "dirac"), "coulomb", "potential family"),
         Option("z", float, "1", "Coulomb strength"),
         Option("strength", float, "1", "amplitude for the smooth families"),
         Option("k", float, "1", "momentum"),
         Option("p", float, "1", "momentum for the dirac family"),
         Option("m", float, "1", "mass for the dirac family"),
         Option("t-grid", parse_grid, "1:1e4:50:log", "time grid")],
        "json", {"quadrature_epsrel": 1e-13}, "stationary vs dynamical deviation factors"),
    "dirac-structure": Command(
        run_dirac_structure,
        [Option("q", parse_vec3, "1,2,3", "momentum q1,q2,q3"),
         Option("m", float, "1", "mass"),
         Option("matrix", str, "", "JSON matrix file; synthetic matrix when empty"),
         Option("kind", choice("function", "random", "block"), "function", "synthetic matrix kind"),
         Option("dim", int, "4", "4 or 8"),
         Option("seed", int, "0", "random seed"),
         Option("corollary", parse_pair, None, "0-based row,column for the modulus check")],
        "json", {"unitarity": 1e-10}, "block structure of a unitary matrix in the Dirac eigenplanes"),
    "divergence-demo": Command(
        run_divergence_demo,
        [Option("k", float, "1", "momentum"),
         Option("z", float, "1", "Coulomb strength (the coefficient is per unit z)"),
         Option("ell", int, "0", "angular momentum"),
         Option("scales", parse_float_list, "1e2,1e3,1e4", "values of t = -tau"),
         Option("c1", float, "0.5", "test-function support start"),
         Option("c2", float, "2", "test-function support end")],
        "csv", {"quadrature_relative": 1e-8}, "raw vs regularized first-order Coulomb coefficient"),
    "example82": Command(
        run_example82,
        [Option("q", float, "1", "momentum"),
         Option("eps", float, "1", "coupling"),
         Option("p-const", float, "1", "constant value of the profile function p"),
         Option("scales", parse_float_list, "1e2,1e3,1e4", "values of t = -tau")],
        "csv", {"quadrature_relative": 1e-8}, "second-order logarithmic kernel example"),
    "renorm-fit": Command(
        run_renorm_fit,
        [Option("samples", str, "", "CSV with columns L, re_a2, im_a2; synthetic when empty"),
         Option("profile", lambda s: tuple(parse_float_list(s)), "2,3,0.5,1", "synthetic phi,psi,nu,mu"),
         Option("tail", float, "1", "synthetic 1/L tail coefficient"),
         Option("L-grid", parse_grid, "10:1e4:31:log", "synthetic cutoff grid")],
        "json", {"imaginary": 1e-8}, "fit a divergence profile to a2(L) samples"),
    "dyson": Command(
        run_dyson,
        [Option("K", int, "8", "truncation order"),
         Option("eps", parse_float_list, "0.2,0.1,0.05", "couplings"),
         Option("T", float, "4", "time window length"),
         Option("coupling", float, "1", "strength of the off-diagonal ramp"),
         Option("steps", int, "10000", "steps of the product oracle")],
        "csv", {"rtol": 1e-13}, "Dyson series vs time-ordered product"),
}


# ---------------------------------------------------------------------------
# configuration


def _key(name: str) -> str:
    return name.replace("-", "_")


def read_config_file(path: str, options: list[Option]) -> dict[str, tuple[str, str]]:
    """``key = value`` lines; returns ``{key: (raw value, location)}``."""
    known = {_key(o.name): o for o in options}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc}") from exc
    out = {}
    for lineno, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in text.split("=", 1))
        key = _key(key)
        if key not in known:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = (value, f"{path}:{lineno}")
    return out


def resolve_params(command: Command, flags: dict[str, str], config_path: str | None):
    options = command.options + COMMON
    raw = {_key(o.name): (o.default, "default") for o in options}
    if config_path:
        raw.update(read_config_file(config_path, options))
    raw.update({k: (v, f"--{k.replace('_', '-')}") for k, v in flags.items()})
    params = {}
    for opt in options:
        key = _key(opt.name)
        text, where = raw[key]
        if text is None:
            params[key] = None
            continue
        try:
            params[key] = opt.parse(text)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{where}: field {opt.name!r}: {exc}") from exc
    return params


def config_hash(subcommand: str, params: dict[str, Any]) -> str:
    canon = {k: str(v) for k, v in params.items() if k not in ("output", "threads", "format")}
    blob = json.dumps({"subcommand": subcommand, "params": canon}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _threads(value: int | None) -> int:
    if value is None:
        env = os.environ.get("GENSCATTER_THREADS")
        if env:
            try:
                value = int(env)
            except ValueError as exc:
                raise ConfigError(f"GENSCATTER_THREADS: not an integer: {env!r}") from exc
        else:
            value = os.cpu_count() or 1
    if value < 1:
        raise ConfigError("threads must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="genscatter", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, cmd in COMMANDS.items():
        sp = sub.add_parser(name, help=cmd.help, description=cmd.help)
        sp.add_argument("--config", default=None, help="key = value parameter file")
        for opt in cmd.options + COMMON:
            default = f" (default: {opt.default})" if opt.default not in (None, "") else ""
            sp.add_argument(f"--{opt.name}", dest=_key(opt.name), default=argparse.SUPPRESS,
                            help=opt.help + default)
    return parser


def execute(subcommand: str, params: dict[str, Any]) -> Table:
    cmd = COMMANDS[subcommand]
    ctx = Context(params, _threads(params.get("threads")))
    columns, rows, sort_keys, extra = cmd.run(ctx)
    if sort_keys:
        rows = sorted(rows, key=lambda r: tuple(r[k] for k in sort_keys))
    meta = {
        "subcommand": subcommand,
        "config_hash": config_hash(subcommand, params),
        "tolerances": cmd.tolerances,
        "version": __version__,
        **extra,
    }
    return Table(columns, rows, meta)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    subcommand = args.pop("subcommand")
    config = args.pop("config", None)
    cmd = COMMANDS[subcommand]
    try:
        params = resolve_params(cmd, args, config)
        fmt = params["format"] or cmd.default_format
        table = execute(subcommand, params)
        text = render(table, fmt)
        if params["output"]:
            Path(params["output"]).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except ConfigError as exc:
        print(f"genscatter {subcommand}: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OperationFailed as exc:
        code = EXIT_NUMERICAL if isinstance(exc.cause, NumericalError) else EXIT_PRECONDITION
        kind = "numerical failure" if code == EXIT_NUMERICAL else "precondition violated"
        print(f"genscatter {subcommand}: {kind} in {exc.operation}: {exc.cause}", file=sys.stderr)
        return code
    except PreconditionError as exc:
        print(f"genscatter {subcommand}: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except NumericalError as exc:
        print(f"genscatter {subcommand}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
