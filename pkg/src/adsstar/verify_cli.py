"""Verification driver: named check suites, JSON/CSV reports and point evaluations.

    adsstar check <suite> [--theta F] [--kappa F] [--tau F] [--beta F] [--grid-n N]
                          [--extent F] [--tol F] [--seed N] [--format json|csv] [--out PATH]
    adsstar eval <target> [--args key=value ...] [--out PATH]

Exit codes: 0 when every entry passes, 1 on any tolerance failure, 2 on an
invalid configuration or usage error.
"""
import argparse
import cmath
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import checks
from .errors import AdsStarError, InvalidConfigError

SUITES = ("specfun", "products", "starexp", "intertwiners", "orthogonality", "identity", "consistency")
FIELDS = ("check_id", "params", "measured_error", "tolerance", "pass", "runtime_ms")


def _identity_entry(i):
    def run(cfg):
        tau, alpha, beta, rho = checks.IDENTITY_CASES[i]
        return checks.identity_case(cfg.tau if i == 0 else tau, alpha, beta, rho)
    return run


# (suite, name, check, tolerance); report order follows this table
REGISTRY = [
    ("specfun", "wronskian_jy", checks.specfun_wronskian_jy, 1e-8),
    ("specfun", "wronskian_ik", checks.specfun_wronskian_ik, 1e-8),
    ("specfun", "asymptotic_envelope", checks.specfun_asymptotic_envelope, 1.0),
    ("specfun", "a_ode_residual", checks.specfun_a_ode, 1e-5),
    ("specfun", "a_two_forms", checks.specfun_a_forms, 1e-10),
    ("specfun", "gamma", checks.specfun_gamma, 1e-12),
    ("products", "hat_associativity", checks.products_hat_associativity, 1e-8),
    ("products", "hat_direct_star0", checks.products_hat_direct_star0, 1e-5),
    ("products", "hat_direct_sharp", checks.products_hat_direct_sharp, 1e-5),
    ("products", "axiom1_star0", checks.products_axiom1_star0, 1e-6),
    ("products", "axiom2_star0", checks.products_axiom2_star0, 1e-6),
    ("products", "axiom1_sharp", checks.products_axiom1_sharp, 1e-6),
    ("products", "axiom2_sharp", checks.products_axiom2_sharp, 1e-6),
    ("products", "axiom2_star1", checks.products_axiom2_star1, 1e-6),
    ("products", "commutator_he", checks.products_commutator_he, 1e-4),
    ("products", "commutator_hf", checks.products_commutator_hf, 1e-4),
    ("products", "commutator_ef", checks.products_commutator_ef, 1e-4),
    ("products", "hat_isometry", checks.products_hat_isometry, 1e-6),
    ("products", "star1_vs_t01", checks.products_star1_vs_t01, 1e-4),
    ("products", "star1_associativity", checks.products_star1_associativity, 1e-4),
    ("starexp", "ode_h", checks.starexp_ode_h, 1e-4),
    ("starexp", "ode_e", checks.starexp_ode_e, 1e-4),
    ("starexp", "ode_coord", checks.starexp_ode_coord, 1e-4),
    ("starexp", "bch_phase", checks.starexp_bch_phase, 1e-6),
    ("starexp", "bch_windowed", checks.starexp_bch_windowed, 1e-4),
    ("starexp", "principal_series_unitarity", checks.starexp_ps_unitarity, 1e-4),
    ("starexp", "principal_series_homomorphism", checks.starexp_ps_homomorphism, 1e-3),
    ("starexp", "group_homomorphism", checks.starexp_group_homomorphism, 1e-3),
    ("intertwiners", "t01_roundtrip", checks.intertwiners_t01_roundtrip, 1e-4),
    ("intertwiners", "t01_unitarity", checks.intertwiners_t01_unitarity, 1e-4),
    ("intertwiners", "t01_moment_maps", checks.intertwiners_t01_lambda, 1e-6),
    ("intertwiners", "w_unitarity", checks.intertwiners_w_unitarity, 1e-3),
    ("intertwiners", "w_cone_deficit", checks.intertwiners_w_cone_deficit, 1e-3),
    ("intertwiners", "w_intertwining", checks.intertwiners_w_intertwining, 1e-3),
    ("intertwiners", "w_equivariance", checks.intertwiners_w_equivariance, 1e-3),
    ("intertwiners", "w_multipliers", checks.intertwiners_multipliers, 1e-3),
    ("intertwiners", "j_isometry", checks.intertwiners_j_isometry, 1e-3),
    ("intertwiners", "j_orthogonal", checks.intertwiners_j_orthogonal, 1e-3),
    ("intertwiners", "j_resolution", checks.intertwiners_j_resolution, 1e-3),
    ("intertwiners", "j_equivariance", checks.intertwiners_j_equivariance, 1e-3),
    ("intertwiners", "u1_law", checks.intertwiners_u1_law, 1e-6),
    ("orthogonality", "l2_reconstruction", checks.orthogonality_l2, 2e-2),
    ("identity", "watson_closed_form", checks.identity_watson_closed, 1e-6),
    ("identity", "watson_loop", checks.identity_watson_loop, 1e-4),
    ("identity", "final_a1_b1_t1_r1", _identity_entry(0), 1e-2),
    ("identity", "final_a1_b1_t1_r08", _identity_entry(1), 1e-2),
    ("identity", "final_a1_b2_t05_r1", _identity_entry(2), 1e-2),
    ("identity", "final_a1_b2_t05_r08", _identity_entry(3), 1e-2),
    ("consistency", "starexp_f_vs_principal_series", checks.consistency_starexp_f, 1e-2),
    ("consistency", "script_t_unit", checks.consistency_script_t_unit, 1e-2),
    ("consistency", "geometry_group_law", checks.geometry_group_law, 1e-12),
    ("consistency", "geometry_unipotent_limit", checks.geometry_unipotent, 1e-12),
    ("consistency", "geometry_classification", checks.geometry_classification, 0.0),
]


@dataclass
class CheckReport:
    """Named verification results; ``entries`` are dicts with the six FIELDS."""

    suite: str
    entries: list = field(default_factory=list)

    def __post_init__(self):
        if not self.entries:
            raise InvalidConfigError("a report needs at least one entry")
        for e in self.entries:
            if tuple(e) != FIELDS:
                raise InvalidConfigError(f"entry keys must be {FIELDS}")
            if e["pass"] != _passes(e["measured_error"], e["tolerance"]):
                raise InvalidConfigError(f"pass flag of {e['check_id']} contradicts its error")

    @property
    def all_pass(self):
        return all(e["pass"] for e in self.entries)


def _passes(err, tol):
    return bool(math.isfinite(err) and err <= tol)


def make_entry(check_id, params, measured_error, tolerance, runtime_ms):
    err = float(measured_error)
    return {"check_id": check_id, "params": params, "measured_error": err, "tolerance": float(tolerance),
            "pass": _passes(err, tolerance), "runtime_ms": int(runtime_ms)}


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def suite_entries(name):
    if name == "all":
        return list(REGISTRY)
    if name not in SUITES:
        raise InvalidConfigError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    return [r for r in REGISTRY if r[0] == name]


def run_suite(name, config=None, tol=None, only=None):
    """Run a suite and return its :class:`CheckReport`.

    ``tol`` overrides every tolerance (the override is recorded in each
    entry's params).  ``only`` restricts to check ids containing the string.
    A check that raises a library error is reported with an infinite error.
    """
    config = config or checks.CheckConfig()
    entries = []
    for suite, short, fn, tolerance in suite_entries(name):
        check_id = f"{suite}.{short}"
        if only and only not in check_id:
            continue
        t0 = time.perf_counter()
        try:
            err, params = fn(config)
        except AdsStarError as exc:
            err, params = math.inf, {"error": f"{type(exc).__name__}: {exc}"}
        params = _jsonable(dict(params))
        if tol is not None:
            params["tolerance_override"] = True
            tolerance = tol
        entries.append(make_entry(check_id, params, err, tolerance, 1000 * (time.perf_counter() - t0)))
    if not entries:
        raise InvalidConfigError(f"no checks selected in suite {name!r}")
    return CheckReport(name, entries)


# ---------------------------------------------------------------------------
# serialization

def dumps(report, fmt="json"):
    if fmt == "json":
        return json.dumps(report.entries, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(FIELDS)
        for e in report.entries:
            w.writerow([e["check_id"], json.dumps(e["params"], sort_keys=True), repr(e["measured_error"]),
                        repr(e["tolerance"]), "true" if e["pass"] else "false", e["runtime_ms"]])
        return buf.getvalue()
    raise InvalidConfigError(f"unknown format {fmt!r}")


def emit(report, fmt, path):
    """Write ``report`` as JSON (array of entries) or CSV (six columns) to ``path``."""
    if not isinstance(report, CheckReport) or not report.entries:
        raise InvalidConfigError("cannot emit an empty report")
    text = dumps(report, fmt)
    with open(path, "w") as fh:
        fh.write(text)


def loads(text, fmt="json", suite="loaded"):
    if fmt == "json":
        entries = json.loads(text)
    elif fmt == "csv":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or tuple(rows[0]) != FIELDS:
            raise InvalidConfigError("csv header must list the six report fields")
        entries = []
        for r in rows[1:]:
            if len(r) != len(FIELDS):
                raise InvalidConfigError("csv rows must have six columns")
            entries.append({"check_id": r[0], "params": json.loads(r[1]), "measured_error": float(r[2]),
                            "tolerance": float(r[3]), "pass": r[4] == "true", "runtime_ms": int(r[5])})
    else:
        raise InvalidConfigError(f"unknown format {fmt!r}")
    return CheckReport(suite, [{k: e[k] for k in FIELDS} for e in entries])


def read_report(path, fmt=None):
    fmt = fmt or ("csv" if str(path).endswith(".csv") else "json")
    with open(path) as fh:
        return loads(fh.read(), fmt)


# ---------------------------------------------------------------------------
# eval

def _kv(args):
    out = {}
    for a in args or []:
        if "=" not in a:
            raise InvalidConfigError(f"argument {a!r} is not key=value")
        k, v = a.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _num(kv, key, default=None, kind=float):
    if key not in kv:
        if default is None:
            raise InvalidConfigError(f"missing argument {key}=...")
        return default
    try:
        return kind(kv[key])
    except ValueError:
        raise InvalidConfigError(f"bad value for {key}: {kv[key]!r}") from None


def _p_from(kv):
    if "p" in kv:
        return complex(kv["p"].replace(" ", ""))
    return _num(kv, "rho", 1.0) * cmath.exp(0.25j * math.pi)


def evaluate(target, kv, params, out=None):
    """Evaluate one target; returns a dict of printable results."""
    from . import specfun
    from .identities import identity_lhs, identity_rhs
    from .starexp import starexp_F_bessel

    if target == "tilde_family":
        kind = kv.get("kind", "J")
        v = specfun.tilde_family(kind, _num(kv, "tau"), _num(kv, "x"))
        return {"value": float(v)}
    if target == "spectral_A":
        v = specfun.spectral_A(_num(kv, "tau"), _num(kv, "alpha"), _num(kv, "s"), form=kv.get("form", "raw"))
        return {"value": float(v)}
    if target == "starexp_F_bessel":
        v, e = starexp_F_bessel(_num(kv, "t"), params, _num(kv, "x"), _num(kv, "y"))
        return {"value": complex(v), "err_est": float(e)}
    if target in ("identity_lhs", "identity_rhs"):
        fn = identity_lhs if target == "identity_lhs" else identity_rhs
        v, e = fn(_num(kv, "tau"), _num(kv, "alpha"), _num(kv, "beta"), _p_from(kv))
        return {"value": complex(v), "err_est": float(e)}
    if target == "w_eps":
        from .grid import linspace_grid, write_grid
        from .intertwine import WParams, w_eps_apply
        q0, y0 = _num(kv, "q0", 0.0), _num(kv, "y0", 1.0)
        sq, sy = _num(kv, "sq", 1.5), _num(kv, "sy", 0.25)
        f = linspace_grid("psi", lambda Q, Y: np.exp(-(Q - q0) ** 2 / (2 * sq * sq) - (Y - y0) ** 2 / (2 * sy * sy)),
                          (-10, 10), 161, (-3, 3), 121)
        wp = WParams(_num(kv, "eps", 1, int), _num(kv, "beta", -1.0))
        w = w_eps_apply(f, wp, params, alim=(_num(kv, "amin", -1.0), _num(kv, "amax", 3.0)),
                        na=_num(kv, "na", 129, int), llim=(-12.0, 12.0), nl=_num(kv, "nl", 192, int))
        norm = params.kappa * w.dx * w.dy * float(np.sum(np.abs(w.values) ** 2))
        if out:
            write_grid(w, out)
        return {"shape": list(w.values.shape), "norm_squared": norm, "w_truncation": w.meta["w_truncation"],
                "grid_file": out}
    raise InvalidConfigError(f"unknown eval target {target!r}")


# ---------------------------------------------------------------------------
# command line

def _parser():
    p = argparse.ArgumentParser(prog="adsstar", description="Verification suites and evaluations.")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", help="run a verification suite")
    c.add_argument("suite", help="one of " + ", ".join(SUITES + ("all",)))
    e = sub.add_parser("eval", help="evaluate a library function")
    e.add_argument("target", help="tilde_family, spectral_A, starexp_F_bessel, w_eps, identity_lhs, identity_rhs")
    e.add_argument("--args", nargs="*", default=[], help="key=value arguments")
    for q in (c, e):
        q.add_argument("--theta", type=float, default=1.0)
        q.add_argument("--kappa", type=float, default=1.0)
        q.add_argument("--out", default=None)
    c.add_argument("--tau", type=float, default=1.0)
    c.add_argument("--beta", type=float, default=-1.0)
    c.add_argument("--grid-n", type=int, default=256)
    c.add_argument("--extent", type=float, default=3.0)
    c.add_argument("--tol", type=float, default=None)
    c.add_argument("--seed", type=int, default=42)
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.add_argument("--only", default=None, help="run only checks whose id contains this string")
    return p


def main(argv=None):
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if args.command == "check":
            if args.tol is not None and not args.tol >= 0:
                raise InvalidConfigError("--tol must be non-negative")
            cfg = checks.CheckConfig(theta=args.theta, kappa=args.kappa, tau=args.tau, beta=args.beta,
                                     grid_n=args.grid_n, extent=args.extent, seed=args.seed)
            report = run_suite(args.suite, cfg, tol=args.tol, only=args.only)
            if args.out:
                emit(report, args.format, args.out)
            else:
                sys.stdout.write(dumps(report, args.format) + ("\n" if args.format == "json" else ""))
            for e in report.entries:
                sys.stderr.write(f"{'PASS' if e['pass'] else 'FAIL'} {e['check_id']}: "
                                 f"{e['measured_error']:.3e} (tol {e['tolerance']:.1e})\n")
            return 0 if report.all_pass else 1
        from .params import DeformParams
        res = evaluate(args.target, _kv(args.args), DeformParams(args.theta, args.kappa), args.out)
        sys.stdout.write(json.dumps(_jsonable(res)) + "\n")
        return 0
    except InvalidConfigError as exc:
        sys.stderr.write(f"adsstar: {exc}\n")
        return 2
    except (AdsStarError, ValueError) as exc:
        sys.stderr.write(f"adsstar: {type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
