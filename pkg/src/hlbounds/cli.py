"""Command-line front end.

Subcommands: qfi, bounds, variational, table, figure.  Every command is
deterministic given its flags (seeds included); JSON output uses flat
snake_case keys with infinities serialized as the string "inf", CSV output
uses 17 significant digits with LF line endings.  Diagnostics go to stderr,
data to stdout or --output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import bounds as bnd
from . import catalog
from . import variational as vr
from .errors import HlboundsError, InvalidArgumentError
from .operators import (
    build_fixed_atom_generators,
    build_free_atom_generators,
    build_pauli_generators,
    build_two_sector_generators,
)
from .qfi import qfi_pure, saturability, trace_inverse
from .states import (
    noon_coefficients,
    sin_coefficients,
    superposed_noon_state,
    uniform_state,
)

GENERATOR_MODELS = ("fixed-atoms", "free-atoms", "pauli1", "pauli2", "pauli3", "two-sector")
_CATALOG_NAMES = {"pauli1": "pauli1", "pauli2": "pauli2", "pauli3": "pauli3"}


def _build_model(name, p, alpha, beta):
    if name == "fixed-atoms":
        return build_fixed_atom_generators(p)
    if name == "free-atoms":
        return build_free_atom_generators(p)
    if name == "pauli1":
        return build_pauli_generators("z")
    if name == "pauli2":
        return build_pauli_generators("xy")
    if name == "pauli3":
        return build_pauli_generators("xyz")
    if name == "two-sector":
        return build_two_sector_generators(alpha, beta)
    raise InvalidArgumentError(f"unknown model {name!r}")


def _build_state(name, gens, p, n):
    aliases = {
        "uniform": "uniform",
        "plus-product": "uniform",
        "noon": "uniform",
        "superposed-noon": "uniform",
        "basis0": "basis0",
    }
    kind = aliases.get(name)
    if kind is None:
        raise InvalidArgumentError(f"unknown state {name!r}")
    if name == "superposed-noon":
        return superposed_noon_state(p, n)
    if kind == "basis0":
        amps = np.zeros(gens.dim, dtype=complex)
        amps[0] = 1.0
        from .states import PureState

        return PureState(amps)
    return uniform_state(gens.dim)


def _sanitize(obj):
    """Make a structure JSON-serializable; +-inf becomes the string 'inf'."""
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _sanitize(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        obj = float(obj)
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    return obj


def _emit(payload, args, csv_columns=None):
    fmt = args.format
    if fmt == "csv":
        if csv_columns is None:
            raise InvalidArgumentError("this command has no CSV representation")
        lines = [",".join(csv_columns)]
        for row in payload:
            cells = []
            for col in csv_columns:
                v = row.get(col, "")
                if isinstance(v, float):
                    cells.append("inf" if math.isinf(v) else f"{v:.17g}")
                elif v is None:
                    cells.append("")
                else:
                    cells.append(str(v))
            lines.append(",".join(cells))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(_sanitize(payload), indent=2) + "\n"
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_qfi(args):
    gens = _build_model(args.model, args.p, args.alpha, args.beta)
    psi = _build_state(args.state, gens, args.p, args.n)
    theta0 = np.zeros(gens.p)
    f = qfi_pure(gens, theta0, psi, args.n)
    report = saturability(gens, theta0, psi)
    payload = {
        "model": args.model,
        "p": gens.p,
        "n": args.n,
        "state": args.state,
        "F": f.entries.tolist(),
        "trace_inverse": trace_inverse(f),
        "saturable": report.saturable,
        "imag_max": float(np.max(np.abs(report.imag_parts))),
    }
    _emit(payload, args)
    return 0


def _bounds_rows_generator_model(gens, budget, paradigm):
    rows = []
    constants = bnd.per_parameter_spread_constants(gens, paradigm)
    sep = bnd.sep_cost(gens, budget, constants, nuisance_free=True)
    rows.append(_estimate_row(sep))
    rows.append(_estimate_row(bnd.sep_plus_lower_bound(gens, budget), variant="lower"))
    _, upper = bnd.sep_plus_optimize(gens, budget)
    rows.append(_estimate_row(upper, variant="search"))
    jnt = bnd.jnt_lower_bound(gens, budget)
    rows.append(_estimate_row(jnt, variant="rotation_bound"))
    return rows


def _estimate_row(est, variant=""):
    return {
        "strategy": est.strategy,
        "variant": variant,
        "constant": est.constant,
        "p_exponent": est.p_exponent,
        "scaling": "1/N^2" if est.paradigm == "mm" else (
            "1/(k n (n+2))" if est.finite_n else "1/(k n^2)"
        ),
        "status": est.status,
        "provenance": est.provenance,
    }


def _entry_row(entry, p, n):
    return {
        "strategy": entry.strategy,
        "variant": entry.variant,
        "constant": entry.effective_constant(p, n),
        "p_exponent": entry.p_exponent,
        "scaling": "1/N^2" if entry.paradigm == "mm" else (
            "1/(k n (n+2))" if entry.finite_n else "1/(k n^2)"
        ),
        "status": entry.status,
        "provenance": entry.provenance,
    }


def cmd_bounds(args):
    paradigm = args.paradigm
    if paradigm == "cr":
        budget = bnd.ResourceBudget("cr", n=args.n, k=args.k)
    else:
        budget = bnd.ResourceBudget("mm", N=args.N)

    if args.model in _CATALOG_NAMES:
        record = catalog.get_model(_CATALOG_NAMES[args.model])
        rows = [
            _entry_row(e, record.p_fixed, args.n)
            for e in record.entries
            if e.paradigm == paradigm
        ]
    elif args.model == "two-sector":
        if paradigm != "cr":
            raise InvalidArgumentError("the two-sector model is analyzed in the CR paradigm only")
        gens = build_two_sector_generators(args.alpha, args.beta)
        oracle = bnd.elfving_variance_oracle(gens, "cr")
        from .operators import ReparamMatrix

        identity_cost = bnd.sep_plus_value(ReparamMatrix(np.eye(2)), oracle, 1, 2)
        rows = [
            {
                "strategy": "sep",
                "variant": "",
                "constant": identity_cost,
                "p_exponent": 0,
                "scaling": "1/(k n^2)",
                "status": "exact_asymptotic",
                "provenance": "computed: per-parameter nuisance-aware constants at identity",
            }
        ]
        _, est = bnd.sep_plus_optimize(gens, budget)
        rows.append(_estimate_row(est, variant="search"))
        rows.append(
            {
                "strategy": "sep_plus",
                "variant": "orthogonal_restricted",
                "constant": bnd.orthogonal_restricted_sep_plus(
                    (args.alpha, args.beta), args.angle_grid
                ),
                "p_exponent": 0,
                "scaling": "1/(k n^2)",
                "status": "exact_asymptotic",
                "provenance": "computed: rotation-angle scan with nuisance-aware constants",
            }
        )
        f = qfi_pure(gens, np.zeros(2), uniform_state(4), 1)
        rows.append(
            {
                "strategy": "jnt",
                "variant": "",
                "constant": trace_inverse(f),
                "p_exponent": 0,
                "scaling": "1/(k n^2)",
                "status": "exact_asymptotic",
                "provenance": "computed: trace of inverse information at the uniform probe",
            }
        )
    else:
        gens = _build_model(args.model, args.p, args.alpha, args.beta)
        rows = _bounds_rows_generator_model(gens, budget, paradigm)
        if args.model == "free-atoms" and paradigm == "mm":
            airy = vr.airy_lower_bound()
            p3 = args.p ** 3
            rows.append(
                {
                    "strategy": "jnt",
                    "variant": "airy_lower",
                    "constant": airy.constant * p3,
                    "p_exponent": 3,
                    "scaling": "1/N^2",
                    "status": "lower_bound",
                    "provenance": "computed: symmetrized Airy variational bound",
                }
            )
            rows.append(
                {
                    "strategy": "jnt",
                    "variant": "ball_limit_upper",
                    "constant": float(p3),
                    "p_exponent": 3,
                    "scaling": "1/N^2",
                    "status": "upper_bound",
                    "provenance": "cited: inscribed-ball trial state, large-p limit",
                }
            )
            rows.append(
                {
                    "strategy": "jnt",
                    "variant": "rotation_bound_as_published",
                    "constant": float(args.p ** 2),
                    "p_exponent": 2,
                    "scaling": "1/N^2",
                    "status": "lower_bound",
                    "provenance": "cited: rotation bound as published (pi^2 bookkeeping dropped)",
                }
            )
    _emit(rows, args, csv_columns=[
        "strategy", "variant", "constant", "p_exponent", "scaling", "status", "provenance",
    ])
    return 0


def cmd_variational(args):
    if args.target == "simplex":
        spec = vr.simplex_ground_energy(args.p, args.grid)
        payload = {
            "target": "simplex",
            "p": spec.p,
            "grid": args.grid,
            "h": spec.h,
            "E": spec.E,
            "iterations": spec.iterations,
            "residual": spec.residual,
        }
    elif args.target == "airy":
        res = vr.airy_lower_bound(args.cutoff)
        payload = {
            "target": "airy",
            "a_prime_zero": res.a_prime_zero,
            "I_norm": res.I_norm,
            "I_mean": res.I_mean,
            "I_kinetic": res.I_kinetic,
            "constant": res.constant,
        }
    elif args.target == "ball":
        e = vr.ball_upper_bound(args.p)
        payload = {"target": "ball", "p": args.p, "E": e, "E_over_p3": e / args.p ** 3}
    else:  # phase
        if args.family == "sin":
            coeffs = sin_coefficients(args.N)
        elif args.family == "noon":
            coeffs = noon_coefficients(args.N)
        else:
            raise InvalidArgumentError(f"unknown phase family {args.family!r}")
        payload = {
            "target": "phase",
            "family": args.family,
            "N": args.N,
            "analytic": vr.phase_cost_analytic(coeffs),
        }
        if args.mc_samples:
            model = vr.PhaseMeasurementModel(coeffs, args.pdf_grid)
            mean, stderr = vr.phase_cost_monte_carlo(model, args.mc_samples, args.seed)
            payload["monte_carlo"] = {
                "samples": args.mc_samples,
                "seed": args.seed,
                "pdf_grid": args.pdf_grid,
                "mean": mean,
                "stderr": stderr,
            }
    _emit(payload, args)
    return 0


def cmd_table(args):
    rows = []
    for record in catalog.table_one():
        for e in record.entries:
            rows.append(
                {
                    "model": e.model,
                    "paradigm": e.paradigm,
                    "strategy": e.strategy,
                    "variant": e.variant,
                    "coefficient": e.coefficient,
                    "p_exponent": e.p_exponent,
                    "scaling": "1/N^2" if e.paradigm == "mm" else (
                        "1/(k n (n+2))" if e.finite_n else "1/(k n^2)"
                    ),
                    "status": e.status,
                    "provenance": e.provenance,
                }
            )
    _emit(rows, args, csv_columns=[
        "model", "paradigm", "strategy", "variant", "coefficient",
        "p_exponent", "scaling", "status", "provenance",
    ])
    return 0


def cmd_figure(args):
    if args.target == "ball":
        rows, analytic = catalog.figure_ball_data(args.p_max)
        out = []
        for r in rows:
            out.append({"kind": "series", **r, "analytic_norm": None})
        for r in analytic:
            out.append(
                {
                    "kind": "analytic",
                    "p": r["p"],
                    "sep_norm": None,
                    "ball_norm": None,
                    "airy_norm": None,
                    "analytic_norm": r["analytic_norm"],
                }
            )
        _emit(out, args, csv_columns=[
            "kind", "p", "sep_norm", "ball_norm", "airy_norm", "analytic_norm",
        ])
    else:  # ratio
        steps = args.beta_steps
        grid = [args.alpha * (i + 1) / (steps + 1) for i in range(steps)]
        rows = catalog.figure_ratio_data(args.alpha, grid, args.angle_grid)
        _emit(rows, args, csv_columns=["beta_over_alpha", "ratio"])
    return 0


# ---------------------------------------------------------------------------
# argument plumbing


def _add_common(parser):
    parser.add_argument("--config", default=None, help="JSON config file; flags override it")
    parser.add_argument("--output", default=None, help="output path (default stdout)")
    parser.add_argument("--format", choices=("json", "csv"), default=None)
    parser.add_argument("--seed", type=int, default=1234, help="random seed for sampling")
    parser.add_argument("--threads", type=int, default=1,
                        help="reserved; computations are single-process and deterministic")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hlbounds",
        description="Optimal-precision costs for multiparameter quantum metrology",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("qfi", help="quantum Fisher information of a model/state pair")
    q.add_argument("--model", required=True, choices=GENERATOR_MODELS)
    q.add_argument("--p", type=int, default=2)
    q.add_argument("--n", type=int, default=1)
    q.add_argument("--alpha", type=float, default=1.0)
    q.add_argument("--beta", type=float, default=0.5)
    q.add_argument("--state", default="uniform")
    _add_common(q)
    q.set_defaults(func=cmd_qfi, default_format="json")

    b = sub.add_parser("bounds", help="strategy cost constants for a model")
    b.add_argument("--model", required=True, choices=GENERATOR_MODELS)
    b.add_argument("--p", type=int, default=2)
    b.add_argument("--paradigm", required=True, choices=("cr", "mm"))
    b.add_argument("--n", type=int, default=100)
    b.add_argument("--k", type=int, default=1)
    b.add_argument("--N", type=int, default=100)
    b.add_argument("--alpha", type=float, default=1.0)
    b.add_argument("--beta", type=float, default=0.5)
    b.add_argument("--angle-grid", type=int, default=180)
    _add_common(b)
    b.set_defaults(func=cmd_bounds, default_format="json")

    v = sub.add_parser("variational", help="minimax variational computations")
    v.add_argument("target", choices=("simplex", "airy", "ball", "phase"))
    v.add_argument("--p", type=int, default=2)
    v.add_argument("--grid", type=int, default=160)
    v.add_argument("--cutoff", type=float, default=14.0)
    v.add_argument("--family", default="sin")
    v.add_argument("--N", type=int, default=20)
    v.add_argument("--mc-samples", type=int, default=0)
    v.add_argument("--pdf-grid", type=int, default=2 ** 14)
    _add_common(v)
    v.set_defaults(func=cmd_variational, default_format="json")

    t = sub.add_parser("table", help="the six-model cost-constant registry")
    _add_common(t)
    t.set_defaults(func=cmd_table, default_format="json")

    f = sub.add_parser("figure", help="figure data files (CSV by default)")
    f.add_argument("target", choices=("ball", "ratio"))
    f.add_argument("--p-max", type=int, default=20)
    f.add_argument("--alpha", type=float, default=1.0)
    f.add_argument("--beta-steps", type=int, default=50)
    f.add_argument("--angle-grid", type=int, default=180)
    _add_common(f)
    f.set_defaults(func=cmd_figure, default_format="csv")

    return parser


def _apply_config(args, argv):
    """Config file values fill in anything not given on the command line."""
    if not args.config:
        return args
    with open(args.config) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise InvalidArgumentError("config file must hold a JSON object")
    known = set(vars(args))
    explicit = {
        token[2:].split("=")[0].replace("-", "_")
        for token in argv
        if token.startswith("--")
    }
    for key, value in data.items():
        dest = key.replace("-", "_")
        if dest not in known:
            raise InvalidArgumentError(f"unknown config key {key!r}")
        if dest not in explicit:
            setattr(args, dest, value)
    return args


def _validate(args):
    positive = ("p", "n", "k", "N", "grid", "p_max", "beta_steps", "angle_grid",
                "pdf_grid", "threads")
    for name in positive:
        value = getattr(args, name, None)
        if value is not None and value < 1:
            raise InvalidArgumentError(f"--{name.replace('_', '-')} must be positive")
    if getattr(args, "mc_samples", 0) < 0:
        raise InvalidArgumentError("--mc-samples must be nonnegative")


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config(args, argv)
        if args.format is None:
            args.format = getattr(args, "default_format", "json")
        _validate(args)
        return args.func(args)
    except HlboundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
