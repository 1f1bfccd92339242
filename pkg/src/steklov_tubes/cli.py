"""Command line front-end: reproducible eigenvalue tables per scenario.

Subcommands:

  model-spectrum  merged SN/SD model spectrum of a scenario at each eps
  bracket         two-sided bounds for sigma_ell across an eps grid
  rates           representative-mode limits fitted over an eps sweep
  sphere-caps     closed forms for the sphere with two caps removed
  fem             triangle-mesh Steklov/Neumann spectra (disk, annulus,
                  flat torus minus disks)
  bounds          explicit lower-bound constant and threshold checks
  verify-all      the full acceptance suite

Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 acceptance failure.  Failures print one JSON object on stderr.

Output tables are byte-stable: floats are written with repr, JSON keys
are sorted, and no timestamps appear in any artifact.  Run metadata
that is not part of the artifact (the delta in effect, progress lines)
goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import bounds as bounds_mod
from . import families, spherecaps, tables
from .errors import ConfigurationError, NumericalError
from .fem import (
    Annulus,
    Disk,
    mesh_planar,
    mesh_torus_minus_disks,
    neumann_spectrum,
    steklov_spectrum,
)
from .harmonics import ExcisionScenario, load_scenario

RATE_COLUMNS = (
    "j",
    "k",
    "q",
    "family",
    "normalization",
    "predicted",
    "fitted",
    "monotone",
)

BRACKET_COLUMNS = ("eps", "ell", "lower", "upper")

BOUND_COLUMNS = (
    "constant_C",
    "exponent",
    "term_dimension",
    "term_volume",
    "term_spectral",
    "binding_term",
)


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors, which collides with
    # the numerical-failure code; reroute to the configuration path.
    def error(self, message):
        raise ConfigurationError(message)


def _eps_grid(values: list[float], delta: float | None = None) -> list[float]:
    if not values:
        raise ConfigurationError("need at least one --eps value")
    if any(e <= 0 for e in values):
        raise ConfigurationError(f"eps values must be > 0, got {values}")
    if any(b >= a for a, b in zip(values, values[1:])):
        raise ConfigurationError(f"eps grid must be strictly decreasing, got {values}")
    if delta is not None and values[0] >= delta:
        raise ConfigurationError(
            f"every eps must be < delta, got eps={values[0]}, delta={delta}"
        )
    return list(values)


def _resolve_delta(arg_delta: float | None) -> float:
    if arg_delta is None:
        delta = families.DELTA_DEFAULT
        print(f"# delta = {delta!r} (default)", file=sys.stderr)
    else:
        delta = arg_delta
        print(f"# delta = {delta!r}", file=sys.stderr)
    if delta <= 0:
        raise ConfigurationError(f"delta must be > 0, got {delta}")
    return delta


def _emit(rows: list[dict], columns: tuple[str, ...], args) -> None:
    def write(out):
        if args.format == "csv":
            tables.write_csv(rows, columns, out)
        else:
            tables.write_json(rows, out)

    if args.out is None:
        write(sys.stdout)
    else:
        with open(args.out, "w") as out:
            write(out)


def _load(path: str) -> ExcisionScenario:
    try:
        return load_scenario(path)
    except FileNotFoundError as exc:
        raise ConfigurationError(f"scenario file not found: {path}") from exc
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ConfigurationError(f"bad scenario file {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# subcommands


def _cmd_model_spectrum(args) -> int:
    scenario = _load(args.scenario)
    delta = _resolve_delta(args.delta)
    grid = _eps_grid(args.eps, delta)
    rows = []
    for eps in grid:
        entries = families.truncated_spectrum(
            scenario,
            eps,
            delta,
            args.count,
            family_kind=args.family,
            k_max=args.kmax,
            q_max=args.qmax,
            include_zero_modes=args.include_zero_modes,
        )
        rows.extend(tables.mode_rows(eps, entries))
    _emit(rows, tables.MODE_COLUMNS, args)
    return 0


def _cmd_bracket(args) -> int:
    scenario = _load(args.scenario)
    delta = _resolve_delta(args.delta)
    grid = _eps_grid(args.eps, delta)
    if args.ell_max < 0:
        raise ConfigurationError(f"--ell-max must be >= 0, got {args.ell_max}")
    rows = []
    for eps in grid:
        for ell in range(args.ell_max + 1):
            lower, upper = families.bracket(scenario, eps, delta, ell)
            rows.append({"eps": eps, "ell": ell, "lower": lower, "upper": upper})
    _emit(rows, BRACKET_COLUMNS, args)
    return 0


def _cmd_rates(args) -> int:
    scenario = _load(args.scenario)
    delta = _resolve_delta(args.delta)
    grid = _eps_grid(args.eps, delta)
    if len(grid) < 3:
        raise ConfigurationError(f"rates needs at least 3 eps values, got {len(grid)}")
    rows = families.rate_table(scenario, grid, delta, q_max=args.qmax)
    _emit(rows, RATE_COLUMNS, args)
    return 0


def _caps_row(eps: float, n: int, parity: str, mult: int, sigma: float) -> dict:
    return {
        "eps": eps,
        "j": "",
        "k": "",
        "q": n,
        "family": parity,
        "multiplicity": mult,
        "sigma": sigma,
        "eps_sigma": eps * sigma,
        "eps_logeps_sigma": eps * abs(math.log(eps)) * sigma,
    }


def _cmd_sphere_caps(args) -> int:
    grid = _eps_grid(args.eps)
    rows = []
    for eps in grid:
        if args.n is not None:
            if args.n == 0:
                rows.append(_caps_row(eps, 0, "even", 1, 0.0))
                rows.append(_caps_row(eps, 0, "odd", 1, spherecaps.sigma_zero(eps)))
            else:
                lo, hi = spherecaps.sigma_pm(args.n, eps)
                rows.append(_caps_row(eps, args.n, "even", 2, lo))
                rows.append(_caps_row(eps, args.n, "odd", 2, hi))
            if args.oracle_grid:
                for sig in spherecaps.ode_oracle(args.n, eps, args.oracle_grid):
                    rows.append(_caps_row(eps, args.n, "oracle", 0, sig))
        else:
            for mode in spherecaps.full_spectrum(eps, args.count):
                rows.append(
                    _caps_row(eps, mode.n, mode.parity, mode.multiplicity, mode.value)
                )
    _emit(rows, tables.MODE_COLUMNS, args)
    return 0


def _parse_centers(specs: list[str]) -> list[tuple[float, float]]:
    centers = []
    for spec in specs:
        parts = spec.split(",")
        if len(parts) != 2:
            raise ConfigurationError(f"center must be 'x,y', got {spec!r}")
        try:
            centers.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise ConfigurationError(f"bad center {spec!r}: {exc}") from exc
    return centers


def _cmd_fem(args) -> int:
    if args.domain == "disk":
        mesh = mesh_planar(Disk(args.radius), args.h)
        eps_col: float | str = ""
    elif args.domain == "annulus":
        mesh = mesh_planar(Annulus(args.r_in, args.r_out), args.h)
        eps_col = ""
    else:
        if args.eps is None:
            raise ConfigurationError("--eps is required for the torus domain")
        centers = _parse_centers(args.centers)
        mesh = mesh_torus_minus_disks(args.side, centers, args.eps, args.h)
        eps_col = args.eps
    print(
        f"# mesh: {mesh.num_vertices} vertices, {mesh.num_triangles} triangles",
        file=sys.stderr,
    )
    if args.neumann:
        values = neumann_spectrum(mesh, args.count)
        family = "Neumann"
    else:
        values = steklov_spectrum(
            mesh,
            args.count,
            dirichlet_markers=tuple(args.dirichlet_markers),
            neumann_markers=tuple(args.neumann_markers),
        )
        family = "Steklov"
    rows = []
    for sigma in values:
        sigma = float(sigma)
        rows.append(
            {
                "eps": eps_col,
                "j": "",
                "k": "",
                "q": "",
                "family": family,
                "multiplicity": "",
                "sigma": sigma,
                "eps_sigma": eps_col * sigma if eps_col != "" else "",
                "eps_logeps_sigma": (
                    eps_col * abs(math.log(eps_col)) * sigma if eps_col != "" else ""
                ),
            }
        )
    _emit(rows, tables.MODE_COLUMNS, args)
    return 0


def _cmd_bounds(args) -> int:
    scenario = _load(args.scenario)
    report = bounds_mod.constant_C(scenario)
    if args.eps or args.sigma1:
        if args.format == "csv":
            raise ConfigurationError(
                "threshold checks are only emitted as json; drop --format csv"
            )
        if len(args.eps or []) != len(args.sigma1 or []):
            raise ConfigurationError("--eps and --sigma1 must pair up")
        checks = []
        for eps, sigma1 in zip(args.eps, args.sigma1):
            res = bounds_mod.lower_bound_check(scenario, eps, sigma1, slack=args.slack)
            checks.append(
                {
                    "eps": eps,
                    "sigma1": sigma1,
                    "threshold": res.threshold,
                    "holds": res.holds,
                }
            )
        obj = report.to_json()
        obj["checks"] = checks
        _emit_obj(obj, args)
        return 0
    if args.format == "csv":
        rows = [
            {
                "constant_C": report.constant_C,
                "exponent": report.exponent,
                "term_dimension": report.term_dimension,
                "term_volume": report.term_volume,
                "term_spectral": report.term_spectral,
                "binding_term": report.binding_term,
            }
        ]
        _emit(rows, BOUND_COLUMNS, args)
    else:
        _emit_obj(report.to_json(), args)
    return 0


def _emit_obj(obj, args) -> None:
    if args.out is None:
        tables.write_json(obj, sys.stdout)
    else:
        with open(args.out, "w") as out:
            tables.write_json(obj, out)


def _cmd_verify_all(args) -> int:
    from . import acceptance

    indices = None
    if args.criteria:
        try:
            indices = sorted({int(tok) for tok in args.criteria.split(",")})
        except ValueError as exc:
            raise ConfigurationError(f"bad --criteria list: {exc}") from exc
    results = acceptance.run(indices=indices, seed=args.seed)
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"criterion {res.index:2d} {status}  {res.name}  [{res.elapsed:.1f}s]")
        if not res.passed:
            for line in res.checks:
                if line.startswith("FAIL"):
                    print(f"  {line}")
    if args.out is not None:
        summary = [
            {
                "index": res.index,
                "name": res.name,
                "passed": res.passed,
                "checks": list(res.checks),
            }
            for res in results
        ]
        with open(args.out, "w") as out:
            tables.write_json(summary, out)
    return 0 if all(res.passed for res in results) else 3


# ---------------------------------------------------------------------------
# parser


def _add_output_flags(sub) -> None:
    sub.add_argument("--out", help="output file (default stdout)")
    sub.add_argument(
        "--format", choices=("csv", "json"), default="csv", help="table format"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="steklov-tubes", description=__doc__.split("\n")[0])
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser(
        "model-spectrum", help="merged model spectrum of a scenario"
    )
    sub.add_argument("--scenario", required=True, help="scenario JSON path")
    sub.add_argument("--eps", type=float, nargs="+", required=True)
    sub.add_argument("--delta", type=float, default=None)
    sub.add_argument("--count", type=int, default=12)
    sub.add_argument("--kmax", type=int, default=None)
    sub.add_argument("--qmax", type=int, default=None)
    sub.add_argument("--family", choices=("SN", "SD"), default="SN")
    sub.add_argument(
        "--include-zero-modes",
        action="store_true",
        help="keep the b zero SN modes in the listing",
    )
    _add_output_flags(sub)
    sub.set_defaults(func=_cmd_model_spectrum)

    sub = subs.add_parser("bracket", help="SN/SD bracketing pairs per ell")
    sub.add_argument("--scenario", required=True)
    sub.add_argument("--eps", type=float, nargs="+", required=True)
    sub.add_argument("--delta", type=float, default=None)
    sub.add_argument("--ell-max", type=int, default=8)
    _add_output_flags(sub)
    sub.set_defaults(func=_cmd_bracket)

    sub = subs.add_parser("rates", help="fitted limits vs predicted")
    sub.add_argument("--scenario", required=True)
    sub.add_argument(
        "--eps", type=float, nargs="+", required=True, help="at least 3, decreasing"
    )
    sub.add_argument("--delta", type=float, default=None)
    sub.add_argument("--qmax", type=int, default=2)
    _add_output_flags(sub)
    sub.set_defaults(func=_cmd_rates)

    sub = subs.add_parser("sphere-caps", help="sphere-with-two-caps closed forms")
    sub.add_argument("--eps", type=float, nargs="+", required=True)
    sub.add_argument("--n", type=int, default=None, help="single angular index")
    sub.add_argument("--count", type=int, default=8)
    sub.add_argument(
        "--oracle-grid",
        type=int,
        default=None,
        help="with --n, add finite-difference oracle rows at this grid size",
    )
    _add_output_flags(sub)
    sub.set_defaults(func=_cmd_sphere_caps)

    sub = subs.add_parser("fem", help="triangle-mesh spectra")
    sub.add_argument("--domain", choices=("disk", "annulus", "torus"), required=True)
    sub.add_argument("--h", type=float, required=True, help="target edge length")
    sub.add_argument("--count", type=int, default=8)
    sub.add_argument("--radius", type=float, default=1.0, help="disk radius")
    sub.add_argument("--r-in", type=float, default=0.5, help="annulus inner radius")
    sub.add_argument("--r-out", type=float, default=1.0, help="annulus outer radius")
    sub.add_argument("--side", type=float, default=1.0, help="torus side length")
    sub.add_argument(
        "--centers",
        nargs="+",
        default=["0.25,0.25", "0.75,0.75"],
        help="hole centers as x,y pairs",
    )
    sub.add_argument("--eps", type=float, default=None, help="hole radius (torus)")
    sub.add_argument(
        "--neumann", action="store_true", help="Laplace-Neumann instead of Steklov"
    )
    sub.add_argument("--dirichlet-markers", type=int, nargs="*", default=[])
    sub.add_argument("--neumann-markers", type=int, nargs="*", default=[])
    _add_output_flags(sub)
    sub.set_defaults(func=_cmd_fem)

    sub = subs.add_parser("bounds", help="lower-bound constant and checks")
    sub.add_argument("--scenario", required=True)
    sub.add_argument("--eps", type=float, nargs="*", default=None)
    sub.add_argument(
        "--sigma1",
        type=float,
        nargs="*",
        default=None,
        help="first nonzero Steklov eigenvalues paired with --eps",
    )
    sub.add_argument("--slack", type=float, default=0.0)
    _add_output_flags(sub)
    sub.set_defaults(func=_cmd_bounds)

    sub = subs.add_parser("verify-all", help="run the acceptance suite")
    sub.add_argument(
        "--criteria", default=None, help="comma-separated subset, e.g. 1,3,9"
    )
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--out", default=None, help="JSON summary path")
    sub.set_defaults(func=_cmd_verify_all)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (ConfigurationError, ValueError) as exc:
        json.dump(
            {"error": "configuration", "message": str(exc)},
            sys.stderr,
            sort_keys=True,
        )
        sys.stderr.write("\n")
        return 1
    except NumericalError as exc:
        json.dump(
            {"error": "numerical", "message": str(exc)}, sys.stderr, sort_keys=True
        )
        sys.stderr.write("\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
