"""Command-line front end: ``widomkit <command> [set source] [options]``.

Exit status: 0 success, 2 invalid input, 3 a mathematical check failed,
1 any other numerical or internal failure.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import chebyshev as cheb
from .errors import InputError, InvariantViolation, WidomError
from .experiments import cantor_prefix_family, random_unions, run_study, run_suite, write_json
from .intervals import IntervalUnion, parse_bands, read_set_file, write_set_file
from .jacobi import (
    equilibrium_jacobi,
    widom_factors,
    write_jacobi_csv,
    write_widom_csv,
)
from .potential import build_potential, equilibrium_density, potential_summary
from .quadrature import QuadratureConfig
from .tset import (
    band_mass_rationality_check,
    estimate_periodic_limit,
    periodic_partial_products,
    preimage_bands,
)

COMMANDS = ("capacity", "eqmeasure", "jacobi", "widom", "chebyshev", "tset", "study")
N_MAX_RANGE = (1, 60)


def _g(x: float) -> str:
    return f"{x:.15g}"


def _parse_coeffs(text: str) -> list[float]:
    try:
        return [float(c) for c in text.replace(" ", "").split(",") if c]
    except ValueError:
        raise InputError(f"could not parse coefficient list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="widomkit", description="Equilibrium measures, Widom factors and Chebyshev numbers on interval unions.")
    ap.add_argument("command", choices=COMMANDS)
    src = ap.add_mutually_exclusive_group()
    src.add_argument("--bands", help='inline set, e.g. "-1 -0.6, 0.6 1"')
    src.add_argument("--set-file", help="file with one 'alpha beta' pair per line")
    src.add_argument("--tset-coeffs", help="ascending coefficients c0,c1,...,cN of an admissible polynomial")
    ap.add_argument("--n-max", type=int, default=30)
    ap.add_argument("--nodes-per-band", type=int, default=None)
    ap.add_argument("--abs-tol", type=float, default=None)
    ap.add_argument("--out", default=".")
    ap.add_argument("--format", choices=("json", "csv"), default="csv")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--dump-set", default=None, help="also write the resolved set to this path")
    study = ap.add_argument_group("study")
    study.add_argument("--family", choices=("cantor", "random"), default="cantor")
    study.add_argument("--ratio", type=float, default=1.0 / 3.0)
    study.add_argument("--depth", type=int, default=4)
    study.add_argument("--count", type=int, default=20, help="number of random unions")
    study.add_argument("--label", default=None)
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def _resolve_set(args) -> tuple[IntervalUnion, object]:
    tset = None
    if args.bands is not None:
        U = parse_bands(args.bands)
    elif args.set_file is not None:
        try:
            U = read_set_file(args.set_file)
        except OSError as exc:
            raise InputError(f"cannot read set file: {exc}") from None
    elif args.tset_coeffs is not None:
        tset = preimage_bands(_parse_coeffs(args.tset_coeffs))
        U = tset.set
    else:
        raise InputError(f"{args.command} needs one of --bands, --set-file, --tset-coeffs")
    if args.dump_set:
        write_set_file(U, args.dump_set)
    return U, tset


def _config(args) -> QuadratureConfig:
    return QuadratureConfig() if args.abs_tol is None else QuadratureConfig(abs_tol=args.abs_tol)


def _write_rows(path: Path, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(header)
        for row in rows:
            out.writerow([_g(v) if isinstance(v, float) else v for v in row])


def _cmd_capacity(args, out: Path) -> str:
    U, _ = _resolve_set(args)
    P = build_potential(U, _config(args))
    record = potential_summary(P)
    record["cap"] = P.cap
    if args.format == "json":
        write_json(out / "capacity.json", record)
    else:
        _write_rows(out / "capacity.csv", ["log_cap", "cap", "pw", "szego"], [[P.log_cap, P.cap, P.pw, record["szego"]]])
    return f"capacity: p={U.p} log_cap={_g(P.log_cap)} cap={_g(P.cap)} pw={_g(P.pw)}"


def _cmd_eqmeasure(args, out: Path) -> str:
    U, _ = _resolve_set(args)
    P = build_potential(U, _config(args))
    # density on 65 interior Chebyshev points per band
    k = np.arange(1, 66)
    samples = []
    for j, (lo, hi) in enumerate(U.bands):
        for t in 0.5 * (lo + hi) - 0.5 * (hi - lo) * np.cos(k * math.pi / 66):
            samples.append((j, float(t), equilibrium_density(P, float(t))))
    if args.format == "json":
        record = potential_summary(P)
        record["density"] = [{"band": j, "t": t, "density": d} for j, t, d in samples]
        write_json(out / "eqmeasure.json", record)
    else:
        _write_rows(
            out / "eqmeasure.csv",
            ["band", "alpha", "beta", "mass", "c_point"],
            [[j, a, b, P.band_mass[j], P.c_points[j] if j < U.p - 1 else ""] for j, (a, b) in enumerate(U.bands)],
        )
        _write_rows(out / "density.csv", ["band", "t", "density"], samples)
    masses = " ".join(_g(m) for m in P.band_mass)
    return f"eqmeasure: p={U.p} band_mass=[{masses}] c_points=[{' '.join(_g(c) for c in P.c_points)}]"


def _jacobi_pipeline(args, U: IntervalUnion):
    P = build_potential(U, _config(args))
    J = equilibrium_jacobi(P, args.n_max, args.nodes_per_band)
    return P, J, widom_factors(J, P.log_cap)


def _cmd_jacobi(args, out: Path) -> str:
    U, _ = _resolve_set(args)
    P, J, W = _jacobi_pipeline(args, U)
    if args.format == "json":
        write_json(out / "jacobi.json", {"a": J.a, "b": J.b, "log_w": W.log_w, "log_cap": P.log_cap})
    else:
        write_jacobi_csv(out / "jacobi.csv", J, W)
    return f"jacobi: n_max={J.n_max} a_1={_g(J.a[0])} a_n={_g(J.a[-1])} min_a={_g(J.a.min())}"


def _cmd_widom(args, out: Path) -> str:
    U, _ = _resolve_set(args)
    P, J, W = _jacobi_pipeline(args, U)
    if args.format == "json":
        write_json(out / "widom.json", {"log_w": W.log_w, "w": W.w, "log_cap": P.log_cap})
    else:
        write_widom_csv(out / "widom.csv", W)
    if W.log_w.min() < math.log(1.0 - 1e-6):
        raise InvariantViolation(f"W_n < 1 at n={int(np.argmin(W.log_w)) + 1}")
    return f"widom: n_max={W.n_max} min_W={_g(W.w.min())} W_n={_g(W.w[-1])}"


def _cmd_chebyshev(args, out: Path) -> str:
    U, _ = _resolve_set(args)
    if args.n_max > cheb.MAX_DEGREE:
        raise InputError(f"chebyshev supports --n-max up to {cheb.MAX_DEGREE}")
    P, J, W = _jacobi_pipeline(args, U)
    results = cheb.chebyshev_series(U, args.n_max, P.log_cap, P.band_mass)
    if args.format == "json":
        write_json(
            out / "chebyshev.json",
            {"rows": [{"n": r.n, "sup_norm": r.sup_norm, "log_m": r.log_m, "m_n": r.m, "cert_lower_bound": r.cert_lower_bound} for r in results]},
        )
    else:
        cheb.write_chebyshev_csv(out / "chebyshev.csv", results)
    cheb.check_lower_bound(results)
    cheb.widom_vs_chebyshev(W, results)
    return f"chebyshev: n_max={args.n_max} min_M={_g(min(r.m for r in results))} max_cert_gap={_g(max(r.cert_gap for r in results))}"


def _cmd_tset(args, out: Path) -> str:
    if args.tset_coeffs is None:
        raise InputError("tset needs --tset-coeffs")
    U, T = _resolve_set(args)
    P, J, W = _jacobi_pipeline(args, U)
    fractions = band_mass_rationality_check(T, P)
    window = 4
    if J.n_max < 3 * window * T.N:
        raise InputError(f"--n-max must be at least {3 * window * T.N} for a degree-{T.N} polynomial")
    limit = estimate_periodic_limit(J, T.N, window)
    ratios = periodic_partial_products(limit.a_prime, T.exact_log_cap)
    record = {
        "bands": [list(b) for b in U.bands],
        "exact_log_cap": T.exact_log_cap,
        "exact_cap": math.exp(T.exact_log_cap),
        "log_cap": P.log_cap,
        "band_mass": list(P.band_mass),
        "band_mass_fraction": [str(f) for f in fractions],
        "a_prime": limit.a_prime,
        "partial_products": ratios,
        "min_partial_product": float(ratios.min()),
    }
    if args.format == "json":
        write_json(out / "tset.json", record)
    else:
        _write_rows(out / "tset.csv", ["l", "a_prime_l", "partial_product_l"], [[l + 1, float(a), float(r)] for l, (a, r) in enumerate(zip(limit.a_prime, ratios))])
        write_jacobi_csv(out / "jacobi.csv", J, W)
    bands = " ".join(f"({_g(a)},{_g(b)})" for a, b in U.bands)
    return (
        f"tset: N={T.N} bands={bands} exact_cap={_g(math.exp(T.exact_log_cap))} cap={_g(P.cap)} "
        f"min_partial_product={_g(float(ratios.min()))}"
    )


def _cmd_study(args, out: Path) -> str:
    if any(v is not None for v in (args.bands, args.set_file, args.tset_coeffs)):
        raise InputError("study builds its own sets; use --family/--ratio/--depth/--count")
    cfg = _config(args)
    if args.family == "cantor":
        F = cantor_prefix_family(args.ratio, args.depth, args.label)
        res = run_study(F, out, args.n_max, cfg, args.nodes_per_band)
    else:
        label = args.label or f"random_s{args.seed}_c{args.count}"
        res = run_suite(random_unions(args.seed, args.count), label, out, args.n_max, cfg, args.nodes_per_band)
    min_w = min(row["min_W"] for row in res.summary)
    return f"study: {res.root} levels={len(res.summary)} min_W={_g(min_w)}"


HANDLERS = {
    "capacity": _cmd_capacity,
    "eqmeasure": _cmd_eqmeasure,
    "jacobi": _cmd_jacobi,
    "widom": _cmd_widom,
    "chebyshev": _cmd_chebyshev,
    "tset": _cmd_tset,
    "study": _cmd_study,
}


_VALUE_FLAGS = ("--bands", "--tset-coeffs", "--set-file")


def _attach_values(argv: Sequence[str]) -> list[str]:
    # argparse reads "-2.125,0,3.125" as an option; glue such values to their flag
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            val = next(it, None)
            out.append(tok if val is None else f"{tok}={val}")
        else:
            out.append(tok)
    return out


def run_command(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_values(argv))
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        lo, hi = N_MAX_RANGE
        if not lo <= args.n_max <= hi:
            raise InputError(f"--n-max must be in {lo}..{hi}")
        if args.nodes_per_band is not None and args.nodes_per_band < 8 * args.n_max:
            raise InputError(f"--nodes-per-band must be at least 8 * n_max = {8 * args.n_max}")
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        print(HANDLERS[args.command](args, out))
        return 0
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except WidomError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
