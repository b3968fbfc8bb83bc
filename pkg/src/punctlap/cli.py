"""Command-line front end.  Every operation of the library is reachable as a
subcommand emitting versioned CSV (first line `# schema=<name>/v1`, floats at
17 significant digits) or JSON (sorted keys), deterministically.

Exit codes: 0 success, 1 domain error, 2 non-convergence, 64 usage.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys

from .errors import DomainError, NonConvergenceError, PunctlapError

OUTPUT_DIR_ENV = "PUNCTLAP_OUTPUT_DIR"

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_NONCONV = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".17g")
    return str(x)


def _write_csv(schema: str, header: list[str], rows: list[list], out) -> None:
    out.write(f"# schema={schema}/v1\n")
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(_fmt(v) for v in row) + "\n")


def _write_json(obj, out) -> None:
    out.write(json.dumps(obj, sort_keys=True, allow_nan=True))
    out.write("\n")


def _jsonable(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _open_output(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    if not os.path.isabs(path):
        base = os.environ.get(OUTPUT_DIR_ENV)
        if base:
            path = os.path.join(base, path)
    return open(path, "w"), True


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip() != ""]


def _add_common(p: _Parser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--output", default=None, help="file path or - for stdout")
    p.add_argument("--config", default=None, help="key=value lines, flags win")
    p.add_argument("--abs-tol", type=float, default=None)
    p.add_argument("--rel-tol", type=float, default=None)
    p.add_argument("--max-subdivisions", type=int, default=None)


def _quad_spec(args):
    from .quad import DEFAULT_SPEC, QuadratureSpec

    if args.abs_tol is None and args.rel_tol is None and args.max_subdivisions is None:
        return DEFAULT_SPEC
    return QuadratureSpec(
        abs_tol=args.abs_tol if args.abs_tol is not None else DEFAULT_SPEC.abs_tol,
        rel_tol=args.rel_tol if args.rel_tol is not None else DEFAULT_SPEC.rel_tol,
        max_subdivisions=args.max_subdivisions
        if args.max_subdivisions is not None
        else DEFAULT_SPEC.max_subdivisions,
    )


def build_parser() -> _Parser:
    top = _Parser(prog="punctlap", description=__doc__)
    sub = top.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("eval-kernel", parents=[], help="kernel values on a radius grid")
    p.add_argument("--fn", choices=("G", "K", "P", "gradG"), required=True)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--nu", type=float, default=0.0, help="order for --fn K")
    p.add_argument("--t", type=float, default=1.0, help="time for --fn P")
    p.add_argument("--lam", type=float, default=1.0, help="scaling for --fn G")
    p.add_argument("--radii", required=True)
    _add_common(p)

    p = sub.add_parser("classify", help="representation case for (n, p)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    _add_common(p)

    p = sub.add_parser("decompose", help="1d boundary data or scaling-limit extraction")
    p.add_argument("--mode", choices=("oned", "scaling"), required=True)
    p.add_argument("--u-plus", type=float, default=0.0)
    p.add_argument("--u-minus", type=float, default=0.0)
    p.add_argument("--du-plus", type=float, default=0.0)
    p.add_argument("--du-minus", type=float, default=0.0)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--lam", type=float, default=1.0)
    _add_common(p)

    p = sub.add_parser("predicates", help="polar/density/uniqueness/zero-trace facts")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    _add_common(p)

    p = sub.add_parser("spectrum", help="spectral value and eigenfunction profile")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--radii", default="")
    _add_common(p)

    p = sub.add_parser("dictionary", help="alpha <-> beta conversion table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta-values", default=None)
    p.add_argument("--alpha-values", default=None)
    _add_common(p)

    p = sub.add_parser("resolvent", help="(lam + A_beta)^-1 h on a radius grid, n=3")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--radii", required=True)
    p.add_argument("--source-width", type=float, default=1.0, help="h(y)=exp(-|y|^2/w^2)")
    _add_common(p)

    p = sub.add_parser("green", help="Green form on two decompositions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--u-c0", type=float, required=True)
    p.add_argument("--u-f0", type=float, required=True)
    p.add_argument("--v-c0", type=float, required=True)
    p.add_argument("--v-f0", type=float, required=True)
    _add_common(p)

    p = sub.add_parser("heat-kernel", help="interacting heat kernel + bounds, n=3")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--x-radius", type=float, required=True)
    p.add_argument("--radii", required=True, help="|y| grid")
    _add_common(p)

    p = sub.add_parser("simulate", help="Monte Carlo paths at an observation point")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--y-radius", type=float, required=True)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--horizon", type=float, required=True)
    p.add_argument("--paths", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)

    p = sub.add_parser("wellposedness", help="L^p / weighted-space reports")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--l", type=float, default=None, help="weight exponent")
    _add_common(p)

    p = sub.add_parser("selftest", help="run the invariant suite")
    _add_common(p)

    return top


# ---------------------------------------------------------------------------


def _cmd_eval_kernel(args, out):
    from .specfun import (
        Point,
        bessel_potential_scaled,
        grad_bessel_potential_norm,
        heat_kernel_free_radial,
        macdonald_k,
    )

    spec = _quad_spec(args)
    radii = _floats(args.radii)
    rows = []
    for r in radii:
        if args.fn == "G":
            kv = bessel_potential_scaled(args.n, args.lam, Point.radial(r, args.n), spec)
            rows.append([r, kv.value, kv.error_estimate, kv.method])
        elif args.fn == "K":
            kv = macdonald_k(args.nu, r, spec)
            rows.append([r, kv.value, kv.error_estimate, kv.method])
        elif args.fn == "P":
            rows.append([r, heat_kernel_free_radial(args.n, args.t, r), 0.0, "closed_form"])
        else:
            kv = grad_bessel_potential_norm(args.n, Point.radial(r, args.n), spec)
            rows.append([r, kv.value, kv.error_estimate, kv.method])
    if (args.format or "csv") == "csv":
        _write_csv("eval-kernel", ["radius", "value", "error_estimate", "method"], rows, out)
    else:
        _write_json(
            [dict(zip(("radius", "value", "error_estimate", "method"), row)) for row in rows],
            out,
        )
    return EXIT_OK


def _cmd_classify(args, out):
    from .sobolev import SpaceContext, classify

    case = classify(SpaceContext(args.n, args.p))
    obj = {"case": case.case_tag.value, "singular_dim": case.singular_dim}
    if (args.format or "json") == "json":
        _write_json(obj, out)
    else:
        _write_csv("classify", ["case", "singular_dim"], [[obj["case"], obj["singular_dim"]]], out)
    return EXIT_OK


def _cmd_decompose(args, out):
    from .sobolev import (
        OneDBoundaryData,
        decompose_1d,
        extract_c0_by_limit,
        extract_f0,
        scaled_potential_decomposition,
    )

    if args.mode == "oned":
        d = decompose_1d(
            OneDBoundaryData(args.u_plus, args.u_minus, args.du_plus, args.du_minus)
        )
        obj = {
            "c0": float(d.c0.real if isinstance(d.c0, complex) else d.c0),
            "c1": float(d.c[0].real if isinstance(d.c[0], complex) else d.c[0]),
            "f0": float(d.f0.real if isinstance(d.f0, complex) else d.f0),
            "f1": float(d.grad_f0[0].real if isinstance(d.grad_f0[0], complex) else d.grad_f0[0]),
        }
    else:
        from .sobolev import SpaceContext
        from .specfun import Point, bessel_potential_scaled

        def u(x: Point) -> float:
            return bessel_potential_scaled(args.n, args.lam, x).value

        ctx = SpaceContext(args.n, 2.0)
        c0 = extract_c0_by_limit(u, ctx)
        f0 = extract_f0(u, c0.value, ctx)
        d = scaled_potential_decomposition(args.n, args.lam)
        obj = {
            "c0_measured": c0.value,
            "f0_measured": f0.value,
            "c0_model": float(d.c0),
            "f0_model": float(d.f0),
            "converged": bool(c0.converged and f0.converged),
        }
    if (args.format or "json") == "json":
        _write_json(obj, out)
    else:
        keys = sorted(obj)
        _write_csv("decompose", keys, [[obj[k] for k in keys]], out)
    return EXIT_OK


def _cmd_predicates(args, out):
    from .sobolev import (
        SpaceContext,
        classify,
        dirac_derivative_in_negative_sobolev,
        friedrichs_unique,
        singleton_polar,
        zero_trace_case,
    )

    ctx = SpaceContext(args.n, args.p)
    case = classify(ctx)
    obj = {
        "case": case.case_tag.value,
        "singular_dim": case.singular_dim,
        "dirac_order0": dirac_derivative_in_negative_sobolev(0, ctx),
        "dirac_order1": dirac_derivative_in_negative_sobolev(1, ctx),
        "zero_trace_case": zero_trace_case(ctx).value,
        "friedrichs_unique": friedrichs_unique(ctx),
        "singleton_polar_m1": singleton_polar(1, ctx),
        "singleton_polar_m2": singleton_polar(2, ctx),
    }
    if (args.format or "json") == "json":
        _write_json(obj, out)
    else:
        keys = sorted(obj)
        _write_csv("predicates", keys, [[obj[k] for k in keys]], out)
    return EXIT_OK


def _cmd_spectrum(args, out):
    from .operators import PointInteraction, eigenvalue
    from .specfun import Point

    pair = eigenvalue(PointInteraction(args.n, args.beta))
    radii = _floats(args.radii) if args.radii else []
    if pair is None:
        rows = []
        obj = {"spectral_set": "empty"}
    else:
        # both sign candidates are reported; the certified facts are the
        # pointwise equation Delta e = lam e and tau_beta e = 0
        obj = {
            "lam": pair.lam,
            "lam_negated": -pair.lam,
            "c0": float(pair.decomposition.c0),
            "f0": float(pair.decomposition.f0),
        }
        rows = [[r, pair.e(Point.radial(r, args.n))] for r in radii]
    if (args.format or ("csv" if radii else "json")) == "json":
        obj["profile"] = [{"radius": r, "value": v} for r, v in rows]
        _write_json(obj, out)
    else:
        lam = obj.get("lam", math.nan)
        _write_csv(
            "spectrum",
            ["radius", "eigenfunction", "lam", "beta"],
            [[r, v, lam, args.beta] for r, v in rows] or [[math.nan, math.nan, lam, args.beta]],
            out,
        )
    return EXIT_OK


def _cmd_dictionary(args, out):
    from .operators import alpha_from_beta, beta_from_alpha

    rows = []
    if args.beta_values:
        for b in _floats(args.beta_values):
            a = alpha_from_beta(args.n, b)
            rows.append([b, a, beta_from_alpha(args.n, a)])
    if args.alpha_values:
        for a in _floats(args.alpha_values):
            b = beta_from_alpha(args.n, a)
            rows.append([b, a, beta_from_alpha(args.n, alpha_from_beta(args.n, b))])
    if not rows:
        raise DomainError("dictionary needs --beta-values or --alpha-values")
    if (args.format or "csv") == "csv":
        _write_csv("dictionary", ["beta", "alpha", "beta_roundtrip"], rows, out)
    else:
        _write_json(
            [dict(zip(("beta", "alpha", "beta_roundtrip"), map(_jsonable, row))) for row in rows],
            out,
        )
    return EXIT_OK


def _cmd_resolvent(args, out):
    from .operators import PointInteraction, resolvent_apply
    from .specfun import Point

    spec = _quad_spec(args)
    pi = PointInteraction(3, args.beta)
    w = args.source_width

    def h(y: Point) -> float:
        return math.exp(-(y.norm / w) ** 2)

    rows = []
    for r in _floats(args.radii):
        u = resolvent_apply(
            pi, args.lam, h, Point.radial(r, 3), spec,
            h_radial=True, h_decay_rate=1.0 / w, h_prefactor=1.0, h_cutoff=8.0 * w,
        )
        rows.append([r, u])
    if (args.format or "csv") == "csv":
        _write_csv("resolvent", ["radius", "value"], rows, out)
    else:
        _write_json([{"radius": r, "value": u} for r, u in rows], out)
    return EXIT_OK


def _cmd_green(args, out):
    from .operators import green_form
    from .sobolev import SingularDecomposition, SpaceContext

    ctx_u = SpaceContext(args.n, args.p)
    ctx_v = SpaceContext(args.n, ctx_u.q)
    u = SingularDecomposition(ctx_u, c0=args.u_c0, f0=args.u_f0)
    v = SingularDecomposition(ctx_v, c0=args.v_c0, f0=args.v_f0)
    val = green_form(u, v)
    obj = {"real": val.real, "imag": val.imag}
    if (args.format or "json") == "json":
        _write_json(obj, out)
    else:
        _write_csv("green", ["real", "imag"], [[val.real, val.imag]], out)
    return EXIT_OK


def _cmd_heat_kernel(args, out):
    from .heatkernel import HeatKernelQuery, c_lower_bound, heat_kernel_beta, r_beta
    from .operators import PointInteraction
    from .specfun import Point, heat_kernel_free

    spec = _quad_spec(args)
    pi = PointInteraction(3, args.beta)
    x = Point.radial(args.x_radius, 3)
    rows = []
    for r in _floats(args.radii):
        y = Point((0.0, r, 0.0))  # orthogonal placement keeps |x - y| generic
        g = heat_kernel_beta(HeatKernelQuery(args.t, x, y, pi), spec)
        rows.append(
            [r, g.value, heat_kernel_free(3, args.t, x - y), r_beta(args.t, y, pi, spec).value]
        )
    lower = c_lower_bound(pi.alpha, args.t, spec) if not math.isinf(pi.alpha) else 1.0
    if (args.format or "csv") == "csv":
        _write_csv(
            "heat-kernel",
            ["radius", "g_beta", "p_free", "r_beta", "c_lower_bound"],
            [row + [lower] for row in rows],
            out,
        )
    else:
        _write_json(
            {
                "c_lower_bound": lower,
                "grid": [
                    dict(zip(("radius", "g_beta", "p_free", "r_beta"), row)) for row in rows
                ],
            },
            out,
        )
    return EXIT_OK


def _cmd_simulate(args, out):
    import numpy as np

    from .spde import PathEnsemble, SimulationConfig, simulate, variance_oracle
    from .specfun import Point

    spec = _quad_spec(args)
    cfg = SimulationConfig(
        beta=args.beta,
        y=Point.radial(args.y_radius, 3),
        dt=args.dt,
        horizon=args.horizon,
        n_paths=args.paths,
        seed=args.seed,
    )
    ens = simulate(cfg, spec)
    oracle_T = variance_oracle(args.beta, cfg.y, cfg.n_steps * cfg.dt, spec)
    mean = ens.values.mean(axis=0)
    var = ens.values.var(axis=0)
    rows = [[t, m, v] for t, m, v in zip(ens.times, mean, var)]
    if (args.format or "csv") == "csv":
        _write_csv(
            "simulate",
            ["time", "mean", "variance", "variance_oracle_terminal"],
            [row + [oracle_T] for row in rows],
            out,
        )
    else:
        _write_json(
            {
                "variance_oracle_terminal": oracle_T,
                "series": [dict(zip(("time", "mean", "variance"), row)) for row in rows],
            },
            out,
        )
    return EXIT_OK


def _cmd_wellposedness(args, out):
    from .spde import (
        hl_wellposed_beta_nonzero,
        invariant_measure_exists,
        wellposedness_report,
    )

    spec = _quad_spec(args)
    rep = wellposedness_report(args.n, args.p, args.beta, spec)
    obj = {
        "n": rep.n,
        "p": rep.p,
        "beta": _jsonable(rep.beta),
        "wellposed": rep.wellposed,
        "estimate": _jsonable(rep.estimate),
        "detail": rep.detail,
    }
    if args.l is not None:
        obj["invariant_measure"] = invariant_measure_exists(args.n, args.l, spec)
        obj["hl_wellposed"] = hl_wellposed_beta_nonzero(args.l)
    if (args.format or "json") == "json":
        _write_json(obj, out)
    else:
        keys = sorted(obj)
        _write_csv("wellposedness", keys, [[obj[k] for k in keys]], out)
    return EXIT_OK


def _cmd_selftest(args, out):
    """Fast end-to-end invariants across the modules; exit 2 on any failure."""
    from .operators import PointInteraction, alpha_from_beta, beta_from_alpha, eigenvalue
    from .quad import DEFAULT_SPEC, integrate_finite
    from .sobolev import (
        OneDBoundaryData,
        SpaceContext,
        classify,
        decompose_1d,
        recompose_1d,
        tau_beta,
    )
    from .specfun import Point, bessel_potential_radial

    checks = []

    def check(name, ok):
        checks.append((name, bool(ok)))

    res = integrate_finite(math.sin, 0.0, math.pi, DEFAULT_SPEC)
    check("quad:sin", abs(res.value - 2.0) < 1e-12)
    check(
        "specfun:G3",
        abs(bessel_potential_radial(3, 1.0).value - 1.0 / (4 * math.pi * math.e)) < 1e-15,
    )
    b = OneDBoundaryData(0.5, 0.5, -1.0, 1.0)
    d = decompose_1d(b)
    rb = recompose_1d(d)
    check("sobolev:1d-roundtrip", abs(rb.u_plus - b.u_plus) < 1e-14)
    from .sobolev import SingularDecomposition

    ds = SingularDecomposition(SpaceContext(3, 2.0), c0=1.0, f0=0.25)
    check("sobolev:tau", abs(tau_beta(ds, 2.0) - (1.0 - 2.0 * 0.25)) < 1e-14)
    check("sobolev:classify", classify(SpaceContext(2, 2)).case_tag.value == "ScalarSingular")
    check(
        "operators:dictionary",
        abs(beta_from_alpha(3, alpha_from_beta(3, 5.0)) - 5.0) < 1e-12,
    )
    pair = eigenvalue(PointInteraction(2, 2.0))
    check("operators:eigenvalue", pair is not None and abs(pair.lam - math.exp(-1)) < 1e-15)
    ok = all(flag for _, flag in checks)
    _write_json(
        {"passed": ok, "checks": [{"name": n, "ok": f} for n, f in checks]}, out
    )
    return EXIT_OK if ok else EXIT_NONCONV


_COMMANDS = {
    "eval-kernel": _cmd_eval_kernel,
    "classify": _cmd_classify,
    "decompose": _cmd_decompose,
    "predicates": _cmd_predicates,
    "spectrum": _cmd_spectrum,
    "dictionary": _cmd_dictionary,
    "resolvent": _cmd_resolvent,
    "green": _cmd_green,
    "heat-kernel": _cmd_heat_kernel,
    "simulate": _cmd_simulate,
    "wellposedness": _cmd_wellposedness,
    "selftest": _cmd_selftest,
}


def _merge_config(argv: list[str], args) -> None:
    """Config file keys (key=value, flag names with - or _) fill in flags the
    user did not pass; explicit flags win."""
    if not getattr(args, "config", None):
        return
    passed = {a.split("=", 1)[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
    with open(args.config) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DomainError(f"bad config line: {line!r}")
            key, value = line.split("=", 1)
            key = key.strip().lstrip("-").replace("-", "_")
            if key in passed or not hasattr(args, key):
                continue
            current = getattr(args, key)
            if isinstance(current, bool):
                setattr(args, key, value.strip().lower() in ("1", "true", "yes"))
            elif isinstance(current, int) and not isinstance(current, bool):
                setattr(args, key, int(value))
            elif isinstance(current, float):
                setattr(args, key, float(value))
            else:
                setattr(args, key, value.strip())


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        _merge_config(argv, args)
        buf = io.StringIO()
        code = _COMMANDS[args.subcommand](args, buf)
        out, close = _open_output(getattr(args, "output", None))
        try:
            out.write(buf.getvalue())
        finally:
            if close:
                out.close()
        return code
    except NonConvergenceError as exc:
        sys.stderr.write(f"non-convergence: {exc}\n")
        return EXIT_NONCONV
    except DomainError as exc:
        sys.stderr.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN
    except PunctlapError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN


def main() -> None:
    raise SystemExit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
