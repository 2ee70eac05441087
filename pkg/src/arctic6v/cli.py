"""Command-line front end.

Every engine is a subcommand; output is CSV, JSON, or SVG written to stdout
or a file.  Numeric CSV fields are printed with 17 significant digits so
they round-trip through repr; JSON floats round-trip by construction.

Exit codes: 0 success, 1 domain error (invalid sizes, non-convergence,
branch cuts and the like), 2 usage error.

Conventions repeated in every CSV header: the cut index r counts vertical
lattice lines from the right, the depth s counts horizontal lines from the
top, and exact rationals are written as "p/q".
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import enumeration, hankel, model, penner, sampler

CSV_NOTE = "# conventions: r counts vertical lines from the right, s counts rows from the top"


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _emit(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w") as handle:
            handle.write(text)
            if not text.endswith("\n"):
                handle.write("\n")


def _emit_json(obj, path: str | None) -> None:
    _emit(json.dumps(obj, indent=2), path)


def _csv(rows, header: str) -> str:
    lines = [CSV_NOTE, header]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines)


def _add_weight_args(sub, rational: bool = False) -> None:
    group = sub.add_mutually_exclusive_group(required=True)
    helptau = "free-fermion slope tau = b^2/a^2 (rational 'p/q' accepted)"
    group.add_argument("--tau", type=str, help=helptau)
    if not rational:
        group.add_argument(
            "--weights",
            type=float,
            nargs=3,
            metavar=("A", "B", "C"),
            help="explicit weight triple",
        )


def _add_common(sub) -> None:
    sub.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
    sub.add_argument(
        "--threads",
        type=int,
        default=1,
        help="engine thread budget (kept at 1 for bitwise reproducibility)",
    )


def _resolve_weights(args) -> model.VertexWeights:
    if getattr(args, "weights", None) is not None:
        return model.VertexWeights(*args.weights)
    return model.weights_from_tau(float(Fraction(args.tau)))


def _resolve_tau(args) -> Fraction:
    if args.tau is None:
        raise ValueError("this command needs --tau (exact rational weights)")
    return hankel.as_tau(args.tau)


def _weight_label(args) -> str:
    if getattr(args, "weights", None) is not None:
        a, b, c = args.weights
        return f"a={_fmt(a)};b={_fmt(b)};c={_fmt(c)}"
    return f"tau={args.tau}"


def _check_threads(args) -> None:
    if args.threads < 1:
        raise ValueError(f"--threads must be >= 1, got {args.threads}")


def cmd_phase(args) -> int:
    _check_threads(args)
    w = _resolve_weights(args)
    payload = w.as_dict()
    payload["delta"] = model.delta(w)
    payload["phase"] = model.classify_phase(w).value
    _emit_json(payload, args.output)
    return 0


def cmd_weights(args) -> int:
    _check_threads(args)
    if args.spectral is not None:
        lam, eta = args.spectral
        w = model.weights_from_spectral(lam, eta)
    elif args.tau is not None:
        w = model.weights_from_tau(float(Fraction(args.tau)))
    else:
        raise ValueError("provide --tau or --spectral LAMBDA ETA")
    _emit_json(w.as_dict(), args.output)
    return 0


def cmd_zn(args) -> int:
    _check_threads(args)
    w = _resolve_weights(args)
    z = enumeration.partition_function(args.N, w)
    _emit_json({"N": args.N, "Z": z, "weights": w.as_dict()}, args.output)
    return 0


def cmd_efp(args) -> int:
    _check_threads(args)
    if args.all:
        return _efp_all(args)
    if args.r is None or args.s is None:
        raise ValueError("single-point efp needs --r and --s (or use --all)")
    if args.method == "hankel":
        tau = _resolve_tau(args)
        value = hankel.efp_exact(args.N, args.r, args.s, tau)
        payload = {
            "N": args.N,
            "r": args.r,
            "s": args.s,
            "tau": str(tau),
            "efp": str(value),
            "efp_float": float(value),
        }
    else:
        w = _resolve_weights(args)
        value = enumeration.efp_brute(args.N, args.r, args.s, w)
        payload = {
            "N": args.N,
            "r": args.r,
            "s": args.s,
            "weights": _weight_label(args),
            "efp_float": value,
        }
    _emit_json(payload, args.output)
    return 0


def _efp_all(args) -> int:
    label = _weight_label(args)
    rows = []
    if args.method == "hankel":
        tau = _resolve_tau(args)
        for r in range(args.N + 1):
            for s in range(1, args.N + 1):
                rows.append((args.N, r, s, label, float(hankel.efp_exact(args.N, r, s, tau))))
    else:
        w = _resolve_weights(args)
        table = enumeration.efp_table(args.N, w)
        for r in range(args.N + 1):
            for s in range(1, args.N + 1):
                rows.append((args.N, r, s, label, float(table[r, s])))
    _emit(_csv(rows, "N,r,s,tau_or_weights,F"), args.output)
    return 0


def cmd_hn(args) -> int:
    _check_threads(args)
    if args.method == "closed":
        tau = _resolve_tau(args)
        coeffs = [float(c) for c in hankel.generating_coeffs_exact(args.N, tau)]
    else:
        w = _resolve_weights(args)
        coeffs = enumeration.generating_coeffs(args.N, w)
    rows = [(args.N, r + 1, c) for r, c in enumerate(coeffs)]
    _emit(_csv(rows, "N,r,H"), args.output)
    return 0


def cmd_identity(args) -> int:
    _check_threads(args)
    tau = _resolve_tau(args)
    value = hankel.contour_identity(args.N, args.r, args.s, tau)
    payload = {"N": args.N, "r": args.r, "s": args.s, "tau": str(tau), "I": str(value)}
    _emit_json(payload, args.output)
    return 0


def cmd_saddle(args) -> int:
    _check_threads(args)
    point = penner.ScaledPoint(args.x, args.y, float(Fraction(args.tau)))
    if args.init is not None:
        init = args.init
        if len(init) != args.s:
            raise ValueError(f"--init needs exactly {args.s} values")
    else:
        base = penner.decoupled_saddle(args.x, float(point.tau))
        if abs(base - 1.0) < 1e-6:
            base = 1.1
        init = [base * (1.0 + 0.15 * k) for k in range(args.s)]
    cfg = penner.solve_equilibrium(args.s, point, init)
    residual = penner.spe_residual(cfg)
    payload = {
        "point": {"x": float(point.x), "y": float(point.y), "tau": float(point.tau)},
        "s": cfg.s,
        "omegas": [float(v) for v in cfg.omegas],
        "max_residual": float(max(abs(residual))),
        "Omega": penner.omega_moment(cfg),
    }
    _emit_json(payload, args.output)
    return 0


def cmd_green(args) -> int:
    _check_threads(args)
    point = penner.ScaledPoint(args.x, args.y, float(Fraction(args.tau)))
    z = complex(args.z)
    value = penner.green_asymptotic(z, point, args.Omega)
    payload = {
        "point": {"x": float(point.x), "y": float(point.y), "tau": float(point.tau)},
        "Omega": args.Omega,
        "z": str(z),
        "re": value.real,
        "im": value.imag,
    }
    _emit_json(payload, args.output)
    return 0


def cmd_arctic(args) -> int:
    _check_threads(args)
    tau = float(Fraction(args.tau))
    curve = penner.ArcticCurve(tau)
    points = curve.sample(args.samples)
    if args.format == "svg":
        _emit(_svg_arc(curve, points, args.heatmap), args.output)
        return 0
    rows = [(tau, x, y, curve.implicit(x, y)) for x, y in points]
    _emit(_csv(rows, "tau,x,y_arc,implicit_residual"), args.output)
    return 0


def _svg_arc(curve, points, heatmap_path: str | None) -> str:
    size, margin = 560, 30
    span = size - 2 * margin

    def px(x, y):
        # lattice orientation: x from the right edge rightward, y downward
        return (margin + x * span, margin + y * span)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="{margin}" y="{margin}" width="{span}" height="{span}" '
        'fill="none" stroke="black" stroke-width="1"/>',
    ]
    if heatmap_path is not None:
        parts.extend(_svg_heatmap(heatmap_path, margin, span))
    path = " ".join(
        ("M" if k == 0 else "L") + f" {px(x, y)[0]:.2f} {px(x, y)[1]:.2f}"
        for k, (x, y) in enumerate(points)
    )
    parts.append(f'<path d="{path}" fill="none" stroke="crimson" stroke-width="2"/>')
    for cx, cy in curve.contact_points:
        x, y = px(cx, cy)
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="black"/>')
    parts.append("</svg>")
    return "\n".join(parts)


def _svg_heatmap(path: str, margin: int, span: int) -> list:
    cells = []
    with open(path) as handle:
        for line in handle:
            line = line.strip()
            if not line or line.startswith("#") or line[0].isalpha():
                continue
            fields = line.split(",")
            if len(fields) < 3:
                continue
            cells.append((int(fields[0]), int(fields[1]), float(fields[2])))
    if not cells:
        return []
    n = max(max(r for r, _, _ in cells), max(s for _, s, _ in cells))
    out = []
    cell = span / n
    for r, s, freq in cells:
        shade = int(round(255 * (1.0 - freq)))
        x = margin + (r - 1) * cell
        y = margin + (s - 1) * cell
        out.append(
            f'<rect x="{x:.2f}" y="{y:.2f}" width="{cell:.2f}" height="{cell:.2f}" '
            f'fill="rgb({shade},{shade},255)" stroke="none"/>'
        )
    return out


def cmd_sample(args) -> int:
    _check_threads(args)
    w = _resolve_weights(args)
    if args.r is not None or args.s is not None:
        if args.r is None or args.s is None:
            raise ValueError("single-point sampling needs both --r and --s")
        est = sampler.estimate_efp(
            args.N, args.r, args.s, w, args.sweeps, args.burn_in, args.seed, args.init_state
        )
        payload = {
            "N": args.N,
            "r": args.r,
            "s": args.s,
            "weights": _weight_label(args),
            "mean": est.mean,
            "stderr": est.stderr,
            "samples": est.samples,
            "seed": args.seed,
        }
        _emit_json(payload, args.output)
        return 0
    table = sampler.sample_efp_table(
        args.N,
        w,
        args.sweeps,
        args.burn_in,
        args.seed,
        args.init_state,
        log_counts=args.log is not None,
    )
    if args.log is not None:
        rows = [
            (sweep_index + 1, *[int(c) for c in row])
            for sweep_index, row in enumerate(table.counts_log)
        ]
        _emit(_csv(rows, "sweep,n1,n2,n3,n4,n5,n6"), args.log)
    rows = []
    for r in range(1, args.N + 1):
        for s in range(1, args.N + 1):
            rows.append((r, s, float(table.edge_freq[r, s - 1]), float(table.efp[r, s])))
    _emit(_csv(rows, "r,s,thick_edge_freq,efp_freq"), args.output)
    return 0


def cmd_compare(args) -> int:
    _check_threads(args)
    tau = _resolve_tau(args)
    w = model.weights_from_tau(float(tau))
    table = enumeration.efp_table(args.N, w)
    rows = []
    worst = 0.0
    for r in range(args.N + 1):
        for s in range(1, args.N + 1):
            exact = float(hankel.efp_exact(args.N, r, s, tau))
            brute = float(table[r, s])
            diff = abs(exact - brute)
            worst = max(worst, diff)
            rows.append((args.N, r, s, brute, exact, diff))
    _emit(_csv(rows, "N,r,s,brute,hankel,abs_diff"), args.output)
    if worst > args.tolerance:
        print(f"compare: worst |diff| = {worst:.3e} exceeds {args.tolerance:.1e}", file=sys.stderr)
        return 1
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arctic6v",
        description="Six-vertex model with domain wall boundaries: exact and asymptotic tools.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("phase", help="anisotropy and phase of a weight triple")
    _add_weight_args(sub)
    _add_common(sub)
    sub.set_defaults(func=cmd_phase)

    sub = subs.add_parser("weights", help="weight triple from tau or spectral parameters")
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--tau", type=str, help="free-fermion slope")
    group.add_argument(
        "--spectral", type=float, nargs=2, metavar=("LAMBDA", "ETA"), help="disordered-regime parameters"
    )
    _add_common(sub)
    sub.set_defaults(func=cmd_weights)

    sub = subs.add_parser("zn", help="partition function by exact enumeration")
    sub.add_argument("--N", type=int, required=True)
    _add_weight_args(sub)
    _add_common(sub)
    sub.set_defaults(func=cmd_zn)

    sub = subs.add_parser("efp", help="emptiness formation probability F(r, s)")
    sub.add_argument("--method", choices=("brute", "hankel"), default="hankel")
    sub.add_argument("--N", type=int, required=True)
    sub.add_argument("--r", type=int)
    sub.add_argument("--s", type=int)
    sub.add_argument("--all", action="store_true", help="CSV over every (r, s)")
    _add_weight_args(sub)
    _add_common(sub)
    sub.set_defaults(func=cmd_efp)

    sub = subs.add_parser("hN", help="boundary correlation coefficients H(r)")
    sub.add_argument("--N", type=int, required=True)
    sub.add_argument("--method", choices=("brute", "closed"), default="brute")
    _add_weight_args(sub)
    _add_common(sub)
    sub.set_defaults(func=cmd_hn)

    sub = subs.add_parser("identity", help="contour identity (exact 1) as a self-test")
    sub.add_argument("--N", type=int, required=True)
    sub.add_argument("--r", type=int, required=True)
    sub.add_argument("--s", type=int, required=True)
    sub.add_argument("--tau", type=str, required=True)
    _add_common(sub)
    sub.set_defaults(func=cmd_identity)

    sub = subs.add_parser("saddle", help="s-charge equilibrium at a scaled point")
    sub.add_argument("--s", type=int, required=True)
    sub.add_argument("--x", type=float, required=True)
    sub.add_argument("--y", type=float, required=True)
    sub.add_argument("--tau", type=str, required=True)
    sub.add_argument("--init", type=float, nargs="+", help="starting charge positions")
    _add_common(sub)
    sub.set_defaults(func=cmd_saddle)

    sub = subs.add_parser("green", help="asymptotic resolvent at a complex point")
    sub.add_argument("--x", type=float, required=True)
    sub.add_argument("--y", type=float, required=True)
    sub.add_argument("--tau", type=str, required=True)
    sub.add_argument("--Omega", type=float, default=1.0, help="first moment of the charges")
    sub.add_argument("--z", type=str, required=True, help="complex point, e.g. '3' or '2+1j'")
    _add_common(sub)
    sub.set_defaults(func=cmd_green)

    sub = subs.add_parser("arctic", help="arctic arc samples (CSV) or figure (SVG)")
    sub.add_argument("--tau", type=str, required=True)
    sub.add_argument("--samples", type=int, default=100)
    sub.add_argument("--format", choices=("csv", "svg"), default="csv")
    sub.add_argument("--heatmap", type=str, help="heat-map CSV (from 'sample') drawn under the arc")
    _add_common(sub)
    sub.set_defaults(func=cmd_arctic)

    sub = subs.add_parser("sample", help="Metropolis corner-flip sampling")
    sub.add_argument("--N", type=int, required=True)
    sub.add_argument("--sweeps", type=int, required=True, help="total sweeps including burn-in")
    sub.add_argument("--burn-in", type=int, dest="burn_in", help="default 10 N")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--init-state", choices=("upper", "lower"), default="upper")
    sub.add_argument("--r", type=int, help="single-point estimate (with --s)")
    sub.add_argument("--s", type=int)
    sub.add_argument("--log", type=str, help="write per-sweep vertex counts CSV here")
    _add_weight_args(sub)
    _add_common(sub)
    sub.set_defaults(func=cmd_sample)

    sub = subs.add_parser("compare", help="brute vs Hankel EFP over every (r, s)")
    sub.add_argument("--N", type=int, required=True)
    sub.add_argument("--tau", type=str, required=True)
    sub.add_argument("--tolerance", type=float, default=1e-10)
    _add_common(sub)
    sub.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except (
        ValueError,
        ZeroDivisionError,
        OverflowError,
        enumeration.SizeLimitError,
        penner.ConvergenceError,
        penner.BranchCutError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
