"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import __version__, bounds, classical, montecarlo, quantum, report, verify
from .core import DomainError, InterferometerParams, check_eta

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def _out(key: str, value) -> None:
    if isinstance(value, float):
        value = "inf" if math.isinf(value) else f"{value:.12g}"
    print(f"{key}: {value}")


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"{args.kind} needs --{name.replace('_', '-')}")


def cmd_bound(args) -> int:
    kind = args.kind
    if kind == "hl":
        _need(args, "n")
        _out("delta_phi", bounds.heisenberg_limit(int(args.n)))
        return EXIT_OK
    _need(args, "eta", "n")
    if kind == "sil":
        _out("transmission", classical.optimal_transmission(args.eta))
        _out("delta_phi", classical.sil_uncertainty(args.eta, args.n))
    elif kind == "maxvis":
        _out("transmission", classical.maxvis_transmission(args.eta))
        _out("delta_phi", classical.maxvis_uncertainty(args.eta, args.n))
    elif kind == "noon":
        if args.n != int(args.n):
            raise UsageError("noon needs an integer --n")
        _out("delta_phi", bounds.noon_uncertainty(int(args.n), args.eta))
    elif kind == "chop":
        if args.k is not None:
            _out("delta_phi", bounds.chop_uncertainty(args.n, args.k, args.eta))
        else:
            r = bounds.chop_optimal(args.n, args.eta, integer_k=args.integer_k)
            _out("regime", r.regime)
            _out("eta0", r.eta0)
            _out("k_opt", r.k_opt)
            _out("delta_phi", r.delta_phi)
    elif kind == "mp":
        if args.k is not None:
            _out("delta_phi", bounds.multipass_uncertainty(args.n, args.k, args.eta))
        else:
            r = bounds.multipass_optimal(args.n, args.eta, integer_k=args.integer_k)
            _out("xi", r.xi)
            _out("k_opt", r.k_opt)
            _out("delta_phi", r.delta_phi)
    return EXIT_OK


def cmd_optimize(args) -> int:
    if args.kind == "quantum":
        opt = quantum.optimize_weights(args.n, args.eta, tol=args.tol)
    else:
        opt = quantum.optimize_multipass(args.n, args.eta, k_max=args.kmax, tol=args.tol)
    _out("n", opt.n)
    _out("k", opt.k)
    _out("delta_phi", opt.delta_phi)
    _out("weights", " ".join(f"{x:.6e}" for x in opt.weights.x))
    rep = opt.solver_report
    _out("iterations", rep.iterations)
    _out("residual", rep.grad_norm)
    _out("starts", rep.n_starts)
    _out("start_spread", rep.start_spread)
    return EXIT_OK


def cmd_curve(args) -> int:
    if args.figure == "fig2":
        eta = 0.1 if args.eta is None else args.eta
        table = report.curve_fig2(eta, nbar=args.nbar, phi_grid=report.default_phi_grid(args.points))
    else:
        eta = 0.6 if args.eta is None else args.eta
        strategies = args.strategies.split(",") if args.strategies else report.FIG3_STRATEGIES
        table = report.curve_fig3(eta, range(1, args.n_max + 1), strategies,
                                  n_quantum_max=args.n_quantum_max, tol=args.tol)
    try:
        report.emit(table, args.format, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _transmission(spec: str, eta_eff: float) -> float:
    if spec == "optimal":
        return classical.optimal_transmission(eta_eff)
    if spec == "maxvis":
        return classical.maxvis_transmission(eta_eff)
    try:
        return float(spec)
    except ValueError:
        raise UsageError(f"--transmission must be optimal, maxvis or a number, got {spec!r}")


def cmd_simulate(args) -> int:
    if args.passes < 1:
        raise UsageError("--passes must be >= 1")
    eta_eff = math.exp(args.passes * math.log(check_eta(args.eta)))
    t = _transmission(args.transmission, eta_eff)
    p = InterferometerParams(t, args.eta, args.phi, args.nbar)
    r = montecarlo.rmse_vs_crb(p, args.passes, args.trials, args.seed, args.window)
    _out("transmission", t)
    _out("rmse", r.rmse)
    _out("bias", r.bias)
    _out("crb", r.crb)
    _out("ratio", r.ratio)
    _out("trials", r.trials)
    _out("discarded", r.discarded)
    _out("unreliable", r.unreliable)
    return EXIT_OK


def cmd_verify(args) -> int:
    ok = verify.run_all(fast=args.fast)
    print("verify: all suites passed" if ok else "verify: FAILED")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lossyphase",
                     description="Phase-estimation bounds for a lossy interferometer.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bound", help="closed-form bounds")
    b.add_argument("kind", choices=["sil", "maxvis", "hl", "noon", "chop", "mp"])
    b.add_argument("--eta", type=float)
    b.add_argument("--n", type=float, help="photons (resources) or mean photon number")
    b.add_argument("--k", type=float, help="fixed chop or pass count; optimized if omitted")
    b.add_argument("--integer-k", action="store_true", help="restrict the optimum to integer k")
    b.set_defaults(func=cmd_bound)

    o = sub.add_parser("optimize", help="optimal quantum states")
    o.add_argument("kind", choices=["quantum", "quantum-mp"])
    o.add_argument("--eta", type=float, required=True)
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--kmax", type=int, help="largest pass count (default 4(1+xi)/|ln eta|)")
    o.add_argument("--tol", type=float, default=1e-9)
    o.set_defaults(func=cmd_optimize)

    c = sub.add_parser("curve", help="comparison tables")
    c.add_argument("figure", choices=["fig2", "fig3"])
    c.add_argument("--eta", type=float, help="default 0.1 for fig2, 0.6 for fig3")
    c.add_argument("--out", default="-", help="output path, '-' for stdout")
    c.add_argument("--format", choices=["csv", "json"], default="csv")
    c.add_argument("--nbar", type=float, default=100.0, help="fig2 mean photon number")
    c.add_argument("--points", type=int, default=73, help="fig2 phase grid size")
    c.add_argument("--n-max", type=int, default=report.N_CLOSED_MAX)
    c.add_argument("--n-quantum-max", type=int, default=report.N_QUANTUM_MAX)
    c.add_argument("--strategies", help="comma-separated strategy tags for fig3")
    c.add_argument("--tol", type=float, default=1e-9)
    c.set_defaults(func=cmd_curve)

    s = sub.add_parser("simulate", help="Monte-Carlo RMSE against the Cramer-Rao bound")
    s.add_argument("--eta", type=float, required=True)
    s.add_argument("--nbar", type=float, required=True)
    s.add_argument("--phi", type=float, default=math.pi / 2)
    s.add_argument("--passes", type=int, default=1)
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--transmission", default="optimal",
                   help="optimal, maxvis or a number (tuned to eta**passes)")
    s.add_argument("--window", type=float, help="MLE half-width (default pi/(4 passes))")
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify", help="run the oracle suites")
    v.add_argument("--fast", action="store_true")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
