"""Comparison tables for the classical-vs-quantum curves and their emitters."""

from __future__ import annotations

import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bounds import (chop_optimal, eta0_constant, heisenberg_limit, multipass_as_resource,
                     multipass_optimal, noon_uncertainty, xi_constant)
from .classical import (STRATEGY_TRANSMISSION, output_means, sil_uncertainty,
                        uncertainty_from_fisher, fisher_analytic)
from .core import STRATEGY_TAGS, DomainError, InterferometerParams, StrategyPoint
from .quantum import optimize_multipass, optimize_weights

FIG3_STRATEGIES = ("SIL", "CHOP", "MP-resource", "Q", "MP-free", "QMP", "HL", "SNL")
QUANTUM_TAGS = ("Q", "QMP")
N_QUANTUM_MAX = 30
N_CLOSED_MAX = 1000
FIG2_TAGS = {"optimal-T": "SIL", "max-visibility": "MAXVIS"}


@dataclass
class CurveTable:
    """Metadata plus rows.

    Fig. 3 tables are keyed by (strategy, n); phase scans by (strategy, phi),
    with phi stored in ``aux``.
    """

    metadata: dict
    rows: list = field(default_factory=list)

    def sort_key(self, row: StrategyPoint):
        return (row.strategy, row.aux.get("phi", 0.0), row.n)

    def finalize(self) -> "CurveTable":
        self.rows.sort(key=self.sort_key)
        keys = [self.sort_key(r) for r in self.rows]
        if len(set(keys)) != len(keys):
            raise DomainError("duplicate rows in curve table")
        return self


def _base_metadata(eta: float) -> dict:
    return {
        "eta": eta,
        "version": __version__,
        "eta0": eta0_constant(),
        "xi": xi_constant(),
    }


def _check_strategies(strategies) -> list:
    strategies = list(strategies)
    if not strategies:
        raise DomainError("strategy list is empty")
    for s in strategies:
        if s not in STRATEGY_TAGS:
            raise DomainError(f"unknown strategy tag {s!r}; choose from {', '.join(STRATEGY_TAGS)}")
    return strategies


def _fig3_point(tag: str, n: int, eta: float, tol: float) -> StrategyPoint:
    if tag == "SIL":
        return StrategyPoint(tag, n, 1, sil_uncertainty(eta, n))
    if tag == "HL":
        return StrategyPoint(tag, n, 1, heisenberg_limit(n))
    if tag == "SNL":
        return StrategyPoint(tag, n, 1, 1.0 / math.sqrt(n))
    if tag == "NOON":
        return StrategyPoint(tag, n, n, noon_uncertainty(n, eta))
    if tag in ("CHOP", "MP-resource"):
        fn = chop_optimal if tag == "CHOP" else multipass_as_resource
        r = fn(n, eta)
        return StrategyPoint(tag, n, r.k_opt, r.delta_phi)
    if tag == "MP-free":
        # passes are integers; the relaxed optimum is kept alongside
        real = multipass_optimal(n, eta)
        best = multipass_optimal(n, eta, integer_k=True)
        return StrategyPoint(tag, n, best.k_opt, best.delta_phi,
                             aux={"k_real": real.k_opt, "delta_phi_real": real.delta_phi})
    if tag == "Q":
        opt = optimize_weights(n, eta, tol=tol)
        return StrategyPoint(tag, n, 1, opt.delta_phi,
                             aux={"mean_s": float(opt.weights.x @ np.arange(n + 1))})
    if tag == "QMP":
        opt = optimize_multipass(n, eta, tol=tol)
        return StrategyPoint(tag, n, opt.k, opt.delta_phi,
                             aux={"mean_s": float(opt.weights.x @ np.arange(n + 1))})
    if tag == "MAXVIS":
        raise DomainError("MAXVIS is a phase-scan strategy; use curve_fig2")
    raise DomainError(f"unknown strategy tag {tag!r}")


def curve_fig3(eta: float = 0.6, n_values=None, strategies=FIG3_STRATEGIES,
               n_quantum_max: int = N_QUANTUM_MAX, tol: float = 1e-9) -> CurveTable:
    """Uncertainty vs resources for each strategy.

    SIL, CHOP, MP-resource and Q charge photons x passes; MP-free and QMP
    charge photons only.  Quantum strategies are evaluated for
    n <= ``n_quantum_max`` only.
    """
    strategies = _check_strategies(strategies)
    if n_values is None:
        n_values = range(1, N_CLOSED_MAX + 1)
    n_values = sorted({int(n) for n in n_values})
    if not n_values or n_values[0] < 1:
        raise DomainError("n values must be a nonempty set of integers >= 1")
    meta = _base_metadata(eta)
    meta.update({"figure": "fig3", "strategies": strategies,
                 "n_min": n_values[0], "n_max": n_values[-1], "n_count": len(n_values),
                 "n_quantum_max": n_quantum_max, "tol": tol})
    table = CurveTable(metadata=meta)
    for tag in strategies:
        for n in n_values:
            if tag in QUANTUM_TAGS and n > n_quantum_max:
                continue
            table.rows.append(_fig3_point(tag, n, eta, tol))
    return table.finalize()


def default_phi_grid(points: int = 73) -> list:
    return [2.0 * math.pi * i / (points - 1) for i in range(points - 1)]


def curve_fig2(eta: float = 0.1, nbar: float = 100.0, phi_grid=None) -> CurveTable:
    """Mean clicks and uncertainty vs phase for optimal-T and max-visibility."""
    phis = default_phi_grid() if phi_grid is None else [float(p) for p in phi_grid]
    if not phis:
        raise DomainError("phase grid is empty")
    meta = _base_metadata(eta)
    meta.update({"figure": "fig2", "strategies": list(FIG2_TAGS.values()), "nbar": nbar,
                 "phi_count": len(phis)})
    table = CurveTable(metadata=meta)
    for strategy, tag in FIG2_TAGS.items():
        t = STRATEGY_TRANSMISSION[strategy](eta)
        for phi in phis:
            p = InterferometerParams(t, eta, phi, nbar)
            m = output_means(p)
            dphi = uncertainty_from_fisher(fisher_analytic(p))
            table.rows.append(StrategyPoint(
                tag, nbar, 1, dphi,
                aux={"phi": p.phi, "T": t, "mean_n1": m.mean_n1, "mean_n2": m.mean_n2}))
    return table.finalize()


def _fmt(x: float) -> str:
    if math.isinf(x) or math.isnan(x):
        return "inf"
    return f"{x:.12g}"


def _reported(row: StrategyPoint):
    """delta_phi as emitted: None when saturated or infinite."""
    return None if row.status != "ok" else row.delta_phi


def to_csv(table: CurveTable) -> str:
    aux_keys = sorted({k for r in table.rows for k in r.aux})
    buf = io.StringIO(newline="")
    buf.write(",".join(["strategy", "n", "k", "delta_phi", "status", *aux_keys]) + "\n")
    for r in table.rows:
        d = _reported(r)
        cells = [r.strategy, _fmt(r.n), _fmt(r.k), "inf" if d is None else _fmt(d), r.status]
        cells += ["" if k not in r.aux else _fmt(r.aux[k]) for k in aux_keys]
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def to_json(table: CurveTable) -> str:
    rows = [{"strategy": r.strategy, "n": r.n, "k": r.k, "delta_phi": _reported(r),
             "status": r.status, "aux": r.aux} for r in table.rows]
    return json.dumps({"metadata": table.metadata, "rows": rows}, sort_keys=True,
                      indent=2, allow_nan=False) + "\n"


def emit(table: CurveTable, fmt: str = "csv", destination=None) -> None:
    """Write ``table`` as CSV or JSON to a path, or to stdout when ``None`` or '-'."""
    if fmt == "csv":
        text = to_csv(table)
    elif fmt == "json":
        text = to_json(table)
    else:
        raise DomainError(f"unknown format {fmt!r}; use csv or json")
    if destination is None or str(destination) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(destination, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
