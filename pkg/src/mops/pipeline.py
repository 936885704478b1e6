"""Window sizing and the standard construction chain for one parameter point.

A reported interior of size ``n`` needs a larger working window: banded
products lose rows at the edge, and the moment matrix of size ``W`` needs
moments up to order ``W - 1 + (W - 1) // p`` plus whatever column bumps the
checks apply.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .factorization import gauss_borel
from .kernel import Q, ToleranceBudget
from .moments import build_moments, moment_matrix
from .recurrence import build_pascal, build_T, dress_pascal
from .weights import truncate_measure

DEFAULT_TAIL = Q("1e-40")


def working_size(ws, n: int) -> int:
    return n + ws.p * (ws.deg_sigma + 2) + ws.deg_theta + 4


def moment_order(ws, W: int, jet_order: int = 0) -> int:
    return (W - 1) + (W - 1) // ws.p + ws.deg_theta + jet_order + 4


@dataclass(eq=False)
class Pipeline:
    """Measure, moments, factorization, recurrence and Pascal data at one point."""

    ws: object
    n: int
    W: int
    tm: object
    ms: object
    mm: object
    f: object
    rd: object
    _pascal: object = field(default=None, repr=False)
    _lf: object = field(default=None, repr=False)

    @property
    def budget(self) -> ToleranceBudget:
        return ToleranceBudget.tail(self.tm.tail_bound)

    @property
    def pascal_raw(self):
        return build_pascal(self.ws.p, self.W)

    @property
    def pascal(self):
        """Dressed Pascal data, built on first use (only Psi needs it)."""
        if self._pascal is None:
            self._pascal = dress_pascal(self.f, self.pascal_raw)
        return self._pascal

    @property
    def lf(self):
        if self._lf is None:
            from .pearson_lf import build_psi
            self._lf = build_psi(self.rd, self.pascal, self.ws, self.n)
        return self._lf


def certified_K(ws, n: int, target_tail=DEFAULT_TAIL, jet_order: int = 0) -> int:
    W = working_size(ws, n)
    return truncate_measure(ws, moment_order(ws, W, jet_order), target_tail).K


def run_pipeline(ws, n: int, target_tail=DEFAULT_TAIL, K: int | None = None,
                 jet_order: int = 0, W: int | None = None) -> Pipeline:
    """Build everything for ``ws`` with a reported interior of size ``n``."""
    W = working_size(ws, n) if W is None else W
    tm = truncate_measure(ws, moment_order(ws, W, jet_order), target_tail, K=K)
    ms = build_moments(tm)
    mm = moment_matrix(ms, W)
    f = gauss_borel(mm)
    rd = build_T(f, ws.p)
    return Pipeline(ws, n, W, tm, ms, mm, f, rd)


__all__ = ["Pipeline", "run_pipeline", "working_size", "moment_order", "certified_K", "DEFAULT_TAIL"]
