"""Run configurations and the identity suites driven by the command line."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .contiguity import ShiftDescriptor, discrete_compatibility, shift_check
from .errors import InvalidParameters
from .factorization import verify_factorization
from .families import (AlphaView, FamilySpec, closed_form_table, compatibility_diagonal,
                       compatibility_levels, family_to_weight_system, verify_family_lf)
from .kernel import DEFAULT_AMPLIFICATION, Q, ToleranceBudget, fmt
from .moments import hankel_check, tau_table
from .opsys import verify_determinantal, verify_orthogonality
from .pearson_lf import verify_moment_symmetry, verify_psi, verify_psi_action
from .pipeline import DEFAULT_TAIL, run_pipeline
from .recurrence import verify_pascal, verify_recurrence, verify_shifts, verify_T
from .report import Report
from .toda import (build_jet, tau_relations, verify_alpha_toda_and_lax, verify_diagonal_flows,
                   verify_finite_differences, verify_multiple_toda, verify_psi_flow,
                   verify_sw_relations, verify_tau_routes, verify_three_weight_system)
from .weights import WeightSystem, verify_pearson

DETERMINANTAL_MAX = 6


@dataclass
class RunConfig:
    ws: WeightSystem
    n: int
    family: FamilySpec | None = None
    jet: int = 0
    tail: object = DEFAULT_TAIL
    amp: object = DEFAULT_AMPLIFICATION
    shifts: list = field(default_factory=list)

    def __post_init__(self):
        self.tail = Q(self.tail)
        self.amp = Q(self.amp)
        if self.n < 1:
            raise InvalidParameters("n must be >= 1")
        if not 0 <= self.jet <= 4:
            raise InvalidParameters("jet order must be in 0..4")
        if self.tail <= 0:
            raise InvalidParameters("tail must be positive")
        if self.amp < 1:
            raise InvalidParameters("amplification must be >= 1")

    @classmethod
    def for_family(cls, fs: FamilySpec, n, **kw):
        return cls(family_to_weight_system(fs), n, family=fs, **kw)

    def echo(self):
        d = {
            "weights": json.loads(self.ws.to_json()),
            "n": self.n,
            "jet": self.jet,
            "tail": fmt(self.tail),
            "amp": fmt(self.amp),
            "shifts": [str(s) for s in self.shifts],
        }
        if self.family is not None:
            d["family"] = self.family.to_dict()
        return d


def budget_for(cfg: RunConfig, pl) -> ToleranceBudget:
    return ToleranceBudget.tail(pl.tm.tail_bound, cfg.amp)


def run_verify(cfg: RunConfig) -> list[Report]:
    """Every applicable identity suite, in pipeline order."""
    jet_order = max(cfg.jet + 1, 3) if cfg.jet else 0
    pl = run_pipeline(cfg.ws, cfg.n, cfg.tail, jet_order=jet_order)
    budget = budget_for(cfg, pl)
    n = cfg.n
    taus = tau_table(pl.ms, min(n, pl.W - 1))
    out = [
        verify_pearson(cfg.ws, pl.tm),
        hankel_check(pl.mm, cfg.ws.p),
        verify_factorization(pl.f, pl.mm, taus.tau),
        verify_determinantal(pl.ms, pl.f, min(n, DETERMINANTAL_MAX)),
        verify_orthogonality(pl.tm, pl.f, n),
        verify_T(pl.rd),
        verify_recurrence(pl.rd, pl.f),
        verify_pascal(pl.pascal_raw),
        verify_shifts(pl.pascal, pl.f),
        verify_moment_symmetry(cfg.ws, pl.ms, budget, n),
        verify_psi(pl.lf, pl.rd, budget),
        verify_psi_action(pl.lf, pl.f, cfg.ws, budget),
    ]
    for sd in cfg.shifts:
        out.append(shift_check(cfg.ws, sd, n, cfg.tail))
    if cfg.jet:
        out.extend(run_toda(cfg, pl))
    if cfg.family is not None:
        out.append(verify_family_lf(cfg.family, pl, n, budget))
    return out


def run_toda(cfg: RunConfig, pl) -> list[Report]:
    n = cfg.n
    jet = build_jet(pl.ms, pl.f, cfg.jet, n, cfg.ws)
    out = [
        verify_sw_relations(jet, pl.rd),
        verify_diagonal_flows(jet, pl.rd),
        verify_multiple_toda(jet),
        verify_alpha_toda_and_lax(jet, pl.rd),
        verify_psi_flow(jet, pl.lf),
        tau_relations(pl.ms, jet, n),
        verify_tau_routes(pl.ms, jet, n),
        verify_finite_differences(cfg.ws, pl.tm, jet, n),
    ]
    if cfg.ws.p == 3:
        out.append(verify_three_weight_system(jet, pl.ms))
    return out


def run_shift_check(cfg: RunConfig) -> list[Report]:
    """Connection checks per shift; with two b-shifts and one c-shift also the commuting squares."""
    if not cfg.shifts:
        raise InvalidParameters("shift-check needs at least one --shift")
    for sd in cfg.shifts:
        sd.validate(cfg.ws)
    out = [shift_check(cfg.ws, sd, cfg.n, cfg.tail) for sd in cfg.shifts]
    if len(cfg.shifts) == 3:
        bs = [s for s in cfg.shifts if s.kind == "b"]
        cs = [s for s in cfg.shifts if s.kind == "c"]
        if len(bs) == 2 and len(cs) == 1 and str(bs[0]) != str(bs[1]):
            out.append(discrete_compatibility(cfg.ws, bs[0], bs[1], cs[0], cfg.n, cfg.tail))
    elif len(cfg.shifts) == 2 and str(cfg.shifts[0]) != str(cfg.shifts[1]):
        out.append(discrete_compatibility(cfg.ws, cfg.shifts[0], cfg.shifts[1], None, cfg.n, cfg.tail))
    return out


@dataclass
class Table:
    columns: list
    rows: list          # exact values
    verdicts: list      # (column, ok) for residual columns


def run_table(cfg: RunConfig) -> Table:
    """Recurrence coefficients, pivots and tau, with closed-form columns where they exist."""
    pl = run_pipeline(cfg.ws, cfg.n, cfg.tail)
    budget = budget_for(cfg, pl)
    p = cfg.ws.p
    n = cfg.n
    taus = tau_table(pl.ms, n).tau
    cols = ["n"] + [f"alpha{k}" for k in range(p + 1)] + ["H", "tau"]
    rows = [[m] + [pl.rd.alphas[k][m] for k in range(p + 1)] + [pl.f.H[m], taus[m]] for m in range(n)]
    verdicts = []
    fs = cfg.family
    if fs is not None and fs.kind in ("charlier", "meixner2"):
        table = closed_form_table(fs, n - 1)
        for k in sorted(table):
            cols += [f"alpha{k}_closed", f"alpha{k}_residual"]
            worst = 0
            for m in range(n):
                r = table[k][m] - pl.rd.alphas[k][m]
                rows[m] += [table[k][m], r]
                worst = max(worst, abs(r))
            verdicts.append((f"alpha{k}_residual", budget.accepts(worst)))
    elif fs is not None:
        A = AlphaView(pl.rd.alphas, p, "col", pl.rd.T.rows - 1)
        cols.append("lf_residual")
        worst = 0
        for m in range(n):
            r = max(abs(compatibility_diagonal(fs, A, d, m)) for d in compatibility_levels(fs) if m + d >= 0)
            rows[m].append(r)
            worst = max(worst, r)
        verdicts.append(("lf_residual", budget.accepts(worst)))
    return Table(cols, rows, verdicts)


__all__ = ["RunConfig", "run_verify", "run_toda", "run_shift_check", "run_table", "Table",
           "budget_for", "ShiftDescriptor"]
