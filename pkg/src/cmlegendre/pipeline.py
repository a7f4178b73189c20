"""End-to-end runs: solve a degree, check coverage, certify table rows."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from .errors import NoSolutionsFound, RowMismatch
from .isogeny import isogeny_step
from .modular import (
    DEFAULT_HEIGHT_BOUND,
    AlgebraicCandidate,
    j_of_lambda,
    j_theta_oracle,
    match,
    recognize_quadratic,
    reduce_tau,
)
from .mpcore import CBall
from .qforms import (
    QuadForm,
    SystemVariant,
    TauRep,
    distinct_periods,
    enumerate_reps,
    is_square,
    predict_system,
)
from .ramsys import build_d2_cases, build_system
from .solver import SolutionRecord, SolverConfig, all_records, refine, solve

GOLDEN_NAMES = ("D2", "D3", "D4", "ex2tau", "ex3tau", "table1")
D2_CASES = 9


def load_golden(name: str) -> dict:
    if name not in GOLDEN_NAMES:
        raise KeyError(name)
    return json.loads(resources.files("cmlegendre").joinpath(f"golden/{name}.json").read_text())


def sympy_ball(expr: str, prec: int) -> CBall:
    """A ball around a closed form, evaluated with guard digits."""
    digits = int(prec * 0.30103) + 20
    v = sympy.N(sympy.sympify(expr), digits)
    re, im = v.as_real_imag()
    rad = max(1.0, abs(complex(v))) * 10.0 ** -(digits - 10)
    return CBall.from_strings(str(sympy.N(re, digits)), str(sympy.N(im, digits)), repr(rad), prec)


def s3_orbit(lam: CBall) -> List[CBall]:
    one = CBall(1, prec=lam.prec)
    return [lam, one - lam, one / lam, one / (one - lam), (lam - one) / lam, lam / (lam - one)]


def rel_close(a: CBall, b: CBall, digits: int) -> bool:
    scale = max(1.0, float(b.abs_upper()))
    return float((a - b).abs_upper()) <= scale * 10.0 ** -digits


# ---------------------------------------------------------------------------
# solving


def default_variants(D: int) -> List[SystemVariant]:
    vs = SystemVariant.for_degree(D)
    if is_square(D):
        vs = [v for v in vs if v not in (SystemVariant.S1, SystemVariant.S4)]
    return vs


def solve_degree(D: int, variants: Optional[Sequence] = None,
                 cfg: Optional[SolverConfig] = None) -> Dict[str, List[SolutionRecord]]:
    """Solutions keyed by system label.  Systems without solutions map to [].

    For D = 2 the start budget is shared by the nine case systems.
    """
    cfg = cfg or SolverConfig()
    out: Dict[str, List[SolutionRecord]] = {}
    if D == 2:
        per_case = max(1, math.ceil(cfg.n_starts(2) / D2_CASES))
        sub = SolverConfig(per_case, cfg.seed, cfg.max_iters, cfg.newton_tol, cfg.dedup_tol,
                           cfg.precision, cfg.degeneracy_tol)
        for case, sys in build_d2_cases():
            try:
                out[case.name] = solve(sys, sub)
            except NoSolutionsFound:
                out[case.name] = []
        return out
    chosen = default_variants(D) if variants is None else [SystemVariant.parse(v) for v in variants]
    for v in chosen:
        sys = build_system(D, v)
        try:
            out[str(v)] = solve(sys, cfg)
        except NoSolutionsFound:
            out[str(v)] = []
    return out


_SOLVE_CACHE: Dict[Tuple, Dict[str, List[SolutionRecord]]] = {}


def solve_degree_cached(D: int, variants: Optional[Sequence] = None,
                        cfg: Optional[SolverConfig] = None) -> Dict[str, List[SolutionRecord]]:
    cfg = cfg or SolverConfig()
    key = (D, None if variants is None else tuple(str(SystemVariant.parse(v)) for v in variants), cfg)
    if key not in _SOLVE_CACHE:
        _SOLVE_CACHE[key] = solve_degree(D, variants, cfg)
    return _SOLVE_CACHE[key]


def distinct_j(results: Dict[str, List[SolutionRecord]], tol: float = 1e-30) -> List[CBall]:
    """The distinct j-values over every system, in a deterministic order."""
    out: List[CBall] = []
    for label in sorted(results):
        for rec in results[label]:
            if not any(rel_close(rec.j_value, j, 30) for j in out):
                out.append(rec.j_value)
    return sorted(out, key=lambda z: (round(complex(z.mid).real, 6), round(complex(z.mid).imag, 6)))


def records_with_j(results: Dict[str, List[SolutionRecord]], j: CBall) -> List[SolutionRecord]:
    return [r for label in sorted(results) for r in all_records(results[label])
            if rel_close(r.j_value, j, 30)]


# ---------------------------------------------------------------------------
# coverage


def coverage_periods(D: int) -> Dict[QuadForm, List[TauRep]]:
    """Periods the solver must account for.

    For a perfect square D, periods whose forms only fit S1 or S4 are left out,
    since those variants are not solved.
    """
    groups = distinct_periods(enumerate_reps(D, allow_square=True))
    if not is_square(D) or D == 2:
        return groups
    skip = {SystemVariant.S1, SystemVariant.S4}
    return {k: reps for k, reps in groups.items()
            if any(predict_system(t) - skip for t in reps)}


@dataclass
class Coverage:
    D: int
    periods: List[Tuple[TauRep, Optional[int]]]
    j_values: List[CBall]
    j_hits: List[int]
    partial: bool = False
    series_disagreements: List[str] = field(default_factory=list)

    @property
    def unmatched_periods(self) -> List[TauRep]:
        return [t for t, i in self.periods if i is None]

    @property
    def unmatched_j(self) -> List[int]:
        return [i for i, n in enumerate(self.j_hits) if n != 1]

    @property
    def ok(self) -> bool:
        if self.unmatched_j:
            return False
        return self.partial or not self.unmatched_periods


def coverage(D: int, j_values: Sequence[CBall], precision: int = 256,
             partial: bool = False) -> Coverage:
    """Check that solver j-values and period orbits are in bijection.

    With ``partial`` only the direction j-value -> period is enforced, as
    happens when only some variants were solved.
    """
    groups = coverage_periods(D)
    taus = [reps[0] for reps in groups.values()]
    if not j_values:
        return Coverage(D, [(t, None) for t in taus], [], [], partial)
    ms = match(list(j_values), taus, precision=precision)
    hits = [0] * len(j_values)
    for m in ms:
        if m.index is not None:
            for i, j in enumerate(j_values):
                if rel_close(j, m.oracle, 30):
                    hits[i] += 1
    return Coverage(D, [(m.tau, m.index) for m in ms], list(j_values), hits, partial,
                    [m.tau.label() for m in ms if m.index is not None and not m.series_agrees])


# ---------------------------------------------------------------------------
# recognition helpers


def recognize(j: CBall, height_bound: int = DEFAULT_HEIGHT_BOUND) -> Optional[AlgebraicCandidate]:
    return recognize_quadratic(j, height_bound)


def order_disc_of_tau(tau: CBall) -> int:
    """Discriminant of the primitive form vanishing at tau (the order discriminant)."""
    cand = recognize_quadratic(tau, 10**6)
    if cand is None or cand.degree != 2:
        raise ValueError(f"tau = {tau} is not recognized as imaginary quadratic")
    c0, c1, c2 = cand.min_poly
    return c1 * c1 - 4 * c0 * c2


def period_of(tau: CBall, groups: Dict[QuadForm, List[TauRep]]) -> Optional[TauRep]:
    """The enumerated period SL2(Z)-equivalent to ``tau``."""
    red = reduce_tau(tau)
    for reps in groups.values():
        t = reduce_tau(reps[0].tau(tau.prec))
        if float((t - red).abs_upper()) < 1e-40:
            return reps[0]
    return None


# ---------------------------------------------------------------------------
# table


@dataclass
class RowResult:
    index: int
    tau: str
    j: CBall
    oracle: CBall
    lam: CBall
    min_poly: Tuple[int, ...]
    order_disc: int
    source: str


class TableRun:
    """Recomputes the rows of the golden table and diffs them."""

    def __init__(self, golden: Optional[dict] = None, cfg: Optional[SolverConfig] = None,
                 precision: int = 256, height_bound: int = DEFAULT_HEIGHT_BOUND):
        self.golden = golden if golden is not None else load_golden("table1")
        self.cfg = cfg or SolverConfig(precision=precision)
        self.precision = precision
        self.height_bound = height_bound

    def _source_from_solve(self, D: int, tau: CBall) -> Tuple[CBall, CBall]:
        """(lambda, j) of the solver record attached to the period of ``tau``."""
        results = solve_degree_cached(D, None, self.cfg)
        js = distinct_j(results)
        groups = coverage_periods(D)
        t = period_of(tau, groups)
        if t is None:
            raise LookupError(f"{tau} is not an enumerated period for D = {D}")
        m = match(js, [t], precision=self.precision)[0]
        if m.index is None:
            raise LookupError(f"no solver value for the period {t.label()}")
        rec = records_with_j(results, js[m.index])[0]
        rec = refine(rec, self.precision)
        return rec.lam, rec.j_value

    def _tau_ball(self, expr: str) -> CBall:
        return sympy_ball(expr, self.precision)

    def compute(self, i: int) -> RowResult:
        row = self.golden["rows"][i]
        src = row["source"]
        tau = self._tau_ball(row["tau"])
        if src["kind"] == "solve":
            lam, j = self._source_from_solve(src["D"], tau)
            how = f"solve D={src['D']}"
        else:
            start = self._tau_ball(src["from"])
            lam0, _ = self._source_from_solve(src["from_D"], start)
            step = isogeny_step(lam0, src["degree"], start, self.precision)
            hit = [c for c in step.candidates if c.target == src["target"] and c.certified]
            if not hit:
                raise RowMismatch(i + 1, f"no certified candidate for {src['target']}")
            lam, j = hit[0].lam, hit[0].j
            how = f"degree-{src['degree']} isogeny from {src['from']} via {src['target']}"
        oracle = j_theta_oracle(tau, self.precision)[1]
        cand = recognize_quadratic(j, self.height_bound)
        return RowResult(i + 1, row["tau"], j, oracle, lam,
                         cand.min_poly if cand else (), order_disc_of_tau(tau), how)

    def check(self, i: int, res: RowResult) -> None:
        """Raise :class:`RowMismatch` unless ``res`` agrees with golden row ``i``."""
        row = self.golden["rows"][i]
        n = i + 1
        gj = CBall.from_strings(row["j_value"]["re"], row["j_value"]["im"], "1e-65", self.precision)
        if not rel_close(res.j, gj, 40):
            raise RowMismatch(n, f"j = {res.j} differs from the table value {gj}")
        if not rel_close(res.oracle, gj, 40):
            raise RowMismatch(n, f"theta oracle {res.oracle} differs from the table value")
        want = tuple(int(c) for c in row["j_min_poly"])
        if res.min_poly != want:
            raise RowMismatch(n, f"recognized minimal polynomial {res.min_poly} != {want}")
        if res.order_disc != row["order_disc"]:
            raise RowMismatch(n, f"order discriminant {res.order_disc} != {row['order_disc']}")
        lam_ok = False
        for expr in row["lambda"]:
            g = sympy_ball(expr, self.precision)
            if any(rel_close(img, g, 30) for img in s3_orbit(res.lam)):
                lam_ok = True
        if not lam_ok:
            raise RowMismatch(n, f"lambda = {res.lam} is not in the orbit of the table lambda")
        if not rel_close(j_of_lambda(res.lam), gj, 30):
            raise RowMismatch(n, "j(lambda) disagrees with the table value")

    def run(self, rows: Optional[Sequence[int]] = None) -> List[RowResult]:
        out = []
        for i in (range(len(self.golden["rows"])) if rows is None else rows):
            try:
                res = self.compute(i)
            except RowMismatch:
                raise
            except Exception as exc:  # any failure to recompute is a row failure
                raise RowMismatch(i + 1, f"{type(exc).__name__}: {exc}") from exc
            self.check(i, res)
            out.append(res)
        return out
