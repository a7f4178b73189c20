"""Multi-start Newton solver for the square systems built in :mod:`ramsys`.

Starts are pushed through a vectorized damped Newton iteration in double
precision; survivors are deduplicated, refined by Newton's method in
multiprecision, certified with ball residuals and checked against the
square condition and the ramification census.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import mpmath
import numpy as np

from .errors import DegenerateSolution, DivergedDuringRefine, NoSolutionsFound
from .modular import j_of_lambda
from .mpcore import DEFAULT_PREC, CBall
from .ramsys import (
    LAM,
    PolySystem,
    Shape,
    assemble_h,
    census_ok,
    ramification_census,
    residual,
    verify_square_condition,
)


@dataclass(frozen=True)
class SolverConfig:
    starts: Optional[int] = None  # default 4000 * D
    seed: int = 0
    max_iters: int = 80
    newton_tol: float = 2.0**-80
    dedup_tol: float = 2.0**-40
    precision: int = DEFAULT_PREC
    degeneracy_tol: float = 1e-4

    def __post_init__(self):
        if min(self.newton_tol, self.dedup_tol, self.degeneracy_tol) <= 0:
            raise ValueError("tolerances must be positive")
        if self.dedup_tol <= self.newton_tol:
            raise ValueError("dedup_tol must exceed newton_tol")
        if self.starts is not None and self.starts <= 0:
            raise ValueError("starts must be positive")

    def n_starts(self, D: int) -> int:
        return self.starts if self.starts is not None else 4000 * D


@dataclass
class SolutionRecord:
    assignment: Dict[str, CBall]
    residual_norm: CBall
    variant: object
    D: int
    j_value: CBall
    lam: CBall
    shape: Shape = field(repr=False)
    orbit: List["SolutionRecord"] = field(default_factory=list, repr=False)

    @property
    def unknowns(self) -> List[str]:
        return list(self.assignment)

    def orbit_members(self) -> List["SolutionRecord"]:
        return self.orbit or [self]


# ---------------------------------------------------------------------------
# double precision stage


def _columns(fn, X: np.ndarray) -> np.ndarray:
    out = fn(*X.T)
    B = X.shape[0]
    return np.stack([np.broadcast_to(np.asarray(v, dtype=complex), (B,)) for v in out], axis=1)


def _jacobians(fn, X: np.ndarray) -> np.ndarray:
    rows = fn(*X.T)
    B = X.shape[0]
    return np.stack(
        [np.stack([np.broadcast_to(np.asarray(v, dtype=complex), (B,)) for v in row], axis=1) for row in rows],
        axis=1,
    )


def _solve_batch(J: np.ndarray, F: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.solve(J, F[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out = np.full(F.shape, np.nan, dtype=complex)
        for i in range(len(F)):
            try:
                out[i] = np.linalg.solve(J[i], F[i])
            except np.linalg.LinAlgError:
                pass
        return out


def _sample_starts(sys: PolySystem, n: int, seed: int) -> np.ndarray:
    """Per-start generators keyed on (seed, index), so the set does not depend on batching."""
    dim = sys.size
    li = sys.unknowns.index(LAM)
    X = np.empty((n, dim), dtype=complex)
    for i in range(n):
        rng = np.random.default_rng([seed & (2**64 - 1), i])
        r = np.exp(rng.uniform(math.log(0.1), math.log(10.0), dim))
        X[i] = r * np.exp(2j * np.pi * rng.uniform(0, 1, dim))
        mode = i % 3
        if mode == 1:
            X[i, li] = (1 + 0.1 * rng.standard_normal()) * np.exp(2j * np.pi * rng.uniform())
        elif mode == 2:
            X[i, li] = rng.uniform(-20, 20) + 0.05j * rng.standard_normal()
    return X


def _float_newton(sys: PolySystem, X: np.ndarray, max_iters: int) -> np.ndarray:
    """Damped Newton with backtracking on the residual norm; returns converged rows."""
    F, J = sys.evaluator("residual"), sys.evaluator("jacobian")
    X = X.copy()
    done = np.zeros(len(X), dtype=bool)
    alive = np.ones(len(X), dtype=bool)
    with np.errstate(all="ignore"):
        Fx = _columns(F, X)
        nrm = np.linalg.norm(Fx, axis=1)
        for _ in range(max_iters):
            idx = np.nonzero(alive & ~done)[0]
            if not len(idx):
                break
            dx = _solve_batch(_jacobians(J, X[idx]), Fx[idx])
            bad = ~np.isfinite(dx).all(axis=1)
            alive[idx[bad]] = False
            keep = ~bad
            idx, dx = idx[keep], dx[keep]
            t = np.ones(len(idx))
            pending = np.ones(len(idx), dtype=bool)
            newX = X[idx].copy()
            newF = Fx[idx].copy()
            newn = nrm[idx].copy()
            for _half in range(8):
                p = np.nonzero(pending)[0]
                if not len(p):
                    break
                trial = X[idx[p]] - t[p, None] * dx[p]
                tf = _columns(F, trial)
                tn = np.linalg.norm(tf, axis=1)
                ok = (tn < nrm[idx[p]]) | (_half == 7)
                ok &= np.isfinite(tn)
                acc = p[ok]
                newX[acc], newF[acc], newn[acc] = trial[ok], tf[ok], tn[ok]
                pending[acc] = False
                t[p[~ok]] *= 0.5
            alive[idx[pending]] = False
            step = np.linalg.norm(dx, axis=1) * t
            X[idx], Fx[idx], nrm[idx] = newX, newF, newn
            scale = 1 + np.linalg.norm(X[idx], axis=1)
            done[idx[(step < 1e-12 * scale) & (t == 1)]] = True
            alive[idx[scale > 1e8]] = False
        conv = done | (alive & (nrm < 1e-9 * (1 + np.linalg.norm(X, axis=1)) ** sys.D))
    return X[conv & np.isfinite(X).all(axis=1)]


def _groups(sys: PolySystem) -> List[List[int]]:
    """Index groups of interchangeable unknowns (the roots of one square factor)."""
    out: Dict[str, List[int]] = {}
    for i, u in enumerate(sys.unknowns):
        if "_" in u:
            out.setdefault(u.split("_")[0], []).append(i)
    return list(out.values())


def _canonical(sys: PolySystem, x: np.ndarray) -> np.ndarray:
    """Sort each group of interchangeable roots so permuted solutions coincide."""
    x = x.copy()
    for g in _groups(sys):
        vals = sorted(x[g], key=lambda z: (round(z.real, 6), round(z.imag, 6)))
        x[g] = vals
    return x


def _float_filter(sys: PolySystem, X: np.ndarray, tol: float) -> np.ndarray:
    keep = []
    ki, li = sys.unknowns.index("k"), sys.unknowns.index(LAM)
    crit = [i for i, u in enumerate(sys.unknowns) if u not in ("k", LAM)]
    for x in X:
        lam = x[li]
        if abs(x[ki]) < tol or abs(lam) < tol or abs(lam - 1) < tol:
            continue
        pts = [0, 1, lam] + [x[i] for i in crit]
        if any(abs(pts[a] - pts[b]) < tol for a in range(len(pts)) for b in range(a + 1, len(pts))):
            continue
        keep.append(_canonical(sys, x))
    if not keep:
        return np.empty((0, sys.size), dtype=complex)
    # collapse duplicates: rows agreeing to ~1e-6 relative
    keys = {}
    for x in keep:
        key = tuple(np.round(x / (1 + np.abs(x)), 6).tolist())
        keys.setdefault(key, x)
    out = sorted(keys.values(), key=lambda x: tuple((round(z.real, 8), round(z.imag, 8)) for z in x))
    return np.array(out)


# ---------------------------------------------------------------------------
# multiprecision refinement


def _mp_newton(sys: PolySystem, x0: Sequence, prec: int, max_steps: int = 40):
    """Newton in a private mpmath context; returns (x, last step norm) or None."""
    ctx = mpmath.MPContext()
    ctx.prec = prec + 20
    F, J = sys.evaluator("residual"), sys.evaluator("jacobian")
    x = [ctx.mpc(z) if not isinstance(z, CBall) else ctx.make_mpc((z._re, z._im)) for z in x0]
    target = ctx.mpf(2) ** (-prec + 4)
    prev = None
    for _ in range(max_steps):
        fx = ctx.matrix([[v] for v in F(*x)])
        jx = ctx.matrix(J(*x))
        try:
            dx = ctx.lu_solve(jx, fx)
        except ZeroDivisionError:
            return None
        step = max(abs(v) for v in dx)
        x = [xi - dx[i] for i, xi in enumerate(x)]
        scale = 1 + max(abs(v) for v in x)
        if step <= target * scale:
            return x, step
        if prev is not None and step > prev and step > 1e-6 * scale:
            return None
        prev = step
    return None


def _record(sys: PolySystem, x, step, cfg: SolverConfig) -> SolutionRecord:
    prec = cfg.precision
    # radius: twice the last Newton correction, plus a rounding allowance
    values = {}
    for u, z in zip(sys.unknowns, x):
        rad = 2 * float(step) + abs(complex(z)) * 2.0 ** (-prec + 8)
        values[u] = CBall.from_mpc(z, prec=prec).with_prec(prec).inflate(rad)
    mids = {u: v.midpoint() for u, v in values.items()}
    res = residual(sys, mids, prec)
    norm = res[0].abs_upper()
    for r in res[1:]:
        norm = max(norm, r.abs_upper())
    lam = values[LAM]
    return SolutionRecord(values, CBall(norm, prec=prec), sys.variant, sys.D, j_of_lambda(lam), lam, sys.shape)


def certify(sys: PolySystem, rec: SolutionRecord, cfg: SolverConfig, census: bool = True) -> bool:
    """Residual bound, non-degeneracy, square condition and census."""
    if rec.residual_norm.abs_upper() > cfg.newton_tol:
        return False
    try:
        h = assemble_h(rec)
    except DegenerateSolution:
        return False
    if not verify_square_condition(h):
        return False
    if census and not census_ok(ramification_census(h), sys.D):
        return False
    return True


def refine(record: SolutionRecord, target_precision: int, sys: Optional[PolySystem] = None) -> SolutionRecord:
    """Re-run Newton from ``record`` at ``target_precision`` bits.

    Raises :class:`DivergedDuringRefine` when the iteration does not contract
    (the starting point is outside the Newton basin).
    """
    if sys is None:
        sys = _system_for(record)
    x0 = [record.assignment[u] for u in sys.unknowns]
    ctx = mpmath.MPContext()
    ctx.prec = target_precision + 20
    F = sys.evaluator("residual")
    start = [ctx.make_mpc((z._re, z._im)) for z in x0]
    r0 = max(abs(v) for v in F(*start))
    scale = 1 + max(abs(v) for v in start)
    if r0 > 1e-6 * scale ** sys.D:
        raise DivergedDuringRefine(f"residual {mpmath.nstr(r0, 5)} is above the contraction threshold")
    out = _mp_newton(sys, x0, target_precision)
    if out is None:
        raise DivergedDuringRefine("Newton iteration failed to contract")
    x, step = out
    return _record(sys, x, step, SolverConfig(precision=target_precision))


_SYSTEM_CACHE: Dict[tuple, PolySystem] = {}


def _system_for(record: SolutionRecord) -> PolySystem:
    from .ramsys import build_d2_cases, build_system

    key = (record.D, str(record.variant))
    if key not in _SYSTEM_CACHE:
        if record.D == 2:
            for case, s in build_d2_cases():
                _SYSTEM_CACHE[(2, case.name)] = s
        else:
            _SYSTEM_CACHE[key] = build_system(record.D, record.variant)
    return _SYSTEM_CACHE[key]


# ---------------------------------------------------------------------------
# dedup and S3 orbits


def _s3_images(lam: CBall) -> List[CBall]:
    one = CBall(1, prec=lam.prec)
    return [lam, one - lam, one / lam, one / (one - lam), (lam - one) / lam, lam / (lam - one)]


def _close(a: CBall, b: CBall, tol: float) -> bool:
    return float(abs(complex(a.mid) - complex(b.mid))) <= tol * (1 + abs(complex(a.mid))) or a.overlaps(b)


def _same_solution(a: SolutionRecord, b: SolutionRecord, tol: float) -> bool:
    if a.variant != b.variant or a.D != b.D or not _close(a.lam, b.lam, tol):
        return False
    ga: Dict[str, List[CBall]] = {}
    gb: Dict[str, List[CBall]] = {}
    for u, v in a.assignment.items():
        ga.setdefault(u.split("_")[0], []).append(v)
    for u, v in b.assignment.items():
        gb.setdefault(u.split("_")[0], []).append(v)
    if ga.keys() != gb.keys():
        return False
    for key in ga:
        rest = list(gb[key])
        for v in ga[key]:
            hit = next((i for i, w in enumerate(rest) if _close(v, w, tol)), None)
            if hit is None:
                return False
            rest.pop(hit)
    return True


def _sort_key(r: SolutionRecord):
    z = complex(r.lam.mid)
    return (str(r.variant), round(z.real, 12), round(z.imag, 12))


def dedup(records: Sequence[SolutionRecord], tol: float) -> List[SolutionRecord]:
    """Merge duplicates, then group S3-related records with equal j.

    Each returned representative carries the distinct members of its group
    in ``orbit`` (itself included).
    """
    uniq: List[SolutionRecord] = []
    for r in sorted(records, key=_sort_key):
        if not any(_same_solution(r, u, tol) for u in uniq):
            uniq.append(r)
    reps: List[SolutionRecord] = []
    for r in uniq:
        home = None
        for rep in reps:
            if not _close(r.j_value, rep.j_value, tol):
                continue
            if any(_close(img, rep.lam, tol) for img in _s3_images(r.lam)):
                home = rep
                break
        if home is None:
            r.orbit = [r]
            reps.append(r)
        else:
            home.orbit.append(r)
    return reps


# ---------------------------------------------------------------------------


def solve(sys: PolySystem, cfg: Optional[SolverConfig] = None, census: bool = True) -> List[SolutionRecord]:
    """Certified, deduplicated solutions of ``sys``.

    Raises :class:`NoSolutionsFound` when nothing survives filtering.
    """
    cfg = cfg or SolverConfig()
    X0 = _sample_starts(sys, cfg.n_starts(sys.D), cfg.seed)
    X = _float_newton(sys, X0, cfg.max_iters)
    cands = _float_filter(sys, X, cfg.degeneracy_tol)
    records = []
    for x in cands:
        out = _mp_newton(sys, [complex(z) for z in x], cfg.precision)
        if out is None:
            continue
        rec = _record(sys, *out, cfg)
        if any(_same_solution(rec, r, cfg.dedup_tol) for r in records):
            continue
        if certify(sys, rec, cfg, census):
            records.append(rec)
    reps = dedup(records, cfg.dedup_tol)
    if not reps:
        raise NoSolutionsFound(f"no certified solutions for {sys.label()}")
    return reps


def all_records(reps: Sequence[SolutionRecord]) -> List[SolutionRecord]:
    """Flatten representatives back into every distinct record."""
    return [m for r in reps for m in r.orbit_members()]
