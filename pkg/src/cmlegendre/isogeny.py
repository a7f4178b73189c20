"""Propagating j along isogenies of degree 2 and 3.

For a Legendre parameter lambda of C/(Z + Z tau):

* degree 2: the three values 16 (u + 1/u + 14)^3 / (u + 1/u - 2)^2 with
  u in {lambda, 1 - lambda, (lambda - 1)/lambda} are j(2 tau), j(tau/2) and
  j((tau + 1)/(1 - tau)) in some order, and lambda' = (sqrt(u) + 1/sqrt(u) + 2)/4
  is a Legendre parameter of the image curve;
* degree 3: with w = sqrt(lambda lambda') the image parameters are the roots of
  (lambda^2 + w^2 + 6 lambda w)^2 = 16 lambda^2 w (1 + w)^2, lambda' = w^2 / lambda,
  and their j-values are j(3 tau), j(tau/3), j((tau + 2)/(1 - tau)) and
  j((tau - 2)/(tau + 1)).

Which candidate belongs to which image period is decided by the theta
oracle through :func:`cmlegendre.modular.match`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

from .errors import AmbiguousMatch, DegenerateBranch, LambdaDegenerate
from .modular import j_of_lambda, j_theta_oracle
from .mpcore import DEFAULT_PREC, CBall, UniPoly, as_ball, poly_roots
from .qforms import TauRep

BRANCHES_2 = ("lambda", "1-lambda", "(lambda-1)/lambda")
TARGETS_2 = ("2tau", "tau/2", "(tau+1)/(1-tau)")
TARGETS_3 = ("3tau", "tau/3", "(tau+2)/(1-tau)", "(tau-2)/(tau+1)")


@dataclass
class Candidate:
    branch: str
    lam: CBall
    j: CBall
    target: Optional[str] = None
    tau: Optional[CBall] = None
    oracle: Optional[CBall] = None
    certified: bool = False


@dataclass
class IsogenyStep:
    degree: int
    source_lambda: CBall
    source_j: CBall
    candidates: List[Candidate] = field(default_factory=list)
    source_tau: Optional[CBall] = None
    chosen: Optional[int] = None

    @property
    def choice(self) -> Optional[Candidate]:
        return None if self.chosen is None else self.candidates[self.chosen]


def _check_lambda(lam: CBall) -> None:
    if lam.contains_zero() or (lam - 1).contains_zero():
        raise LambdaDegenerate(f"lambda = {lam} is not certifiably outside {{0, 1}}")


def _branch_values(lam: CBall) -> List[CBall]:
    one = CBall(1, prec=lam.prec)
    return [lam, one - lam, (lam - one) / lam]


def j2_of_u(u) -> CBall:
    """16 (u + 1/u + 14)^3 / (u + 1/u - 2)^2."""
    u = as_ball(u)
    s = u + 1 / u
    den = s - 2
    if den.contains_zero():
        raise DegenerateBranch(f"u + 1/u = 2 at u = {u}")
    return 16 * (s + 14) ** 3 / (den * den)


def j2_candidates(lam) -> List[CBall]:
    lam = as_ball(lam)
    _check_lambda(lam)
    return [j2_of_u(u) for u in _branch_values(lam)]


def lambda2_of(lam, sqrt_branch: int = 1) -> CBall:
    """(sqrt(l) + 1/sqrt(l) + 2) / 4 with sqrt(l) = sqrt_branch * principal root."""
    lam = as_ball(lam)
    _check_lambda(lam)
    if sqrt_branch not in (1, -1):
        raise ValueError("sqrt_branch must be +1 or -1")
    s = lam.sqrt() * sqrt_branch
    return (s + 1 / s + 2) / 4


def j3_quartic(lam, variable: str = "w", sqrt_lambda=None) -> UniPoly:
    """The degree-3 relation as a quartic.

    ``variable="w"``: w^4 + (12l - 16l^2) w^3 + 6 l^2 w^2 + (12 l^3 - 16 l^2) w + l^4,
    the expansion of (l^2 + w^2 + 6 l w)^2 - 16 l^2 w (1 + w)^2.
    ``variable="x"``: (x^2 + 6 s x + l)^2 - 16 s x (1 + s x)^2 with s = sqrt(l) and
    x = sqrt(l'); for l = -1 this is x^4 + 28i x^3 - 6x^2 - 28i x + 1.
    """
    lam = as_ball(lam)
    _check_lambda(lam)
    if variable == "w":
        l2 = lam * lam
        return UniPoly([l2 * l2, 12 * l2 * lam - 16 * l2, 6 * l2, 12 * lam - 16 * l2, 1])
    if variable == "x":
        s = lam.sqrt() if sqrt_lambda is None else as_ball(sqrt_lambda)
        x = UniPoly([0, 1])
        inner = x * x + x * (6 * s) + UniPoly([lam])
        one_sx = UniPoly([1]) + x * s
        return inner * inner - x * one_sx * one_sx * (16 * s)
    raise ValueError(f"unknown variable {variable!r}")


def _accuracy_bits(p: UniPoly) -> int:
    """Relative accuracy of the coefficients of ``p`` in bits, less a margin."""
    bits = None
    for c in p.coeffs:
        r = float(c.rad)
        if r > 0:
            b = int(math.log2(max(1.0, float(c.abs_upper())) / r)) - 32
            bits = b if bits is None else min(bits, b)
    return p.prec if bits is None else max(bits, 16)


def j3_candidates(lam, prec: Optional[int] = None) -> List[Tuple[CBall, CBall]]:
    """The four (lambda', j') pairs of the degree-3 relation.

    Every root w is substituted back into the relation; a root for which the
    relation does not hold in ball arithmetic is dropped.
    """
    lam = as_ball(lam)
    _check_lambda(lam)
    prec = prec or lam.prec
    q = j3_quartic(lam, "w")
    out = []
    for w in poly_roots(q, min(prec, _accuracy_bits(q))):
        lhs = (lam * lam + w * w + 6 * lam * w) ** 2
        rhs = 16 * lam * lam * w * (1 + w) ** 2
        if not (lhs - rhs).contains_zero():
            continue
        lp = w * w / lam
        out.append((lp, j_of_lambda(lp)))
    return out


def _as_tau(tau, prec: int) -> CBall:
    if isinstance(tau, TauRep):
        return tau.tau(prec)
    return as_ball(tau, prec)


def image_periods(tau, degree: int) -> List[Tuple[str, CBall]]:
    """The image periods of ``tau`` under the standard degree-2 or degree-3 moves."""
    tau = as_ball(tau)
    one = CBall(1, prec=tau.prec)
    if degree == 2:
        return list(zip(TARGETS_2, [2 * tau, tau / 2, (tau + 1) / (one - tau)]))
    if degree == 3:
        return list(zip(TARGETS_3, [3 * tau, tau / 3, (tau + 2) / (one - tau), (tau - 2) / (tau + 1)]))
    raise ValueError("degree must be 2 or 3")


def isogeny_step(lam, degree: int, tau=None, precision: int = DEFAULT_PREC,
                 rel_tol: float = 1e-40) -> IsogenyStep:
    """Candidates of one step, each assigned to an image period when ``tau`` is given.

    A candidate is certified when its j agrees with the theta oracle at the
    assigned period to ``rel_tol``.  Two image periods with different oracle
    values claiming the same candidate raise :class:`AmbiguousMatch`.
    """
    lam = as_ball(lam, precision)
    _check_lambda(lam)
    step = IsogenyStep(degree, lam, j_of_lambda(lam))
    if degree == 2:
        for name, u in zip(BRANCHES_2, _branch_values(lam)):
            step.candidates.append(Candidate(name, lambda2_of(u), j2_of_u(u)))
    elif degree == 3:
        for i, (lp, jp) in enumerate(j3_candidates(lam, precision)):
            step.candidates.append(Candidate(f"w{i + 1}", lp, jp))
    else:
        raise ValueError("degree must be 2 or 3")
    if tau is None:
        return step
    t = _as_tau(tau, precision)
    step.source_tau = t
    for name, tp in image_periods(t, degree):
        oracle = j_theta_oracle(tp, precision)[1]
        scale = max(1.0, float(oracle.abs_upper()))
        hits = [c for c in step.candidates
                if float((c.j - oracle).abs_upper()) <= rel_tol * scale]
        for c in hits:
            if c.target is not None and c.oracle is not None and not c.oracle.overlaps(oracle) \
                    and float((c.oracle - oracle).abs_upper()) > rel_tol * scale:
                raise AmbiguousMatch(f"candidate {c.branch} matches two distinct image periods")
            if c.target is None:
                c.target, c.tau, c.oracle, c.certified = name, tp, oracle, True
    return step


def tower(lam0, tau0, steps: Sequence[int], policy: Union[str, Sequence[str]] = "first",
          precision: int = DEFAULT_PREC) -> List[IsogenyStep]:
    """Iterate isogeny steps starting at (lam0, tau0).

    ``policy`` names the image period followed at each step ("2tau",
    "(tau+1)/(1-tau)", ...); "first" follows 2tau or 3tau throughout.
    The chosen candidate must be oracle certified, else
    :class:`AmbiguousMatch` is raised.
    """
    lam = as_ball(lam0, precision)
    tau = _as_tau(tau0, precision)
    names = [policy] * len(steps) if isinstance(policy, str) else list(policy)
    out = []
    for deg, want in zip(steps, names):
        if want == "first":
            want = TARGETS_2[0] if deg == 2 else TARGETS_3[0]
        step = isogeny_step(lam, deg, tau, precision)
        idx = next((i for i, c in enumerate(step.candidates) if c.target == want and c.certified), None)
        if idx is None:
            raise AmbiguousMatch(f"no certified candidate for {want} at step {len(out) + 1}")
        step.chosen = idx
        out.append(step)
        lam, tau = step.candidates[idx].lam, step.candidates[idx].tau
    return out
