"""The j-invariant: as a function of lambda, as a q-series, and via theta nulls.

Also matches numerically obtained j-values to periods tau and recognizes
them as rational or quadratic algebraic numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import sympy
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from .errors import (
    AmbiguousMatch,
    DenominatorZero,
    InsufficientPrecision,
    LambdaDegenerate,
    NotInUpperHalfPlane,
)
from .mpcore import DEFAULT_PREC, CBall, UniPoly, as_ball, ball_pi, poly_eval
from .qforms import TauRep, endo_order

# q-expansion of j, starting at the q^-1 term
JEXP_COEFFS = (1, 744, 196884, 21493760, 864299970, 20245856256)

DEFAULT_HEIGHT_BOUND = 10**18


def j_of_lambda(lam) -> CBall:
    """256 (l^2 - l + 1)^3 / (l^2 - l)^2."""
    lam = as_ball(lam)
    if lam.contains_zero() or (lam - 1).contains_zero():
        raise LambdaDegenerate(f"lambda = {lam} is not certifiably outside {{0, 1}}")
    s = lam * lam - lam
    return 256 * (s + 1) ** 3 / (s * s)


def j_from_quadratic(mu, shape: str) -> CBall:
    """j at either root of a lambda-quadratic parametrized by ``mu``.

    ``shape="sum"``: lambda^2 + mu lambda + 1 = 0 gives 256 (mu + 1)^3 / (mu + 2).
    ``shape="prod"``: lambda^2 - mu lambda + mu = 0 gives 256 (mu - 1)^3 / mu.
    """
    mu = as_ball(mu)
    if shape == "sum":
        den, top = mu + 2, mu + 1
    elif shape == "prod":
        den, top = mu, mu - 1
    else:
        raise ValueError(f"unknown shape {shape!r}")
    if den.contains_zero():
        raise DenominatorZero(f"denominator vanishes at mu = {mu}")
    return 256 * top**3 / den


def _check_tau(tau: CBall) -> None:
    if not tau.imag > 0 or tau.imag - tau.rad <= 0:
        raise NotInUpperHalfPlane(f"tau = {tau} is not certifiably in the upper half plane")


def nome(tau: CBall, frac: int = 1) -> CBall:
    """exp(2 pi i tau / frac)."""
    prec = tau.prec
    return (CBall(0, 2, prec=prec + 10) * ball_pi(prec + 10) * tau / frac).exp().with_prec(prec)


def j_q_expansion(tau, n_terms: int = 6) -> CBall:
    """Truncated series q^-1 + 744 + 196884 q + ... with ``n_terms`` terms.

    The radius carries a heuristic truncation estimate |q|^(n_terms - 1) * 1e12
    for the first omitted term; it is not a rigorous tail bound.
    """
    tau = as_ball(tau)
    _check_tau(tau)
    if not 1 <= n_terms <= len(JEXP_COEFFS):
        raise ValueError(f"n_terms must lie in [1, {len(JEXP_COEFFS)}]")
    q = nome(tau)
    total = 1 / q
    qk = CBall(1, prec=tau.prec)
    for c in JEXP_COEFFS[1:n_terms]:
        total = total + c * qk
        qk = qk * q
    return total.inflate(q.abs_upper() ** (n_terms - 1) * 10**12)


def reduce_tau(tau) -> CBall:
    """Move ``tau`` into the standard fundamental domain."""
    tau = as_ball(tau)
    _check_tau(tau)
    for _ in range(1000):
        shift = round(float(tau.real))
        if shift:
            tau = tau - shift
        if float(abs(tau.mid)) < 1 - 1e-30:
            tau = -1 / tau
        else:
            return tau
    raise RuntimeError("fundamental domain reduction did not terminate")


def _theta_sums(q: CBall, prec: int) -> Tuple[CBall, CBall]:
    """(sum q^(n(n+1)), 1 + 2 sum q^(n^2)) with a rigorous tail bound."""
    aq = float(q.abs_upper())
    if aq >= 1:
        raise NotInUpperHalfPlane("nome has modulus >= 1")
    eps = 2.0 ** -(prec + 10)
    s2 = CBall(1, prec=prec)
    s3 = CBall(1, prec=prec)
    n = 1
    while True:
        s2 = s2 + q ** (n * (n + 1))
        s3 = s3 + 2 * q ** (n * n)
        n += 1
        # both tails are dominated by 2 |q|^(n^2) / (1 - |q|)
        tail = 2 * aq ** (n * n) / (1 - aq)
        if tail < eps:
            break
    return s2.inflate(tail), s3.inflate(tail)


def j_theta_oracle(tau, precision: int = DEFAULT_PREC) -> Tuple[CBall, CBall]:
    """(lambda(tau), j(tau)) from theta null values, lambda = theta_2^4 / theta_3^4.

    ``tau`` is first moved into the fundamental domain, so the returned
    lambda belongs to the lattice up to the S3 action.
    """
    wp = precision + 20
    tau = as_ball(tau).with_prec(wp)
    tau = reduce_tau(tau)
    q = nome(tau, 2)  # exp(i pi tau)
    q4 = nome(tau, 8)  # exp(i pi tau / 4)
    s2, s3 = _theta_sums(q, wp)
    th2 = 2 * q4 * s2
    lam = (th2 / s3) ** 4
    j = j_of_lambda(lam)
    return lam.with_prec(precision), j.with_prec(precision)


# ---------------------------------------------------------------------------
# matching


@dataclass
class Match:
    tau: TauRep
    index: Optional[int]
    j: Optional[CBall]
    series: CBall
    oracle: CBall
    series_agrees: bool


def match(j_values: Sequence[CBall], taus: Sequence[TauRep], n_terms: int = 6,
          precision: int = DEFAULT_PREC, rel_tol: float = 1e-30) -> List[Match]:
    """Assign to each period the candidate j-value it carries.

    The truncated q-series proposes a candidate, the theta oracle decides.
    A candidate counts as a match when it lies within ``rel_tol`` (relative)
    of the oracle value; when two candidates cannot be separated under the
    oracle, :class:`AmbiguousMatch` is raised.  Periods with no candidate
    come back with ``index=None``.
    """
    if not j_values or not taus:
        raise ValueError("match needs nonempty inputs")
    out = []
    for t in taus:
        tau = t.tau(precision) if isinstance(t, TauRep) else as_ball(t, precision)
        series = j_q_expansion(tau, n_terms)
        oracle = j_theta_oracle(tau, precision)[1]
        scale = max(1.0, float(oracle.abs_upper()))
        d_or = [float((j - oracle).abs_upper()) for j in j_values]
        d_se = [float(abs((j - series).mid)) for j in j_values]
        order = sorted(range(len(j_values)), key=lambda i: d_or[i])
        best = order[0]
        tol = rel_tol * scale + float(j_values[best].rad)
        if d_or[best] > tol:
            out.append(Match(t, None, None, series, oracle, False))
            continue
        for other in order[1:]:
            same = j_values[other].overlaps(j_values[best])
            if not same and d_or[other] <= tol:
                raise AmbiguousMatch(f"several candidates agree with j({t}) under the oracle")
        series_best = min(range(len(j_values)), key=lambda i: d_se[i])
        agrees = abs(complex(j_values[series_best].mid) - complex(j_values[best].mid)) <= tol
        out.append(Match(t, best, j_values[best], series, oracle, agrees))
    return out


# ---------------------------------------------------------------------------
# algebraic recognition


@dataclass
class AlgebraicCandidate:
    degree: int
    min_poly: Tuple[int, ...]  # low degree first
    approx: CBall
    conjugate_approx: Optional[CBall] = None
    field: Optional[str] = field(default=None, compare=False)

    def poly(self) -> UniPoly:
        return UniPoly(list(self.min_poly), self.approx.prec)

    def sympy_value(self) -> sympy.Expr:
        """The root of ``min_poly`` closest to ``approx`` as a radical expression."""
        x = sympy.Symbol("x")
        p = sum(c * x**i for i, c in enumerate(self.min_poly))
        roots = sympy.roots(sympy.Poly(p, x), multiple=True)
        target = complex(self.approx.mid)
        return min(roots, key=lambda r: abs(complex(sympy.N(r, 30)) - target))

    def is_rational(self) -> bool:
        return self.degree == 1

    def value_int(self) -> Optional[int]:
        if self.degree == 1 and self.min_poly[1] == 1:
            return -self.min_poly[0]
        return None


def _content_normalize(cs: Sequence[int]) -> Tuple[int, ...]:
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    g = 0
    for c in cs:
        g = math.gcd(g, c)
    cs = [c // g for c in cs]
    if cs[-1] < 0:
        cs = [-c for c in cs]
    return tuple(cs)


def _relation(value: CBall, degree: int, bits: int) -> Tuple[int, ...]:
    """Short integer relation among 1, v, .., v^degree by lattice reduction."""
    powers = [CBall(1, prec=value.prec)]
    for _ in range(degree):
        powers.append(powers[-1] * value)
    rows = []
    for i, p in enumerate(powers):
        row = [ZZ(1 if r == i else 0) for r in range(degree + 1)]
        row += [ZZ(c) for c in p.scaled_ints(bits)]
        rows.append(row)
    M = DomainMatrix(rows, (degree + 1, degree + 3), ZZ).lll()
    best = M.to_Matrix().row(0)
    return tuple(int(c) for c in best[: degree + 1])


def _annihilates(cs: Sequence[int], value: CBall) -> bool:
    return poly_eval(UniPoly(list(cs), value.prec), value).contains_zero()


def _is_square_int(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def recognize_quadratic(value, height_bound: int = DEFAULT_HEIGHT_BOUND) -> Optional[AlgebraicCandidate]:
    """Smallest-height integer polynomial of degree <= 2 vanishing on ``value``.

    Returns ``None`` when no polynomial under ``height_bound`` certifies.
    Raises :class:`InsufficientPrecision` unless radius * height_bound^2 < 1/4.
    """
    value = as_ball(value)
    rad = float(value.rad)
    if rad * float(height_bound) ** 2 >= 0.25:
        raise InsufficientPrecision(
            f"radius {rad:.3g} is too large for height bound {height_bound}")
    mag = max(1.0, float(value.abs_upper()))
    # enough bits to separate the true relation from accidental short vectors
    bits = int(min(value.prec - 16, -math.log2(max(rad, 2.0 ** -value.prec)) - 8)
               - math.log2(mag) * 2)
    for degree in (1, 2):
        cs = _content_normalize(_relation(value, degree, bits))
        if len(cs) < 2 or max(abs(c) for c in cs) > height_bound:
            continue
        if not _annihilates(cs, value):
            continue
        if len(cs) == 2:
            return AlgebraicCandidate(1, cs, value)
        c0, c1, c2 = cs
        if _is_square_int(c1 * c1 - 4 * c0 * c2):
            continue  # reducible: the linear factor was already tried
        conj = CBall(-c1, prec=value.prec) / c2 - value
        return AlgebraicCandidate(2, cs, value, conj)
    return None


def hilbert_generator(t: TauRep, precision: int = 200,
                      height_bound: int = DEFAULT_HEIGHT_BOUND) -> Optional[AlgebraicCandidate]:
    """j(tau) recognized as an algebraic number, labelled with its CM field."""
    j = j_theta_oracle(t.tau(precision), precision)[1]
    cand = recognize_quadratic(j, height_bound)
    if cand is not None:
        cand.field = endo_order(t).field_label()
    return cand
