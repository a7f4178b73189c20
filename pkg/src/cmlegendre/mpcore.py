"""Midpoint-radius complex balls and univariate polynomial root finding.

A :class:`CBall` holds an arbitrary-precision complex midpoint and a
non-negative radius; every operation returns a ball that contains the exact
result whenever the operands contain their exact values.  Midpoints are
stored as raw :mod:`mpmath.libmp` tuples and every operation carries its own
precision, so no global mpmath state is touched.
"""

from __future__ import annotations

import random
from fractions import Fraction
from numbers import Integral

import mpmath
import numpy as np
from mpmath import libmp as lm

from .errors import PrecisionExhausted

DEFAULT_PREC = 256

# precision used for radius bookkeeping; radii always round upwards
_RP = 40
_ZERO = lm.fzero
_ONE = lm.fone
_SLACK_UP = lm.mpf_add(_ONE, (0, 1, -30, 1), _RP, "u")
_SLACK_DOWN = lm.mpf_sub(_ONE, (0, 1, -30, 1), _RP, "d")


def _pow2(e):
    return (0, 1, e, 1)


def _mag(x):
    """Exponent ``e`` with ``|x| <= 2**e``, or None for zero."""
    if x[1] == 0:
        return None
    return x[2] + x[3]


def _round_err(re, im, prec, extra):
    mags = [m for m in (_mag(re), _mag(im)) if m is not None]
    if not mags:
        return _ZERO
    return _pow2(max(mags) + extra - prec)


def _rounded(ex_re, ex_im, prec):
    """Round exact components to ``prec`` bits; the error term is zero when nothing was lost."""
    re = lm.mpf_pos(ex_re, prec, "n")
    im = lm.mpf_pos(ex_im, prec, "n")
    if re == ex_re and im == ex_im:
        return re, im, _ZERO
    return re, im, _round_err(re, im, prec, 1)


def _radd(*xs):
    s = _ZERO
    for x in xs:
        s = lm.mpf_add(s, x, _RP, "u")
    return s


def _rmul(a, b):
    return lm.mpf_mul(a, b, _RP, "u")


def _rdiv(a, b):
    return lm.mpf_div(a, b, _RP, "u")


def _abs_up(re, im):
    return lm.mpf_mul(lm.mpf_hypot(re, im, _RP, "u"), _SLACK_UP, _RP, "u")


def _abs_down(re, im):
    return lm.mpf_mul(lm.mpf_hypot(re, im, _RP, "d"), _SLACK_DOWN, _RP, "d")


def _pos(x):
    return lm.mpf_cmp(x, _ZERO) > 0


def _to_raw(x, prec):
    """Return ``(re, im, rad)`` raw tuples for a supported scalar."""
    if isinstance(x, CBall):
        return x._re, x._im, x._rad
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, Integral):
        return lm.from_int(int(x)), _ZERO, _ZERO
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return lm.from_int(x.numerator), _ZERO, _ZERO
        if x.denominator & (x.denominator - 1) == 0:
            # dyadic rationals are exact
            return lm.from_man_exp(x.numerator, 1 - x.denominator.bit_length()), _ZERO, _ZERO
        re = lm.from_rational(x.numerator, x.denominator, prec, "n")
        return re, _ZERO, _round_err(re, _ZERO, prec, 0)
    if isinstance(x, float):
        return lm.from_float(x), _ZERO, _ZERO
    if isinstance(x, complex):
        return lm.from_float(x.real), lm.from_float(x.imag), _ZERO
    if isinstance(x, mpmath.mpf):
        return x._mpf_, _ZERO, _ZERO
    if isinstance(x, mpmath.mpc):
        re, im = x._mpc_
        return re, im, _ZERO
    if isinstance(x, str):
        try:
            return _to_raw(Fraction(x.strip()), prec)
        except ValueError:
            pass
        re = lm.from_str(x, prec, "n")
        return re, _ZERO, _round_err(re, _ZERO, prec, 0)
    # sympy numbers
    if hasattr(x, "is_Rational") and x.is_Rational:
        return _to_raw(Fraction(int(x.p), int(x.q)), prec)
    if hasattr(x, "as_real_imag"):
        re_part, im_part = x.as_real_imag()
        if getattr(re_part, "is_Rational", False) and getattr(im_part, "is_Rational", False):
            r = _to_raw(Fraction(int(re_part.p), int(re_part.q)), prec)
            i = _to_raw(Fraction(int(im_part.p), int(im_part.q)), prec)
            return r[0], i[0], _radd(r[2], i[2])
    raise TypeError(f"cannot convert {type(x).__name__} to CBall")


class CBall:
    """Complex ball ``{z : |z - mid| <= rad}`` with a working precision in bits."""

    __slots__ = ("_re", "_im", "_rad", "prec")

    def __init__(self, value=0, im=None, rad=0, prec=DEFAULT_PREC):
        re_, im_, r = _to_raw(value, prec)
        if im is not None:
            i_re, i_im, i_r = _to_raw(im, prec)
            # value + i*im
            re_ = lm.mpf_sub(re_, i_im)
            im_ = lm.mpf_add(im_, i_re)
            r = _radd(r, i_r)
        if rad:
            rr = _to_raw(rad, _RP)[0]
            if lm.mpf_sign(rr) < 0:
                raise ValueError("radius must be non-negative")
            r = _radd(r, rr)
        self._re = re_
        self._im = im_
        self._rad = r
        self.prec = int(prec)

    @classmethod
    def _raw(cls, re, im, rad, prec):
        obj = cls.__new__(cls)
        obj._re = re
        obj._im = im
        obj._rad = rad
        obj.prec = prec
        return obj

    @classmethod
    def from_mpc(cls, z, rad=0, prec=DEFAULT_PREC):
        z = mpmath.mpmathify(z)
        if isinstance(z, mpmath.mpf):
            return cls._raw(z._mpf_, _ZERO, _to_raw(rad, _RP)[0] if rad else _ZERO, prec)
        re, im = z._mpc_
        return cls._raw(re, im, _to_raw(rad, _RP)[0] if rad else _ZERO, prec)

    # -- accessors ---------------------------------------------------------
    @property
    def mid(self):
        return mpmath.mp.make_mpc((self._re, self._im))

    @property
    def real(self):
        return mpmath.mp.make_mpf(self._re)

    @property
    def imag(self):
        return mpmath.mp.make_mpf(self._im)

    @property
    def rad(self):
        return mpmath.mp.make_mpf(self._rad)

    def scaled_ints(self, bits):
        """Midpoint components times ``2**bits``, rounded down to integers."""
        return (int(lm.to_int(lm.mpf_shift(self._re, bits), "f")),
                int(lm.to_int(lm.mpf_shift(self._im, bits), "f")))

    def __complex__(self):
        return complex(lm.to_float(self._re), lm.to_float(self._im))

    def abs_upper(self):
        """Upper bound for ``|z|`` over the ball (an mpf)."""
        return mpmath.mp.make_mpf(_radd(_abs_up(self._re, self._im), self._rad))

    def abs_lower(self):
        """Lower bound for ``|z|`` over the ball, clipped at zero."""
        d = lm.mpf_sub(_abs_down(self._re, self._im), self._rad, _RP, "d")
        return mpmath.mp.make_mpf(d if _pos(d) else _ZERO)

    def with_prec(self, prec):
        """Same ball, rounded to ``prec`` bits (radius widened accordingly)."""
        re = lm.mpf_pos(self._re, prec, "n")
        im = lm.mpf_pos(self._im, prec, "n")
        return CBall._raw(re, im, _radd(self._rad, _round_err(re, im, prec, 1)), prec)

    def midpoint(self):
        """The midpoint as an exact ball."""
        return CBall._raw(self._re, self._im, _ZERO, self.prec)

    def inflate(self, r):
        return CBall._raw(self._re, self._im, _radd(self._rad, _to_raw(r, _RP)[0]), self.prec)

    def is_exact(self):
        return self._rad == _ZERO or self._rad[1] == 0

    # -- predicates ----------------------------------------------------------
    def _dist_bounds(self, other):
        o = other if isinstance(other, CBall) else CBall(other, prec=self.prec)
        dre = lm.mpf_sub(self._re, o._re)
        dim = lm.mpf_sub(self._im, o._im)
        return o, _abs_down(dre, dim), _abs_up(dre, dim)

    def contains(self, other):
        """True when ``other`` (a number or ball) lies entirely inside this ball."""
        o, _, up = self._dist_bounds(other)
        return lm.mpf_cmp(_radd(up, o._rad), self._rad) <= 0

    def contains_zero(self):
        return lm.mpf_cmp(_abs_down(self._re, self._im), self._rad) <= 0

    def is_nonzero(self):
        return not self.contains_zero()

    def overlaps(self, other):
        o, down, _ = self._dist_bounds(other)
        return lm.mpf_cmp(down, _radd(self._rad, o._rad)) <= 0

    def certifiably_distinct(self, other):
        return not self.overlaps(other)

    # -- arithmetic ----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, CBall):
            return other
        return CBall(other, prec=self.prec)

    def __add__(self, other):
        o = self._coerce(other)
        p = max(self.prec, o.prec)
        re, im, err = _rounded(lm.mpf_add(self._re, o._re), lm.mpf_add(self._im, o._im), p)
        return CBall._raw(re, im, _radd(self._rad, o._rad, err), p)

    __radd__ = __add__

    def __neg__(self):
        return CBall._raw(lm.mpf_neg(self._re), lm.mpf_neg(self._im), self._rad, self.prec)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        p = max(self.prec, o.prec)
        re, im, err = _rounded(*lm.mpc_mul((self._re, self._im), (o._re, o._im), 0), p)
        rad = _ZERO
        if self._rad[1] or o._rad[1]:
            a = _abs_up(self._re, self._im)
            b = _abs_up(o._re, o._im)
            rad = _radd(_rmul(a, o._rad), _rmul(b, self._rad), _rmul(self._rad, o._rad))
        return CBall._raw(re, im, _radd(rad, err), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        p = max(self.prec, o.prec)
        ylo = _abs_down(o._re, o._im)
        gap = lm.mpf_sub(ylo, o._rad, _RP, "d")
        if not _pos(gap):
            raise ZeroDivisionError("divisor ball contains zero")
        re, im = lm.mpc_div((self._re, self._im), (o._re, o._im), p, "n")
        rad = _ZERO
        if self._rad[1] or o._rad[1]:
            num = _radd(_rmul(_abs_up(self._re, self._im), o._rad), _rmul(_abs_up(o._re, o._im), self._rad))
            den = lm.mpf_mul(ylo, gap, _RP, "d")
            rad = _rdiv(num, den)
        return CBall._raw(re, im, _radd(rad, _round_err(re, im, p, 3)), p)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n):
        if not isinstance(n, Integral):
            raise TypeError("CBall powers must be integers")
        n = int(n)
        if n < 0:
            return CBall(1, prec=self.prec) / (self ** (-n))
        result = CBall(1, prec=self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def conjugate(self):
        return CBall._raw(self._re, lm.mpf_neg(self._im), self._rad, self.prec)

    def sqrt(self):
        """Principal square root.

        When the ball straddles the negative real axis the result contains the
        root continuous with the midpoint's principal value.
        """
        p = self.prec
        if self._re[1] == 0 and self._im[1] == 0 and not self._rad[1]:
            return CBall._raw(_ZERO, _ZERO, _ZERO, p)
        re, im = lm.mpc_sqrt((self._re, self._im), p, "n")
        err = _round_err(re, im, p, 3)
        if lm.mpc_mul((re, im), (re, im), 0) == (self._re, self._im):
            err = _ZERO  # exact square root
        if not self._rad[1]:
            return CBall._raw(re, im, err, p)
        zlo = lm.mpf_sub(_abs_down(self._re, self._im), self._rad, _RP, "d")
        if _pos(zlo):
            # |d sqrt| <= r / (2 sqrt(|z| - r)) along the segment
            den = lm.mpf_mul((0, 1, 1, 1), lm.mpf_sqrt(zlo, _RP, "d"), _RP, "d")
            return CBall._raw(re, im, _radd(_rdiv(self._rad, den), err), p)
        zhi = _radd(_abs_up(self._re, self._im), self._rad)
        bound = _rmul((0, 1, 1, 1), lm.mpf_sqrt(zhi, _RP, "u"))
        return CBall._raw(re, im, _radd(bound, err), p)

    def exp(self):
        p = self.prec
        re, im = lm.mpc_exp((self._re, self._im), p, "n")
        err = _round_err(re, im, p, 3)
        if self._rad[1]:
            # e^r - 1 <= r e^r
            growth = _rmul(self._rad, lm.mpf_exp(self._rad, _RP, "u"))
            err = _radd(err, _rmul(_abs_up(re, im), growth))
        return CBall._raw(re, im, err, p)

    # -- misc -----------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, CBall):
            return NotImplemented
        return (self._re, self._im, self._rad) == (other._re, other._im, other._rad)

    def __hash__(self):
        return hash((self._re, self._im, self._rad))

    def to_strings(self, digits=None):
        """Decimal strings ``(re, im, rad)`` for serialization."""
        if digits is None:
            digits = max(int(self.prec * 0.30103) + 2, 10)
        re = lm.to_str(self._re, digits)
        im = lm.to_str(self._im, digits)
        rad = lm.to_str(lm.mpf_pos(self._rad, 20, "u"), 6) if self._rad[1] else "0.0"
        return re, im, rad

    @classmethod
    def from_strings(cls, re, im, rad, prec=DEFAULT_PREC):
        r = lm.from_str(re, prec, "n")
        i = lm.from_str(im, prec, "n")
        rr = lm.from_str(rad, _RP, "u")
        return cls._raw(r, i, _radd(rr, _round_err(r, i, prec, 0)), prec)

    def __repr__(self):
        re, im, rad = self.to_strings(20)
        return f"CBall({re} + {im}j +/- {rad})"


def ball_pi(prec=DEFAULT_PREC):
    """A ball enclosing pi."""
    return CBall._raw(lm.mpf_pi(prec, "n"), _ZERO, _pow2(2 - prec), prec)


def as_ball(x, prec=DEFAULT_PREC):
    return x if isinstance(x, CBall) else CBall(x, prec=prec)


class UniPoly:
    """Univariate polynomial with ball coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, prec=DEFAULT_PREC):
        cs = [as_ball(c, prec) for c in coeffs]
        while len(cs) > 1 and cs[-1]._re[1] == 0 and cs[-1]._im[1] == 0 and not cs[-1]._rad[1]:
            cs.pop()
        if not cs:
            cs = [CBall(0, prec=prec)]
        if len(cs) > 1 and cs[-1].contains_zero():
            raise ValueError("leading coefficient is not certifiably nonzero")
        self.coeffs = tuple(cs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def prec(self):
        return max(c.prec for c in self.coeffs)

    @property
    def leading(self):
        return self.coeffs[-1]

    def __call__(self, z):
        return poly_eval(self, z)

    def __add__(self, other):
        other = other if isinstance(other, UniPoly) else UniPoly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (CBall(0),) * (n - len(self.coeffs))
        b = other.coeffs + (CBall(0),) * (n - len(other.coeffs))
        return UniPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = other if isinstance(other, UniPoly) else UniPoly([other])
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return UniPoly([c * other for c in self.coeffs])
        out = [CBall(0, prec=self.prec)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = UniPoly([1])
        for _ in range(n):
            result = result * self
        return result

    def derivative(self):
        if self.degree == 0:
            return UniPoly([0])
        return UniPoly([c * k for k, c in enumerate(self.coeffs) if k > 0])

    @classmethod
    def from_roots(cls, roots, lead=1, prec=DEFAULT_PREC):
        p = UniPoly([lead], prec)
        for r in roots:
            p = p * UniPoly([-as_ball(r, prec), 1], prec)
        return p

    def __repr__(self):
        return f"UniPoly(degree={self.degree}, coeffs={list(self.coeffs)!r})"


def poly_eval(p, z):
    """Horner evaluation in ball arithmetic; the result contains ``p(z)``."""
    z = as_ball(z, p.prec)
    acc = p.coeffs[-1]
    for c in reversed(p.coeffs[:-1]):
        acc = acc * z + c
    return acc


# -- root finding ----------------------------------------------------------


def _aberth(ctx, coeffs, z, maxit, rng):
    """In-place Aberth-Ehrlich iteration on midpoints ``z``.

    Returns the last relative correction; iteration stops on convergence or
    when corrections stop shrinking (the noise floor of a multiple root).
    """
    n = len(coeffs) - 1
    eps = ctx.mpf(2) ** (8 - ctx.prec)
    stall = 0
    best = None
    biggest = ctx.inf
    for _ in range(maxit):
        biggest = ctx.zero
        for i in range(n):
            zi = z[i]
            p = coeffs[n]
            dp = ctx.zero
            for c in reversed(coeffs[:n]):
                dp = dp * zi + p
                p = p * zi + c
            if p == 0:
                continue
            if dp == 0:
                z[i] = zi + eps * ctx.mpc(rng.uniform(-1, 1), rng.uniform(-1, 1))
                biggest = ctx.one
                continue
            ratio = p / dp
            s = ctx.fsum(1 / (zi - z[j]) for j in range(n) if j != i and z[j] != zi)
            w = ratio / (1 - ratio * s)
            z[i] = zi - w
            rel = abs(w) / max(1, abs(zi))
            if rel > biggest:
                biggest = rel
        if biggest < eps:
            return biggest
        if best is not None and biggest >= best:
            stall += 1
        else:
            stall = 0
            best = biggest
        if stall > 12:
            return best
    return biggest


def _aberth_float(coeffs, seed, maxit=2000):
    """Double-precision Aberth iteration used to seed the multiprecision one.

    Returns ``None`` when the coefficients do not fit in doubles.
    """
    c = np.array([complex(x) for x in coeffs], dtype=complex)
    if not np.isfinite(c).all() or c[-1] == 0:
        return None
    n = len(c) - 1
    a = c[::-1] / c[-1]  # monic, highest first
    rng = np.random.default_rng(seed)
    with np.errstate(all="ignore"):
        radius = max((abs(a[k]) ** (1.0 / k) for k in range(1, n + 1) if a[k] != 0), default=1.0)
        z = radius * np.exp(2j * np.pi * (np.arange(n) + rng.uniform()) / n + 0.4j / n)
        da = a[:-1] * np.arange(n, 0, -1)
        for _ in range(maxit):
            p = np.polyval(a, z)
            dp = np.polyval(da, z)
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1)
            inv = 1 / diff
            np.fill_diagonal(inv, 0)
            w = ratio / (1 - ratio * inv.sum(axis=1))
            w[~np.isfinite(w)] = 0
            z = z - w
            if np.all(np.abs(w) <= 1e-15 * np.maximum(1, np.abs(z))):
                break
    if not np.isfinite(z).all():
        return None
    return z


def _initial_guesses(ctx, coeffs, rng):
    n = len(coeffs) - 1
    lead = abs(coeffs[n])
    radius = max(
        (abs(coeffs[k]) / lead) ** (ctx.one / (n - k)) for k in range(n) if coeffs[k] != 0
    ) if any(coeffs[k] != 0 for k in range(n)) else ctx.one
    radius = radius if radius > 0 else ctx.one
    offset = rng.uniform(0, 1)
    return [
        radius * ctx.expjpi(2 * ctx.mpf(k + offset) / n + ctx.mpf(0.4) / n)
        for k in range(n)
    ]


def _inclusion_radii(p, approx, prec):
    """Weierstrass inclusion radii ``n |p(z_i)| / (|a_n| prod |z_i - z_j|)`` (mpf upper bounds)."""
    n = p.degree
    balls = [CBall._raw(re, im, _ZERO, prec) for re, im in approx]
    lead_lo = p.leading.abs_lower()
    radii = []
    for i, zi in enumerate(balls):
        val = poly_eval(p, zi).abs_upper()
        den = lead_lo
        for j, zj in enumerate(balls):
            if j != i:
                den *= (zi - zj).abs_lower()
        if den == 0:
            radii.append(mpmath.inf)
        else:
            radii.append(n * val / den * (1 + mpmath.mpf(2) ** -30))
    return balls, radii


def _components(balls, radii):
    n = len(balls)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            gap = (balls[i] - balls[j]).abs_lower()
            if gap <= radii[i] + radii[j]:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _run_aberth(p, wp, seed, start=None, maxit=None, restarts=4):
    ctx = mpmath.MPContext()
    ctx.prec = wp
    rng = random.Random(seed)
    coeffs = [ctx.mpc(ctx.make_mpf(c._re), ctx.make_mpf(c._im)) for c in p.coeffs]
    n = p.degree
    maxit = maxit or (200 + 20 * n)
    if start:
        z = [ctx.make_mpc(s) for s in start]
    else:
        zf = _aberth_float(coeffs, seed)
        if zf is None:
            z = _initial_guesses(ctx, coeffs, rng)
        else:
            # distinct seeds avoid exact coincidences inside a cluster
            z = [ctx.mpc(complex(v)) for v in zf]
    floor = ctx.mpf(2) ** (-wp // 4)
    for attempt in range(restarts):
        if _aberth(ctx, coeffs, z, maxit, rng) < floor or attempt == restarts - 1:
            break
        # stagnation far from any root: random perturbation restart
        z = [zi * (1 + ctx.mpf(2) ** -10 * ctx.mpc(rng.uniform(-1, 1), rng.uniform(-1, 1))) for zi in z]
    return [zi._mpc_ for zi in z]


def poly_roots(p, target_precision=DEFAULT_PREC, *, seed=0, max_precision=None):
    """All roots of ``p`` as pairwise-disjoint balls of relative width below ``2**-target_precision``.

    Raises :class:`PrecisionExhausted` when the roots cannot be separated at
    ``max_precision`` (multiple or nearly multiple roots).
    """
    if p.degree < 1:
        raise ValueError("poly_roots needs degree >= 1")
    if p.leading.contains_zero():
        raise ValueError("leading coefficient is not certifiably nonzero")
    n = p.degree
    max_precision = max_precision or max(4 * target_precision, 1024)
    wp = max(target_precision + 32, 64)
    start = None
    while True:
        approx = _run_aberth(p, wp, seed, start)
        balls, radii = _inclusion_radii(p, approx, wp)
        comps = _components(balls, radii)
        tight = all(
            r <= mpmath.mpf(2) ** -target_precision * max(1, abs(b.mid)) for b, r in zip(balls, radii)
        )
        if len(comps) == n and tight:
            return [b.inflate(r) for b, r in zip(balls, radii)]
        if wp >= max_precision:
            raise PrecisionExhausted(
                f"could not separate the {n} roots to 2^-{target_precision} at {wp} bits"
            )
        wp = min(2 * wp, max_precision)
        start = approx


def root_clusters(p, working_precision=None, *, seed=0):
    """Roots of ``p`` grouped into certified clusters.

    Returns ``[(ball, multiplicity)]``: each ball contains exactly
    ``multiplicity`` roots counted with multiplicity.  Intended for
    polynomials that are expected to carry multiple roots.
    """
    if p.degree < 1:
        return []
    wp = working_precision or p.prec
    # simple roots polish quickly; clusters need no accuracy beyond separation
    approx = _run_aberth(p, wp, seed, maxit=8, restarts=1)
    balls, radii = _inclusion_radii(p, approx, wp)
    out = []
    for comp in _components(balls, radii):
        centre = balls[comp[0]]
        for i in comp[1:]:
            centre = centre + balls[i]
        centre = centre / len(comp)
        centre = CBall._raw(centre._re, centre._im, _ZERO, centre.prec)
        reach = max((balls[i] - centre).abs_upper() + radii[i] for i in comp)
        out.append((centre.inflate(reach), len(comp)))
    out.sort(key=lambda item: (float(item[0].real), float(item[0].imag)))
    return out
