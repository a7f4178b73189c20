"""Binary quadratic forms and the enumeration of CM period representatives.

A degree-D self-isogeny of a CM curve C/(Z + Z tau) forces

    tau = (u + sqrt(4D - a^2) i) / (2b),   |a| < 2 sqrt(D),   4b | u^2 + 4D - a^2,

and attaches to tau the positive definite form b x^2 + u xy + c y^2 with
c = (u^2 + 4D - a^2) / (4b).  SL2(Z)-orbits of such tau correspond to proper
equivalence classes of these forms, so enumeration reduces to listing reduced
forms of discriminant a^2 - 4D for every admissible a.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Dict, List, Tuple

from .errors import DegreeTooSmall
from .mpcore import DEFAULT_PREC, CBall

Matrix = Tuple[Tuple[int, int], Tuple[int, int]]

IDENTITY: Matrix = ((1, 0), (0, 1))


class SystemVariant(str, enum.Enum):
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    S4 = "S4"
    S5 = "S5"
    S6 = "S6"

    @property
    def number(self) -> int:
        return int(self.value[1])

    @property
    def odd(self) -> bool:
        """True for the variants attached to odd degree."""
        return self.number <= 3

    @classmethod
    def parse(cls, tag) -> "SystemVariant":
        if isinstance(tag, cls):
            return tag
        s = str(tag).strip().upper()
        if s.isdigit():
            s = "S" + s
        return cls(s)

    @classmethod
    def for_degree(cls, D: int) -> List["SystemVariant"]:
        return [cls.S1, cls.S2, cls.S3] if D % 2 else [cls.S4, cls.S5, cls.S6]

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0 or self.c <= 0 or self.disc >= 0:
            raise ValueError(f"not positive definite: {self.coeffs}")

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def coeffs(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)

    @property
    def content(self) -> int:
        return math.gcd(math.gcd(self.a, self.b), self.c)

    def primitive(self) -> "QuadForm":
        g = self.content
        return QuadForm(self.a // g, self.b // g, self.c // g)

    def is_reduced(self) -> bool:
        a, b, c = self.coeffs
        if not (abs(b) <= a <= c):
            return False
        if b < 0 and (-b == a or a == c):
            return False
        return True

    def __str__(self) -> str:
        return f"{self.a}x^2{self.b:+d}xy{self.c:+d}y^2"


def _matmul(m: Matrix, n: Matrix) -> Matrix:
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def sl2_act(f: QuadForm, m: Matrix) -> QuadForm:
    """Return f(px + qy, rx + sy) for m = ((p, q), (r, s)) with det m = 1."""
    (p, q), (r, s) = m
    if p * s - q * r != 1:
        raise ValueError(f"matrix {m} does not have determinant 1")
    a, b, c = f.coeffs
    return QuadForm(
        a * p * p + b * p * r + c * r * r,
        2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
        a * q * q + b * q * s + c * s * s,
    )


def reduce_form(f: QuadForm) -> Tuple[QuadForm, Matrix]:
    """Reduce ``f`` and return ``(g, M)`` with ``sl2_act(f, M) == g``.

    ``g`` is the unique reduced form in the proper equivalence class:
    |b| <= a <= c, and b >= 0 whenever |b| = a or a = c.
    """
    a, b, c = f.coeffs
    M = IDENTITY
    while True:
        if not -a < b <= a:
            # translate: b -> b + 2ak lands in (-a, a]
            k = (a - b) // (2 * a)
            b, c = b + 2 * a * k, a * k * k + b * k + c
            M = _matmul(M, ((1, k), (0, 1)))
        if a > c:
            a, b, c = c, -b, a
            M = _matmul(M, ((0, -1), (1, 0)))
            continue
        if a == c and b < 0:
            a, b, c = c, -b, a
            M = _matmul(M, ((0, -1), (1, 0)))
        return QuadForm(a, b, c), M


@dataclass(frozen=True)
class OrderDesc:
    """Field discriminant of Q(sqrt(a^2 - 4D)) and the conductor bound v."""

    field_disc: int
    conductor_divisor: int

    def field_label(self) -> str:
        d = self.field_disc
        m = d // 4 if d % 4 == 0 else d
        return f"Q(sqrt({m}))"


@dataclass(frozen=True)
class TauRep:
    D: int
    a: int
    u: int
    b: int

    def __post_init__(self):
        if self.b <= 0:
            raise ValueError("b must be positive")
        if self.a * self.a >= 4 * self.D:
            raise ValueError(f"|a| = {abs(self.a)} is not below 2*sqrt({self.D})")
        if (self.u * self.u + self.delta) % (4 * self.b):
            raise ValueError(f"4b does not divide u^2 + 4D - a^2 for {self}")

    @property
    def delta(self) -> int:
        """4D - a^2, the positive radicand of the period."""
        return 4 * self.D - self.a * self.a

    @property
    def c(self) -> int:
        return (self.u * self.u + self.delta) // (4 * self.b)

    def tau(self, prec: int = DEFAULT_PREC) -> CBall:
        root = CBall(self.delta, prec=prec + 8).sqrt()
        t = (CBall(self.u, prec=prec + 8) + CBall(0, 1, prec=prec + 8) * root) / (2 * self.b)
        return t.with_prec(prec)

    def period_key(self) -> QuadForm:
        """Exact SL2(Z)-invariant of the period: the primitive reduced form."""
        return reduce_form(form_of(self))[0].primitive()

    def label(self) -> str:
        return period_label(self.period_key())


def period_label(key: QuadForm) -> str:
    """Human-readable name of the period in the fundamental domain."""
    b, u, c = key.coeffs
    delta = 4 * b * c - u * u
    g = math.isqrt(delta)
    sq = 1
    for p in range(2, g + 1):
        while delta % (p * p) == 0:
            delta //= p * p
            sq *= p
    rad = "i" if delta == 1 else f"sqrt({delta})i"
    if u == 0:
        # tau = sq sqrt(delta) i / (2b)
        n, d = sq, 2 * b
        gg = math.gcd(n, d)
        n, d = n // gg, d // gg
        head = "" if n == 1 else f"{n}"
        s = f"{head}{'*' if head and delta != 1 else ''}{rad}" if head else rad
        return s if d == 1 else f"{s}/{d}"
    gg = math.gcd(math.gcd(u, sq), 2 * b)
    n, m, d = u // gg, sq // gg, 2 * b // gg
    mid = rad if m == 1 else f"{m}*{rad}"
    return f"({n}+{mid})/{d}" if d != 1 else f"{n}+{mid}"


def form_of(t: TauRep) -> QuadForm:
    """The form b x^2 + u xy + c y^2 attached to ``t``; discriminant a^2 - 4D."""
    return QuadForm(t.b, t.u, t.c)


def _squarefree_split(n: int) -> Tuple[int, int]:
    """Write n > 0 as s * f^2 with s squarefree (trial division)."""
    s, f, p = 1, 1, 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e % 2)
        f *= p ** (e // 2)
        p += 1
    return s * n, f


def fundamental_disc(disc: int) -> int:
    if disc >= 0:
        raise ValueError("expected a negative discriminant")
    s, _ = _squarefree_split(-disc)
    s = -s
    return s if s % 4 == 1 else 4 * s


def endo_order(t: TauRep) -> OrderDesc:
    n = t.delta
    if t.a % 2 == 0:
        # largest v with 4 v^2 | n
        _, f = _squarefree_split(n)
        v = max(d for d in range(1, f + 1) if f % d == 0 and n % (4 * d * d) == 0)
    else:
        _, f = _squarefree_split(n)
        v = max(d for d in range(1, f + 1, 2) if f % d == 0 and n % (d * d) == 0)
    return OrderDesc(fundamental_disc(t.a * t.a - 4 * t.D), v)


def predict_system(t: TauRep) -> frozenset:
    """Variants in which ``t`` can occur, from the parity of its form.

    Odd D gives a single variant.  Even D gives {S4} for an all-even form and
    otherwise the pair {S5, S6}, which parity alone cannot separate.
    """
    coeffs = form_of(t).coeffs
    if t.D % 2:
        if all(x % 2 == 0 for x in coeffs):
            return frozenset({SystemVariant.S1})
        if all(x % 2 for x in coeffs):
            return frozenset({SystemVariant.S3})
        return frozenset({SystemVariant.S2})
    if all(x % 2 == 0 for x in coeffs):
        return frozenset({SystemVariant.S4})
    return frozenset({SystemVariant.S5, SystemVariant.S6})


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def enumerate_reps(D: int, allow_square: bool = False) -> List[TauRep]:
    """One representative per reduced form, over every admissible a >= 0.

    Distinct reduced forms are kept separately even when they describe the
    same period (an imprimitive form and a primitive one of smaller
    discriminant); use :func:`distinct_periods` to merge those.
    """
    if D < 2:
        raise DegreeTooSmall(f"D = {D} < 2")
    if is_square(D) and not allow_square:
        raise ValueError(f"D = {D} is a perfect square; pass allow_square=True")
    reps: List[TauRep] = []
    a = 0
    while a * a < 4 * D:
        delta = 4 * D - a * a
        seen: Dict[QuadForm, None] = {}
        bmax = 2 * math.isqrt(delta // 3 + 1) + 2
        for b in range(1, bmax + 1):
            for u in range(2 * b):
                if (u * u + delta) % (4 * b) == 0:
                    f = QuadForm(b, u, (u * u + delta) // (4 * b))
                    seen.setdefault(reduce_form(f)[0])
        for g in sorted(seen):
            reps.append(TauRep(D, a, g.b, g.a))
        a += 1
    return reps


def distinct_periods(reps: List[TauRep]) -> Dict[QuadForm, List[TauRep]]:
    """Group representations by period, in order of first appearance."""
    out: Dict[QuadForm, List[TauRep]] = {}
    for t in reps:
        out.setdefault(t.period_key(), []).append(t)
    return out


def tau_from_key(key: QuadForm, D: int = None) -> TauRep:
    """A TauRep for the fundamental-domain period of a primitive reduced form.

    Without ``D`` the smallest degree admitting the period is used.
    """
    b, u, c = key.coeffs
    n = 4 * b * c - u * u  # = 4D - a^2 when a = 0 or a has u's parity
    if D is None:
        # smallest D with 4D - a^2 = n * s^2 for the primitive representation
        a = n % 2
        return TauRep((n + a) // 4, a, u, b)
    for g in range(1, 2 * D):
        for a in range(0, 2 * math.isqrt(D) + 1):
            if 4 * D - a * a == n * g * g:
                try:
                    return TauRep(D, a, u * g, b * g)
                except ValueError:
                    continue
    raise ValueError(f"period of {key} is not attached to degree {D}")
