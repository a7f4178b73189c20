"""Polynomial systems for degree-D ramified covers h of the sphere.

A CM self-isogeny of y^2 = x(x-1)(x-lambda) descends to a rational map h of
degree D whose critical values lie in {0, 1, lambda, inf} and whose fibres
over those values are built from simple and double points.  Writing

    h - v = F_v / G        for v in {0, 1, lambda},

each fibre polynomial F_v is a product of a scalar, some linear factors taken
from {x, x - 1, x - lambda} and a square of unknown roots.  The identities
F_0 - v G = F_v (v = 1, lambda) give the systems solved here: comparing the
coefficients of x^0 .. x^{D-1} yields 2D equations (the x^D coefficients
agree by construction).

Every system is stored twice: as exact sympy polynomials with integer
coefficients, and as compiled evaluators for the residual and its Jacobian
that accept numpy arrays, mpmath numbers or :class:`CBall` values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import sympy

from .errors import (
    DegenerateSolution,
    DegreeTooSmall,
    SquareVariantForbidden,
    VariantParityMismatch,
)
from .mpcore import DEFAULT_PREC, CBall, UniPoly, as_ball, root_clusters
from .qforms import SystemVariant, is_square

LAM = "lambda"

# linear factors are named by their root: 0 -> x, 1 -> x - 1, LAM -> x - lambda
Root = Union[int, str]


@dataclass(frozen=True)
class Term:
    """scalar * prod(x - r for r in linear) * prod(x - s)^2 for s in squared."""

    scalar: Optional[str]
    linear: Tuple[Root, ...]
    squared: Tuple[str, ...]

    def degree(self) -> int:
        return len(self.linear) + 2 * len(self.squared)


@dataclass(frozen=True)
class Shape:
    """Fibre structure of h: ``h - v = fibres[v] / den``."""

    fibres: Tuple[Tuple[Root, Term], ...]
    den: Term

    def fibre(self, v: Root) -> Term:
        return dict(self.fibres)[v]

    def labels(self) -> List[str]:
        out = []
        for t in [self.fibre(0), self.den, self.fibre(1), self.fibre(LAM)]:
            for s in t.squared:
                out.append(s)
        return out


@dataclass
class PolySystem:
    D: int
    variant: Union[SystemVariant, str]
    unknowns: List[str]
    equations: List[sympy.Expr]
    shape: Shape
    symbols: List[sympy.Symbol] = field(repr=False)
    _compiled: dict = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return len(self.unknowns)

    def evaluator(self, kind: str = "residual"):
        """Compiled ``f(*values)`` returning the residual list or Jacobian rows.

        The generated code uses only +, -, * and integer powers, so it runs on
        numpy arrays, mpmath numbers and balls alike.
        """
        if kind not in self._compiled:
            if kind == "residual":
                exprs = self.equations
            elif kind == "jacobian":
                exprs = [[sympy.diff(e, s) for s in self.symbols] for e in self.equations]
            else:
                raise ValueError(kind)
            self._compiled[kind] = sympy.lambdify(self.symbols, exprs, modules=[{}], cse=True)
        return self._compiled[kind]

    def label(self) -> str:
        return f"D={self.D} {self.variant}"


def _odd_shape(variant: SystemVariant, m: int) -> Shape:
    al = tuple(f"alpha_{i}" for i in range(1, m + 1))
    be = tuple(f"beta_{i}" for i in range(1, m + 1))
    ga = tuple(f"gamma_{i}" for i in range(1, m + 1))
    de = tuple(f"delta_{i}" for i in range(1, m + 1))
    lin = {
        SystemVariant.S1: (0, 1, LAM),
        SystemVariant.S2: (0, LAM, 1),
        SystemVariant.S3: (LAM, 0, 1),
    }[variant]
    return Shape(
        fibres=(
            (0, Term("k", (lin[0],), al)),
            (1, Term("k", (lin[1],), ga)),
            (LAM, Term("k", (lin[2],), de)),
        ),
        den=Term(None, (), be),
    )


def _even_shape(variant: SystemVariant, n: int) -> Shape:
    if variant == SystemVariant.S4:
        na, nb = n, n - 2
        num_lin, den_lin = (), (0, 1, LAM)
    else:
        na, nb = n - 1, n - 1
        num_lin, den_lin = ((1, LAM), (0,)) if variant == SystemVariant.S5 else ((0, 1), (LAM,))
    al = tuple(f"alpha_{i}" for i in range(1, na + 1))
    be = tuple(f"beta_{i}" for i in range(1, nb + 1))
    ga = tuple(f"gamma_{i}" for i in range(1, n + 1))
    de = tuple(f"delta_{i}" for i in range(1, n + 1))
    return Shape(
        fibres=(
            (0, Term("k", num_lin, al)),
            (1, Term("k", (), ga)),
            (LAM, Term("k", (), de)),
        ),
        den=Term(None, den_lin, be),
    )


def _term_expr(t: Term, x, syms: Dict[str, sympy.Symbol]):
    e = syms[t.scalar] if t.scalar else sympy.Integer(1)
    for r in t.linear:
        e *= x - (syms[LAM] if r == LAM else r)
    for s in t.squared:
        e *= (x - syms[s]) ** 2
    return e


def _system_from_shape(D: int, variant, shape: Shape) -> PolySystem:
    unknowns = ["k", LAM] + shape.labels()
    syms = {u: sympy.Symbol(u) for u in unknowns}
    x = sympy.Symbol("x")
    F0 = _term_expr(shape.fibre(0), x, syms)
    G = _term_expr(shape.den, x, syms)
    eqs = []
    for v in (1, LAM):
        vv = syms[LAM] if v == LAM else v
        diff = sympy.Poly(sympy.expand(F0 - vv * G - _term_expr(shape.fibre(v), x, syms)), x)
        if diff.degree() >= D:
            raise AssertionError("leading coefficients do not cancel")
        for j in range(D - 1, -1, -1):
            eqs.append(sympy.expand(diff.coeff_monomial(x**j)))
    return PolySystem(D, variant, unknowns, eqs, shape, [syms[u] for u in unknowns])


def variant_shape(D: int, variant: SystemVariant) -> Shape:
    return _odd_shape(variant, (D - 1) // 2) if D % 2 else _even_shape(variant, D // 2)


def build_system(D: int, variant) -> PolySystem:
    if D < 3:
        raise DegreeTooSmall("degree 2 is handled by build_d2_cases")
    variant = SystemVariant.parse(variant)
    if variant.odd != bool(D % 2):
        raise VariantParityMismatch(f"{variant} does not apply to D = {D}")
    if is_square(D) and variant in (SystemVariant.S1, SystemVariant.S4):
        raise SquareVariantForbidden(f"{variant} is excluded for the square degree {D}")
    return _system_from_shape(D, variant, variant_shape(D, variant))


_FIBRE_NAMES = {0: "alpha", 1: "gamma", LAM: "delta"}


@dataclass(frozen=True)
class D2Case:
    """Degree-2 case: h = P/Q with Q = x - q0 and P - s Q = k * (product of the other two)."""

    q0: Root
    s: Root

    @property
    def name(self) -> str:
        q = {0: "x", 1: "x-1", LAM: "x-lambda"}[self.q0]
        return f"D2:Q={q}:s={self.s}"


def build_d2_cases() -> List[Tuple[D2Case, PolySystem]]:
    """The nine degree-2 sub-cases as square 4x4 systems in (k, lambda, rho_1, rho_2).

    For Q = x - q0 the pole of h at q0 is simple, so the fibre over the
    value s absorbs the two remaining branch points as simple zeros, while
    the fibres over the other two values are double points.
    """
    out = []
    for q0 in (0, 1, LAM):
        rest = tuple(r for r in (0, 1, LAM) if r != q0)
        for s in (0, 1, LAM):
            fibres = []
            for v in (0, 1, LAM):
                if v == s:
                    fibres.append((v, Term("k", rest, ())))
                else:
                    fibres.append((v, Term("k", (), (_FIBRE_NAMES[v],))))
            shape = Shape(tuple(fibres), Term(None, (q0,), ()))
            case = D2Case(q0, s)
            out.append((case, _system_from_shape(2, case.name, shape)))
    return out


def residual(sys: PolySystem, point: Dict[str, object], prec: int = DEFAULT_PREC) -> List[CBall]:
    """Ball evaluation of every equation at ``point``."""
    vals = [as_ball(point[u], prec) for u in sys.unknowns]
    return [as_ball(r, prec) for r in sys.evaluator("residual")(*vals)]


# ---------------------------------------------------------------------------
# h functions


@dataclass(frozen=True)
class HFunction:
    numerator: UniPoly
    denominator: UniPoly
    lam: CBall

    @property
    def degree(self) -> int:
        return max(self.numerator.degree, self.denominator.degree)

    def __call__(self, z):
        return self.numerator(z) / self.denominator(z)


def _term_poly(t: Term, values: Dict[str, CBall], prec: int) -> UniPoly:
    lam = values[LAM]
    roots = [lam if r == LAM else CBall(r, prec=prec) for r in t.linear]
    for s in t.squared:
        roots += [values[s], values[s]]
    lead = values[t.scalar] if t.scalar else CBall(1, prec=prec)
    return UniPoly.from_roots(roots, lead, prec)


def _check_degenerate(shape: Shape, values: Dict[str, CBall]) -> None:
    k, lam = values["k"], values[LAM]
    if not k.is_nonzero():
        raise DegenerateSolution("k is not certifiably nonzero")
    if not (lam.is_nonzero() and (lam - 1).is_nonzero()):
        raise DegenerateSolution("lambda is not certifiably outside {0, 1}")
    pts = [("0", CBall(0)), ("1", CBall(1)), (LAM, lam)] + [(s, values[s]) for s in shape.labels()]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if not pts[i][1].certifiably_distinct(pts[j][1]):
                raise DegenerateSolution(f"{pts[i][0]} and {pts[j][0]} are not certifiably distinct")


def assemble_h(sol, variant=None, shape: Optional[Shape] = None) -> HFunction:
    """Assemble h = F_0 / G from a solution record (or a plain label -> value map).

    ``variant`` selects the shape of an S-system; degree-2 records carry their
    own shape.  Raises :class:`DegenerateSolution` when the data violate the
    pairwise-distinctness requirements.
    """
    values = getattr(sol, "assignment", sol)
    if shape is None:
        shape = getattr(sol, "shape", None)
    if shape is None:
        D = getattr(sol, "D", None)
        if D is None:
            raise ValueError("cannot infer the degree")
        shape = variant_shape(D, SystemVariant.parse(variant))
    prec = max(as_ball(v).prec for v in values.values())
    values = {k: as_ball(v, prec) for k, v in values.items()}
    _check_degenerate(shape, values)
    num = _term_poly(shape.fibre(0), values, prec)
    den = _term_poly(shape.den, values, prec)
    return HFunction(num, den, values[LAM])


def _product_with_branch(h: HFunction) -> UniPoly:
    P, Q, lam = h.numerator, h.denominator, h.lam
    N = P * (P - Q) * (P - Q * lam)
    Dn = UniPoly.from_roots([0, 1, lam]) * Q * Q * Q
    return N * Dn


def verify_square_condition(h: HFunction) -> bool:
    """True iff h(h-1)(h-lambda) / (x(x-1)(x-lambda)) is a square in C(x).

    The quotient is a square exactly when the product of its numerator and
    denominator is, so it suffices that every root cluster of that product
    has even multiplicity.
    """
    return all(m % 2 == 0 for _, m in root_clusters(_product_with_branch(h)))


def _compose_linear(p: UniPoly, a: CBall, b: CBall) -> UniPoly:
    """p(a x + b)."""
    out = UniPoly([0])
    lin = UniPoly([b, a])
    for c in reversed(p.coeffs):
        out = out * lin + UniPoly([c])
    return out


def s3_transport(h: HFunction, move: str) -> HFunction:
    """Apply lambda -> 1 - lambda or lambda -> 1/lambda to (h, lambda).

    ``move`` is ``"1-lambda"`` or ``"1/lambda"``.
    """
    lam = h.lam
    if lam.contains_zero() or (lam - 1).contains_zero():
        raise ValueError("lambda must lie outside {0, 1}")
    one = CBall(1, prec=lam.prec)
    if move in ("1-lambda", "1-l"):
        P = _compose_linear(h.numerator, -one, one)
        Q = _compose_linear(h.denominator, -one, one)
        return HFunction(Q - P, Q, one - lam)
    if move in ("1/lambda", "1/l"):
        P = _compose_linear(h.numerator, lam, CBall(0, prec=lam.prec))
        Q = _compose_linear(h.denominator, lam, CBall(0, prec=lam.prec))
        return HFunction(P, Q * lam, one / lam)
    raise ValueError(f"unknown move {move!r}")


def ramification_census(h: HFunction) -> Dict[str, List[int]]:
    """Multiplicities of the points over 0, 1, lambda and infinity."""
    P, Q, lam = h.numerator, h.denominator, h.lam
    out = {}
    for name, poly in (("0", P), ("1", P - Q), ("lambda", P - Q * lam)):
        out[name] = sorted(m for _, m in root_clusters(poly))
    inf = [m for _, m in root_clusters(Q)] if Q.degree else []
    if P.degree > Q.degree:
        inf.append(P.degree - Q.degree)
    out["inf"] = sorted(inf)
    return out


def census_ok(census: Dict[str, List[int]], D: int) -> bool:
    """Check the census against the admissible patterns for degree D.

    Odd D: one simple point and (D-1)/2 double points over each value.
    Even D: either four simple points over one value and only double points
    elsewhere, or two simple points over each of two values.
    """
    fibres = list(census.values())
    if any(sum(f) != D or any(m not in (1, 2) for m in f) for f in fibres):
        return False
    simple = sorted(f.count(1) for f in fibres)
    if D % 2:
        return simple == [1, 1, 1, 1]
    if D == 2:
        return simple == [0, 0, 2, 2]
    return simple in ([0, 0, 0, 4], [0, 0, 2, 2])


def solution_values_exact_d2_family1() -> Dict[str, sympy.Expr]:
    """Family I of degree 2 (lambda = -1, h = i(x^2 - 1)/(2x)) in the case Q = x, s = 0."""
    I = sympy.I
    # h = i(x^2-1)/(2x); h - 1 = (i/2)(x + i)^2 / x, h + 1 = (i/2)(x - i)^2 / x
    return {"k": I / 2, LAM: sympy.Integer(-1), "gamma": -I, "delta": I}

