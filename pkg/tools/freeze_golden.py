"""Regenerate the golden JSON files from closed forms.

Every closed form is evaluated with sympy at 80 digits and checked against
mpmath's Klein j (an implementation independent of this package) before the
decimal expansion is frozen.
"""

import json
import pathlib

import mpmath
import sympy

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "cmlegendre" / "golden"
DPS = 80


def num(expr: str) -> str:
    return sympy.N(sympy.sympify(expr), DPS)


def cplx(expr: str):
    v = sympy.N(sympy.sympify(expr), DPS)
    re, im = v.as_real_imag()
    return {"re": str(sympy.N(re, 70)), "im": str(sympy.N(im, 70))}


def oracle_j(tau_expr: str):
    with mpmath.workdps(DPS + 20):
        t = sympy.N(sympy.sympify(tau_expr), DPS + 20)
        re, im = t.as_real_imag()
        tau = mpmath.mpc(mpmath.mpf(str(re)), mpmath.mpf(str(im)))
        return 1728 * mpmath.kleinj(tau)


def checked_j(tau_expr: str, j_expr: str):
    v = sympy.N(sympy.sympify(j_expr), DPS)
    re, im = v.as_real_imag()
    o = oracle_j(tau_expr)
    with mpmath.workdps(DPS):
        err = abs(mpmath.mpc(str(re), str(im)) - o) / max(1, abs(o))
    assert err < mpmath.mpf(10) ** -60, (tau_expr, j_expr, err)
    return {"re": str(sympy.N(re, 70)), "im": str(sympy.N(im, 70))}


def min_poly(expr: str):
    x = sympy.Symbol("x")
    p = sympy.Poly(sympy.minimal_polynomial(sympy.sympify(expr), x), x)
    return [str(c) for c in reversed(p.all_coeffs())]


def qs(tau, terms, printed, part="re"):
    return {"tau": tau, "terms": terms, "printed": printed, "part": part}


def write(name, data):
    (OUT / f"{name}.json").write_text(json.dumps(data, indent=1) + "\n")


def main():
    OUT.mkdir(parents=True, exist_ok=True)

    write("D2", {
        "D": 2,
        "periods": ["I", "sqrt(2)*I", "(1+sqrt(7)*I)/2"],
        "j": {"I": 1728, "sqrt(2)*I": 8000, "(1+sqrt(7)*I)/2": -3375},
        "lambdas": ["-1", "3+2*sqrt(2)", "3-2*sqrt(2)", "(1+3*sqrt(7)*I)/2", "(1-3*sqrt(7)*I)/2"],
        "families": {
            "I": {"case": "D2:Q=x:s=0", "lambda": "-1", "h": "I*(x**2-1)/(2*x)"},
            "II": {"case": "D2:Q=x:s=0", "lambda": "3+2*sqrt(2)", "h": "-(x-1)*(x-3-2*sqrt(2))/(2*x)"},
            "III": {"lambda": "(1+3*sqrt(7)*I)/2"},
        },
        "qseries": [qs("sqrt(2)*I", 4, "7999.997704"), qs("(1+sqrt(7)*I)/2", 5, "-3375.000073")],
    })

    write("D3", {
        "D": 3,
        "periods": ["sqrt(3)*I", "(1+sqrt(11)*I)/2", "sqrt(2)*I", "(1+sqrt(3)*I)/2"],
        "j": {"sqrt(3)*I": 54000, "(1+sqrt(11)*I)/2": -32768, "sqrt(2)*I": 8000, "(1+sqrt(3)*I)/2": 0},
        "systems": {
            "S1": {"lambda": ["(1+sqrt(3)*I)/2", "(1-sqrt(3)*I)/2"], "j": [0],
                   "identity": {"k": "-1/3", "alpha_1": "1+(1+sqrt(3)*I)/2",
                                "beta_1": "(1+(1+sqrt(3)*I)/2)/3", "lambda": "(1+sqrt(3)*I)/2"}},
            "S2": {"lambda": ["-7+4*sqrt(3)", "-7-4*sqrt(3)", "3+2*sqrt(2)", "3-2*sqrt(2)"], "j": [54000, 8000]},
            "S3": {"j": [0, -32768],
                   "t_polynomial": "(3*t+2)**4*(t+2)**4-16*t*(t+1)**3*(3*t+4)**3",
                   "lambda_of_t": "(t+2)**3*(3*t+2)/(16*(t+1)**3)"},
        },
        "qseries": [qs("sqrt(3)*I", 3, "53999.992414"), qs("(1+sqrt(11)*I)/2", 4, "-32767.999977")],
    })

    q5 = ["(7-3*sqrt(5))**2*(-1+3*sqrt(5))**3*(15+3*sqrt(5))**3/256",
          "(7+3*sqrt(5))**2*(-1-3*sqrt(5))**3*(15-3*sqrt(5))**3/256"]
    write("D4", {
        "D": 4,
        "periods": ["I", "2*I", "(1+sqrt(3)*I)/2", "(1+sqrt(7)*I)/2", "(1+sqrt(15)*I)/2", "(1+sqrt(15)*I)/4"],
        "j_rational": [287496, 54000, -3375],
        "j_quadratic": q5,
        "j_quadratic_min_poly": min_poly(q5[0]),
        "systems": {"S5": {"lambda": ["17+12*sqrt(2)", "17-12*sqrt(2)", "-7+4*sqrt(3)", "-7-4*sqrt(3)"],
                           "j": [287496, 54000]}},
        "qseries": [qs("2*I", 4, "287495.999999"), qs("(1+sqrt(15)*I)/4", 6, "632.833459"),
                    qs("(1+sqrt(15)*I)/2", 4, "-191657.832862")],
    })

    transports = [
        ("sqrt(2)*I", "3+2*sqrt(2)", "(lambda-1)/lambda", "2tau", "2*sqrt(2)*I",
         "10**3*(5+sqrt(2))**3*(7+5*sqrt(2))**2"),
        ("sqrt(3)*I", "-7-4*sqrt(3)", "(lambda-1)/lambda", "2tau", "2*sqrt(3)*I",
         "4*15**3*(6-sqrt(3))**3*(26+15*sqrt(3))**2"),
        ("(1+sqrt(7)*I)/2", "(1+3*sqrt(7)*I)/2", None, "2tau", "sqrt(7)*I", "255**3"),
        ("2*I", "17+12*sqrt(2)", "(lambda-1)/lambda", "2tau", "4*I",
         "(99*sqrt(2)-12)**3*(99*sqrt(2)+140)**2/2"),
        ("sqrt(2)*I", "3+2*sqrt(2)", None, "(tau+1)/(1-tau)", "(-1+2*sqrt(2)*I)/3",
         "10**3*(5-sqrt(2))**3*(7-5*sqrt(2))**2"),
    ]
    write("ex2tau", {
        "transports": [
            {"from": f, "lambda": lam, "branch": br, "target": tg, "to": to, "j": je,
             "j_value": checked_j(to, je)}
            for f, lam, br, tg, to, je in transports
        ],
        "lambda_prime_2sqrt2": {"u": "2*sqrt(2)-2", "lambda": "(sqrt(2*sqrt(2)-2)+sqrt(2*sqrt(2)+2)/2+2)/4"},
        "qseries": [qs("2*sqrt(2)*I", 3, "52249767.137718"), qs("sqrt(7)*I", 3, "16581374.999999"),
                    qs("2*sqrt(3)*I", 3, "2835807690.422278"), qs("4*I", 3, "82226316329.59491")],
    })

    write("ex3tau", {
        "lambda": "-1",
        "from": "I",
        "x_quartic": ["1", "-28*I", "-6", "28*I", "1"],
        "lambda_prime": ["-(2+sqrt(3))**2*(sqrt(2)+root(3,4))**4", "-(2-sqrt(3))**2*(sqrt(2)+I*root(3,4))**4",
                         "-(2+sqrt(3))**2*(sqrt(2)-root(3,4))**4", "-(2-sqrt(3))**2*(sqrt(2)-I*root(3,4))**4"],
        "lambda_prime_quadratics": ["x**2+2*(193+112*sqrt(3))*x+1", "x**2+2*(193-112*sqrt(3))*x+1"],
        "targets": [
            {"target": "3tau", "to": "3*I", "j": "64*(387+224*sqrt(3))**3*(97-56*sqrt(3))",
             "j_value": checked_j("3*I", "64*(387+224*sqrt(3))**3*(97-56*sqrt(3))")},
            {"target": "(tau+2)/(1-tau)", "to": "(1+3*I)/2", "j": "64*(387-224*sqrt(3))**3*(97+56*sqrt(3))",
             "j_value": checked_j("(1+3*I)/2", "64*(387-224*sqrt(3))**3*(97+56*sqrt(3))")},
        ],
        "qseries": [qs("3*I", 3, "153553679.396728"), qs("(1+3*I)/2", 4, "-11663.396275")],
    })

    rows = [
        ("sqrt(2)*I", ["3+2*sqrt(2)", "3-2*sqrt(2)"], "20**3", -8, {"kind": "solve", "D": 2}),
        ("sqrt(3)*I", ["-7+4*sqrt(3)", "-7-4*sqrt(3)"], "16*15**3", -12, {"kind": "solve", "D": 3}),
        ("(1+sqrt(7)*I)/2", ["(1+3*sqrt(7)*I)/2", "(1-3*sqrt(7)*I)/2"], "-15**3", -7, {"kind": "solve", "D": 2}),
        ("2*I", ["17+12*sqrt(2)", "17-12*sqrt(2)"], "66**3", -16, {"kind": "solve", "D": 4}),
        ("2*sqrt(2)*I", ["(sqrt(2*sqrt(2)-2)+sqrt(2*sqrt(2)+2)/2+2)/4"],
         "10**3*(5+sqrt(2))**3*(7+5*sqrt(2))**2", -32,
         {"kind": "isogeny", "from": "sqrt(2)*I", "from_D": 2, "degree": 2, "target": "2tau"}),
        ("2*sqrt(3)*I", ["(2*sqrt(2-sqrt(3))+sqrt(2+sqrt(3))/2+2)/4"],
         "4*15**3*(6-sqrt(3))**3*(26+15*sqrt(3))**2", -48,
         {"kind": "isogeny", "from": "sqrt(3)*I", "from_D": 3, "degree": 2, "target": "2tau"}),
        ("sqrt(7)*I", ["(sqrt(62+6*sqrt(7)*I)/8+sqrt(62-6*sqrt(7)*I)/8+2)/4"], "255**3", -28,
         {"kind": "isogeny", "from": "(1+sqrt(7)*I)/2", "from_D": 2, "degree": 2, "target": "2tau"}),
        ("4*I", ["(2*sqrt(3*sqrt(2)-4)+sqrt(6*sqrt(2)+8)/4+2)/4"],
         "(99*sqrt(2)-12)**3*(99*sqrt(2)+140)**2/2", -64,
         {"kind": "isogeny", "from": "2*I", "from_D": 4, "degree": 2, "target": "2tau"}),
        ("(-1+2*sqrt(2)*I)/3", ["(I*sqrt(2*sqrt(2)+2)-I*sqrt(2*sqrt(2)-2)/2+2)/4"],
         "10**3*(5-sqrt(2))**3*(7-5*sqrt(2))**2", -32,
         {"kind": "isogeny", "from": "sqrt(2)*I", "from_D": 2, "degree": 2, "target": "(tau+1)/(1-tau)"}),
        ("3*I", ["-(2+sqrt(3))**2*(sqrt(2)+root(3,4))**4"],
         "64*(387+224*sqrt(3))**3*(97-56*sqrt(3))", -36,
         {"kind": "isogeny", "from": "I", "from_D": 2, "degree": 3, "target": "3tau"}),
        ("(1+3*I)/2", ["-(2-sqrt(3))**2*(sqrt(2)-I*root(3,4))**4"],
         "64*(387-224*sqrt(3))**3*(97+56*sqrt(3))", -36,
         {"kind": "isogeny", "from": "I", "from_D": 2, "degree": 3, "target": "(tau+2)/(1-tau)"}),
        ("(1+sqrt(15)*I)/4", ["((sqrt(5)-1)/8*(1+(2*sqrt(3)+sqrt(15))*I))**4",
                              "((sqrt(5)-1)/8*(1-(2*sqrt(3)+sqrt(15))*I))**4"],
         q5[0], -15, {"kind": "solve", "D": 4}),
        ("(1+sqrt(15)*I)/2", ["((sqrt(5)+1)/8*(-1+(2*sqrt(3)-sqrt(15))*I))**4",
                              "((sqrt(5)+1)/8*(-1-(2*sqrt(3)-sqrt(15))*I))**4"],
         q5[1], -15, {"kind": "solve", "D": 4}),
    ]
    write("table1", {
        "rows": [
            {"tau": tau, "tau_value": cplx(tau), "lambda": lams,
             "lambda_value": [cplx(lam) for lam in lams],
             "j": je, "j_value": checked_j(tau, je), "j_min_poly": min_poly(je),
             "order_disc": disc, "source": src}
            for tau, lams, je, disc, src in rows
        ]
    })


if __name__ == "__main__":
    main()
