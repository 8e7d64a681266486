"""Independent oracle for values frozen into the unit tests.

Uses mpmath at 60 digits, so the defect recurrence needs no renormalization.
Run: python3 tests/oracle/derive.py
"""
import math

import mpmath as mp
import numpy as np

mp.mp.dps = 60


def bracket(a):
    return math.sqrt(1.0 + a * a)


def c_n(n, gamma):
    return max(2.0 * n, 2.0 ** ((1 + gamma / 2) / (1 - gamma)) * n ** (1 / (1 - gamma)))


def defect(delta, x_max, sign=1):
    lam = mp.mpc(0, sign)
    d = mp.mpf(delta)
    u = [mp.mpc(0), mp.mpc(1), lam]
    for x in range(2, x_max):
        u.append((lam * u[x] - mp.mpf(x - 1) ** d * u[x - 1]) / mp.mpf(x) ** d)
    return u


def fit_exponent(u, x_max):
    lo = max(1, x_max // 100)
    slopes = []
    for parity in (0, 1):
        xs = [x for x in range(lo, x_max + 1) if x % 2 == parity]
        lx = np.array([math.log(x) for x in xs])
        ly = np.array([float(mp.log(abs(u[x]))) for x in xs])
        slopes.append(-np.polyfit(lx, ly, 1)[0])
    return slopes


def main():
    print("c_n(1,0)", c_n(1, 0.0), "c_n(2,0)", c_n(2, 0.0), "c_n(2,0.5)", repr(c_n(2, 0.5)))
    print("c_n(1,0.5)", repr(c_n(1, 0.5)))
    print("row_l1 counterexample d=2 x=10", 10 ** 2 + 9 ** 2)
    print("criterion ratio d=1.5 x=10", repr((10 ** 1.5 + 9 ** 1.5) / bracket(10)))
    print("c_star(1,3,1.1)", repr(2 / (2 ** 1.5 + 1.1 ** 3)))
    print("c_star(2,3,1.1)", repr(2 / (3 ** 1.5 + 1.1 ** 3)))

    # Gauge C_star for k=2, X=100, Y=1e4, n=1, gamma=0: extended window is
    # [X - c_n, Y + c_n] = [98, 10002] in |x|.
    k, X, Y, cn = 2.0, 100.0, 1e4, c_n(1, 0.0)
    def t(a):
        a = abs(a)
        return bracket(X) ** k if a < X else (bracket(a) ** k if a <= Y else bracket(Y) ** k)
    lo, hi = int(math.floor(X - cn * 1)), int(math.ceil(Y + cn * 1))
    cs = max(max(t(x) / bracket(x) ** k, bracket(x) ** k / t(x)) for x in range(0, hi + 1))
    print("gauge C_star full sweep |x|<=Y+c_n", repr(cs))
    cs_ext = max(max(t(x) / bracket(x) ** k, bracket(x) ** k / t(x)) for x in range(lo, hi + 1))
    print("gauge C_star over [X_bar, Y_bar] only", repr(cs_ext))
    # The bound is needed for every y reached from a ramp row, so the window is
    # [X_bar - c_n<X_bar>^g, Y_bar + c_n<Y_bar>^g] = [96, 10004].
    lo2, hi2 = lo - int(cn), hi + int(cn)
    cs2 = max(max(t(x) / bracket(x) ** k, bracket(x) ** k / t(x)) for x in range(lo2, hi2 + 1))
    print("gauge C_star", lo2, hi2, repr(cs2), "(<100>/<96>)^2", repr((bracket(100) / bracket(96)) ** 2))

    u = defect(2.0, 4)
    print("defect d=2 u1..u4", [complex(v) for v in u[1:5]])
    for delta in (0.5, 1.0, 1.5, 2.0):
        for sign in (1, -1):
            u = defect(delta, 10000, sign)
            ev, od = fit_exponent(u, 10000)
            print(f"defect d={delta} sign={sign} even={ev!r} odd={od!r} mean={(ev + od) / 2!r}")


if __name__ == "__main__":
    main()
