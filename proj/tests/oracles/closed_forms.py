"""Independent high-precision evaluations used to freeze expected values in the unit tests.

Run with: python3 tests/oracles/closed_forms.py
"""
import mpmath as mp
import sympy as sp

mp.mp.dps = 40


def oscillator():
    x = sp.Symbol("x")
    u = x**4 / 4 + sp.sin(1 + 5 * x)
    tower = [u] + [sp.diff(u, x, k) for k in range(1, 5)]
    print("oscillator tower at x=0:", [sp.N(t.subs(x, 0), 20) for t in tower])
    print("oscillator tower at x=1.3:", [sp.N(t.subs(x, sp.Rational(13, 10)), 20) for t in tower])


def pairs():
    print("morse(1.5) =", mp.nstr((1 - mp.e ** (-1)) ** 2, 17))
    print("lj(2) =", mp.nstr(mp.mpf(2) ** -12 - 2 * mp.mpf(2) ** -6, 17))
    # hexagon plus centre: enumerate all 21 pair distances explicitly
    pts = [(mp.mpf(0), mp.mpf(0))] + [(mp.cos(k * mp.pi / 3), mp.sin(k * mp.pi / 3)) for k in range(6)]
    morse = lambda r: (1 - mp.e ** (-2 * (r - 1))) ** 2
    lj = lambda r: r**-12 - 2 * r**-6
    um = ul = 0
    for i in range(7):
        for j in range(i + 1, 7):
            r = mp.sqrt((pts[i][0] - pts[j][0]) ** 2 + (pts[i][1] - pts[j][1]) ** 2)
            um += morse(r)
            ul += lj(r)
    ul += sum((p[0] ** 2 + p[1] ** 2) / 8 for p in pts)
    print("hexagon morse U =", mp.nstr(um, 17))
    print("hexagon lj U =", mp.nstr(ul, 17))


def ou():
    g, dt, kt = mp.mpf(1), mp.mpf("0.1"), mp.mpf(1)
    c1 = mp.e ** (-g * dt)
    print("c1,c2,c3 =", mp.nstr(c1, 17), mp.nstr((1 - c1) / g, 17), mp.nstr(mp.sqrt(kt * (1 - c1**2)), 17))


def em_harmonic():
    # x_{n+1} = (1-h) x_n + sqrt(2h) R: stationary variance from the scalar recursion
    for h in ["0.1", "0.5"]:
        h = mp.mpf(h)
        v = mp.mpf(0)
        for _ in range(10000):
            v = (1 - h) ** 2 * v + 2 * h
        print("EM harmonic var h=", h, mp.nstr(v, 17), "closed", mp.nstr(2 * h / (1 - (1 - h) ** 2), 17))


def corrections():
    x, p, b = sp.symbols("x p beta")
    U = x**4 / 4 + sp.sin(1 + 5 * x)
    U2 = sp.diff(U, x, 2)
    # 1D reductions of the correction displays, built from derivatives of U by sympy
    f20_baoab = sp.Rational(1, 8) * (p * U2 * p - U2 / b)
    f20_aboba = -sp.Rational(1, 8) * (p * U2 * p - 2 * U2 / b)
    inner = p * U2 * p  # p^T U'' p
    f21 = sp.Rational(1, 24) / b * p * sp.diff(U2, x) - sp.Rational(1, 72) * p * sp.diff(inner, x)
    f22 = sp.Rational(1, 296) * p * sp.diff(p * sp.diff(inner, x), x) - sp.Rational(1, 48) * sp.diff(U, x) * sp.diff(inner, x)
    pt = {x: sp.Rational(3, 10), p: sp.Rational(7, 10), b: 1}
    for name, f in [("f20 baoab", f20_baoab), ("f20 aboba", f20_aboba), ("f21", f21), ("f22", f22)]:
        print(name, "at (0.3,0.7,1) =", sp.N(f.subs(pt), 20))


def aboba_marginal():
    # brute-force p-integration of exp(-beta [p^2/2 + dt^2 f20(x,p)]) relative to dt = 0
    beta = mp.mpf(1)
    x0 = mp.mpf("0.5")
    u2 = 3 * x0**2 - 25 * mp.sin(1 + 5 * x0)
    f20 = {
        "baoab": lambda p: (p * p * u2 - u2 / beta) / 8,
        "aboba": lambda p: -(p * p * u2 - 2 * u2 / beta) / 8,
    }
    for method, f in f20.items():
        for dt in [mp.mpf("0.2"), mp.mpf("0.02"), mp.mpf("0.002")]:
            num = mp.quad(lambda p: mp.e ** (-beta * (p * p / 2 + dt**2 * f(p))), [-mp.inf, 0, mp.inf])
            den = mp.quad(lambda p: mp.e ** (-beta * p * p / 2), [-mp.inf, 0, mp.inf])
            print(method, "x=0.5 dt=", dt, "log ratio =", mp.nstr(mp.log(num / den), 20),
                  "ratio/dt^2 =", mp.nstr(mp.log(num / den) / dt**2, 20))
    print("u2(0.5) =", mp.nstr(u2, 20))


def gibbs_bins():
    beta = 1
    U = lambda x: x**4 / 4 + mp.sin(1 + 5 * x)
    w = lambda x: mp.e ** (-beta * U(x))
    z = mp.quad(w, mp.linspace(-6, 6, 121))
    edges = [mp.mpf(-3.5) + mp.mpf(7) * k / 20 for k in range(21)]
    probs = [mp.quad(w, mp.linspace(edges[k], edges[k + 1], 8)) / z for k in range(20)]
    print("oscillator bins:", ", ".join(mp.nstr(q, 17) for q in probs))
    print("sum =", mp.nstr(sum(probs), 17))


if __name__ == "__main__":
    oscillator()
    pairs()
    ou()
    em_harmonic()
    corrections()
    aboba_marginal()
    gibbs_bins()
