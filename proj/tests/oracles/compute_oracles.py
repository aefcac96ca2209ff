"""Independent high-precision reference values for the unit and acceptance tests.

Uses only the textbook (unregularized) formulas evaluated with mpmath at 50
digits; none of the cancellation-stable forms used by the library appear here.
Run: python3 tests/oracles/compute_oracles.py
"""
import mpmath as mp

mp.mp.dps = 50


def context(m):
    m = mp.mpf(m)
    n = (1 - m) / 2
    A1 = mp.sqrt(2 / n)
    A2 = mp.sqrt((m + 1) / (2 * n * m))
    ts = mp.atan(mp.sqrt(m))
    return m, n, A1, A2, ts


def U_xy(m, x1, x2):
    m, n, *_ = context(m)
    return n**2 * mp.cot(x1) + m * n * (mp.cot(x1 / 2 + x2) + mp.cot(x1 / 2 - x2))


def rU(m, r, u):
    m, n, A1, A2, ts = context(m)
    th = ts * mp.sin(u)
    return r * (n**2 * mp.cot(r * A1 * mp.cos(th))
                + m * n * (mp.cot(r * A2 * mp.sin(th + ts)) + mp.cot(r * A2 * mp.sin(ts - th))))


def r2Ur(m, r, u):
    return r**2 * mp.diff(lambda rr: rU(m, rr, u) / rr, r)


def rUtheta_at(m, r, th):
    m, n, A1, A2, ts = context(m)
    f = lambda t: r * (n**2 * mp.cot(r * A1 * mp.cos(t))
                       + m * n * (mp.cot(r * A2 * mp.sin(t + ts)) + mp.cot(r * A2 * mp.sin(ts - t))))
    return mp.diff(f, th)


def rU0_theta(m, th):
    # r -> 0 limit of rU as a function of theta
    m, n, A1, A2, ts = context(m)
    return n**2 / (A1 * mp.cos(th)) + m * n / A2 * (1 / mp.sin(th + ts) + 1 / mp.sin(ts - th))


def r_star(m):
    m, n, A1, A2, ts = context(m)
    a = (1 + mp.sqrt(1 + n**2 * (4 * m * n + n**2))) / (4 * m * n + n**2)
    return a, 2 / A1 * mp.atan(1 / a)


def r_hill(m, h):
    m, n, A1, A2, ts = context(m)
    return mp.findroot(lambda r: U_xy(m, r * A1, 0) + h, (mp.mpf('0.01'), r_star(m)[1]), solver='anderson')


def show(label, value):
    print(f"{label:45s} {mp.nstr(value, 17)}")


for m in ["1/3"]:
    mm = mp.mpf(1) / 3
    M, n, A1, A2, ts = context(mm)
    print("--- m = 1/3")
    show("theta_star", ts)
    show("A1", A1)
    show("A2", A2)
    a, rs = r_star(mm)
    show("a", a)
    show("r_star", rs)
    show("r_star via root of U(r,0)=1", mp.findroot(lambda r: U_xy(mm, r * A1, 0) - 1, 0.2))
    nu0 = mp.sqrt(2 * rU0_theta(mm, 0))
    show("nu0", nu0)
    show("rU(0.1, 0)", rU(mm, mp.mpf("0.1"), 0))
    show("r2Ur(0.1, 0)", r2Ur(mm, mp.mpf("0.1"), 0))
    show("F(0.1,0,h=-1)", 2 * rU(mm, mp.mpf("0.1"), 0) + r2Ur(mm, mp.mpf("0.1"), 0) - mp.mpf("0.2"))
    show("F(0.2,0,h=-1)", 2 * rU(mm, mp.mpf("0.2"), 0) + r2Ur(mm, mp.mpf("0.2"), 0) - mp.mpf("0.4"))
    show("r_star*A1 (zvc axis crossing)", rs * A1)
    rUtt = mp.diff(lambda t: rU0_theta(mm, t), 0, 2)
    show("rU_thth(0,0) by differentiation", rUtt)
    show("rU_thth(0,0) closed form", M * n / A2 * 2 * (1 + mp.cos(ts)**2) / mp.sin(ts)**3 + n**2 / A1)
    l1 = -ts * nu0
    b = ts * nu0 / 2
    disc = mp.sqrt(b**2 + 4 * ts**2 * rUtt)
    show("lambda1", l1)
    show("lambda2", (b - disc) / 2)
    show("lambda3", (b + disc) / 2)
    x = mp.pi / 5
    show("f(pi/5)", 2 * mp.cot(x) - x / mp.sin(x)**2)
    show("f'(pi/5) formula", -(3 - 2 * x * mp.cot(x)) / mp.sin(x)**2)
    show("f'(pi/5) numeric", mp.diff(lambda y: 2 * mp.cot(y) - y / mp.sin(y)**2, x))
    show("f''(pi/5) numeric", mp.diff(lambda y: 2 * mp.cot(y) - y / mp.sin(y)**2, x, 2))
    show("f''(pi/5) formula", -2 / mp.sin(x)**4 * (2 * x - 2 * mp.sin(2 * x) + x * mp.cos(2 * x)))
    # collision-manifold rU cos^2 u near u = pi/2 (limit)
    for eps in ["1e-3", "1e-5", "1e-8"]:
        u = mp.pi / 2 - mp.mpf(eps)
        show(f"rU(0,u)cos^2u at pi/2-{eps}", rU0_theta(mm, ts * mp.sin(u)) * mp.cos(u)**2)
        show(f"rU(0.1,u)cos^2u at pi/2-{eps}", rU(mm, mp.mpf("0.1"), u) * mp.cos(u)**2)
    show("2mn/(A2 ts)", 2 * M * n / (A2 * ts))
    show("stated mn/(2 ts A2)", M * n / (2 * ts * A2))
    show("4mn/(A2 ts^2)", 4 * M * n / (A2 * ts**2))
    u = mp.pi / 2 - mp.mpf("1e-6")
    th = ts * mp.sin(u)
    second = M * n * mp.mpf("0.1")**2 * A2 * mp.cos(ts - th) / mp.sin(mp.mpf("0.1") * A2 * mp.sin(ts - th))**2
    show("second term rU_th cos^4/sin at pi/2-1e-6", second * mp.cos(u)**4 / mp.sin(u))
    show("rU(r=0.1,u=0.3)", rU(mm, mp.mpf("0.1"), mp.mpf("0.3")))
    show("r2Ur(r=0.1,u=0.3)", r2Ur(mm, mp.mpf("0.1"), mp.mpf("0.3")))
    show("rUth(r=0.1,u=0.3)", rUtheta_at(mm, mp.mpf("0.1"), ts * mp.sin(mp.mpf("0.3"))))
    show("gamma(r=0.1,u=0,nu=0,h=-1)", mp.sqrt(2 * (rU(mm, mp.mpf("0.1"), 0) - mp.mpf("0.1"))))
    show("r_hill(h=-2)", r_hill(mm, -2))

print("--- homothetic m = 0.2")
m = mp.mpf("0.2")
f = lambda x: (1 - m)**2 / 4 * (-mp.cot(x) + 4 * m / (1 - m) * mp.cot(x / 2))
show("U_iso(3pi/2)", f(3 * mp.pi / 2))
xmin = mp.findroot(lambda x: mp.diff(f, x), 4.5)
show("argmax U_iso on (pi,2pi)", xmin)
show("3pi/2", 3 * mp.pi / 2)

print("--- estimates across m")
for k in range(1, 20):
    mm = mp.mpf(k) / 20
    M, n, A1, A2, ts = context(mm)
    a, rs = r_star(mm)
    g = -7 * mm**4 + 20 * mm**3 - 18 * mm**2 + 4 * mm + 17
    print(f"m={float(mm):.2f} a={float(a):.6f} rsA1/2={float(rs*A1/2):.6f} pi/10={float(mp.pi/10):.6f} "
          f"rsA2sin2ts={float(rs*A2*mp.sin(2*ts)):.6f} g={float(g):.6f}")
