#!/usr/bin/env python3
"""Independent reference values for the fracvc test suites.

Everything here is computed with mpmath, without touching the C++
engine. The output is the golden table in data/golden_values.txt; rerun with

    python3 tests/oracles/golden_values.py > data/golden_values.txt

Record format: name n alpha point expected provenance
"""
import mpmath as mp

mp.mp.dps = 40


def mu(n, a):
    a = mp.mpf(a)
    return (mp.mpf(2) ** a * mp.pi ** (-mp.mpf(n) / 2)
            * mp.gamma((n + a + 1) / 2) / mp.gamma((1 - a) / 2))


def fmt(x):
    return mp.nstr(x, 20, strip_zeros=False)


def point(p):
    return "-" if p is None else ",".join(str(c) for c in p)


rows = []


def emit(name, n, a, p, value, tag):
    rows.append(f"{name} {n} {a} {point(p)} {fmt(value)} {tag}")


# normalization constants
for n in (1, 2, 3):
    for a in ("0.1", "0.25", "0.5", "0.75", "0.9"):
        emit("mu", n, a, None, mu(n, a), "DERIVED")

# Gamma/Beta identity right-hand side
for s in ("1", "2.5", "3", "3.5"):
    s_ = mp.mpf(s)
    emit("gamma_beta", 0, s, None,
         mp.gamma(s_ / 2) * mp.sqrt(mp.pi) / mp.gamma((s_ + 1) / 2), "DERIVED")

# interval (0,1), alpha = 1/2, t = -1: direct quadrature of (y-t)^{-3/2}
a = mp.mpf("0.5")
val = mu(1, a) * mp.quad(lambda y: (y + 1) ** (-1 - a), [0, 1])
emit("interval_gradient", 1, "0.5", [-1], val, "DERIVED")

# P_alpha((-1,1)) in n = 1, alpha = 1/2: nested quadrature over the two
# exterior half-lines (both orderings of the pair)
a = mp.mpf("0.5")
one_side = mp.quad(lambda x: mp.quad(lambda y: (y - x) ** (-1 - a), [1, 2, mp.inf]), [-1, 0, 1])
emit("perimeter_interval", 1, "0.5", None, 4 * one_side, "DERIVED")

# int_{B_1 in R^2} |y_2|^{-alpha} dy via the 1-D reduction
for a in ("0.25", "0.5", "0.75"):
    aa = mp.mpf(a)
    v = mp.quad(lambda s: 2 * mp.sqrt(1 - s * s) * abs(s) ** (-aa), [-1, 0, 1])
    emit("ball_abs_power_integral", 2, a, None, v, "DERIVED")
# and in R^1: int_{-1}^{1} |t|^{-1/2} dt
emit("ball_abs_power_integral", 1, "0.5", None,
     mp.quad(lambda s: abs(s) ** mp.mpf(-0.5), [-1, 0, 1]), "DERIVED")


# fractional gradient of the unit ball via the sphere profile (n = 2)
def ball_grad_2d(px, py, a):
    a = mp.mpf(a)
    t = mp.sqrt(px * px + py * py)
    g = mp.quad(lambda p: mp.cos(p) * (t * t - 2 * t * mp.cos(p) + 1) ** (-(1 + a) / 2),
                [-mp.pi, 0, mp.pi])
    c = -mu(2, a) / (1 + a) * g / t
    return c * px, c * py


gx, gy = ball_grad_2d(mp.mpf("1.5"), mp.mpf("0.7"), "0.5")
emit("ball_gradient_x", 2, "0.5", ["1.5", "0.7"], gx, "DERIVED")
emit("ball_gradient_y", 2, "0.5", ["1.5", "0.7"], gy, "DERIVED")


# quarter-plane cone {y1 > 0, y2 > 0}: by the divergence theorem the density is
# a boundary integral over the two edges,
#   grad(p) = mu/(1+a) * sum_edges (-nu_out) int_0^inf |y(t) - p|^{-(1+a)} dt,
# and each edge integral reduces to a Gauss hypergeometric function. The
# density is homogeneous of degree -a, so the ratio over B_1 is a ratio of
# angular integrals over the unit circle.
def edge_integral(along, across, a):
    # int_0^inf ((t - along)^2 + across^2)^{-s} dt, s = (1+a)/2
    s = (1 + a) / 2
    b = abs(across)
    c = along / b
    half = mp.sqrt(mp.pi) * mp.gamma(s - mp.mpf(1) / 2) / (2 * mp.gamma(s))
    part = c * mp.hyp2f1(mp.mpf(1) / 2, s, mp.mpf(3) / 2, -c * c)
    return b ** (1 - 2 * s) * (half + part)


def cone_density(phi, a):
    px, py = mp.cos(phi), mp.sin(phi)
    gx = edge_integral(py, px, a)  # edge x = 0, outward normal -e1
    gy = edge_integral(px, py, a)  # edge y = 0, outward normal -e2
    return gx, gy


@mp.workdps(20)
def cone_ratio(a):
    a = mp.mpf(a)
    brk = [0, mp.pi / 2, mp.pi, 3 * mp.pi / 2, 2 * mp.pi]
    vx = mp.quad(lambda p: cone_density(p, a)[0], brk)
    vy = mp.quad(lambda p: cone_density(p, a)[1], brk)
    tot = mp.quad(lambda p: mp.hypot(*cone_density(p, a)), brk)
    return mp.hypot(vx, vy) / tot


for a in ("0.25", "0.5", "0.75"):
    emit("cone_ratio_quarter_plane", 2, a, None, cone_ratio(a), "DERIVED")

print("# fracvc golden values: name n alpha point expected provenance")
print("# generated by tests/oracles/golden_values.py (mpmath)")
for r in rows:
    print(r)
