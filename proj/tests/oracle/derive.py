"""Reference values for the unit tests, computed with mpmath at 40 digits.

Shares nothing with the C++ code: the arclength comes from incomplete
elliptic integrals, the billiard chord from the closed-form ray/ellipse
intersection, and curvature-radius derivatives from mpmath.diff.

    python3 tests/oracle/derive.py > tests/oracles.hpp
"""

import mpmath as mp

mp.mp.dps = 40
AXES = [1.2, 1.4, 2.0, 4.0]
B = mp.mpf(1)


class Ellipse:
    def __init__(self, a, b=B):
        self.a, self.b = mp.mpf(a), mp.mpf(b)
        self.m = 1 - (self.a / self.b) ** 2
        self.L = 4 * self.b * mp.ellipe(self.m)
        self.sigma = 2 * mp.pi / self.L

    def s(self, t):
        # arclength from t = 0, lifted
        return self.b * mp.ellipe(t, self.m)

    def phi(self, t):
        return self.sigma * self.s(t)

    def t_of_phi(self, phi):
        return mp.findroot(lambda t: self.phi(t) - phi, phi)

    def point(self, t):
        return self.a * mp.cos(t), self.b * mp.sin(t)

    def tangent(self, t):
        dx, dy = -self.a * mp.sin(t), self.b * mp.cos(t)
        n = mp.sqrt(dx * dx + dy * dy)
        return dx / n, dy / n

    def rho(self, phi):
        # radius of curvature of the rescaled (perimeter 2 pi) curve
        t = self.t_of_phi(phi)
        sp = mp.sqrt((self.a * mp.sin(t)) ** 2 + (self.b * mp.cos(t)) ** 2)
        return self.sigma * sp ** 3 / (self.a * self.b)

    def rho_d(self, phi, n):
        return mp.diff(self.rho, phi, n)

    def billiard(self, phi, theta):
        t0 = self.t_of_phi(phi)
        px, py = self.point(t0)
        tx, ty = self.tangent(t0)
        vx = mp.cos(theta) * tx - mp.sin(theta) * ty
        vy = mp.sin(theta) * tx + mp.cos(theta) * ty
        a2, b2 = self.a ** 2, self.b ** 2
        s = -2 * (px * vx / a2 + py * vy / b2) / (vx * vx / a2 + vy * vy / b2)
        qx, qy = px + s * vx, py + s * vy
        t1 = mp.atan2(qy / self.b, qx / self.a)
        while t1 <= t0:
            t1 += 2 * mp.pi
        while t1 > t0 + 2 * mp.pi:
            t1 -= 2 * mp.pi
        ux, uy = self.tangent(t1)
        theta_bar = mp.atan2(-(ux * vy - uy * vx), ux * vx + uy * vy)
        return phi + self.sigma * (self.s(t1) - self.s(t0)), theta_bar, self.sigma * s

    def coin(self, ell, phi, theta):
        phib, thb, _ = self.billiard(phi, theta)
        return phib + ell * mp.cot(thb), thb


def extremum(f, lo, hi, sign, grid=400):
    """Location and value of the max (sign=+1) or min (sign=-1) of f on [lo, hi]."""
    xs = [lo + (hi - lo) * k / grid for k in range(grid + 1)]
    best = max(xs, key=lambda x: sign * f(x))
    x = mp.findroot(lambda y: mp.diff(f, y), best)
    return x, f(x)


def emit(name, value):
    print(f"inline constexpr double {name} = {mp.nstr(value, 20, min_fixed=-4, max_fixed=4)};")


def main():
    print("#pragma once")
    print("// Generated by tests/oracle/derive.py (mpmath, 40 digits). Do not edit.")
    print()
    print("namespace oracle {")
    print()
    for a in AXES:
        e = Ellipse(a)
        tag = str(a).replace(".", "_")
        print(f"// ellipse a={a}, b=1")
        emit(f"kPerimeter_{tag}", e.L)
        emit(f"kSigma_{tag}", e.sigma)
        # by symmetry rho'' is extremal at the vertices; rho' peaks in between
        emit(f"kMinRhoDD_{tag}", e.rho_d(mp.pi / 2, 2))
        emit(f"kMaxRhoDD_{tag}", e.rho_d(mp.mpf(0), 2))
        _, mx = extremum(lambda p: e.rho_d(p, 1), mp.mpf("0.05"), mp.pi / 2 - mp.mpf("0.05"), +1, 60)
        emit(f"kMaxRhoD_{tag}", mx)
        emit(f"kRhoAtZero_{tag}", e.rho(mp.mpf(0)))
        print()

    e = Ellipse(1.4)
    ell = mp.mpf("1.3")
    print("// ellipse a=1.4, b=1: curvature radius at phi = 0.7 and sample steps")
    phi = mp.mpf("0.7")
    emit("kRho_0_7", e.rho(phi))
    emit("kRhoD1_0_7", e.rho_d(phi, 1))
    emit("kRhoD2_0_7", e.rho_d(phi, 2))
    emit("kTOfPhi_0_7", e.t_of_phi(phi))
    print()
    print("struct Step { double phi, theta, phi_bar, theta_bar, length, coin_phi, coin_theta; };")
    print("inline constexpr Step kSteps[] = {")
    for phi, theta in [("0.3", "0.7"), ("2.0", "0.05"), ("4.5", "1.5"), ("1.0", "2.6"), ("5.9", "3.0")]:
        p, th = mp.mpf(phi), mp.mpf(theta)
        pb, tb, length = e.billiard(p, th)
        cp, ct = e.coin(ell, p, th)
        vals = ", ".join(mp.nstr(v, 20) for v in (p, th, pb, tb, length, cp, ct))
        print(f"    {{{vals}}},")
    print("};")
    print()

    # Jacobian of the coin map at one point, by differentiating the oracle map
    p0, t0 = mp.mpf("0.3"), mp.mpf("0.7")
    jac = [
        mp.diff(lambda x: e.coin(ell, x, t0)[0], p0),
        mp.diff(lambda y: e.coin(ell, p0, y)[0], t0),
        mp.diff(lambda x: e.coin(ell, x, t0)[1], p0),
        mp.diff(lambda y: e.coin(ell, p0, y)[1], t0),
    ]
    print("// d(phi', theta')/d(phi, theta) of the coin map at (0.3, 0.7), ell = 1.3")
    print("inline constexpr double kCoinJacobian[4] = {" + ", ".join(mp.nstr(v, 20) for v in jac) + "};")
    print()
    print("}  // namespace oracle")


if __name__ == "__main__":
    main()
