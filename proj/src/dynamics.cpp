#include "coinlab/dynamics.hpp"

#include <cmath>
#include <limits>

namespace coinlab {

CoinSystem::CoinSystem(std::shared_ptr<const Table> table, double ell, double theta_min)
    : table_(std::move(table)), ell_(ell), theta_min_(theta_min) {
    if (!table_) throw DomainError("coin system needs a table");
    if (!(ell > 0.0) || !std::isfinite(ell)) throw DomainError("coin height ell must be positive");
    if (!(theta_min > 0.0) || theta_min >= 0.5) throw DomainError("theta guard must lie in (0, 0.5)");
}

void CoinSystem::check_theta(double theta) const {
    if (!(theta > theta_min_ && theta < kPi - theta_min_)) {
        throw DomainError("theta=" + std::to_string(theta) + " outside the guard band");
    }
}

CoinSystem make_system(CurveKind kind, double a, double b, double ell) {
    return CoinSystem(make_table(kind, a, b), ell);
}

namespace {

Vec2 unit(Vec2 v) { return (1.0 / norm(v)) * v; }

}  // namespace

ChordHit billiard_hit(const CoinSystem& sys, LiftedPoint p) {
    sys.check_theta(p.theta);
    const Table& tab = sys.table();
    const PlaneCurve& curve = tab.curve();
    const ArcLengthTable& arc = tab.arclength();

    const double t0 = arc.t_of_phi(mod_two_pi(p.phi));
    const Vec2 p1 = curve.d1(t0);
    const double sp0 = norm(p1);
    const Vec2 v = rotate((1.0 / sp0) * p1, p.theta);
    const double sin_th = std::sin(p.theta);

    // Search backwards along the boundary for obtuse departures so that the
    // hit is always measured from the near side of the start point.
    const double dir = p.theta <= 0.5 * kPi ? 1.0 : -1.0;

    // Signed side of the boundary point t0 + dir*u relative to the chord line,
    // divided by u(2pi - u) to remove the two trivial zeros at u = 0 and 2pi.
    // Negative before the hit and positive after it.
    auto g = [&](double u) -> std::pair<double, double> {
        if (u <= 0.0) return {-sp0 * sin_th / kTwoPi, 0.0};
        if (u >= kTwoPi) return {sp0 * sin_th / kTwoPi, 0.0};
        const double n0 = dir * cross(v, curve.chord_from(t0, dir * u));
        const double n1 = cross(v, curve.d1_from(t0, dir * u));
        const double q = u * (kTwoPi - u);
        const double q1 = kTwoPi - 2.0 * u;
        return {n0 / q, (n1 * q - n0 * q1) / (q * q)};
    };

    constexpr int kSectors = 64;
    int lo = 0, hi = kSectors;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        if (g(kTwoPi * mid / kSectors).first < 0.0) lo = mid; else hi = mid;
    }
    const double ulo = kTwoPi * lo / kSectors;
    const double uhi = kTwoPi * hi / kSectors;

    // glancing seed: arc of length 2 theta / curvature
    const double side = std::min(p.theta, kPi - p.theta);
    const double seed = 2.0 * std::sin(side) / (curve.raw_curvature(t0) * sp0);

    double u = 0.0;
    try {
        u = safeguarded_newton(g, ulo, uhi, seed, 1e-15 * uhi);
    } catch (const NumericError& e) {
        throw NumericError(std::string("billiard step: ") + e.what(), p.phi, p.theta);
    }

    ChordHit hit;
    hit.t0 = t0;
    hit.t1 = dir > 0 ? t0 + u : t0 + kTwoPi - u;
    const Vec2 t_bar = unit(curve.d1_from(t0, dir * u));
    const double theta_bar = std::atan2(-cross(t_bar, v), dot(t_bar, v));
    if (!(theta_bar > 0.0 && theta_bar < kPi)) {
        throw NumericError("billiard step: arrival angle outside (0, pi)", p.phi, p.theta);
    }
    const double sigma = tab.scale();
    const double incr = dir > 0 ? sigma * arc.arclength_between(t0, t0 + u)
                                : kTwoPi - sigma * arc.arclength_between(t0 - u, t0);
    hit.out = {p.phi + incr, theta_bar};
    hit.length = sigma * norm(curve.chord_from(t0, dir * u));
    return hit;
}

LiftedPoint billiard_step(const CoinSystem& sys, LiftedPoint p) { return billiard_hit(sys, p).out; }

LiftedPoint billiard_inverse(const CoinSystem& sys, LiftedPoint p) {
    const LiftedPoint q = involution(billiard_step(sys, involution(p)));
    return {q.phi - kTwoPi, q.theta};
}

LiftedPoint shift_step(const CoinSystem& sys, LiftedPoint p) {
    sys.check_theta(p.theta);
    return {p.phi + sys.ell() * std::cos(p.theta) / std::sin(p.theta), p.theta};
}

LiftedPoint shift_inverse(const CoinSystem& sys, LiftedPoint p) {
    sys.check_theta(p.theta);
    return {p.phi - sys.ell() * std::cos(p.theta) / std::sin(p.theta), p.theta};
}

LiftedPoint coin_step(const CoinSystem& sys, LiftedPoint p) {
    return shift_step(sys, billiard_step(sys, p));
}

LiftedPoint coin_inverse(const CoinSystem& sys, LiftedPoint p) {
    return billiard_inverse(sys, shift_inverse(sys, p));
}

LiftedPoint apply_map(const CoinSystem& sys, MapKind map, LiftedPoint p) {
    switch (map) {
        case MapKind::billiard: return billiard_step(sys, p);
        case MapKind::shift: return shift_step(sys, p);
        default: return coin_step(sys, p);
    }
}

Mat2 jacobian(const CoinSystem& sys, MapKind map, LiftedPoint p, double h) {
    if (h <= 0.0) h = 1e-6 * std::max(1.0, std::abs(p.theta));
    if (!(p.theta - h > sys.theta_min() && p.theta + h < kPi - sys.theta_min())) {
        throw DomainError("jacobian: point within one step of the guard band");
    }
    if (p.phi + 0.5 * h == p.phi || p.theta + 0.5 * h == p.theta) {
        throw NumericError("jacobian: finite-difference step underflows", p.phi, p.theta);
    }
    auto central = [&](double step) {
        const LiftedPoint fp = apply_map(sys, map, {p.phi + step, p.theta});
        const LiftedPoint fm = apply_map(sys, map, {p.phi - step, p.theta});
        const LiftedPoint gp = apply_map(sys, map, {p.phi, p.theta + step});
        const LiftedPoint gm = apply_map(sys, map, {p.phi, p.theta - step});
        const double inv = 0.5 / step;
        return Mat2{(fp.phi - fm.phi) * inv, (gp.phi - gm.phi) * inv,
                    (fp.theta - fm.theta) * inv, (gp.theta - gm.theta) * inv};
    };
    const Mat2 d1 = central(h);
    const Mat2 d2 = central(0.5 * h);
    auto rich = [](double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; };
    return {rich(d1.a11, d2.a11), rich(d1.a12, d2.a12), rich(d1.a21, d2.a21),
            rich(d1.a22, d2.a22)};
}

namespace {

Mat2 shift_jacobian(double ell, double theta) {
    const double s = std::sin(theta);
    return {1.0, -ell / (s * s), 0.0, 1.0};
}

Mat2 billiard_jacobian(const CoinSystem& sys, LiftedPoint p, const ChordHit& hit) {
    const PlaneCurve& curve = sys.table().curve();
    const double sigma = sys.table().scale();
    const double k0 = curve.raw_curvature(hit.t0) / sigma;
    const double k1 = curve.raw_curvature(hit.t1) / sigma;
    const double tau = hit.length;
    const double s0 = std::sin(p.theta);
    const double s1 = std::sin(hit.out.theta);
    return {(k0 * tau - s0) / s1, tau / s1, (k0 * k1 * tau - k0 * s1 - k1 * s0) / s1,
            (k1 * tau - s1) / s1};
}

}  // namespace

std::pair<LiftedPoint, Mat2> coin_step_with_jacobian(const CoinSystem& sys, LiftedPoint p) {
    const ChordHit hit = billiard_hit(sys, p);
    const LiftedPoint q = shift_step(sys, hit.out);
    return {q, shift_jacobian(sys.ell(), hit.out.theta) * billiard_jacobian(sys, p, hit)};
}

Mat2 analytic_jacobian(const CoinSystem& sys, MapKind map, LiftedPoint p) {
    switch (map) {
        case MapKind::shift:
            sys.check_theta(p.theta);
            return shift_jacobian(sys.ell(), p.theta);
        case MapKind::billiard: return billiard_jacobian(sys, p, billiard_hit(sys, p));
        default: return coin_step_with_jacobian(sys, p).second;
    }
}

OrbitRecord iterate(const CoinSystem& sys, LiftedPoint p, int n, bool with_jacobians) {
    if (n < 0) throw DomainError("iterate: negative step count");
    OrbitRecord rec;
    rec.initial = p;
    rec.points.reserve(static_cast<std::size_t>(n) + 1);
    rec.points.push_back(p);
    if (with_jacobians) rec.jacobians.reserve(n);
    LiftedPoint cur = p;
    for (int k = 0; k < n; ++k) {
        try {
            if (with_jacobians) {
                auto [next, jac] = coin_step_with_jacobian(sys, cur);
                rec.jacobians.push_back(jac);
                cur = next;
            } else {
                cur = coin_step(sys, cur);
            }
            sys.check_theta(cur.theta);
        } catch (const std::exception& e) {
            if (with_jacobians && rec.jacobians.size() > rec.points.size() - 1) rec.jacobians.pop_back();
            rec.partial = true;
            rec.error = e.what();
            break;
        }
        rec.points.push_back(cur);
    }
    return rec;
}

}  // namespace coinlab
