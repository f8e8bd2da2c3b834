#include "coinlab/variational.hpp"

#include <cmath>

namespace coinlab {

GeneratingEval h1(const Table& table, double phi, double phi_bar) {
    if (torus_distance(phi, phi_bar) < 1e-14) throw DomainError("h1: coincident boundary points");
    const ArcLengthTable& arc = table.arclength();
    const PlaneCurve& curve = table.curve();
    const double t0 = arc.t_of_phi(phi);
    const double t1 = arc.t_of_phi(phi_bar);
    const Vec2 chord = table.scale() * curve.chord(t0, t1);
    const double len = norm(chord);
    const Vec2 u = (1.0 / len) * chord;
    const Vec2 d0 = curve.d1(t0), d1 = curve.d1(t1);
    return {-len, dot(u, (1.0 / norm(d0)) * d0), -dot(u, (1.0 / norm(d1)) * d1)};
}

GeneratingEval h2(double ell, double phi, double phi_bar) {
    const double d = phi_bar - phi;
    const double r = std::hypot(ell, d);
    return {-r, d / r, -d / r};
}

Connection connect(const CoinSystem& sys, double phi0, double phi1, const DeltaWindow& w) {
    if (!(w.theta_lo > 0.0 && w.theta_lo < w.theta_hi && w.samples >= 2)) {
        throw DomainError("connect: malformed theta window");
    }
    auto image = [&](double th) { return coin_step(sys, {phi0, th}).phi; };

    // monotone (decreasing) on a log-spaced sample of the window
    double prev = image(w.theta_lo);
    const double f_lo = prev - phi1;
    const double ratio = std::log(w.theta_hi / w.theta_lo);
    for (int i = 1; i < w.samples; ++i) {
        const double th = w.theta_lo * std::exp(ratio * i / (w.samples - 1));
        const double cur = image(th);
        if (!(cur < prev)) throw NotInDeltaError("not in Delta: lifted map not monotone in the theta window");
        prev = cur;
    }
    const double f_hi = prev - phi1;
    if (!(f_lo >= 0.0 && f_hi <= 0.0)) {
        throw NotInDeltaError("not in Delta: target gap outside the theta window");
    }

    auto f = [&](double th) -> std::pair<double, double> {
        auto [q, jac] = coin_step_with_jacobian(sys, {phi0, th});
        return {q.phi - phi1, jac.a12};
    };
    double seed = sys.ell() / std::max(phi1 - phi0, 1e-300);
    const double theta0 = safeguarded_newton(f, w.theta_lo, w.theta_hi, seed, 1e-15);

    const LiftedPoint mid = billiard_step(sys, {phi0, theta0});
    return {theta0, mid.phi, mid.theta};
}

namespace {

double h_value(const CoinSystem& sys, double phi, double phi_bar, const DeltaWindow& w) {
    const Connection c = connect(sys, phi, phi_bar, w);
    return h1(sys.table(), phi, c.phi_mid).value + h2(sys.ell(), c.phi_mid, phi_bar).value;
}

}  // namespace

GeneratingEval h_composite(const CoinSystem& sys, double phi, double phi_bar,
                           const DeltaWindow& w, double step) {
    GeneratingEval out;
    out.value = h_value(sys, phi, phi_bar, w);
    out.d1 = (h_value(sys, phi + step, phi_bar, w) - h_value(sys, phi - step, phi_bar, w)) / (2 * step);
    out.d2 = (h_value(sys, phi, phi_bar + step, w) - h_value(sys, phi, phi_bar - step, w)) / (2 * step);
    return out;
}

double orbit_residual_H(const CoinSystem& sys, double x0, double x1, double x2,
                        const DeltaWindow& w, double step) {
    const double d2 = (h_value(sys, x0, x1 + step, w) - h_value(sys, x0, x1 - step, w)) / (2 * step);
    const double d1 = (h_value(sys, x1 + step, x2, w) - h_value(sys, x1 - step, x2, w)) / (2 * step);
    return d2 + d1;
}

double orbit_residual_H_cosine(const CoinSystem& sys, double x0, double x1, double x2,
                               const DeltaWindow& w) {
    const Connection in = connect(sys, x0, x1, w);
    const Connection out = connect(sys, x1, x2, w);
    return std::cos(out.theta0) - std::cos(in.theta_mid);
}

HGradient orbit_residual_gradient(const CoinSystem& sys, double x0, double x1, double x2,
                                  const DeltaWindow& w, double step) {
    auto H = [&](double a, double b, double c) { return orbit_residual_H_cosine(sys, a, b, c, w); };
    const double inv = 0.5 / step;
    return {(H(x0 + step, x1, x2) - H(x0 - step, x1, x2)) * inv,
            (H(x0, x1 + step, x2) - H(x0, x1 - step, x2)) * inv,
            (H(x0, x1, x2 + step) - H(x0, x1, x2 - step)) * inv};
}

}  // namespace coinlab
