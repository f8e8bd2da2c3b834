// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "coinlab/analysis.hpp"
#include "coinlab/expansions.hpp"
#include "coinlab/variational.hpp"

using namespace coinlab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* spec, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, spec, a);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 12 x 12 lattice over [0, 2pi) x (0.1, pi - 0.1), row-major in theta
std::vector<LiftedPoint> portrait_lattice() {
    std::vector<LiftedPoint> ics;
    for (int j = 0; j < 12; ++j) {
        for (int i = 0; i < 12; ++i) ics.push_back({kTwoPi * i / 12, 0.1 + (kPi - 0.2) * (j + 0.5) / 12});
    }
    return ics;
}

Outcome circle_integrability() {
    const auto t0 = std::chrono::steady_clock::now();
    const CoinSystem sys = make_system(CurveKind::circle, 1, 1, 1.3);
    double drift = 0.0;
    for (const LiftedPoint& ic : portrait_lattice()) {
        LiftedPoint p = ic;
        for (int k = 0; k < 10000; ++k) {
            p = coin_step(sys, p);
            drift = std::max(drift, std::abs(p.theta - ic.theta));
        }
    }
    const double dt = seconds_since(t0);
    return {drift < 1e-10 && dt < 5.0,
            "max theta drift " + fmt("%.2e", drift) + " (< 1e-10), " + fmt("%.2f", dt) + " s (< 5 s)"};
}

Outcome circle_closed_form() {
    double worst = 0.0;
    for (double ell : {0.5, 1.3, 2.0, 3.0}) {
        const CoinSystem sys = make_system(CurveKind::circle, 1, 1, ell);
        for (int i = 0; i < 100; ++i) {
            for (int j = 0; j < 100; ++j) {
                const double phi = kTwoPi * i / 100, th = kPi * (j + 0.5) / 100;
                const LiftedPoint q = coin_step(sys, {phi, th});
                const double phi_cf = phi + 2 * th + ell * std::cos(th) / std::sin(th);
                worst = std::max({worst, std::abs(q.phi - phi_cf), std::abs(q.theta - th)});
            }
        }
    }
    return {worst < 1e-9, "max deviation " + fmt("%.2e", worst) + " (< 1e-9)"};
}

// The twist is taken from the chord-geometry Jacobian, not the disc's closed
// form, so the check exercises the general stepping code.
Outcome disc_twist() {
    const auto disc = make_table(CurveKind::circle);
    constexpr double kGuard = 1e-3;
    auto a12 = [&](double ell) {
        const CoinSystem sys(disc, ell);
        return [sys](double th) { return analytic_jacobian(sys, MapKind::coin, {0.0, th}).a12; };
    };
    const auto z1 = find_zeros(a12(1.0), kGuard, kPi - kGuard, 1000);
    const double s = std::asin(std::sqrt(0.5));
    bool ok1 = z1.size() == 2 && std::abs(z1[0] - s) < 1e-6 && std::abs(z1[1] - (kPi - s)) < 1e-6;
    double e1 = z1.size() == 2 ? std::max(std::abs(z1[0] - s), std::abs(z1[1] - (kPi - s))) : 1.0;

    const auto z2 = find_zeros(a12(2.0), kGuard, kPi - kGuard, 1000);
    const double e2 = z2.size() == 1 ? std::abs(z2[0] - kPi / 2) : 1.0;
    const bool ok2 = z2.size() == 1 && e2 < 1e-6;

    const CoinSystem three(disc, 3.0);
    double mx = -1e300;
    for (int i = 0; i < 1000; ++i) {
        const double th = kGuard + (kPi - 2 * kGuard) * i / 999;
        mx = std::max(mx, analytic_jacobian(three, MapKind::coin, {0.0, th}).a12);
        mx = std::max(mx, jacobian(three, MapKind::coin, {0.0, th}).a12);
    }
    const bool ok3 = mx < 0.0;
    return {ok1 && ok2 && ok3, "ell=1: " + std::to_string(z1.size()) + " zeros, err " + fmt("%.1e", e1) +
                                   "; ell=2: " + std::to_string(z2.size()) + " zero, err " + fmt("%.1e", e2) +
                                   "; ell=3: max " + fmt("%.3g", mx) + " (< 0)"};
}

Outcome reversibility_symplecticity() {
    const CoinSystem sys = make_system(CurveKind::ellipse, 1.4, 1.0, 1.3);
    std::mt19937_64 rng(20240611);
    double rev = 0.0, sym = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const LiftedPoint p{uniform(rng, 0.0, kTwoPi), uniform(rng, 0.01, kPi - 0.01)};
        const LiftedPoint back = involution(billiard_step(sys, involution(billiard_step(sys, p))));
        rev = std::max({rev, std::abs(back.phi - kTwoPi - p.phi), std::abs(back.theta - p.theta)});
        const double th_bar = coin_step(sys, p).theta;
        const Mat2 J = jacobian(sys, MapKind::coin, p);
        sym = std::max(sym, std::abs(std::abs(J.det()) * std::sin(th_bar) / std::sin(p.theta) - 1.0));
    }
    return {rev < 1e-9 && sym < 1e-6,
            "I T1 I T1 - id " + fmt("%.2e", rev) + " (< 1e-9), det ratio - 1 " + fmt("%.2e", sym) + " (< 1e-6)"};
}

Outcome expansion_orders() {
    const CoinSystem sys = make_system(CurveKind::ellipse, 1.4, 1.0, 1.3);
    const CurvatureProfile& prof = sys.table().profile();
    double s1p = 1e9, s1t = 1e9, sp = 1e9, st = 1e9;
    for (double phi : {0.3, 1.1, 2.0, 3.7, 5.2}) {
        std::vector<double> th, r1p, r1t, rp, rt;
        for (int k = 0; k < 6; ++k) {
            const double t = 0.05 * std::ldexp(1.0, -k);
            const LiftedPoint b = billiard_step(sys, {phi, t});
            const LiftedPoint c = coin_step(sys, {phi, t});
            const ExpansionPrediction e1 = predict_T1(prof, phi, t);
            const ExpansionPrediction e = predict_T(prof, 1.3, phi, t);
            th.push_back(t);
            r1p.push_back(std::abs(b.phi - e1.phi));
            r1t.push_back(std::abs(b.theta - e1.theta));
            rp.push_back(std::abs(c.phi - e.phi));
            rt.push_back(std::abs(c.theta - e.theta));
        }
        s1p = std::min(s1p, loglog_slope(th, r1p));
        s1t = std::min(s1t, loglog_slope(th, r1t));
        sp = std::min(sp, loglog_slope(th, rp));
        st = std::min(st, loglog_slope(th, rt));
    }
    return {s1t >= 2.7 && st >= 2.7 && s1p >= 1.8 && sp >= 0.8,
            "slopes theta(T1) " + fmt("%.2f", s1t) + ", theta(T) " + fmt("%.2f", st) + " (>= 2.7); phi(T1) " +
                fmt("%.2f", s1p) + " (>= 1.8); phi(T) " + fmt("%.2f", sp) + " (>= 0.8)"};
}

Outcome generating_functions() {
    const CoinSystem sys = make_system(CurveKind::ellipse, 1.4, 1.0, 1.3);
    const DeltaWindow w{1e-4, 0.5, 32};
    std::mt19937_64 rng(7);
    double ident = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double phi = uniform(rng, 0.0, kTwoPi), th = uniform(rng, 0.02, 0.2);
        const LiftedPoint q = coin_step(sys, {phi, th});
        const GeneratingEval h = h_composite(sys, phi, q.phi, w);
        ident = std::max({ident, std::abs(h.d1 - std::cos(th)), std::abs(h.d2 + std::cos(q.theta))});
    }
    // orbit triples start higher, and theta wanders along the orbit
    const DeltaWindow wt{1e-4, 0.8, 32};
    double h_orbit = 0.0, h_pert = 1e300;
    for (int k = 0; k < 200; ++k) {
        const double phi = uniform(rng, 0.0, kTwoPi), th = uniform(rng, 0.3, 0.4);
        const OrbitRecord o = iterate(sys, {phi, th}, 2);
        const double x0 = o.points[0].phi, x1 = o.points[1].phi, x2 = o.points[2].phi;
        h_orbit = std::max(h_orbit, std::abs(orbit_residual_H(sys, x0, x1, x2, wt)));
        h_pert = std::min(h_pert, std::abs(orbit_residual_H(sys, x0, x1 + 1e-2, x2, wt)));
    }
    return {ident < 1e-6 && h_orbit < 1e-6 && h_pert > 1e-4,
            "identities " + fmt("%.2e", ident) + " (< 1e-6), orbit |H| " + fmt("%.2e", h_orbit) +
                " (< 1e-6), perturbed min |H| " + fmt("%.2e", h_pert) + " (> 1e-4)"};
}

Outcome vertical_graphs() {
    const CoinSystem sys = make_system(CurveKind::ellipse, 1.4, 1.0, 1.3);
    int viol = 0;
    double res = 0.0;
    for (int m = 15; m <= 40; ++m) {
        const GraphCheckReport r = graph_checks(sys, m);
        viol += r.residual_violations + r.ordering_violations + r.gap_violations + r.lift_violations;
        res = std::max(res, r.max_residual);
    }
    return {viol == 0 && res < 1e-10,
            "m=15..40: " + std::to_string(viol) + " violations, max residual " + fmt("%.2e", res) + " (< 1e-10)"};
}

Outcome nonexistence() {
    const CoinSystem base = make_system(CurveKind::ellipse, 2.0, 1.0, 1.0);
    const double l0 = ell_zero(base.table());
    const CoinSystem sys = base.with_ell(2 * l0);
    const double delta = 0.02 * std::min(1.0, sys.ell() - l0);
    StripSpec spec;
    spec.theta_lo = 0.0;
    spec.theta_hi = delta;
    spec.iterations = 5000;
    const StripSurvey s = kam_strip_scan(sys, spec);
    return {s.curves == 0 && s.ics.size() == 200, "ell_0 " + fmt("%.6f", l0) + ", delta " + fmt("%.5f", delta) +
                                                      ": " + std::to_string(s.curves) + " of " +
                                                      std::to_string(s.ics.size()) + " orbits classified curve"};
}

Outcome existence() {
    const CoinSystem sys = make_system(CurveKind::ellipse, 1.2, 1.0, 0.05);
    StripSpec spec;
    spec.theta_lo = 0.025;
    spec.theta_hi = 0.05;
    spec.keep_orbits = true;
    const StripSurvey s = kam_strip_scan(sys, spec);
    int lip_ok = 0;
    for (std::size_t k = 0; k < s.classes.size(); ++k) {
        if (s.classes[k].label != OrbitLabel::curve) continue;
        try {
            lip_ok += lipschitz_check(sys, s.orbits[k]).slope_ok;
        } catch (const DomainError&) {
        }
    }
    return {s.curve_fraction >= 0.5 && lip_ok == s.curves,
            std::to_string(s.curves) + " of " + std::to_string(s.ics.size()) + " curves (>= 50%), " +
                std::to_string(lip_ok) + " pass the Lipschitz bound"};
}

Outcome figure_reproduction() {
    const auto ics = portrait_lattice();
    // nearest lattice points to the minor-axis two-periodic point (pi/2, pi/2): a tie
    const std::size_t minor[] = {5 * 12 + 3, 6 * 12 + 3};
    std::string detail;
    double frac_12 = 0.0, frac_4 = 0.0;
    bool chaotic_disc_zero = false, islands_ok = true;
    for (double a : {1.0, 1.2, 1.4, 1.6, 1.8, 2.0, 3.0, 4.0}) {
        const CoinSystem sys = make_system(CurveKind::ellipse, a, 1.0, 1.3);
        std::vector<OrbitClass> cls(ics.size());
        for_each_index(ics.size(), [&](std::size_t k) { cls[k] = classify(sys, ics[k], 2000); });
        int chaotic = 0;
        for (const OrbitClass& c : cls) chaotic += c.label == OrbitLabel::chaotic;
        const double frac = chaotic / 144.0;
        if (a == 1.0) chaotic_disc_zero = chaotic == 0;
        if (a == 1.2) frac_12 = frac;
        if (a == 4.0) frac_4 = frac;
        if (a > 1.0) {
            for (std::size_t k : minor) islands_ok = islands_ok && cls[k].label == OrbitLabel::island;
        }
        detail += fmt("a=%g:", a) + std::to_string(chaotic) + " ";
    }
    const bool ok = chaotic_disc_zero && frac_4 - frac_12 >= 0.30 && islands_ok;
    return {ok, "chaotic of 144 " + detail + "| a=4 minus a=1.2: " + fmt("%.1f", 100 * (frac_4 - frac_12)) +
                    " pts (>= 30); minor-axis ICs island: " + (islands_ok ? "yes" : "no")};
}

Outcome island_measure() {
    const CoinSystem sys = make_system(CurveKind::ellipse, 1.4, 1.0, 1.3);
    std::vector<double> ms, bounds;
    bool ok = true;
    std::string detail;
    for (int m : {15, 20, 30}) {
        const IslandReport r = island_scan(sys, m);
        ok = ok && r.area >= r.bound;
        ms.push_back(m);
        bounds.push_back(r.bound);
        detail += "m=" + std::to_string(m) + " area " + fmt("%.3e", r.area) + " >= " + fmt("%.3e", r.bound) + "; ";
    }
    const double slope = loglog_slope(ms, bounds);
    ok = ok && slope >= -2.3 && slope <= -1.7;
    return {ok, detail + "bound exponent " + fmt("%.3f", slope) + " in [-2.3, -1.7]"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"circle integrability", circle_integrability},
        {"circle closed form", circle_closed_form},
        {"disc twist structure", disc_twist},
        {"reversibility and symplecticity", reversibility_symplecticity},
        {"expansion orders", expansion_orders},
        {"generating functions", generating_functions},
        {"vertically mapped graphs", vertical_graphs},
        {"nonexistence above ell_0", nonexistence},
        {"existence at small height", existence},
        {"figure reproduction", figure_reproduction},
        {"island measure bound", island_measure},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s [%2zu] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
