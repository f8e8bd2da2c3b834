#include "coinlab/geometry.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace coinlab {

namespace {

class EllipseShape final : public CurveShape {
public:
    EllipseShape(double a, double b, bool unit) : a_(a), b_(b), unit_(unit) {}

    Vec2 point(double t) const override { return {a_ * std::cos(t), b_ * std::sin(t)}; }

    Vec2 derivative(int order, double t) const override {
        const double c = std::cos(t), s = std::sin(t);
        switch (((order % 4) + 4) % 4) {
            case 0: return {a_ * c, b_ * s};
            case 1: return {-a_ * s, b_ * c};
            case 2: return {-a_ * c, -b_ * s};
            default: return {a_ * s, -b_ * c};
        }
    }

    // angle-addition forms: everything is expressed in the frame at t0, and
    // cos(u) - 1 is taken as -2 sin^2(u/2) to avoid cancellation for small u
    Vec2 chord_from(double t0, double u) const override {
        const double c0 = std::cos(t0), s0 = std::sin(t0);
        const double sh = std::sin(0.5 * u);
        const double vers = 2.0 * sh * sh;
        const double su = std::sin(u);
        return {a_ * (-c0 * vers - s0 * su), b_ * (-s0 * vers + c0 * su)};
    }

    Vec2 d1_from(double t0, double u) const override {
        const double c0 = std::cos(t0), s0 = std::sin(t0);
        const double cu = std::cos(u), su = std::sin(u);
        return {-a_ * (s0 * cu + c0 * su), b_ * (c0 * cu - s0 * su)};
    }

    bool unit_speed() const override { return unit_; }

    std::string describe() const override {
        if (unit_) return "circle";
        std::ostringstream os;
        os.precision(17);
        os << "ellipse(a=" << a_ << ", b=" << b_ << ")";
        return os.str();
    }

private:
    double a_, b_;
    bool unit_;
};

using Gauss8 = boost::math::quadrature::gauss<double, 8>;
using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;

}  // namespace

PlaneCurve::PlaneCurve(std::shared_ptr<const CurveShape> shape, CurveKind kind, double a, double b)
    : shape_(std::move(shape)), kind_(kind), a_(a), b_(b) {}

double PlaneCurve::raw_curvature(double t) const {
    const Vec2 v = d1(t);
    const double sp = norm(v);
    return cross(v, d2(t)) / (sp * sp * sp);
}

PlaneCurve build_curve(CurveKind kind, double a, double b) {
    if (kind == CurveKind::circle) {
        return PlaneCurve(std::make_shared<EllipseShape>(1.0, 1.0, true), kind, 1.0, 1.0);
    }
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("ellipse axes must be positive and finite");
    }
    if (a < b) throw DomainError("ellipse requires a >= b (a is the semimajor axis)");
    return PlaneCurve(std::make_shared<EllipseShape>(a, b, false), kind, a, b);
}

CurveKind parse_curve_kind(const std::string& name) {
    if (name == "circle" || name == "disc") return CurveKind::circle;
    if (name == "ellipse") return CurveKind::ellipse;
    throw DomainError("unknown table kind '" + name + "'");
}

// ---------------------------------------------------------------------------

ArcLengthTable::ArcLengthTable(const PlaneCurve& curve, int n, double tol) {
    if (n < 64) throw DomainError("arclength table needs at least 64 nodes");
    if (!(tol > 0.0)) throw DomainError("arclength tolerance must be positive");

    auto d = std::make_shared<Data>(Data{curve, n, tol, 0.0, 1.0, 0.0, {}, {}, {}, {}});
    d->h = kTwoPi / n;
    d->t.resize(n + 1);
    d->s.resize(n + 1);
    for (int i = 0; i <= n; ++i) d->t[i] = d->h * i;
    d->t[n] = kTwoPi;

    if (curve.unit_speed()) {
        d->s = d->t;
        d->length = kTwoPi;
        d->sigma = 1.0;
        d->inv_t = d->t;
        d->inv_dt.assign(n + 1, 1.0);
        d_ = std::move(d);
        return;
    }

    auto speed = [&curve](double t) { return curve.speed(t); };
    d->s[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        double err = 0.0, l1 = 0.0;
        const double piece = Kronrod::integrate(speed, d->t[i], d->t[i + 1], 15, tol, &err, &l1);
        if (!(err <= tol * std::max(l1, 1e-300)) && err > 1e-15) {
            throw NumericError("arclength quadrature did not converge on node interval " +
                               std::to_string(i));
        }
        d->s[i + 1] = d->s[i] + piece;
    }
    d->length = d->s[n];
    d->sigma = kTwoPi / d->length;
    d_ = d;

    // uniform-arclength inverse nodes, solved against the forward table
    d->inv_t.resize(n + 1);
    d->inv_dt.resize(n + 1);
    d->inv_t[0] = 0.0;
    d->inv_t[n] = kTwoPi;
    std::size_t k = 0;
    for (int j = 1; j < n; ++j) {
        const double target = d->length * j / n;
        while (k + 1 < d->s.size() && d->s[k + 1] < target) ++k;
        double lo = d->t[k], hi = d->t[k + 1];
        double t = lo + (hi - lo) * (target - d->s[k]) / (d->s[k + 1] - d->s[k]);
        for (int it = 0; it < 60; ++it) {
            const double f = d->s[k] + local_arclength(d->t[k], t) - target;
            if (f > 0.0) hi = t; else lo = t;
            double next = t - f / curve.speed(t);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            const double step = std::abs(next - t);
            t = next;
            if (step <= 1e-16 * kTwoPi) break;
        }
        d->inv_t[j] = t;
    }
    for (int j = 0; j <= n; ++j) d->inv_dt[j] = 1.0 / curve.speed(d->inv_t[j]);
}

double ArcLengthTable::local_arclength(double t0, double t1) const {
    const PlaneCurve& c = d_->curve;
    return Gauss8::integrate([&c](double t) { return c.speed(t); }, t0, t1);
}

double ArcLengthTable::arclength(double t) const {
    if (d_->curve.unit_speed()) return t;
    const double k = std::floor(t / kTwoPi);
    const double r = t - kTwoPi * k;
    int i = static_cast<int>(r / d_->h);
    i = std::clamp(i, 0, d_->n - 1);
    return k * d_->length + d_->s[i] + local_arclength(d_->t[i], r);
}

double ArcLengthTable::arclength_between(double t0, double t1) const {
    if (d_->curve.unit_speed()) return t1 - t0;
    if (std::abs(t1 - t0) <= d_->h) return local_arclength(t0, t1);
    const double k = std::floor(t0 / kTwoPi);
    const double shift = kTwoPi * k;
    return arclength(t1 - shift) - arclength(t0 - shift);
}

double ArcLengthTable::reduced_t_of_s(double s) const {
    const Data& d = *d_;
    const double hs = d.length / d.n;
    int j = std::clamp(static_cast<int>(s / hs), 0, d.n - 1);

    // cubic Hermite seed from the inverse nodes
    const double u = (s - hs * j) / hs;
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u;
    const double h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
    double t = h00 * d.inv_t[j] + h10 * hs * d.inv_dt[j] + h01 * d.inv_t[j + 1] +
               h11 * hs * d.inv_dt[j + 1];

    double lo = d.inv_t[j], hi = d.inv_t[j + 1];
    if (!(t >= lo && t <= hi)) t = 0.5 * (lo + hi);
    double last = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 60; ++it) {
        const double f = arclength(t) - s;
        if (f > 0.0) hi = t; else lo = t;
        double next = t - f / d.curve.speed(t);
        if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - t);
        t = next;
        if (step <= 1e-2 * d.tol || step >= last || hi - lo <= 1e-15) return t;
        last = step;
    }
    throw NumericError("arclength inversion did not converge");
}

double ArcLengthTable::t_of_phi(double phi) const {
    if (d_->curve.unit_speed()) return phi;
    const double k = std::floor(phi / kTwoPi);
    const double r = phi - kTwoPi * k;
    const double s = std::min(r / d_->sigma, d_->length);
    return kTwoPi * k + reduced_t_of_s(s);
}

// ---------------------------------------------------------------------------

CurvatureProfile::CurvatureProfile(PlaneCurve curve, ArcLengthTable table)
    : curve_(std::move(curve)), table_(std::move(table)) {}

RhoValues CurvatureProfile::at_t(double t) const {
    const Vec2 p1 = curve_.d1(t), p2 = curve_.d2(t), p3 = curve_.d3(t), p4 = curve_.d4(t);
    const double sigma = table_.scale();

    // raw radius r = |p'|^3 / (p' x p''), differentiated twice in t
    const double v = dot(p1, p1);
    const double v1 = 2.0 * dot(p1, p2);
    const double v2 = 2.0 * (dot(p2, p2) + dot(p1, p3));
    const double sp = std::sqrt(v);
    const double num = v * sp;
    const double num1 = 1.5 * sp * v1;
    const double num2 = 0.75 * v1 * v1 / sp + 1.5 * sp * v2;
    const double den = cross(p1, p2);
    const double den1 = cross(p1, p3);
    const double den2 = cross(p2, p3) + cross(p1, p4);

    const double r = num / den;
    const double r1 = (num1 * den - num * den1) / (den * den);
    const double r2 = (num2 * den - num * den2) / (den * den) -
                      2.0 * den1 * (num1 * den - num * den1) / (den * den * den);
    const double sp1 = v1 / (2.0 * sp);

    RhoValues out;
    out.rho = sigma * r;
    out.d1 = r1 / sp;
    out.d2 = (r2 / sp - r1 * sp1 / (sp * sp)) / (sigma * sp);
    return out;
}

namespace {

template <class F>
std::pair<double, double> refine_minimum(F&& f, double lo, double hi) {
    const int bits = std::numeric_limits<double>::digits / 2;
    std::uintmax_t iters = 200;
    return boost::math::tools::brent_find_minima(f, lo, hi, bits, iters);
}

}  // namespace

RhoExtrema min_rho_dd(const CurvatureProfile& profile, int grid) {
    if (grid < 1024) throw DomainError("extremum scan grid must be at least 1024");
    RhoExtrema ex;
    std::vector<double> d1(grid), d2(grid);
    for (int i = 0; i < grid; ++i) {
        const RhoValues r = profile.at_phi(kTwoPi * i / grid);
        d1[i] = r.d1;
        d2[i] = r.d2;
    }
    double amax = 0.0;
    for (int i = 0; i < grid; ++i) amax = std::max({amax, std::abs(d1[i]), std::abs(d2[i])});
    if (profile.curve().is_disc() || amax < 1e-12) {
        ex.disc = true;
        return ex;
    }

    const double step = kTwoPi / grid;
    auto refine = [&](const std::vector<double>& vals, double sign, auto&& eval) {
        int best = 0;
        for (int i = 1; i < grid; ++i) {
            if (sign * vals[i] < sign * vals[best]) best = i;
        }
        const double c = step * best;
        auto [x, fx] = refine_minimum([&](double phi) { return sign * eval(phi); }, c - step, c + step);
        if (sign * vals[best] < fx) return std::pair{mod_two_pi(c), vals[best]};
        return std::pair{mod_two_pi(x), sign * fx};
    };
    auto ev2 = [&](double phi) { return profile.rho_d2(phi); };
    auto ev1 = [&](double phi) { return profile.rho_d1(phi); };
    std::tie(ex.argmin_d2, ex.min_d2) = refine(d2, 1.0, ev2);
    std::tie(ex.argmax_d2, ex.max_d2) = refine(d2, -1.0, ev2);
    std::tie(ex.argmax_d1, ex.max_d1) = refine(d1, -1.0, ev1);
    return ex;
}

// ---------------------------------------------------------------------------

Table::Table(const PlaneCurve& curve, int nodes, double tol, int extremum_grid)
    : profile_(curve, ArcLengthTable(curve, nodes, tol)),
      extrema_(min_rho_dd(profile_, extremum_grid)) {}

Vec2 Table::gamma(double phi) const {
    return scale() * curve().point(arclength().t_of_phi(phi));
}

std::shared_ptr<const Table> make_table(CurveKind kind, double a, double b) {
    return std::make_shared<const Table>(build_curve(kind, a, b));
}

}  // namespace coinlab
