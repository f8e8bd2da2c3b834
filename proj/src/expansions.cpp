#include "coinlab/expansions.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace coinlab {

ExpansionPrediction predict_T1(const CurvatureProfile& profile, double phi, double theta) {
    const RhoValues r = profile.at_phi(phi);
    return {phi + 2.0 * r.rho * theta, theta - (2.0 / 3.0) * r.d1 * theta * theta, 2, 3};
}

ExpansionPrediction predict_T(const CurvatureProfile& profile, double ell, double phi,
                              double theta) {
    ExpansionPrediction e = predict_T1(profile, phi, theta);
    if (!(e.theta > 0.0)) {
        throw DomainError("predict_T: quadratic term drives theta_bar to " + std::to_string(e.theta));
    }
    e.phi = phi + ell / e.theta;
    e.phi_order = 1;
    return e;
}

double ell_zero(const Table& table) {
    if (table.is_disc()) throw DomainError("ell_0 undefined for disc");
    return -3.0 / table.extrema().min_d2;
}

double twist_profile(const CoinSystem& sys, double phi, double theta) {
    if (sys.table().is_disc()) {
        const double s = std::sin(theta);
        return 2.0 - sys.ell() / (s * s);
    }
    return jacobian(sys, MapKind::coin, {phi, theta}).a12;
}

std::vector<double> find_zeros(const std::function<double(double)>& f, double lo, double hi,
                               int grid, double touch_tol) {
    if (!(lo < hi) || grid < 3) throw DomainError("find_zeros: bad interval or grid");
    std::vector<double> x(grid + 1), y(grid + 1);
    for (int i = 0; i <= grid; ++i) {
        x[i] = lo + (hi - lo) * i / grid;
        y[i] = f(x[i]);
    }
    std::vector<double> zeros;
    for (int i = 0; i < grid; ++i) {
        if (y[i] == 0.0) {
            zeros.push_back(x[i]);
            continue;
        }
        if ((y[i] < 0.0) == (y[i + 1] < 0.0) || y[i + 1] == 0.0) continue;
        double a = x[i], b = x[i + 1], fa = y[i];
        for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
            const double mid = 0.5 * (a + b);
            const double fm = f(mid);
            if ((fm < 0.0) == (fa < 0.0)) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        zeros.push_back(0.5 * (a + b));
    }
    if (y[grid] == 0.0) zeros.push_back(x[grid]);

    // touching zeros: |f| has a local minimum without a sign change nearby
    for (int i = 1; i < grid; ++i) {
        const bool sign_change = (y[i - 1] < 0.0) != (y[i] < 0.0) || (y[i] < 0.0) != (y[i + 1] < 0.0);
        if (sign_change || y[i] == 0.0) continue;
        if (!(std::abs(y[i]) <= std::abs(y[i - 1]) && std::abs(y[i]) <= std::abs(y[i + 1]))) continue;
        std::uintmax_t iters = 200;
        const auto [xm, fm] = boost::math::tools::brent_find_minima(
            [&](double t) { return std::abs(f(t)); }, x[i - 1], x[i + 1],
            std::numeric_limits<double>::digits, iters);
        if (fm < touch_tol) zeros.push_back(xm);
    }
    std::sort(zeros.begin(), zeros.end());
    return zeros;
}

std::vector<double> twist_zeros(const CoinSystem& sys, double phi, int grid, double guard) {
    return find_zeros([&](double th) { return twist_profile(sys, phi, th); }, guard, kPi - guard, grid);
}

KamChart KamChart::near_circle(double eps, double ell, double y_lo, double y_hi) {
    if (!(eps > 0.0) || !(ell > 0.0) || !(y_lo < y_hi)) throw DomainError("near_circle: bad parameters");
    if (!(eps - eps * eps * y_hi > 0.0)) throw DomainError("near_circle: strip reaches theta <= 0");
    KamChart c;
    c.kind_ = ChartKind::near_circle;
    c.eps_ = eps;
    c.ell_ = ell;
    c.omega_ = mod_two_pi(ell / eps);
    c.lo_ = y_lo;
    c.hi_ = y_hi;
    return c;
}

KamChart KamChart::small_height(double ell, double a0, double b0) {
    if (!(ell > 0.0) || !(a0 > 0.0) || !(a0 < b0)) throw DomainError("small_height: bad parameters");
    KamChart c;
    c.kind_ = ChartKind::small_height;
    c.ell_ = ell;
    c.lo_ = a0;
    c.hi_ = b0;
    return c;
}

std::pair<double, double> KamChart::forward(double phi, double theta) const {
    if (kind_ == ChartKind::near_circle) return {phi, (eps_ - theta) / (eps_ * eps_)};
    return {phi, ell_ / theta};
}

std::pair<double, double> KamChart::backward(double x, double y) const {
    if (kind_ == ChartKind::near_circle) return {x, eps_ - eps_ * eps_ * y};
    return {x, ell_ / y};
}

std::pair<double, double> KamChart::normal_form(double x, double y) const {
    if (kind_ == ChartKind::near_circle) return {x + omega_ + ell_ * y, y};
    return {x + y, y};
}

ChartResidual residual_in_chart(const CoinSystem& sys, const KamChart& chart, int grid) {
    if (grid < 2) throw DomainError("residual_in_chart: grid must be >= 2");
    for (double y : {chart.lo(), chart.hi()}) {
        const double theta = chart.backward(0.0, y).second;
        if (!(theta > sys.theta_min() && theta < kPi - sys.theta_min())) {
            throw DomainError("residual_in_chart: strip outside the guard band");
        }
    }
    ChartResidual res;
    for (int i = 0; i < grid; ++i) {
        const double x = kTwoPi * i / grid;
        for (int j = 0; j < grid; ++j) {
            const double y = chart.lo() + (chart.hi() - chart.lo()) * j / (grid - 1);
            const auto [phi, theta] = chart.backward(x, y);
            const LiftedPoint img = coin_step(sys, {phi, theta});
            const auto [xb, yb] = chart.forward(img.phi, img.theta);
            // normal form evaluated with the actual y' (twist term uses the image)
            const double x_pred = chart.kind() == ChartKind::near_circle
                                      ? x + chart.omega() + chart.ell() * yb
                                      : chart.normal_form(x, y).first;
            res.max_x = std::max(res.max_x, std::abs(wrap_to_pi(xb - x_pred)));
            res.max_y = std::max(res.max_y, std::abs(yb - y));
            ++res.samples;
        }
    }
    return res;
}

}  // namespace coinlab
