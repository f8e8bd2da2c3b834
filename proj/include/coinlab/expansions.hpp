#pragma once

#include <functional>
#include <string>
#include <vector>

#include "coinlab/dynamics.hpp"

namespace coinlab {

/// Leading-order image of a near-boundary point. `phi_order` and
/// `theta_order` are the orders in theta of the dropped remainders.
struct ExpansionPrediction {
    double phi = 0.0;
    double theta = 0.0;
    int phi_order = 0;
    int theta_order = 0;
};

/// (phi + 2 rho theta, theta - (2/3) rho' theta^2); remainders O(theta^2), O(theta^3).
ExpansionPrediction predict_T1(const CurvatureProfile& profile, double phi, double theta);

/// theta as for T1 and phi + ell / theta_bar; remainders O(theta), O(theta^3).
ExpansionPrediction predict_T(const CurvatureProfile& profile, double ell, double phi,
                              double theta);

/// -3 / min rho''. Throws DomainError for a disc.
double ell_zero(const Table& table);

/// d(phi')/d(theta) of the coin map: closed form on the disc, central
/// differences with one Richardson level otherwise.
double twist_profile(const CoinSystem& sys, double phi, double theta);

/// Zeros of f on (lo, hi) from a uniform scan: sign changes refined by
/// bisection, plus touching zeros (local minima of |f| where |f| drops below
/// touch_tol) refined by Brent's method.
std::vector<double> find_zeros(const std::function<double(double)>& f, double lo, double hi,
                               int grid = 1000, double touch_tol = 1e-9);

/// Zeros of theta -> twist_profile(sys, phi, theta) over (guard, pi - guard).
std::vector<double> twist_zeros(const CoinSystem& sys, double phi, int grid = 1000,
                                double guard = 1e-3);

enum class ChartKind { near_circle, small_height };

/// Rescaled coordinates in which the coin map is close to an integrable
/// twist map. near_circle: x = phi, theta = eps - eps^2 y, normal form
/// (x + omega + ell y', y). small_height: xi = phi, eta = ell / theta,
/// normal form (xi + eta, eta).
class KamChart {
public:
    static KamChart near_circle(double eps, double ell, double y_lo = -1.0, double y_hi = 1.0);
    static KamChart small_height(double ell, double a0 = 1.0, double b0 = 2.0);

    ChartKind kind() const { return kind_; }
    double omega() const { return omega_; }
    double eps() const { return eps_; }
    double ell() const { return ell_; }
    /// Range of the second chart coordinate covered by the strip.
    double lo() const { return lo_; }
    double hi() const { return hi_; }

    std::pair<double, double> forward(double phi, double theta) const;
    std::pair<double, double> backward(double x, double y) const;
    /// Image of (x, y) under the integrable normal form.
    std::pair<double, double> normal_form(double x, double y) const;

private:
    ChartKind kind_ = ChartKind::near_circle;
    double eps_ = 0.0, ell_ = 0.0, omega_ = 0.0, lo_ = 0.0, hi_ = 0.0;
};

struct ChartResidual {
    double max_x = 0.0;  // wrapped to (-pi, pi]
    double max_y = 0.0;
    int samples = 0;
};

/// Maximum deviation of the coin map from the chart's normal form over a
/// grid x grid lattice of the strip.
ChartResidual residual_in_chart(const CoinSystem& sys, const KamChart& chart, int grid = 32);

}  // namespace coinlab
