#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coinlab/geometry.hpp"

namespace coinlab {

/// Point on the phase cylinder, phi in [0, 2pi).
struct PhasePoint {
    double phi = 0.0;
    double theta = 0.0;
};

/// Point on the universal cover; phi carries the winding.
struct LiftedPoint {
    double phi = 0.0;
    double theta = 0.0;

    PhasePoint project() const { return {mod_two_pi(phi), theta}; }
};

/// Coin of height ell over a convex table.
class CoinSystem {
public:
    CoinSystem(std::shared_ptr<const Table> table, double ell, double theta_min = 1e-12);

    const Table& table() const { return *table_; }
    std::shared_ptr<const Table> table_ptr() const { return table_; }
    double ell() const { return ell_; }
    double theta_min() const { return theta_min_; }
    CoinSystem with_ell(double ell) const { return CoinSystem(table_, ell, theta_min_); }

    /// Throws DomainError unless theta_min < theta < pi - theta_min.
    void check_theta(double theta) const;

private:
    std::shared_ptr<const Table> table_;
    double ell_;
    double theta_min_;
};

CoinSystem make_system(CurveKind kind, double a, double b, double ell);

/// Billiard step with the intermediate quantities the Jacobian needs.
struct ChordHit {
    LiftedPoint out;
    double t0 = 0.0;      // raw parameter of departure
    double t1 = 0.0;      // raw parameter of arrival (lifted, t0 < t1 < t0 + 2pi)
    double length = 0.0;  // chord length in the normalized plane
};

ChordHit billiard_hit(const CoinSystem& sys, LiftedPoint p);

LiftedPoint billiard_step(const CoinSystem& sys, LiftedPoint p);
LiftedPoint billiard_inverse(const CoinSystem& sys, LiftedPoint p);
LiftedPoint shift_step(const CoinSystem& sys, LiftedPoint p);
LiftedPoint shift_inverse(const CoinSystem& sys, LiftedPoint p);
LiftedPoint coin_step(const CoinSystem& sys, LiftedPoint p);
LiftedPoint coin_inverse(const CoinSystem& sys, LiftedPoint p);

/// Reflection (phi, theta) -> (phi, pi - theta).
inline LiftedPoint involution(LiftedPoint p) { return {p.phi, kPi - p.theta}; }

enum class MapKind { billiard, shift, coin };

LiftedPoint apply_map(const CoinSystem& sys, MapKind map, LiftedPoint p);

/// Jacobian d(phi', theta')/d(phi, theta) by central differences with one
/// Richardson level. h <= 0 selects the default 1e-6 * max(1, |theta|).
Mat2 jacobian(const CoinSystem& sys, MapKind map, LiftedPoint p, double h = 0.0);

/// Closed-form Jacobian from the chord geometry (billiard and coin maps) or
/// the shift formula. Agrees with `jacobian` to finite-difference accuracy.
Mat2 analytic_jacobian(const CoinSystem& sys, MapKind map, LiftedPoint p);

/// Coin step together with its analytic Jacobian.
std::pair<LiftedPoint, Mat2> coin_step_with_jacobian(const CoinSystem& sys, LiftedPoint p);

struct OrbitRecord {
    LiftedPoint initial;
    std::vector<LiftedPoint> points;  // points[0] = initial, points[k] = T^k(initial)
    std::vector<Mat2> jacobians;      // jacobians[k] = DT(points[k]) when requested
    bool partial = false;             // stopped early; see `error`
    std::string error;

    std::size_t steps() const { return points.empty() ? 0 : points.size() - 1; }
};

/// n applications of the coin map on the lift. A step that leaves the guard
/// band or fails to converge ends the orbit with `partial` set.
OrbitRecord iterate(const CoinSystem& sys, LiftedPoint p, int n, bool with_jacobians = false);

}  // namespace coinlab
