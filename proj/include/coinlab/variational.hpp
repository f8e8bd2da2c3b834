#pragma once

#include "coinlab/dynamics.hpp"

namespace coinlab {

/// Generating-function value with its two partial derivatives. For a
/// non-degenerate orbit segment d1 = cos(theta) and d2 = -cos(theta_bar).
struct GeneratingEval {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// Billiard generating function -|gamma(phi) - gamma(phi_bar)|.
GeneratingEval h1(const Table& table, double phi, double phi_bar);

/// Shift generating function -ell * sqrt(1 + (phi_bar - phi)^2 / ell^2).
GeneratingEval h2(double ell, double phi, double phi_bar);

/// theta-window in which the lifted coin map must be monotone for a pair of
/// boundary points to be joined by a unique near-boundary segment.
struct DeltaWindow {
    double theta_lo = 1e-4;
    double theta_hi = 0.2;
    int samples = 32;
};

/// The coin-map segment from phi0 (lifted) landing exactly on phi1 (lifted).
struct Connection {
    double theta0 = 0.0;     // departure angle at phi0
    double phi_mid = 0.0;    // intermediate bounce, lifted
    double theta_mid = 0.0;  // angle after the billiard step, kept by the shift
};

/// Throws NotInDeltaError when phi1 is not reachable inside the window or the
/// map is not monotone there.
Connection connect(const CoinSystem& sys, double phi0, double phi1, const DeltaWindow& w = {});

inline double phi_mid(const CoinSystem& sys, double phi0, double phi1, const DeltaWindow& w = {}) {
    return connect(sys, phi0, phi1, w).phi_mid;
}

/// h(phi, phi_bar) = h1(phi, Phi) + h2(Phi, phi_bar) with partials by central
/// differences of step `step`.
GeneratingEval h_composite(const CoinSystem& sys, double phi, double phi_bar,
                           const DeltaWindow& w = {}, double step = 1e-6);

/// H(x0, x1, x2) = d2 h(x0, x1) + d1 h(x1, x2); zero exactly on orbit triples.
double orbit_residual_H(const CoinSystem& sys, double x0, double x1, double x2,
                        const DeltaWindow& w = {}, double step = 1e-6);

/// H written through the generating identities as cos(theta1) - cos(theta1_bar),
/// where the angles come from the two connecting segments. Smooth enough to
/// be differentiated numerically.
double orbit_residual_H_cosine(const CoinSystem& sys, double x0, double x1, double x2,
                               const DeltaWindow& w = {});

struct HGradient {
    double d0 = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// Central-difference gradient of the cosine form of H.
HGradient orbit_residual_gradient(const CoinSystem& sys, double x0, double x1, double x2,
                                  const DeltaWindow& w = {}, double step = 1e-5);

}  // namespace coinlab
