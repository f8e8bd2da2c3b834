#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coinlab/dynamics.hpp"

namespace coinlab {

// ---- rotation numbers and orbit classification ---------------------------

struct RotationEstimate {
    double value = 0.0;        // average lifted advance per iterate / 2pi
    double uncertainty = 0.0;  // disagreement between the two halves of the orbit
    bool partial = false;
};

RotationEstimate rotation_number(const OrbitRecord& orbit);

enum class OrbitLabel { curve, island, chaotic, undecided };

std::string to_string(OrbitLabel label);

/// Thresholds of the orbit classifier.
///
/// curve:   rotation numbers of disjoint `window`-iterate windows agree within
///          tol_omega, and the orbit is single-valued over `columns` phi
///          columns (each column's theta span is within tol_g theta-cells of
///          what the slope between its neighbours accounts for) with no empty
///          column. An orbit whose whole theta extent is below `noise_floor`
///          is a horizontal line and counts as a curve when the rotation
///          test passes.
/// chaotic: otherwise, if the finite-time Lyapunov exponent exceeds lambda_min.
/// island:  otherwise, if some phi column is never visited.
struct ClassifierConfig {
    int window = 500;
    double tol_omega = 1e-3;
    int columns = 64;
    double tol_g = 3.0;
    double lambda_min = 0.05;
    double noise_floor = 1e-9;
    int min_length = 1000;
};

struct OrbitClass {
    OrbitLabel label = OrbitLabel::undecided;
    double rotation = 0.0;
    double rotation_uncertainty = 0.0;
    double rotation_drift = 0.0;
    double vertical_extent = 0.0;
    double mean_theta = 0.0;
    double lyapunov = 0.0;
    bool graph_like = false;
    int empty_columns = 0;
    bool partial = false;
};

/// Needs the per-step Jacobians for the Lyapunov exponent; without them the
/// chaotic label is never assigned.
OrbitClass classify_orbit(const OrbitRecord& orbit, const ClassifierConfig& cfg = {});

/// Iterates n steps with Jacobians and classifies.
OrbitClass classify(const CoinSystem& sys, LiftedPoint p, int n, const ClassifierConfig& cfg = {});

// ---- vertically mapped graphs ---------------------------------------------

struct VertGraph {
    int m = 0;
    std::vector<double> phi;
    std::vector<double> g;
    std::vector<double> dg;        // g' from the implicit function theorem
    std::vector<double> residual;  // |F_m(phi, g(phi))|
    std::vector<char> ok;
    int failures = 0;

    double max_residual() const;
    double max_g() const;
};

/// Solves Pi_phi T(phi, theta) = phi + 2 m pi on a uniform phi grid. Nodes
/// where the window (0.2, 5) * ell / (2 m pi) does not bracket a root are
/// recorded as failures; more than 1% failures raises NumericError.
VertGraph vert_graph(const CoinSystem& sys, int m, int grid = 256);

/// Smallest m for which every node of a coarse grid has a bracketed root and
/// F_m decreasing in theta across the Newton window.
int min_graph_index(const CoinSystem& sys, int grid = 64, int m_max = 100000);

struct GraphCheckReport {
    int m = 0;
    int nodes = 0;
    double max_residual = 0.0;
    int residual_violations = 0;
    int ordering_violations = 0;
    int derivative_violations = 0;
    int gap_violations = 0;
    int lift_violations = 0;
    double max_derivative_ratio = 0.0;  // |g'| / ((8/3) max|rho''| g^2)
    double max_gap_ratio = 0.0;         // gap / ((3 pi / ell) g^2)
    double max_lift_spread = 0.0;       // largest lift-increment difference in the band
    /// The derivative bound is evaluated with max|rho''| on the right-hand side.
    std::string note;

    int violations() const {
        return residual_violations + ordering_violations + derivative_violations + gap_violations +
               lift_violations;
    }
};

GraphCheckReport graph_checks(const CoinSystem& sys, int m, int grid = 256, int band_samples = 6,
                              double residual_tol = 1e-10);

// ---- islands ----------------------------------------------------------------

/// Length of the longest (periodic) arc where rho' >= max rho' / 2.
double measure_J_gamma(const Table& table, int grid = 8192);

/// Lower bound ell^2 max rho' |J| / (8 (3 + 2 ell max rho'') (2 m pi + 1 - ell max rho' / 3)^2).
double island_bound(const CoinSystem& sys, int m);

struct IslandConfig {
    int resolution = 400;
    double tol_E = 1e-6;
    int graph_grid = 256;
    int orbit_iters = 1000;
    ClassifierConfig classifier{};
};

struct IslandReport {
    int m = 0;
    std::vector<double> d_phi, d_theta;  // graph samples whose theta moves
    std::vector<double> e_phi, e_theta;  // graph samples whose theta returns
    double theta_lo = 0.0, theta_hi = 0.0;  // box; phi covers the whole circle
    int resolution = 0;
    /// Row-major cell labels (row = theta index): 0 untouched, 1 region,
    /// 2 crossed by a curve orbit, 3 non-curve but not connected to the region.
    std::vector<std::uint8_t> cells;
    int region_cells = 0;
    double cell_area = 0.0;
    double area = 0.0;
    double bound = 0.0;
    double meas_J = 0.0;
    int launches = 0;
};

IslandReport island_scan(const CoinSystem& sys, int m, const IslandConfig& cfg = {});

// ---- Lipschitz diagnostics ------------------------------------------------

struct LipschitzReport {
    double theta0 = 0.0;  // mean height of the curve
    double slope = 0.0;   // sup |d theta| / |d phi| over separated pairs
    double slope_bound = 0.0;
    double extent = 0.0;  // max theta - min theta
    double c0 = 0.0;
    double extent_bound = 0.0;
    bool slope_ok = false;
    bool extent_ok = false;
    double slope_margin() const { return slope_bound - slope; }
    double extent_margin() const { return extent_bound - extent; }
};

/// Default c0 = 6 pi / ell + (16 pi / 3) max|rho''|.
double default_c0(const CoinSystem& sys);

/// Throws DomainError when the orbit is not graph-like or sits above theta = 0.1.
/// c0 <= 0 selects default_c0.
LipschitzReport lipschitz_check(const CoinSystem& sys, const OrbitRecord& orbit, double c0 = 0.0,
                                double min_separation = 1e-4, const ClassifierConfig& cfg = {});

// ---- KAM strip scans ------------------------------------------------------

struct StripSpec {
    double theta_lo = 0.0;
    double theta_hi = 0.0;
    int n_phi = 20;
    int n_theta = 10;
    int iterations = 2000;
    ClassifierConfig classifier{};
    bool keep_orbits = false;
};

struct StripSurvey {
    std::vector<LiftedPoint> ics;
    std::vector<OrbitClass> classes;
    std::vector<OrbitRecord> orbits;  // filled when keep_orbits
    int curves = 0;
    double curve_fraction = 0.0;
    std::vector<double> curve_levels;  // mean theta of each curve orbit
};

/// Cell-centred n_phi x n_theta lattice over T x (theta_lo, theta_hi).
StripSurvey kam_strip_scan(const CoinSystem& sys, const StripSpec& spec);

}  // namespace coinlab
