#include "coinlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "coinlab/expansions.hpp"

namespace coinlab {

// ---- rotation numbers and orbit classification ---------------------------

RotationEstimate rotation_number(const OrbitRecord& orbit) {
    const std::size_t n = orbit.steps();
    if (n < 100) throw DomainError("rotation_number needs at least 100 iterates");
    const auto& pts = orbit.points;
    const std::size_t half = n / 2;
    RotationEstimate r;
    r.value = (pts[n].phi - pts[0].phi) / (kTwoPi * static_cast<double>(n));
    const double first = (pts[half].phi - pts[0].phi) / (kTwoPi * static_cast<double>(half));
    const double second = (pts[n].phi - pts[half].phi) / (kTwoPi * static_cast<double>(n - half));
    r.uncertainty = std::abs(first - second);
    r.partial = orbit.partial;
    return r;
}

std::string to_string(OrbitLabel label) {
    switch (label) {
        case OrbitLabel::curve: return "curve";
        case OrbitLabel::island: return "island";
        case OrbitLabel::chaotic: return "chaotic";
        default: return "undecided";
    }
}

namespace {

struct ColumnStats {
    bool graph_like = false;
    int empty = 0;
    double extent = 0.0;
};

ColumnStats column_stats(const std::vector<LiftedPoint>& pts, const ClassifierConfig& cfg) {
    const int nc = cfg.columns;
    std::vector<double> lo(nc, std::numeric_limits<double>::infinity());
    std::vector<double> hi(nc, -std::numeric_limits<double>::infinity());
    double tmin = std::numeric_limits<double>::infinity(), tmax = -tmin;
    for (const LiftedPoint& p : pts) {
        const int c = std::min(nc - 1, static_cast<int>(mod_two_pi(p.phi) / kTwoPi * nc));
        lo[c] = std::min(lo[c], p.theta);
        hi[c] = std::max(hi[c], p.theta);
        tmin = std::min(tmin, p.theta);
        tmax = std::max(tmax, p.theta);
    }
    ColumnStats st;
    st.extent = tmax - tmin;
    for (int c = 0; c < nc; ++c) st.empty += lo[c] > hi[c];
    if (st.extent <= cfg.noise_floor) {
        st.graph_like = true;
        return st;
    }
    if (st.empty > 0) return st;

    const double cell = st.extent / nc;
    st.graph_like = true;
    for (int c = 0; c < nc; ++c) {
        const int prev = (c + nc - 1) % nc, next = (c + 1) % nc;
        const double slope_span = 0.5 * std::abs((lo[next] + hi[next]) - (lo[prev] + hi[prev])) * 0.5;
        if (hi[c] - lo[c] > cfg.tol_g * cell + slope_span) {
            st.graph_like = false;
            break;
        }
    }
    return st;
}

}  // namespace

OrbitClass classify_orbit(const OrbitRecord& orbit, const ClassifierConfig& cfg) {
    OrbitClass out;
    out.partial = orbit.partial;
    const std::size_t n = orbit.steps();
    if (static_cast<int>(orbit.points.size()) < cfg.min_length) return out;

    const auto& pts = orbit.points;
    if (n >= 100) {
        const RotationEstimate r = rotation_number(orbit);
        out.rotation = r.value;
        out.rotation_uncertainty = r.uncertainty;
    }

    const std::size_t w = static_cast<std::size_t>(cfg.window);
    double wmin = std::numeric_limits<double>::infinity(), wmax = -wmin;
    int windows = 0;
    for (std::size_t s = 0; s + w <= n; s += w, ++windows) {
        const double om = (pts[s + w].phi - pts[s].phi) / (kTwoPi * static_cast<double>(w));
        wmin = std::min(wmin, om);
        wmax = std::max(wmax, om);
    }
    out.rotation_drift = windows >= 2 ? wmax - wmin : std::numeric_limits<double>::infinity();
    const bool rot_ok = out.rotation_drift <= cfg.tol_omega;

    const ColumnStats st = column_stats(pts, cfg);
    out.vertical_extent = st.extent;
    double tsum = 0.0;
    for (const LiftedPoint& p : pts) tsum += p.theta;
    out.mean_theta = tsum / static_cast<double>(pts.size());
    out.graph_like = st.graph_like;
    out.empty_columns = st.empty;

    if (!orbit.jacobians.empty()) {
        Vec2 v{std::sqrt(0.5), std::sqrt(0.5)};
        double sum = 0.0;
        for (const Mat2& j : orbit.jacobians) {
            v = j * v;
            const double len = norm(v);
            sum += std::log(len);
            v = (1.0 / len) * v;
        }
        out.lyapunov = sum / static_cast<double>(orbit.jacobians.size());
    } else {
        out.lyapunov = std::numeric_limits<double>::quiet_NaN();
    }

    const bool horizontal = st.extent <= cfg.noise_floor;
    if (rot_ok && st.graph_like && (st.empty == 0 || horizontal)) {
        out.label = OrbitLabel::curve;
    } else if (out.lyapunov > cfg.lambda_min) {
        out.label = OrbitLabel::chaotic;
    } else if (st.empty > 0) {
        out.label = OrbitLabel::island;
    } else {
        out.label = OrbitLabel::undecided;
    }
    return out;
}

OrbitClass classify(const CoinSystem& sys, LiftedPoint p, int n, const ClassifierConfig& cfg) {
    return classify_orbit(iterate(sys, p, n, true), cfg);
}

// ---- vertically mapped graphs ---------------------------------------------

double VertGraph::max_residual() const {
    double r = 0.0;
    for (std::size_t i = 0; i < residual.size(); ++i) {
        if (ok[i]) r = std::max(r, residual[i]);
    }
    return r;
}

double VertGraph::max_g() const {
    double r = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (ok[i]) r = std::max(r, g[i]);
    }
    return r;
}

namespace {

struct Window {
    double lo, hi;
};

Window newton_window(const CoinSystem& sys, int m) {
    const double star = sys.ell() / (kTwoPi * m);
    return {std::max(0.2 * star, 2.0 * sys.theta_min()), std::min(5.0 * star, kPi - 2.0 * sys.theta_min())};
}

}  // namespace

VertGraph vert_graph(const CoinSystem& sys, int m, int grid) {
    if (m < 1) throw DomainError("vert_graph: m must be >= 1");
    if (grid < 4) throw DomainError("vert_graph: grid too small");
    const Window win = newton_window(sys, m);
    VertGraph vg;
    vg.m = m;
    vg.phi.resize(grid);
    vg.g.assign(grid, std::numeric_limits<double>::quiet_NaN());
    vg.dg.assign(grid, std::numeric_limits<double>::quiet_NaN());
    vg.residual.assign(grid, std::numeric_limits<double>::quiet_NaN());
    vg.ok.assign(grid, 0);

    for_each_index(static_cast<std::size_t>(grid), [&](std::size_t i) {
        const double phi = kTwoPi * static_cast<double>(i) / grid;
        vg.phi[i] = phi;
        const double target = phi + kTwoPi * m;
        auto f = [&](double th) -> std::pair<double, double> {
            auto [q, jac] = coin_step_with_jacobian(sys, {phi, th});
            return {q.phi - target, jac.a12};
        };
        try {
            const double th = safeguarded_newton(f, win.lo, win.hi, sys.ell() / (kTwoPi * m), 1e-16);
            auto [q, jac] = coin_step_with_jacobian(sys, {phi, th});
            vg.g[i] = th;
            vg.residual[i] = std::abs(q.phi - target);
            vg.dg[i] = -(jac.a11 - 1.0) / jac.a12;
            vg.ok[i] = 1;
        } catch (const std::exception&) {
            // recorded below
        }
    });
    for (char k : vg.ok) vg.failures += k ? 0 : 1;
    if (vg.failures * 100 > grid) {
        throw NumericError("vert_graph: " + std::to_string(vg.failures) + " of " +
                           std::to_string(grid) + " nodes without a root for m=" + std::to_string(m));
    }
    return vg;
}

int min_graph_index(const CoinSystem& sys, int grid, int m_max) {
    constexpr int kSamples = 16;
    for (int m = 1; m <= m_max; ++m) {
        const Window win = newton_window(sys, m);
        bool good = true;
        for (int i = 0; i < grid && good; ++i) {
            const double phi = kTwoPi * i / grid;
            double prev = std::numeric_limits<double>::infinity();
            for (int k = 0; k < kSamples && good; ++k) {
                const double th = win.lo * std::pow(win.hi / win.lo, static_cast<double>(k) / (kSamples - 1));
                double val;
                try {
                    val = coin_step(sys, {phi, th}).phi - phi - kTwoPi * m;
                } catch (const std::exception&) {
                    good = false;
                    break;
                }
                if (!(val < prev)) good = false;
                if (k == 0 && !(val > 0.0)) good = false;
                if (k == kSamples - 1 && !(val < 0.0)) good = false;
                prev = val;
            }
        }
        if (good) return m;
    }
    throw NumericError("min_graph_index: no monotone window up to m=" + std::to_string(m_max));
}

GraphCheckReport graph_checks(const CoinSystem& sys, int m, int grid, int band_samples,
                              double residual_tol) {
    if (m < 2) throw DomainError("graph_checks: m must be >= 2");
    if (band_samples < 2) throw DomainError("graph_checks: band_samples must be >= 2");
    if (!(residual_tol > 0.0)) throw DomainError("graph_checks: residual_tol must be positive");
    const VertGraph below = vert_graph(sys, m + 1, grid);
    const VertGraph mid = vert_graph(sys, m, grid);
    const VertGraph above = vert_graph(sys, m - 1, grid);
    const double rho_dd = sys.table().is_disc() ? 0.0 : sys.table().extrema().max_abs_d2();

    GraphCheckReport rep;
    rep.m = m;
    rep.nodes = grid;
    rep.max_residual = mid.max_residual();
    rep.note = "derivative bound uses max|rho''| on the right-hand side";
    for (int i = 0; i < grid; ++i) {
        if (!mid.ok[i] || !below.ok[i] || !above.ok[i]) {
            ++rep.residual_violations;
            continue;
        }
        if (!(mid.residual[i] < residual_tol)) ++rep.residual_violations;
        if (!(below.g[i] < mid.g[i] && mid.g[i] < above.g[i])) ++rep.ordering_violations;

        const double g2 = mid.g[i] * mid.g[i];
        const double dbound = (8.0 / 3.0) * rho_dd * g2;
        // absolute slack: on the disc the bound is 0 and g' is rounding noise
        if (std::abs(mid.dg[i]) > dbound + 1e-12) ++rep.derivative_violations;
        if (dbound > 0.0) rep.max_derivative_ratio = std::max(rep.max_derivative_ratio, std::abs(mid.dg[i]) / dbound);

        const double gap = std::max(above.g[i] - mid.g[i], mid.g[i] - below.g[i]);
        const double gbound = 3.0 * kPi / sys.ell() * g2;
        if (gap > gbound) ++rep.gap_violations;
        rep.max_gap_ratio = std::max(rep.max_gap_ratio, gap / gbound);

        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int k = 0; k < band_samples; ++k) {
            const double th = below.g[i] + (above.g[i] - below.g[i]) * k / (band_samples - 1);
            const double incr = coin_step(sys, {mid.phi[i], th}).phi - mid.phi[i];
            lo = std::min(lo, incr);
            hi = std::max(hi, incr);
        }
        rep.max_lift_spread = std::max(rep.max_lift_spread, hi - lo);
        // the band edges sit exactly 4 pi apart, so allow solver noise
        if (hi - lo > 4.0 * kPi + 1e-9) ++rep.lift_violations;
    }
    return rep;
}

// ---- islands ----------------------------------------------------------------

double measure_J_gamma(const Table& table, int grid) {
    if (table.is_disc()) return 0.0;
    const double half = 0.5 * table.extrema().max_d1;
    std::vector<char> in(grid);
    for (int i = 0; i < grid; ++i) in[i] = table.profile().rho_d1(kTwoPi * i / grid) >= half;
    // rotate so the scan starts outside the set, then take the longest run
    int start = 0;
    while (start < grid && in[start]) ++start;
    if (start == grid) return kTwoPi;
    int best = 0, run = 0;
    for (int k = 0; k < grid; ++k) {
        if (in[(start + k) % grid]) best = std::max(best, ++run);
        else run = 0;
    }
    return kTwoPi * best / grid;
}

double island_bound(const CoinSystem& sys, int m) {
    const Table& tab = sys.table();
    if (tab.is_disc()) return 0.0;
    const double ell = sys.ell();
    const double mr1 = tab.extrema().max_d1;
    const double mr2 = tab.extrema().max_d2;
    const double d = kTwoPi * m + 1.0 - ell * mr1 / 3.0;
    return ell * ell * mr1 * measure_J_gamma(tab) / (8.0 * (3.0 + 2.0 * ell * mr2) * d * d);
}

IslandReport island_scan(const CoinSystem& sys, int m, const IslandConfig& cfg) {
    if (sys.table().is_disc()) throw DomainError("island_scan: the disc has empty D_m");
    if (cfg.resolution < 4) throw DomainError("island_scan: resolution too small");
    const VertGraph vg = vert_graph(sys, m, cfg.graph_grid);

    IslandReport rep;
    rep.m = m;
    rep.resolution = cfg.resolution;
    for (std::size_t i = 0; i < vg.g.size(); ++i) {
        if (!vg.ok[i]) continue;
        const LiftedPoint q = coin_step(sys, {vg.phi[i], vg.g[i]});
        if (std::abs(q.theta - vg.g[i]) > cfg.tol_E) {
            rep.d_phi.push_back(vg.phi[i]);
            rep.d_theta.push_back(vg.g[i]);
        } else {
            rep.e_phi.push_back(vg.phi[i]);
            rep.e_theta.push_back(vg.g[i]);
        }
    }
    rep.meas_J = measure_J_gamma(sys.table());
    rep.bound = island_bound(sys, m);
    if (rep.d_phi.empty()) return rep;

    const double gmax = vg.max_g();
    const double pad = 3.0 * kPi / sys.ell() * gmax * gmax;
    const auto [dlo, dhi] = std::minmax_element(rep.d_theta.begin(), rep.d_theta.end());
    rep.theta_lo = std::max(*dlo - pad, 10.0 * sys.theta_min());
    rep.theta_hi = *dhi + pad;

    const int R = cfg.resolution;
    const double dphi = kTwoPi / R;
    const double dth = (rep.theta_hi - rep.theta_lo) / R;
    rep.cell_area = dphi * dth;

    // 0 unknown, 1 non-curve, 2 curve
    std::vector<std::uint8_t> label(static_cast<std::size_t>(R) * R, 0);
    std::vector<char> region(label.size(), 0);
    auto cell_of = [&](double phi, double theta) -> long {
        if (!(theta >= rep.theta_lo && theta < rep.theta_hi)) return -1;
        const int c = std::min(R - 1, static_cast<int>(mod_two_pi(phi) / dphi));
        const int r = std::min(R - 1, static_cast<int>((theta - rep.theta_lo) / dth));
        return static_cast<long>(r) * R + c;
    };

    std::deque<long> queue;
    for (std::size_t k = 0; k < rep.d_phi.size(); ++k) queue.push_back(cell_of(rep.d_phi[k], rep.d_theta[k]));

    while (!queue.empty()) {
        const long id = queue.front();
        queue.pop_front();
        if (id < 0 || region[id]) continue;
        if (label[id] == 0) {
            const int r = static_cast<int>(id / R), c = static_cast<int>(id % R);
            const LiftedPoint start{(c + 0.5) * dphi, rep.theta_lo + (r + 0.5) * dth};
            const OrbitRecord orb = iterate(sys, start, cfg.orbit_iters, true);
            const OrbitClass cls = classify_orbit(orb, cfg.classifier);
            const std::uint8_t lab = cls.label == OrbitLabel::curve ? 2 : 1;
            ++rep.launches;
            label[id] = lab;
            for (const LiftedPoint& p : orb.points) {
                const long k = cell_of(p.phi, p.theta);
                if (k >= 0 && label[k] == 0) label[k] = lab;
            }
        }
        if (label[id] != 1) continue;
        region[id] = 1;
        const int r = static_cast<int>(id / R), c = static_cast<int>(id % R);
        queue.push_back(static_cast<long>(r) * R + (c + 1) % R);
        queue.push_back(static_cast<long>(r) * R + (c + R - 1) % R);
        if (r + 1 < R) queue.push_back(static_cast<long>(r + 1) * R + c);
        if (r > 0) queue.push_back(static_cast<long>(r - 1) * R + c);
    }

    rep.cells.assign(label.size(), 0);
    for (std::size_t k = 0; k < label.size(); ++k) {
        if (region[k]) {
            rep.cells[k] = 1;
            ++rep.region_cells;
        } else if (label[k] == 2) {
            rep.cells[k] = 2;
        } else if (label[k] == 1) {
            rep.cells[k] = 3;
        }
    }
    rep.area = rep.region_cells * rep.cell_area;
    return rep;
}

// ---- Lipschitz diagnostics ------------------------------------------------

double default_c0(const CoinSystem& sys) {
    const double rho_dd = sys.table().is_disc() ? 0.0 : sys.table().extrema().max_abs_d2();
    return 6.0 * kPi / sys.ell() + (16.0 * kPi / 3.0) * rho_dd;
}

LipschitzReport lipschitz_check(const CoinSystem& sys, const OrbitRecord& orbit, double c0,
                                double min_separation, const ClassifierConfig& cfg) {
    if (orbit.points.size() < 2) throw DomainError("lipschitz_check: orbit too short");
    const ColumnStats st = column_stats(orbit.points, cfg);
    if (!st.graph_like) throw DomainError("lipschitz_check: orbit is not graph-like");

    LipschitzReport rep;
    std::vector<std::pair<double, double>> pts;
    pts.reserve(orbit.points.size());
    double sum = 0.0;
    for (const LiftedPoint& p : orbit.points) {
        pts.emplace_back(mod_two_pi(p.phi), p.theta);
        sum += p.theta;
    }
    rep.theta0 = sum / static_cast<double>(pts.size());
    if (!(rep.theta0 < 0.1)) throw DomainError("lipschitz_check: curve above theta = 0.1");
    std::sort(pts.begin(), pts.end());

    constexpr std::size_t kNeighbours = 16;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 1; k <= std::min(kNeighbours, n - 1); ++k) {
            const std::size_t j = (i + k) % n;
            double dist = pts[j].first - pts[i].first;
            if (j < i) dist += kTwoPi;
            if (dist < min_separation) continue;
            rep.slope = std::max(rep.slope, std::abs(pts[j].second - pts[i].second) / dist);
        }
    }
    auto [tlo, thi] = std::minmax_element(pts.begin(), pts.end(),
                                          [](const auto& a, const auto& b) { return a.second < b.second; });
    rep.extent = thi->second - tlo->second;

    const double rho_dd = sys.table().is_disc() ? 0.0 : sys.table().extrema().max_d2;
    const double t2 = rep.theta0 * rep.theta0;
    rep.slope_bound = 2.0 * (1.0 / sys.ell() + (2.0 / 3.0) * rho_dd) * t2;
    rep.c0 = c0 > 0.0 ? c0 : default_c0(sys);
    rep.extent_bound = rep.c0 * t2;
    rep.slope_ok = rep.slope <= rep.slope_bound;
    rep.extent_ok = rep.extent <= rep.extent_bound;
    return rep;
}

// ---- KAM strip scans ------------------------------------------------------

StripSurvey kam_strip_scan(const CoinSystem& sys, const StripSpec& spec) {
    if (!(spec.theta_lo >= 0.0 && spec.theta_lo < spec.theta_hi && spec.theta_hi <= kPi)) {
        throw DomainError("kam_strip_scan: malformed strip");
    }
    if (spec.n_phi < 1 || spec.n_theta < 1 || spec.iterations < 1) {
        throw DomainError("kam_strip_scan: lattice and iteration counts must be positive");
    }
    StripSurvey out;
    const std::size_t total = static_cast<std::size_t>(spec.n_phi) * spec.n_theta;
    out.ics.resize(total);
    out.classes.resize(total);
    if (spec.keep_orbits) out.orbits.resize(total);
    for (int j = 0; j < spec.n_theta; ++j) {
        for (int i = 0; i < spec.n_phi; ++i) {
            const std::size_t k = static_cast<std::size_t>(j) * spec.n_phi + i;
            out.ics[k] = {kTwoPi * (i + 0.5) / spec.n_phi,
                          spec.theta_lo + (spec.theta_hi - spec.theta_lo) * (j + 0.5) / spec.n_theta};
            sys.check_theta(out.ics[k].theta);
        }
    }
    for_each_index(total, [&](std::size_t k) {
        OrbitRecord orb = iterate(sys, out.ics[k], spec.iterations, true);
        out.classes[k] = classify_orbit(orb, spec.classifier);
        if (spec.keep_orbits) {
            orb.jacobians.clear();
            orb.jacobians.shrink_to_fit();
            out.orbits[k] = std::move(orb);
        }
    });
    for (std::size_t k = 0; k < total; ++k) {
        if (out.classes[k].label != OrbitLabel::curve) continue;
        ++out.curves;
        out.curve_levels.push_back(out.classes[k].mean_theta);
    }
    out.curve_fraction = static_cast<double>(out.curves) / static_cast<double>(total);
    return out;
}

}  // namespace coinlab
