#include "coinlab/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>

#include "coinlab/expansions.hpp"

namespace coinlab::cli {

namespace {

std::string fmt(const char* spec, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

std::string g17(double x) { return fmt("%.17g", x); }

/// Shortest text that reads back to the same double; used for echoed parameters.
std::string shortest(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

/// Opens `path` for writing; IoError when that fails.
std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write '" + path + "'");
    return f;
}

void finish(std::ofstream& f, const std::string& path) {
    f.flush();
    if (!f) throw IoError("write failed for '" + path + "'");
}

/// Runs `body` against the configured output file, or against `log` when no
/// file was given.
template <class F>
void emit(const RunConfig& cfg, std::ostream& log, F&& body) {
    if (cfg.out.empty()) {
        body(log);
        return;
    }
    std::ofstream f = open_out(cfg.out);
    body(f);
    finish(f, cfg.out);
}

std::string header(const RunConfig& cfg, const std::string& cmd) {
    std::string h = "# coinlab " + cmd + " table=" + cfg.table;
    if (cfg.table != "circle") h += " a=" + shortest(cfg.a) + " b=" + shortest(cfg.b);
    h += " ell=" + shortest(cfg.ell) + "\n";
    return h;
}

std::string svg_path(const std::string& out) {
    const auto dot = out.rfind('.');
    const auto slash = out.find_last_of("/\\");
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
        return out.substr(0, dot) + ".svg";
    }
    return out + ".svg";
}

/// Default strip of kamscan: (0, delta) above the threshold height, otherwise
/// the small-height band [ell/2, ell].
std::pair<double, double> strip_bounds(const RunConfig& cfg, const CoinSystem& sys) {
    if (cfg.theta_lo >= 0.0) return {cfg.theta_lo, cfg.theta_hi};
    if (!sys.table().is_disc()) {
        const double l0 = ell_zero(sys.table());
        if (sys.ell() > l0) {
            const double delta = cfg.delta > 0.0 ? cfg.delta : 0.02 * std::min(1.0, sys.ell() - l0);
            return {0.0, delta};
        }
    }
    return {0.5 * std::min(sys.ell(), 1.0), std::min(sys.ell(), 1.0)};
}

}  // namespace

// ---- portrait ---------------------------------------------------------------

std::vector<LiftedPoint> portrait_ics(const RunConfig& cfg) {
    std::vector<LiftedPoint> ics;
    ics.reserve(cfg.ics);
    const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cfg.ics))));
    const double span = kPi - 2.0 * cfg.pad;
    if (k * k == cfg.ics) {
        for (int j = 0; j < k; ++j) {
            for (int i = 0; i < k; ++i) {
                ics.push_back({kTwoPi * i / k, cfg.pad + span * (j + 0.5) / k});
            }
        }
        return ics;
    }
    std::mt19937_64 rng(cfg.seed);
    for (int n = 0; n < cfg.ics; ++n) {
        const double phi = kTwoPi * uniform01(rng);
        ics.push_back({phi, cfg.pad + span * uniform01(rng)});
    }
    return ics;
}

PortraitResult run_portrait(const RunConfig& cfg) {
    const CoinSystem sys = cfg.system();
    PortraitResult res;
    res.ics = portrait_ics(cfg);
    const std::size_t n = res.ics.size();
    res.orbits.resize(n);
    res.classes.resize(n);
    const int steps = std::max(cfg.iters, cfg.classify_iters);
    ClassifierConfig ccfg;
    ccfg.min_length = std::min(ccfg.min_length, cfg.classify_iters);
    for_each_index(n, [&](std::size_t k) {
        OrbitRecord rec = iterate(sys, res.ics[k], steps, true);
        res.classes[k] = classify_orbit(rec, ccfg);
        const std::size_t keep = std::min<std::size_t>(rec.points.size(), cfg.iters + 1);
        res.orbits[k].assign(rec.points.begin(), rec.points.begin() + keep);
    });
    return res;
}

void write_portrait_csv(std::ostream& os, const RunConfig& cfg, const PortraitResult& res) {
    os << header(cfg, "portrait");
    os << "# iters=" << cfg.iters << " ics=" << res.ics.size() << " seed=" << cfg.seed
       << " classify_iters=" << cfg.classify_iters << "\n";
    os << "# phi in [0, 2pi), theta in (0, pi); class from a classify_iters-step run\n";
    os << "orbit_id,step,phi,theta,class\n";
    for (std::size_t k = 0; k < res.orbits.size(); ++k) {
        const std::string cls = to_string(res.classes[k].label);
        for (std::size_t s = 0; s < res.orbits[k].size(); ++s) {
            const PhasePoint p = res.orbits[k][s].project();
            os << k << ',' << s << ',' << g17(p.phi) << ',' << g17(p.theta) << ',' << cls << '\n';
        }
    }
}

void write_portrait_svg(std::ostream& os, const RunConfig& cfg, const PortraitResult& res) {
    constexpr double W = 720.0, H = 360.0, M = 40.0;
    auto x_of = [&](double phi) { return M + W * phi / kTwoPi; };
    auto y_of = [&](double theta) { return M + H * (1.0 - theta / kPi); };
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W + 2 * M << "\" height=\""
       << H + 2 * M << "\" viewBox=\"0 0 " << W + 2 * M << ' ' << H + 2 * M << "\">\n";
    os << "<title>coin billiard " << cfg.table;
    if (cfg.table != "circle") os << " a=" << shortest(cfg.a) << " b=" << shortest(cfg.b);
    os << " ell=" << shortest(cfg.ell) << "</title>\n";
    os << "<rect x=\"" << M << "\" y=\"" << M << "\" width=\"" << W << "\" height=\"" << H
       << "\" fill=\"white\" stroke=\"black\"/>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">\n";
    const char* phi_labels[] = {"0", "pi/2", "pi", "3pi/2", "2pi"};
    for (int i = 0; i <= 4; ++i) {
        os << "<text x=\"" << fmt("%.2f", x_of(0.5 * kPi * i)) << "\" y=\"" << H + M + 16 << "\">"
           << phi_labels[i] << "</text>\n";
    }
    const char* theta_labels[] = {"0", "pi/2", "pi"};
    for (int j = 0; j <= 2; ++j) {
        os << "<text x=\"" << M - 18 << "\" y=\"" << fmt("%.2f", y_of(0.5 * kPi * j) + 4) << "\">"
           << theta_labels[j] << "</text>\n";
    }
    os << "<text x=\"" << M + W / 2 << "\" y=\"" << H + M + 34 << "\">phi</text>\n";
    os << "<text x=\"12\" y=\"" << M + H / 2 << "\">theta</text>\n</g>\n";
    for (std::size_t k = 0; k < res.orbits.size(); ++k) {
        const int hue = static_cast<int>((k * 137) % 360);
        os << "<g id=\"orbit-" << k << "\" class=\"" << to_string(res.classes[k].label)
           << "\" fill=\"hsl(" << hue << ",70%,40%)\">\n";
        for (const LiftedPoint& q : res.orbits[k]) {
            const PhasePoint p = q.project();
            os << "<circle cx=\"" << fmt("%.3f", x_of(p.phi)) << "\" cy=\"" << fmt("%.3f", y_of(p.theta))
               << "\" r=\"1\"/>\n";
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
}

int cmd_portrait(const RunConfig& cfg, std::ostream& log) {
    const PortraitResult res = run_portrait(cfg);
    emit(cfg, log, [&](std::ostream& os) { write_portrait_csv(os, cfg, res); });
    if (!cfg.out.empty()) {
        const std::string path = svg_path(cfg.out);
        std::ofstream f = open_out(path);
        write_portrait_svg(f, cfg, res);
        finish(f, path);
        int counts[4] = {0, 0, 0, 0};
        for (const OrbitClass& c : res.classes) ++counts[static_cast<int>(c.label)];
        log << "portrait: " << res.ics.size() << " orbits, curve=" << counts[0] << " island=" << counts[1]
            << " chaotic=" << counts[2] << " undecided=" << counts[3] << "; wrote " << cfg.out << " and "
            << path << "\n";
    }
    return kOk;
}

// ---- thin drivers -----------------------------------------------------------

int cmd_graphs(const RunConfig& cfg, std::ostream& log) {
    const CoinSystem sys = cfg.system();
    const VertGraph g = vert_graph(sys, cfg.m, cfg.grid);
    emit(cfg, log, [&](std::ostream& os) {
        os << header(cfg, "graphs") << "# m=" << cfg.m << " grid=" << cfg.grid
           << " failures=" << g.failures << "\n";
        os << "phi,g,dg,residual\n";
        for (std::size_t i = 0; i < g.phi.size(); ++i) {
            if (!g.ok[i]) continue;
            os << g17(g.phi[i]) << ',' << g17(g.g[i]) << ',' << g17(g.dg[i]) << ',' << g17(g.residual[i])
               << '\n';
        }
    });
    if (!cfg.out.empty()) {
        log << "graphs: m=" << cfg.m << " max_residual=" << fmt("%.3g", g.max_residual())
            << " max_g=" << fmt("%.6g", g.max_g()) << " failures=" << g.failures << "\n";
    }
    return kOk;
}

int cmd_islands(const RunConfig& cfg, std::ostream& log) {
    const CoinSystem sys = cfg.system();
    IslandConfig icfg;
    icfg.resolution = cfg.resolution;
    icfg.graph_grid = cfg.grid;
    const IslandReport r = island_scan(sys, cfg.m, icfg);
    const bool ok = r.area >= r.bound;
    emit(cfg, log, [&](std::ostream& os) {
        os << header(cfg, "islands");
        os << "# m=" << r.m << " area=" << g17(r.area) << " bound=" << g17(r.bound)
           << " holds=" << (ok ? "yes" : "no") << " meas_J=" << g17(r.meas_J)
           << " region_cells=" << r.region_cells << " cell_area=" << g17(r.cell_area)
           << " launches=" << r.launches << "\n";
        os << "# box phi in [0, 2pi), theta in [" << g17(r.theta_lo) << ", " << g17(r.theta_hi)
           << "]; resolution=" << r.resolution << "; labels 1 region, 2 curve, 3 other non-curve\n";
        os << "i_phi,i_theta,phi,theta,label\n";
        const double dphi = kTwoPi / r.resolution;
        const double dth = (r.theta_hi - r.theta_lo) / r.resolution;
        for (int row = 0; row < r.resolution; ++row) {
            for (int col = 0; col < r.resolution; ++col) {
                const int lab = r.cells[static_cast<std::size_t>(row) * r.resolution + col];
                if (lab == 0) continue;
                os << col << ',' << row << ',' << g17((col + 0.5) * dphi) << ','
                   << g17(r.theta_lo + (row + 0.5) * dth) << ',' << lab << '\n';
            }
        }
    });
    if (!cfg.out.empty()) {
        log << "islands: m=" << r.m << " area=" << fmt("%.6g", r.area) << " bound=" << fmt("%.6g", r.bound)
            << (ok ? " (bound holds)" : " (BOUND VIOLATED)") << "\n";
    }
    return ok ? kOk : kInvariantFailure;
}

int cmd_twist(const RunConfig& cfg, std::ostream& log) {
    const CoinSystem sys = cfg.system();
    constexpr double kGuard = 1e-3;
    const std::vector<double> zeros = twist_zeros(sys, cfg.phi, cfg.twist_grid, kGuard);
    emit(cfg, log, [&](std::ostream& os) {
        os << header(cfg, "twist") << "# phi=" << g17(cfg.phi) << " zeros:";
        for (double z : zeros) os << ' ' << g17(z);
        os << "\ntheta,dphibar_dtheta\n";
        for (int i = 0; i <= cfg.twist_grid; ++i) {
            const double th = kGuard + (kPi - 2.0 * kGuard) * i / cfg.twist_grid;
            os << g17(th) << ',' << g17(twist_profile(sys, cfg.phi, th)) << '\n';
        }
    });
    if (!cfg.out.empty()) {
        log << "twist: " << zeros.size() << " zero(s)";
        for (double z : zeros) log << ' ' << fmt("%.12g", z);
        log << "\n";
    }
    return kOk;
}

int cmd_ell0(const RunConfig& cfg, std::ostream& log) {
    const CoinSystem sys = cfg.system();
    emit(cfg, log, [&](std::ostream& os) {
        if (sys.table().is_disc()) {
            os << "ell0: undefined (disc)\n";
            return;
        }
        const RhoExtrema& e = sys.table().extrema();
        os << "ell0=" << g17(ell_zero(sys.table())) << "\nargmin_phi=" << g17(e.argmin_d2)
           << "\nmin_rho_dd=" << g17(e.min_d2) << "\n";
    });
    return kOk;
}

int cmd_kamscan(const RunConfig& cfg, std::ostream& log) {
    const CoinSystem sys = cfg.system();
    const auto [lo, hi] = strip_bounds(cfg, sys);
    StripSpec spec;
    spec.theta_lo = lo;
    spec.theta_hi = hi;
    spec.n_phi = cfg.strip_phi;
    spec.n_theta = cfg.strip_theta;
    spec.iterations = cfg.classify_iters;
    spec.classifier.min_length = std::min(spec.classifier.min_length, cfg.classify_iters);
    spec.keep_orbits = true;
    const StripSurvey sv = kam_strip_scan(sys, spec);

    std::vector<std::string> lip(sv.ics.size(), "na");
    for (std::size_t k = 0; k < sv.ics.size(); ++k) {
        if (sv.classes[k].label != OrbitLabel::curve) continue;
        try {
            const LipschitzReport r = lipschitz_check(sys, sv.orbits[k], cfg.c0);
            lip[k] = r.slope_ok && r.extent_ok ? "ok" : "fail";
        } catch (const DomainError&) {
            // above theta = 0.1 or not graph-like: the bound does not apply
        }
    }
    emit(cfg, log, [&](std::ostream& os) {
        os << header(cfg, "kamscan") << "# strip theta in (" << g17(lo) << ", " << g17(hi)
           << ") lattice " << spec.n_phi << "x" << spec.n_theta << " iterations=" << spec.iterations
           << " curves=" << sv.curves << "\n";
        os << "orbit_id,phi0,theta0,class,rotation,vertical_extent,lyapunov,lipschitz\n";
        for (std::size_t k = 0; k < sv.ics.size(); ++k) {
            const OrbitClass& c = sv.classes[k];
            os << k << ',' << g17(sv.ics[k].phi) << ',' << g17(sv.ics[k].theta) << ',' << to_string(c.label)
               << ',' << g17(c.rotation) << ',' << g17(c.vertical_extent) << ',' << g17(c.lyapunov) << ','
               << lip[k] << '\n';
        }
    });
    if (!cfg.out.empty()) {
        log << "kamscan: strip (" << fmt("%.6g", lo) << ", " << fmt("%.6g", hi) << "): " << sv.curves << "/"
            << sv.ics.size() << " curves\n";
    }
    return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
    const std::vector<Check> checks = run_verify(cfg);
    int failed = 0;
    std::optional<std::ofstream> file;
    if (!cfg.out.empty()) file.emplace(open_out(cfg.out));
    for (const Check& c : checks) {
        const char* tag = c.skipped ? "SKIP" : (c.pass ? "PASS" : "FAIL");
        std::string line = std::string(tag) + "  " + c.name;
        if (!c.detail.empty()) line += "  (" + c.detail + ")";
        log << line << "\n";
        if (file) *file << line << "\n";
        if (!c.skipped && !c.pass) ++failed;
    }
    const std::string summary = failed == 0 ? "verify: all checks passed"
                                            : "verify: " + std::to_string(failed) + " check(s) failed";
    log << summary << "\n";
    if (file) {
        *file << summary << "\n";
        finish(*file, cfg.out);
    }
    return failed == 0 ? kOk : kInvariantFailure;
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    try {
        if (name == "portrait") return cmd_portrait(cfg, log);
        if (name == "verify") return cmd_verify(cfg, log);
        if (name == "graphs") return cmd_graphs(cfg, log);
        if (name == "islands") return cmd_islands(cfg, log);
        if (name == "twist") return cmd_twist(cfg, log);
        if (name == "ell0") return cmd_ell0(cfg, log);
        if (name == "kamscan") return cmd_kamscan(cfg, log);
        err << "coinlab: unknown subcommand '" << name << "'\n";
        return kUsage;
    } catch (const IoError& e) {
        err << "coinlab: " << e.what() << "\n";
        return kUsage;
    } catch (const NumericError& e) {
        err << "coinlab: numeric failure: " << e.what();
        if (e.has_point()) err << " at phi=" << g17(e.phi()) << " theta=" << g17(e.theta());
        err << "\n";
        return kNumeric;
    } catch (const DomainError& e) {
        err << "coinlab: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "coinlab: " << e.what() << "\n";
        return kNumeric;
    }
}

}  // namespace coinlab::cli
