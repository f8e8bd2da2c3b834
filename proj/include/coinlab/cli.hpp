#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "coinlab/analysis.hpp"

namespace coinlab::cli {

enum ExitCode : int { kOk = 0, kInvariantFailure = 1, kUsage = 2, kNumeric = 3 };

/// Unwritable output path or unreadable config file.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string table = "ellipse";
    double a = 1.4;
    double b = 1.0;
    double ell = 1.3;
    std::string out;  // empty: CSV/text to stdout, no SVG
    int iters = 100;
    int ics = 144;  // a perfect square gives an even lattice, otherwise seeded random placement
    std::uint64_t seed = 1;
    int classify_iters = 2000;
    double pad = 0.1;  // portrait lattice keeps theta in (pad, pi - pad)

    int m = 20;
    int m_lo = 15;
    int m_hi = 20;
    int grid = 256;
    int resolution = 400;

    double phi = 0.0;  // twist: abscissa of the theta sweep
    int twist_grid = 1000;

    double theta_lo = -1.0;  // kamscan strip; negative selects (0, delta)
    double theta_hi = -1.0;
    double delta = 0.0;  // 0: 0.02 * min(1, ell - ell_0)
    int strip_phi = 20;
    int strip_theta = 10;
    double c0 = 0.0;  // 0: default_c0

    int verify_points = 200;

    /// Set one key from its text form; unknown keys and bad values throw DomainError.
    void set(const std::string& key, const std::string& value);
    void validate() const;
    CoinSystem system() const;
};

/// Flat key=value file; '#' starts a comment, blank lines are ignored.
void apply_config_file(RunConfig& cfg, const std::string& path);

// ---- portrait ---------------------------------------------------------------

struct PortraitResult {
    std::vector<LiftedPoint> ics;
    std::vector<std::vector<LiftedPoint>> orbits;  // first `iters` iterations, initial point included
    std::vector<OrbitClass> classes;               // from a classify_iters-long run
};

std::vector<LiftedPoint> portrait_ics(const RunConfig& cfg);
PortraitResult run_portrait(const RunConfig& cfg);
void write_portrait_csv(std::ostream& os, const RunConfig& cfg, const PortraitResult& res);
void write_portrait_svg(std::ostream& os, const RunConfig& cfg, const PortraitResult& res);

// ---- verify -----------------------------------------------------------------

struct Check {
    std::string name;
    bool pass = false;
    bool skipped = false;
    std::string detail;
};

std::vector<Check> run_verify(const RunConfig& cfg);

// ---- subcommands; each returns an exit code ---------------------------------

int cmd_portrait(const RunConfig& cfg, std::ostream& log);
int cmd_verify(const RunConfig& cfg, std::ostream& log);
int cmd_graphs(const RunConfig& cfg, std::ostream& log);
int cmd_islands(const RunConfig& cfg, std::ostream& log);
int cmd_twist(const RunConfig& cfg, std::ostream& log);
int cmd_ell0(const RunConfig& cfg, std::ostream& log);
int cmd_kamscan(const RunConfig& cfg, std::ostream& log);

/// Dispatch by name, translating exceptions into exit codes.
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log,
                std::ostream& err);

}  // namespace coinlab::cli
