// coinlab: phase portraits and numerical checks for the coin billiard map.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "coinlab/cli.hpp"

using coinlab::cli::RunConfig;

int main(int argc, char** argv) {
    CLI::App app{"coinlab: coin billiard maps on convex tables"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> subcommands = {
        {"portrait", "orbit CSV plus SVG scatter of an initial-condition lattice"},
        {"verify", "run the property suite; exit 1 on any failure"},
        {"graphs", "vertically mapped graph g_m as CSV"},
        {"islands", "island region cell map and measure lower bound"},
        {"twist", "d(phi')/d(theta) along a vertical line, with zeros"},
        {"ell0", "threshold height -3 / min rho''"},
        {"kamscan", "classify orbits launched in a horizontal strip"},
    };

    // Flag values are kept as text and applied on top of the config file.
    std::map<std::string, std::string> flags;
    std::string config_path;
    std::vector<std::string> extra;

    const std::vector<std::pair<std::string, std::string>> options = {
        {"table", "circle or ellipse"},
        {"a", "semi-major axis"},
        {"b", "semi-minor axis"},
        {"ell", "coin height"},
        {"out", "output path (CSV or text); portrait also writes the .svg sibling"},
        {"iters", "iterations per orbit"},
        {"ics", "number of initial conditions"},
        {"seed", "seed for random initial conditions and sampled checks"},
        {"m", "graph index"},
        {"m-lo", "first graph index checked by verify"},
        {"m-hi", "last graph index checked by verify"},
        {"grid", "phi grid of graph solves"},
        {"resolution", "island cell grid per axis"},
        {"phi", "twist: phi of the vertical line"},
        {"theta-lo", "kamscan: strip floor"},
        {"theta-hi", "kamscan: strip ceiling"},
        {"delta", "strip height above ell_0 (0: default)"},
        {"c0", "vertical-extent constant (0: default)"},
        {"classify-iters", "iterations used for classification"},
    };

    std::string chosen;
    for (const auto& [name, help] : subcommands) {
        CLI::App* sub = app.add_subcommand(name, help);
        for (const auto& [opt, ohelp] : options) {
            sub->add_option_function<std::string>(
                "--" + opt, [&flags, key = opt](const std::string& v) { flags[key] = v; }, ohelp);
        }
        sub->add_option("--config", config_path, "key=value config file");
        sub->add_option("--set", extra, "extra key=value override (repeatable)");
        sub->callback([&chosen, n = name] { chosen = n; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? coinlab::cli::kOk : coinlab::cli::kUsage;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) coinlab::cli::apply_config_file(cfg, config_path);
        for (const auto& [key, value] : flags) {
            std::string k = key;
            for (char& c : k) c = c == '-' ? '_' : c;
            cfg.set(k, value);
        }
        for (const std::string& kv : extra) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw coinlab::DomainError("--set expects key=value, got '" + kv + "'");
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "coinlab: " << e.what() << "\n";
        return coinlab::cli::kUsage;
    }
    return coinlab::cli::run_command(chosen, cfg, std::cout, std::cerr);
}
