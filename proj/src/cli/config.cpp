#include "coinlab/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <type_traits>

namespace coinlab::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x)) {
        throw DomainError(key + ": not a number: '" + v + "'");
    }
    return x;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
    Int x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw DomainError(key + ": not an integer: '" + v + "'");
    }
    return x;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

template <class T>
Setter field(T RunConfig::*member) {
    return [member](RunConfig& c, const std::string& k, const std::string& v) {
        if constexpr (std::is_same_v<T, double>) c.*member = to_double(k, v);
        else if constexpr (std::is_same_v<T, std::string>) c.*member = v;
        else c.*member = to_int<T>(k, v);
    };
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> s = {
        {"table", field(&RunConfig::table)},
        {"a", field(&RunConfig::a)},
        {"b", field(&RunConfig::b)},
        {"ell", field(&RunConfig::ell)},
        {"out", field(&RunConfig::out)},
        {"iters", field(&RunConfig::iters)},
        {"ics", field(&RunConfig::ics)},
        {"seed", field(&RunConfig::seed)},
        {"classify_iters", field(&RunConfig::classify_iters)},
        {"pad", field(&RunConfig::pad)},
        {"m", field(&RunConfig::m)},
        {"m_lo", field(&RunConfig::m_lo)},
        {"m_hi", field(&RunConfig::m_hi)},
        {"grid", field(&RunConfig::grid)},
        {"resolution", field(&RunConfig::resolution)},
        {"phi", field(&RunConfig::phi)},
        {"twist_grid", field(&RunConfig::twist_grid)},
        {"theta_lo", field(&RunConfig::theta_lo)},
        {"theta_hi", field(&RunConfig::theta_hi)},
        {"delta", field(&RunConfig::delta)},
        {"strip_phi", field(&RunConfig::strip_phi)},
        {"strip_theta", field(&RunConfig::strip_theta)},
        {"c0", field(&RunConfig::c0)},
        {"verify_points", field(&RunConfig::verify_points)},
    };
    return s;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw DomainError("unknown config key '" + key + "'");
    it->second(*this, key, trim(value));
}

void RunConfig::validate() const {
    parse_curve_kind(table);
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("axes must be positive");
    if (!(ell > 0.0)) throw DomainError("ell must be positive");
    if (iters < 0) throw DomainError("iters must be >= 0");
    if (ics < 1) throw DomainError("ics must be >= 1");
    if (classify_iters < 1) throw DomainError("classify_iters must be >= 1");
    if (!(pad > 0.0 && pad < 0.5 * kPi)) throw DomainError("pad must lie in (0, pi/2)");
    if (m < 1 || m_lo < 1 || m_hi < m_lo) throw DomainError("graph indices must satisfy 1 <= m_lo <= m_hi");
    if (grid < 8) throw DomainError("grid must be >= 8");
    if (resolution < 8) throw DomainError("resolution must be >= 8");
    if (twist_grid < 3) throw DomainError("twist_grid must be >= 3");
    if (delta < 0.0 || c0 < 0.0) throw DomainError("delta and c0 must be >= 0 (0 selects the default)");
    if ((theta_lo >= 0.0) != (theta_hi >= 0.0)) throw DomainError("set both theta_lo and theta_hi or neither");
    if (theta_lo >= 0.0 && !(theta_lo < theta_hi && theta_hi < kPi)) {
        throw DomainError("strip needs 0 <= theta_lo < theta_hi < pi");
    }
    if (strip_phi < 1 || strip_theta < 1) throw DomainError("strip lattice must be non-empty");
    if (verify_points < 1) throw DomainError("verify_points must be >= 1");
}

CoinSystem RunConfig::system() const {
    validate();
    const CurveKind kind = parse_curve_kind(table);
    return make_system(kind, kind == CurveKind::circle ? 1.0 : a, kind == CurveKind::circle ? 1.0 : b,
                       ell);
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw DomainError(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
}

}  // namespace coinlab::cli
