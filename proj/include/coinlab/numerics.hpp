#pragma once

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <tuple>
#include <utility>

#include "coinlab/errors.hpp"

namespace coinlab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce x to [0, 2pi).
inline double mod_two_pi(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

/// Reduce x to (-pi, pi].
inline double wrap_to_pi(double x) {
    double r = mod_two_pi(x);
    return r > kPi ? r - kTwoPi : r;
}

/// Distance on the circle R / 2piZ.
inline double torus_distance(double a, double b) { return std::abs(wrap_to_pi(a - b)); }

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 rotate(Vec2 a, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * a.x - s * a.y, s * a.x + c * a.y};
}

/// Row-major 2x2 matrix.
struct Mat2 {
    double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;

    double det() const { return a11 * a22 - a12 * a21; }
    static Mat2 identity() { return {}; }

    friend Mat2 operator*(const Mat2& l, const Mat2& r) {
        return {l.a11 * r.a11 + l.a12 * r.a21, l.a11 * r.a12 + l.a12 * r.a22,
                l.a21 * r.a11 + l.a22 * r.a21, l.a21 * r.a12 + l.a22 * r.a22};
    }
    friend Vec2 operator*(const Mat2& m, Vec2 v) {
        return {m.a11 * v.x + m.a12 * v.y, m.a21 * v.x + m.a22 * v.y};
    }
};

/// Uniform double in [0, 1) built from the raw engine output, so sequences are
/// identical across standard library implementations.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Newton iteration kept inside a sign-change bracket; falls back to bisection
/// whenever the Newton step leaves the bracket or stalls.
///
/// `f(x)` returns {value, derivative}. Requires f(lo) and f(hi) of opposite sign
/// (or one of them zero). Stops when the bracket or the step is below `xtol`.
template <class F>
double safeguarded_newton(F&& f, double lo, double hi, double x0, double xtol,
                          int max_iter = 100) {
    auto [flo, dlo] = f(lo);
    auto [fhi, dhi] = f(hi);
    (void)dlo;
    (void)dhi;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw NumericError("safeguarded_newton: root not bracketed");
    }
    // orient so that f(lo) < 0
    if (flo > 0.0) std::swap(lo, hi);

    double x = (x0 > std::min(lo, hi) && x0 < std::max(lo, hi)) ? x0 : 0.5 * (lo + hi);
    double dx_old = std::abs(hi - lo);
    double dx = dx_old;
    auto [fx, dfx] = f(x);
    for (int it = 0; it < max_iter; ++it) {
        if (fx == 0.0) return x;
        if (fx < 0.0) lo = x; else hi = x;

        const bool newton_leaves = ((x - hi) * dfx - fx) * ((x - lo) * dfx - fx) > 0.0;
        const bool newton_slow = std::abs(2.0 * fx) > std::abs(dx_old * dfx);
        dx_old = dx;
        if (newton_leaves || newton_slow || dfx == 0.0) {
            dx = 0.5 * (hi - lo);
            x = lo + dx;
        } else {
            dx = fx / dfx;
            x -= dx;
        }
        if (std::abs(dx) <= xtol || std::abs(hi - lo) <= xtol) {
            return x;
        }
        std::tie(fx, dfx) = f(x);
    }
    throw NumericError("safeguarded_newton: no convergence");
}

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Runs `fn(i)` for i in [0, n). Results must be written by index so that the
/// outcome does not depend on scheduling.
template <class Fn>
void for_each_index(std::size_t n, Fn&& fn) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace coinlab
