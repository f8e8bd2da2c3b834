#include <doctest.h>

#include <random>

#include "coinlab/dynamics.hpp"
#include "oracles.hpp"

using namespace coinlab;
using doctest::Approx;

TEST_CASE("billiard and coin steps match the ray-intersection oracle") {
    const CoinSystem sys = make_system(CurveKind::ellipse, 1.4, 1.0, 1.3);
    for (const oracle::Step& s : oracle::kSteps) {
        CAPTURE(s.phi);
        CAPTURE(s.theta);
        const ChordHit hit = billiard_hit(sys, {s.phi, s.theta});
        CHECK(hit.out.phi == Approx(s.phi_bar).epsilon(1e-12));
        CHECK(hit.out.theta == Approx(s.theta_bar).epsilon(1e-12));
        CHECK(hit.length == Approx(s.length).epsilon(1e-12));
        const LiftedPoint c = coin_step(sys, {s.phi, s.theta});
        CHECK(c.phi == Approx(s.coin_phi).epsilon(1e-12));
        CHECK(c.theta == Approx(s.coin_theta).epsilon(1e-12));
    }
}

TEST_CASE("circle: billiard is a rotation by 2 theta, coin adds ell cot theta") {
    const CoinSystem sys = make_system(CurveKind::circle, 1, 1, 1.3);
    for (double th : {1e-6, 0.01, 0.5, 1.5, 2.5, kPi - 1e-4}) {
        const LiftedPoint b = billiard_step(sys, {0.4, th});
        CHECK(b.phi == Approx(0.4 + 2 * th).epsilon(1e-13));
        CHECK(b.theta == Approx(th).epsilon(1e-13));
        const LiftedPoint c = coin_step(sys, {0.4, th});
        // cot amplifies rounding in theta_bar by 1 / sin^2
        CHECK(c.phi == Approx(0.4 + 2 * th + 1.3 * std::cos(th) / std::sin(th)).epsilon(1e-9));
    }
}

TEST_CASE("circle keeps theta fixed along long orbits") {
    const CoinSystem sys = make_system(CurveKind::circle, 1, 1, 1.3);
    LiftedPoint p{0.0, 0.9};
    double drift = 0.0;
    for (int k = 0; k < 20000; ++k) {
        p = coin_step(sys, p);
        drift = std::max(drift, std::abs(p.theta - 0.9));
    }
    CHECK(drift < 1e-12);
}

TEST_CASE("reversibility and inverses on random points") {
    const CoinSystem sys = make_system(CurveKind::ellipse, 1.4, 1.0, 1.3);
    std::mt19937_64 rng(11);
    for (int k = 0; k < 500; ++k) {
        const LiftedPoint p{uniform(rng, 0, kTwoPi), uniform(rng, 1e-3, kPi - 1e-3)};
        const LiftedPoint q = billiard_step(sys, p);
        CHECK(q.phi > p.phi);
        CHECK(q.phi < p.phi + kTwoPi);
        const LiftedPoint r = involution(billiard_step(sys, involution(q)));
        CHECK(r.phi - kTwoPi == Approx(p.phi).epsilon(1e-12));
        CHECK(r.theta == Approx(p.theta).epsilon(1e-12));
        const LiftedPoint back = coin_inverse(sys, coin_step(sys, p));
        CHECK(back.phi == Approx(p.phi).epsilon(1e-11));
        CHECK(back.theta == Approx(p.theta).epsilon(1e-11));
    }
}

TEST_CASE("glancing departures stay near the start") {
    const CoinSystem sys = make_system(CurveKind::ellipse, 2.0, 1.0, 1.0);
    for (double th : {1e-10, 1e-7, 1e-4}) {
        const LiftedPoint q = billiard_step(sys, {1.0, th});
        const double rho = sys.table().profile().rho(1.0);
        CHECK(q.phi - 1.0 == Approx(2 * rho * th).epsilon(1e-3));
        CHECK(q.theta == Approx(th).epsilon(1e-3));
        const LiftedPoint r = billiard_step(sys, {1.0, kPi - th});
        CHECK(kTwoPi - (r.phi - 1.0) == Approx(2 * rho * th).epsilon(1e-3));
    }
}

TEST_CASE("analytic Jacobian agrees with the oracle and with differences") {
    const CoinSystem sys = make_system(CurveKind::ellipse, 1.4, 1.0, 1.3);
    const Mat2 A = analytic_jacobian(sys, MapKind::coin, {0.3, 0.7});
    CHECK(A.a11 == Approx(oracle::kCoinJacobian[0]).epsilon(1e-11));
    CHECK(A.a12 == Approx(oracle::kCoinJacobian[1]).epsilon(1e-11));
    CHECK(A.a21 == Approx(oracle::kCoinJacobian[2]).epsilon(1e-11));
    CHECK(A.a22 == Approx(oracle::kCoinJacobian[3]).epsilon(1e-11));
    const Mat2 F = jacobian(sys, MapKind::coin, {0.3, 0.7});
    CHECK(F.a11 == Approx(A.a11).epsilon(1e-8));
    CHECK(F.a12 == Approx(A.a12).epsilon(1e-8));
    CHECK(F.a21 == Approx(A.a21).epsilon(1e-8));
    CHECK(F.a22 == Approx(A.a22).epsilon(1e-8));
}

TEST_CASE("det DT times sin(theta')/sin(theta) is one") {
    const CoinSystem sys = make_system(CurveKind::ellipse, 3.0, 1.0, 0.7);
    std::mt19937_64 rng(5);
    for (int k = 0; k < 200; ++k) {
        const LiftedPoint p{uniform(rng, 0, kTwoPi), uniform(rng, 0.05, kPi - 0.05)};
        const auto [q, J] = coin_step_with_jacobian(sys, p);
        CHECK(J.det() * std::sin(q.theta) / std::sin(p.theta) == Approx(1.0).epsilon(1e-10));
        const Mat2 F = jacobian(sys, MapKind::billiard, p);
        CHECK(std::abs(F.det()) * std::sin(q.theta) / std::sin(p.theta) == Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("shift Jacobian is the shear with -ell / sin^2") {
    const CoinSystem sys = make_system(CurveKind::ellipse, 1.4, 1.0, 2.0);
    const Mat2 S = analytic_jacobian(sys, MapKind::shift, {1.0, 0.5});
    CHECK(S.a11 == 1.0);
    CHECK(S.a21 == 0.0);
    CHECK(S.a22 == 1.0);
    CHECK(S.a12 == Approx(-2.0 / (std::sin(0.5) * std::sin(0.5))));
}

TEST_CASE("guard band and bad systems") {
    const CoinSystem sys = make_system(CurveKind::ellipse, 1.4, 1.0, 1.3);
    CHECK_THROWS_AS(coin_step(sys, {0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(coin_step(sys, {0.0, kPi}), DomainError);
    CHECK_THROWS_AS(coin_step(sys, {0.0, -0.3}), DomainError);
    CHECK_THROWS_AS(make_system(CurveKind::ellipse, 1.4, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(CoinSystem(sys.table_ptr(), 1.0, 0.0), DomainError);
}

TEST_CASE("iterate records orbits, Jacobians and early stops") {
    const CoinSystem sys = make_system(CurveKind::ellipse, 1.4, 1.0, 1.3);
    const OrbitRecord r = iterate(sys, {0.2, 1.0}, 50, true);
    CHECK(r.steps() == 50);
    CHECK(r.jacobians.size() == 50);
    CHECK_FALSE(r.partial);
    LiftedPoint p{0.2, 1.0};
    for (int k = 0; k < 50; ++k) p = coin_step(sys, p);
    CHECK(r.points.back().phi == p.phi);
    CHECK(r.points.back().theta == p.theta);
    CHECK(iterate(sys, {0.2, 1.0}, 0).steps() == 0);

    // a guard wider than the orbit's height forces an early stop
    const CoinSystem tight(sys.table_ptr(), 1.3, 0.3);
    const OrbitRecord cut = iterate(tight, {0.0, 0.31}, 200);
    CHECK(cut.partial);
    CHECK_FALSE(cut.error.empty());
    CHECK(cut.steps() < 200);
}

TEST_CASE("stepping is deterministic") {
    const CoinSystem a = make_system(CurveKind::ellipse, 4.0, 1.0, 1.3);
    const CoinSystem b = make_system(CurveKind::ellipse, 4.0, 1.0, 1.3);
    const OrbitRecord ra = iterate(a, {1.0, 1.0}, 300);
    const OrbitRecord rb = iterate(b, {1.0, 1.0}, 300);
    for (std::size_t k = 0; k < ra.points.size(); ++k) {
        CHECK(ra.points[k].phi == rb.points[k].phi);
        CHECK(ra.points[k].theta == rb.points[k].theta);
    }
}
