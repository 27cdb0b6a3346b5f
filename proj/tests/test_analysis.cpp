#include <doctest.h>

#include <algorithm>

#include "cvpm/analysis.hpp"
#include "helpers.hpp"

using namespace cvpm;

TEST_CASE("evaluate_L basics and measured-run input") {
    CHECK(evaluate_L({-1, -1, -1, 1, 1, 1}) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(evaluate_L({0, 0, 0, 0, 0, 0}) == 0.0);
    // Measured per-context values reproduce the reported inequality value.
    CHECK(evaluate_L({-0.9928, -0.9929, -0.9881, 0.9912, 0.9916, 0.9831}) ==
          doctest::Approx(5.9397).epsilon(1e-4));
}

TEST_CASE("evaluate_L is invariant under in-group permutations") {
    std::array<double, 6> e{-0.91, -0.88, -0.95, 0.97, 0.93, 0.90};
    double base = evaluate_L(e);
    CHECK(evaluate_L({e[2], e[0], e[1], e[4], e[5], e[3]}) == doctest::Approx(base).epsilon(1e-15));
}

TEST_CASE("uniform visibility scales L exactly") {
    for (double v : {0.5, 0.85, 0.9928, 1.0}) {
        CHECK(evaluate_L({-v, -v, -v, v, v, v}) == doctest::Approx(6.0 * v).epsilon(1e-12));
    }
}

TEST_CASE("significance in standard deviations") {
    CHECK(significance(5.9398, 0.0019) == doctest::Approx((5.9398 - 3.0 * std::sqrt(3.0)) / 0.0019));
    CHECK(significance(5.9398, 0.0019) >= 350.0);
    CHECK(significance(nc_bound(), 0.1) == 0.0);
    CHECK(significance(5.0, 0.1) < 0.0);
    CHECK(std::isinf(significance(6.0, 0.0)));
    CHECK_THROWS_AS(significance(5.0, 0.0), std::invalid_argument);
}

TEST_CASE("disturbance bound") {
    CHECK(disturbance_bound(0.0) == 0.0);
    CHECK(disturbance_bound(0.02) == doctest::Approx(0.2828).epsilon(1e-3));
    CHECK(disturbance_bound(1.0) == 2.0);
    CHECK_THROWS_AS(disturbance_bound(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(disturbance_bound(1.1), std::invalid_argument);
}

TEST_CASE("delta_exact: commuting pair gives zero, bound holds on vacuum") {
    SquareParams canon = SquareParams::canonical();
    PMSquare sq = build_pm_square(canon);
    TwoModeFockState vac = TwoModeFockState::vacuum(60);

    DisturbanceRecord zero = delta_exact(vac, sq.at(1, 1), sq.at(1, 2));
    CHECK(std::abs(zero.delta) < 1e-10);
    CHECK(zero.bound_holds);

    auto a = DisplacementProduct::on_x(canon.q0);
    auto b = DisplacementProduct::on_x(cx{0, 1} * canon.p0);
    DisturbanceRecord rec = delta_exact(vac, a, b);
    CHECK(rec.kappa == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rec.bound_holds);
}

TEST_CASE("disturbance bound dominance over random sweeps") {
    std::mt19937_64 rng(89);
    for (int i = 0; i < 20; ++i) {
        TwoModeFockState st = testing::random_probe(rng, 0.4, 0.25).fock(60);
        auto a = testing::random_op(rng, 1.0);
        auto b = testing::random_op(rng, 1.0);
        DisturbanceRecord rec = delta_exact(st, a, b);
        CHECK(rec.bound_holds);
    }
}

namespace {
KappaReport uniform_report(double kappa) {
    KappaReport r;
    for (const auto& pr : in_context_pairs()) {
        KappaEntry e;
        e.context = pr.context;
        e.kappa = kappa;
        r.pairs.push_back(e);
    }
    r.finalize();
    return r;
}
}  // namespace

TEST_CASE("corrected bound accounting") {
    CHECK(corrected_bound(uniform_report(0.0)) == doctest::Approx(nc_bound()).epsilon(1e-15));
    double b = corrected_bound(uniform_report(0.0174));
    CHECK(b == doctest::Approx(nc_bound() + 36.0 * std::sqrt(0.0174)).epsilon(1e-12));
    CHECK(b == doctest::Approx(9.94).epsilon(1e-2));
    CHECK(b > quantum_max);  // the correction swamps the quantum maximum
    // Fewer slots shrink the correction proportionally.
    CHECK(corrected_bound(uniform_report(0.0174), 2) ==
          doctest::Approx(nc_bound() + 24.0 * std::sqrt(0.0174)).epsilon(1e-12));
}

TEST_CASE("corrected bound is monotone in every kappa") {
    KappaReport lo = uniform_report(0.01);
    KappaReport hi = lo;
    hi.pairs[7].kappa = 0.02;
    hi.finalize();
    CHECK(corrected_bound(hi) > corrected_bound(lo));
}

TEST_CASE("kappa threshold for a surviving corrected violation") {
    double k = kappa_threshold();
    CHECK(k == doctest::Approx(std::pow((6.0 - nc_bound()) / 36.0, 2)).epsilon(1e-12));
    CHECK(k == doctest::Approx(5.0e-4).epsilon(0.01));
    // Just below threshold the corrected bound stays under the quantum max.
    CHECK(corrected_bound(uniform_report(k * 0.99)) < quantum_max);
    CHECK(corrected_bound(uniform_report(k * 1.01)) > quantum_max);
}
