#include <doctest.h>

#include <random>

#include "cvpm/analysis.hpp"
#include "cvpm/pauli.hpp"

using namespace cvpm;

TEST_CASE("row products are -I, column products are +I") {
    PauliSquare sq = build_pauli_square();
    Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
    for (int j = 1; j <= 3; ++j) {
        Eigen::Matrix4cd prod = sq.at(j, 1) * sq.at(j, 2) * sq.at(j, 3);
        CHECK((prod + id).cwiseAbs().maxCoeff() < 1e-12);
    }
    for (int k = 1; k <= 3; ++k) {
        Eigen::Matrix4cd prod = sq.at(1, k) * sq.at(2, k) * sq.at(3, k);
        CHECK((prod - id).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("entries are unitary and Hermitian") {
    PauliSquare sq = build_pauli_square();
    Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
    for (int j = 1; j <= 3; ++j)
        for (int k = 1; k <= 3; ++k) {
            const auto& m = sq.at(j, k);
            CHECK((m * m.adjoint() - id).cwiseAbs().maxCoeff() < 1e-12);
            CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        }
}

TEST_CASE("DV inequality value is 6 for any two-qubit state") {
    PauliSquare sq = build_pauli_square();
    std::mt19937_64 rng(23);
    std::normal_distribution<double> g(0.0, 1.0);
    auto eval_L = [&](const Eigen::Matrix4cd& rho) {
        std::array<double, 6> e{};
        for (int j = 1; j <= 3; ++j)
            e[static_cast<size_t>(j - 1)] =
                std::real((rho * sq.at(j, 1) * sq.at(j, 2) * sq.at(j, 3)).trace());
        for (int k = 1; k <= 3; ++k)
            e[static_cast<size_t>(2 + k)] =
                std::real((rho * sq.at(1, k) * sq.at(2, k) * sq.at(3, k)).trace());
        return evaluate_L(e);
    };
    CHECK(eval_L(0.25 * Eigen::Matrix4cd::Identity()) == doctest::Approx(6.0).epsilon(1e-12));
    for (int i = 0; i < 10; ++i) {
        Eigen::Vector4cd psi;
        for (int n = 0; n < 4; ++n) psi(n) = cx{g(rng), g(rng)};
        psi.normalize();
        Eigen::Matrix4cd rho = psi * psi.adjoint();
        CHECK(eval_L(rho) == doctest::Approx(6.0).epsilon(1e-12));
    }
}

TEST_CASE("GKP map sends each Pauli string to its square entry's class") {
    SquareParams params = SquareParams::canonical();
    CHECK(same_displacement_class(pauli_to_displacement({{Pauli::I, Pauli::I}, +1}, params),
                                  DisplacementProduct::identity()));
    // sigma_1^1 (x) I -> q-displacement on mode x of magnitude q0
    auto d = pauli_to_displacement({{Pauli::X, Pauli::I}, +1}, params);
    CHECK(std::abs(std::abs(d.amp_x) - params.q0) < 1e-12);
    CHECK(std::abs(d.amp_y) < 1e-12);

    PMSquare cv = build_pm_square(params);
    auto strings = pauli_square_strings();
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            auto mapped = pauli_to_displacement(strings[static_cast<size_t>(j)][static_cast<size_t>(k)], params);
            CHECK(same_displacement_class(mapped, cv.at(j + 1, k + 1), 1e-12));
        }
}
