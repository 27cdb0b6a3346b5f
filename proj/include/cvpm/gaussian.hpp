#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <complex>
#include <stdexcept>
#include <vector>

#include "displacement.hpp"

namespace cvpm {

// Gaussian state over n qumodes, quadrature order (x1, p1, x2, p2, ...).
// Convention: [x, p] = i, a = (x + ip)/sqrt(2), vacuum covariance I/2.
// D(alpha) shifts x by sqrt(2) Re(alpha) and p by sqrt(2) Im(alpha).
class GaussianState {
public:
    GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
        : mean_(std::move(mean)), cov_(std::move(cov)) {
        const auto dim = mean_.size();
        if (dim <= 0 || dim % 2 != 0 || cov_.rows() != dim || cov_.cols() != dim)
            throw std::invalid_argument("GaussianState: dimension mismatch");
        if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-10)
            throw std::invalid_argument("GaussianState: covariance not symmetric");
        // Uncertainty relation: cov + i Omega / 2 >= 0.
        Eigen::MatrixXcd m = cov_.cast<cx>();
        const cx ih{0.0, 0.5};
        for (Eigen::Index k = 0; k < dim; k += 2) {
            m(k, k + 1) += ih;
            m(k + 1, k) -= ih;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-8)
            throw std::invalid_argument("GaussianState: covariance violates the uncertainty relation");
    }

    static GaussianState vacuum(int n_modes) {
        return GaussianState(Eigen::VectorXd::Zero(2 * n_modes),
                             0.5 * Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
    }

    static GaussianState thermal(int n_modes, double mean_photons) {
        if (mean_photons < 0.0) throw std::invalid_argument("thermal: negative photon number");
        return GaussianState(Eigen::VectorXd::Zero(2 * n_modes),
                             (mean_photons + 0.5) * Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
    }

    int n_modes() const { return static_cast<int>(mean_.size() / 2); }
    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::MatrixXd& cov() const { return cov_; }

private:
    Eigen::VectorXd mean_;
    Eigen::MatrixXd cov_;
};

// <D(amps)> = exp(i u.mean - u^T cov u / 2) with
// u_{2k} = sqrt(2) Im(amps_k), u_{2k+1} = -sqrt(2) Re(amps_k).
inline cx characteristic(const GaussianState& state, const std::vector<cx>& amps) {
    if (static_cast<int>(amps.size()) != state.n_modes())
        throw std::invalid_argument("characteristic: amplitude count != mode count");
    const double s2 = std::sqrt(2.0);
    Eigen::VectorXd u(2 * state.n_modes());
    for (int k = 0; k < state.n_modes(); ++k) {
        u(2 * k) = s2 * std::imag(amps[static_cast<size_t>(k)]);
        u(2 * k + 1) = -s2 * std::real(amps[static_cast<size_t>(k)]);
    }
    double quad = u.dot(state.cov() * u);
    double lin = u.dot(state.mean());
    return std::exp(-0.5 * quad) * std::polar(1.0, lin);
}

inline cx expectation(const GaussianState& state, const DisplacementProduct& op) {
    if (state.n_modes() != 2)
        throw std::invalid_argument("expectation: DisplacementProduct needs a 2-mode state");
    return op.phase() * characteristic(state, {op.amp_x, op.amp_y});
}

inline GaussianState apply_displacement(const GaussianState& state, const std::vector<cx>& amps) {
    if (static_cast<int>(amps.size()) != state.n_modes())
        throw std::invalid_argument("apply_displacement: amplitude count != mode count");
    const double s2 = std::sqrt(2.0);
    Eigen::VectorXd mean = state.mean();
    for (int k = 0; k < state.n_modes(); ++k) {
        mean(2 * k) += s2 * std::real(amps[static_cast<size_t>(k)]);
        mean(2 * k + 1) += s2 * std::imag(amps[static_cast<size_t>(k)]);
    }
    return GaussianState(mean, state.cov());
}

}  // namespace cvpm
