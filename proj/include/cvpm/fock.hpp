#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "displacement.hpp"
#include "gaussian.hpp"

namespace cvpm {

struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Associated Laguerre L_n^{(k)}(x) by the three-term recurrence.
inline double laguerre(int n, int k, double x) {
    if (n == 0) return 1.0;
    double lm1 = 1.0;
    double l = 1.0 + k - x;
    for (int j = 1; j < n; ++j) {
        double lp1 = ((2.0 * j + 1.0 + k - x) * l - (j + k) * lm1) / (j + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

// Scaling-and-squaring matrix exponential; generators here are small and
// anti-Hermitian so a fixed-order Taylor core is plenty.
inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& gen) {
    int squarings = 20;
    Eigen::MatrixXcd x = gen / std::pow(2.0, squarings);
    Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(gen.rows(), gen.cols());
    Eigen::MatrixXcd term = result;
    for (int k = 1; k <= 16; ++k) {
        term = (term * x) / static_cast<double>(k);
        result += term;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

}  // namespace detail

// Number-basis matrix of D(alpha) from the analytic Laguerre formula:
//   <m|D(alpha)|n> = sqrt(n!/m!) alpha^(m-n) e^(-|alpha|^2/2) L_n^(m-n)(|alpha|^2),  m >= n.
inline Eigen::MatrixXcd displacement_matrix(cx alpha, int cutoff) {
    if (cutoff < 2) throw std::invalid_argument("displacement_matrix: cutoff must be >= 2");
    const double a2 = std::norm(alpha);
    const double pref = std::exp(-0.5 * a2);
    Eigen::MatrixXcd d(cutoff, cutoff);
    for (int m = 0; m < cutoff; ++m) {
        for (int n = 0; n <= m; ++n) {
            int k = m - n;
            double mag = pref * std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0))) *
                         detail::laguerre(n, k, a2);
            d(m, n) = mag * std::pow(alpha, k);
            // <n|D|m> = <m|D(-alpha)|n>* pattern: sqrt(n!/m!) (-alpha*)^(m-n) ...
            if (m != n) d(n, m) = mag * std::pow(-std::conj(alpha), k);
        }
    }
    return d;
}

// Debug alternative: exponentiate alpha a^dag - alpha* a directly.
inline Eigen::MatrixXcd displacement_matrix_expm(cx alpha, int cutoff) {
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(cutoff, cutoff);
    for (int n = 0; n < cutoff - 1; ++n) {
        double r = std::sqrt(n + 1.0);
        gen(n + 1, n) = alpha * r;
        gen(n, n + 1) = -std::conj(alpha) * r;
    }
    return detail::expm(gen);
}

// S(r) = exp(r (a^2 - a^dag^2) / 2): squeezes x by e^-r, stretches p by e^r.
inline Eigen::MatrixXcd squeeze_matrix(double r, int cutoff) {
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(cutoff, cutoff);
    for (int n = 2; n < cutoff; ++n) {
        double c = 0.5 * r * std::sqrt(n * (n - 1.0));
        gen(n - 2, n) += c;
        gen(n, n - 2) -= c;
    }
    return detail::expm(gen);
}

// R(phi) = exp(-i phi n): rotates quadratures by phi in phase space.
inline Eigen::MatrixXcd rotation_matrix(double phi, int cutoff) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(cutoff, cutoff);
    for (int n = 0; n < cutoff; ++n) m(n, n) = std::polar(1.0, -phi * n);
    return m;
}

// Two-qumode pure state; coeff(m, n) is the amplitude of |m>_x |n>_y.
struct TwoModeFockState {
    int cutoff = 0;
    Eigen::MatrixXcd coeff;

    static TwoModeFockState vacuum(int cutoff) {
        TwoModeFockState s{cutoff, Eigen::MatrixXcd::Zero(cutoff, cutoff)};
        s.coeff(0, 0) = 1.0;
        return s;
    }

    static TwoModeFockState coherent(cx alpha_x, cx alpha_y, int cutoff) {
        Eigen::VectorXcd vx = displacement_matrix(alpha_x, cutoff).col(0);
        Eigen::VectorXcd vy = displacement_matrix(alpha_y, cutoff).col(0);
        return {cutoff, vx * vy.transpose()};
    }

    double norm() const { return coeff.norm(); }

    // Probability weight with either mode above n = cutoff/2.
    double high_weight() const {
        int half = cutoff / 2;
        double w = 0.0;
        for (int m = 0; m < cutoff; ++m)
            for (int n = 0; n < cutoff; ++n)
                if (m > half || n > half) w += std::norm(coeff(m, n));
        return w;
    }
};

inline void check_truncation(const TwoModeFockState& s, double tol = 1e-8) {
    double w = s.high_weight();
    if (w >= tol)
        throw TruncationError("truncation guard: probability weight " + std::to_string(w) +
                              " above n = cutoff/2; increase the Fock cutoff");
}

inline TwoModeFockState apply_op(const TwoModeFockState& s, const DisplacementProduct& op,
                                 bool guard = true) {
    Eigen::MatrixXcd dx = displacement_matrix(op.amp_x, s.cutoff);
    Eigen::MatrixXcd dy = displacement_matrix(op.amp_y, s.cutoff);
    TwoModeFockState out{s.cutoff, op.phase() * (dx * s.coeff * dy.transpose())};
    if (guard) check_truncation(out);
    return out;
}

// <state| op_n ... op_1 |state>, applying the operator matrices one by one.
// Independent of the symbolic composition route.
inline cx fock_expectation(const TwoModeFockState& state, const std::vector<DisplacementProduct>& ops,
                           bool guard = true) {
    TwoModeFockState cur = state;
    for (const auto& op : ops) cur = apply_op(cur, op, guard);
    return (state.coeff.conjugate().cwiseProduct(cur.coeff)).sum();
}

// Explicit ancilla circuit: |+> control, controlled ops in sequence, final
// Hadamard; returns P(ancilla = +) = (1 + Re<O>)/2 up to truncation.
inline double hadamard_test_exact(const TwoModeFockState& state,
                                  const std::vector<DisplacementProduct>& ops) {
    Eigen::MatrixXcd c0 = state.coeff / std::sqrt(2.0);
    TwoModeFockState branch{state.cutoff, state.coeff / std::sqrt(2.0)};
    for (const auto& op : ops) branch = apply_op(branch, op);
    Eigen::MatrixXcd plus = (c0 + branch.coeff) / std::sqrt(2.0);
    return plus.squaredNorm();
}

// Order-superposition circuit: A then B on the |0> branch, B then A on the
// |1> branch, final Hadamard; P(-) = ||[A,B] psi||^2 / 4.
inline double commutativity_test_exact(const TwoModeFockState& state, const DisplacementProduct& a,
                                       const DisplacementProduct& b) {
    TwoModeFockState c0{state.cutoff, state.coeff / std::sqrt(2.0)};
    TwoModeFockState c1 = c0;
    c0 = apply_op(apply_op(c0, a), b);
    c1 = apply_op(apply_op(c1, b), a);
    Eigen::MatrixXcd minus = (c0.coeff - c1.coeff) / std::sqrt(2.0);
    return minus.squaredNorm();
}

// Density-matrix form of the commutativity theorem, tr(rho |[A,B]|^2)/4.
// rho acts on the two-mode space flattened as index m*cutoff + n.
inline double commutativity_test_dm(const Eigen::MatrixXcd& rho, const DisplacementProduct& a,
                                    const DisplacementProduct& b, int cutoff) {
    auto full = [cutoff](const DisplacementProduct& op) {
        Eigen::MatrixXcd dx = displacement_matrix(op.amp_x, cutoff);
        Eigen::MatrixXcd dy = displacement_matrix(op.amp_y, cutoff);
        Eigen::MatrixXcd m(cutoff * cutoff, cutoff * cutoff);
        for (int r = 0; r < cutoff; ++r)
            for (int c = 0; c < cutoff; ++c)
                m.block(r * cutoff, c * cutoff, cutoff, cutoff) = dx(r, c) * dy;
        return Eigen::MatrixXcd(op.phase() * m);
    };
    Eigen::MatrixXcd am = full(a), bm = full(b);
    Eigen::MatrixXcd comm = am * bm - bm * am;
    return 0.25 * std::real((comm * rho * comm.adjoint()).trace());
}

struct ConvergenceRow {
    int cutoff;
    double max_deviation;
};

// Max |fock - gaussian| over the 9 square entries and 6 context products
// on vacuum, per cutoff. The fock route multiplies matrices sequentially.
inline std::vector<ConvergenceRow> convergence_scan(const PMSquare& square,
                                                    const std::vector<int>& cutoffs) {
    GaussianState vac = GaussianState::vacuum(2);
    std::vector<ConvergenceRow> rows;
    rows.reserve(cutoffs.size());
    for (int cutoff : cutoffs) {
        TwoModeFockState fvac = TwoModeFockState::vacuum(cutoff);
        double dev = 0.0;
        for (int j = 1; j <= 3; ++j)
            for (int k = 1; k <= 3; ++k) {
                cx f = fock_expectation(fvac, {square.at(j, k)}, false);
                cx g = expectation(vac, square.at(j, k));
                dev = std::max(dev, std::abs(f - g));
            }
        for (const auto& ctx : all_contexts()) {
            cx f = fock_expectation(fvac, context_ops(square, ctx), false);
            cx g = expectation(vac, context_product(square, ctx));
            dev = std::max(dev, std::abs(f - g));
        }
        rows.push_back({cutoff, dev});
    }
    return rows;
}

}  // namespace cvpm
