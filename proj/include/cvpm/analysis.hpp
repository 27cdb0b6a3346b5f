#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "displacement.hpp"
#include "fock.hpp"

namespace cvpm {

inline constexpr double quantum_max = 6.0;
inline double nc_bound() { return 3.0 * std::sqrt(3.0); }

struct ContextEntry {
    ContextLabel label;
    std::string operator_label;
    double n_plus = 0.0;       // mean counts per window
    double n_minus = 0.0;
    double expectation = 0.0;  // real part
    double sd = 0.0;
    cx complex_expectation{0.0, 0.0};  // raw backend value, kept for diagnostics
};

struct InequalityReport {
    double L = 0.0;
    double sd = 0.0;
    double significance = 0.0;
    std::array<ContextEntry, 6> per_context;  // Row1..3, Col1..3
    double corrected_bound = 0.0;
    bool corrected_violation = false;
    bool violation = false;
};

struct KappaEntry {
    ContextLabel context;
    std::string pair_label;
    double n_plus = 0.0;
    double n_minus = 0.0;
    double kappa = 0.0;
    double sd = 0.0;
};

struct KappaReport {
    std::vector<KappaEntry> pairs;  // 18 ordered in-context pairs
    double mean_kappa = 0.0;
    double max_kappa = 0.0;

    void finalize() {
        mean_kappa = 0.0;
        max_kappa = 0.0;
        for (const auto& e : pairs) {
            mean_kappa += e.kappa;
            max_kappa = std::max(max_kappa, e.kappa);
        }
        if (!pairs.empty()) mean_kappa /= static_cast<double>(pairs.size());
    }
};

// |-(sum of column expectations) + (sum of row expectations)|,
// contexts ordered Row1..3, Col1..3; real parts only.
inline double evaluate_L(const std::array<double, 6>& expectations) {
    double rows = expectations[0] + expectations[1] + expectations[2];
    double cols = expectations[3] + expectations[4] + expectations[5];
    return std::abs(rows - cols);
}

inline double significance(double L, double sd) {
    if (sd <= 0.0) {
        if (L > nc_bound()) return std::numeric_limits<double>::infinity();
        throw std::invalid_argument("significance: sd must be positive");
    }
    return (L - nc_bound()) / sd;
}

// Worst-case expectation shift a noncommuting earlier measurement can
// cause: sqrt(4 kappa).
inline double disturbance_bound(double kappa) {
    if (kappa < 0.0 || kappa > 1.0) throw std::invalid_argument("disturbance_bound: kappa outside [0,1]");
    return 2.0 * std::sqrt(kappa);
}

struct DisturbanceRecord {
    cx delta{0.0, 0.0};       // tr(rho A^dag [A,B])
    double kappa = 0.0;       // from the order-superposition circuit
    double delta_bound = 0.0; // 2 sqrt(kappa)
    bool bound_holds = false;
};

// Exact sequential-disturbance trace on the Fock oracle, checked against
// the 2 sqrt(kappa) bound with kappa from the circuit on the same state.
inline DisturbanceRecord delta_exact(const TwoModeFockState& state, const DisplacementProduct& a,
                                     const DisplacementProduct& b) {
    TwoModeFockState ab = apply_op(apply_op(state, b), a);
    TwoModeFockState ba = apply_op(apply_op(state, a), b);
    Eigen::MatrixXcd comm = ab.coeff - ba.coeff;  // [A,B] |psi>
    TwoModeFockState cstate{state.cutoff, comm};
    TwoModeFockState adag_comm = apply_op(cstate, a.adjoint(), false);
    DisturbanceRecord rec;
    rec.delta = (state.coeff.conjugate().cwiseProduct(adag_comm.coeff)).sum();
    rec.kappa = commutativity_test_exact(state, a, b);
    rec.delta_bound = disturbance_bound(std::min(1.0, rec.kappa));
    rec.bound_holds = std::abs(rec.delta) <= rec.delta_bound + 1e-8;
    return rec;
}

// Worst-case accounting: each of the `slots` largest-kappa pairs in a
// context may disturb one expectation by 2 sqrt(kappa). The exact corrected
// inequality is an open problem; this is the documented bookkeeping.
inline double corrected_bound(const KappaReport& report, int slots_per_context = 3) {
    if (slots_per_context < 0 || slots_per_context > 3)
        throw std::invalid_argument("corrected_bound: slots_per_context outside [0,3]");
    double bound = nc_bound();
    for (const auto& ctx : all_contexts()) {
        std::vector<double> ks;
        for (const auto& e : report.pairs)
            if (e.context == ctx.label) ks.push_back(std::max(0.0, e.kappa));
        std::sort(ks.rbegin(), ks.rend());
        for (size_t i = 0; i < ks.size() && static_cast<int>(i) < slots_per_context; ++i)
            bound += disturbance_bound(std::min(1.0, ks[i]));
    }
    return bound;
}

// Largest uniform kappa for which the corrected bound stays below L.
inline double kappa_threshold(double L = quantum_max, int slots_per_context = 3) {
    double per_pair = (L - nc_bound()) / (6.0 * slots_per_context * 2.0);
    return per_pair * per_pair;
}

}  // namespace cvpm
