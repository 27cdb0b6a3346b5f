#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "displacement.hpp"
#include "fock.hpp"
#include "gaussian.hpp"
#include "noise.hpp"

namespace cvpm {

enum class BackendKind { Gaussian, Fock };

struct Backend {
    BackendKind kind = BackendKind::Gaussian;
    int cutoff = 60;
};

// Probe state: per-mode squeezed, rotated, displaced vacuum. Realizable on
// both backends so they can be cross-checked on identical inputs.
struct ProbeSpec {
    std::array<cx, 2> disp{cx{0, 0}, cx{0, 0}};
    std::array<double, 2> squeeze{0.0, 0.0};
    std::array<double, 2> rotation{0.0, 0.0};

    GaussianState gaussian() const {
        Eigen::VectorXd mean(4);
        Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(4, 4);
        const double s2 = std::sqrt(2.0);
        for (int m = 0; m < 2; ++m) {
            auto mi = static_cast<size_t>(m);
            mean(2 * m) = s2 * std::real(disp[mi]);
            mean(2 * m + 1) = s2 * std::imag(disp[mi]);
            double c = std::cos(rotation[mi]), s = std::sin(rotation[mi]);
            Eigen::Matrix2d o;
            o << c, s, -s, c;
            Eigen::Matrix2d v = Eigen::Vector2d(0.5 * std::exp(-2.0 * squeeze[mi]),
                                                0.5 * std::exp(2.0 * squeeze[mi]))
                                    .asDiagonal();
            cov.block<2, 2>(2 * m, 2 * m) = o * v * o.transpose();
        }
        return GaussianState(mean, cov);
    }

    TwoModeFockState fock(int cutoff) const {
        Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(cutoff);
        e0(0) = 1.0;
        auto mode_vec = [&](size_t m) {
            Eigen::VectorXcd v = squeeze_matrix(squeeze[m], cutoff) * e0;
            v = rotation_matrix(rotation[m], cutoff) * v;
            return Eigen::VectorXcd(displacement_matrix(disp[m], cutoff) * v);
        };
        Eigen::VectorXcd vx = mode_vec(0), vy = mode_vec(1);
        return {cutoff, vx * vy.transpose()};
    }
};

struct ExperimentConfig {
    SquareParams square_params = SquareParams::canonical();
    Backend backend;
    ProbeSpec probe;
    NoiseModel noise;
    double count_rate = 1e5;                                 // Hadamard-test events / s
    std::optional<std::array<double, 6>> per_context_rate;   // Row1..3, Col1..3
    double kappa_count_rate = 23000.0;                       // commutativity-test events / s
    double window_s = 1.0;
    int n_windows = 100;
    std::uint64_t rng_seed = 1;
    int slots_per_context = 3;

    void validate() const {
        noise.validate();
        if (count_rate <= 0 || kappa_count_rate <= 0)
            throw std::invalid_argument("ExperimentConfig: count rate must be positive");
        if (n_windows < 1) throw std::invalid_argument("ExperimentConfig: n_windows must be >= 1");
        if (window_s <= 0) throw std::invalid_argument("ExperimentConfig: window_s must be positive");
        if (backend.kind == BackendKind::Fock && backend.cutoff < 2)
            throw std::invalid_argument("ExperimentConfig: fock cutoff must be >= 2");
    }

    SquareParams effective_square_params() const { return miscalibrate(square_params, noise); }

    double context_rate(int context_index) const {
        if (per_context_rate) return (*per_context_rate)[static_cast<size_t>(context_index)];
        return count_rate;
    }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace detail

// Independent deterministic stream per (seed, task).
inline std::mt19937_64 task_rng(std::uint64_t seed, std::uint64_t task_id) {
    return std::mt19937_64(detail::splitmix64(seed ^ detail::splitmix64(task_id)));
}

// Backend expectation of the composed operator sequence, with the
// end-to-end alignment residual added to the net displacement.
inline cx backend_expectation(const ExperimentConfig& cfg, const std::vector<DisplacementProduct>& ops) {
    DisplacementProduct net = compose(ops);
    net.amp_x += cfg.noise.residual_amp_x;
    net.amp_y += cfg.noise.residual_amp_y;
    bool has_residual = std::abs(cfg.noise.residual_amp_x) > 0 || std::abs(cfg.noise.residual_amp_y) > 0;
    if (cfg.backend.kind == BackendKind::Gaussian) return expectation(cfg.probe.gaussian(), net);
    TwoModeFockState state = cfg.probe.fock(cfg.backend.cutoff);
    if (has_residual) return fock_expectation(state, {net});
    // Sequential controlled application, one matrix per operator.
    double p = hadamard_test_exact(state, ops);
    // P(+) = (1 + Re<O>)/2; the imaginary part is recovered from the
    // composed-operator route so both backends report a full complex value.
    cx composed = fock_expectation(state, {net});
    return cx{2.0 * p - 1.0, std::imag(composed)};
}

// Noisy Hadamard-test P(+) for an operator sequence in a given context slot.
inline double hadamard_test(const ExperimentConfig& cfg, const std::vector<DisplacementProduct>& ops,
                            int context_index = -1) {
    if (ops.empty()) throw std::invalid_argument("hadamard_test: empty operator list");
    double p_ideal = 0.5 * (1.0 + std::real(backend_expectation(cfg, ops)));
    double v = context_index >= 0 ? effective_visibility(cfg.noise, context_index)
                                  : effective_visibility(cfg.noise);
    return dephase(p_ideal, v);
}

// Noisy commutativity-test P(-); the Sagnac loop has its own visibility.
inline double commutativity_test(const ExperimentConfig& cfg, const DisplacementProduct& a,
                                 const DisplacementProduct& b) {
    double k;
    if (cfg.backend.kind == BackendKind::Gaussian) {
        k = kappa_ideal(a, b);
    } else {
        k = commutativity_test_exact(cfg.probe.fock(cfg.backend.cutoff), a, b);
    }
    double vs = cfg.noise.visibility_sagnac;
    return 0.5 * (1.0 - vs) + vs * k;
}

struct CountRecord {
    double n_plus = 0.0;   // mean counts per window
    double n_minus = 0.0;
    double expectation = 0.0;
    double sd = 0.0;       // standard error of the per-window expectation mean
    int zero_count_windows = 0;
};

// Poisson windows split binomially by p_plus. `p_backend` is the
// pre-contrast probability and `visibility` its mean contrast, so the
// per-window jitter can fluctuate the visibility itself (truncated normal
// on [0,1]). Multiphoton double-clicks are discarded at rate g2.
inline CountRecord sample_counts(double p_backend, double visibility, double rate,
                                 const ExperimentConfig& cfg, std::mt19937_64& rng) {
    if (p_backend < 0.0 || p_backend > 1.0)
        throw std::invalid_argument("sample_counts: probability outside [0,1]");
    double lambda = rate * cfg.window_s * (1.0 - cfg.noise.g2);
    std::poisson_distribution<long long> window_counts(lambda);
    const int w = cfg.n_windows;
    std::vector<double> per_window(static_cast<size_t>(w));
    CountRecord rec;
    double sum_e = 0.0;
    for (int i = 0; i < w; ++i) {
        long long n = window_counts(rng);
        double vw = truncated_normal(visibility, cfg.noise.visibility_jitter_sd, 0.0, 1.0, rng);
        double pw = dephase(p_backend, vw);
        long long np = 0;
        if (n > 0) {
            std::binomial_distribution<long long> split(n, pw);
            np = split(rng);
        }
        double e = 0.0;
        if (n > 0) {
            e = (2.0 * static_cast<double>(np) - static_cast<double>(n)) / static_cast<double>(n);
        } else {
            ++rec.zero_count_windows;  // degenerate window, counted as 0
        }
        per_window[static_cast<size_t>(i)] = e;
        sum_e += e;
        rec.n_plus += static_cast<double>(np);
        rec.n_minus += static_cast<double>(n - np);
    }
    rec.n_plus /= w;
    rec.n_minus /= w;
    rec.expectation = sum_e / w;
    double var = 0.0;
    for (double e : per_window) var += (e - rec.expectation) * (e - rec.expectation);
    if (w > 1) var /= (w - 1.0);
    rec.sd = std::sqrt(var / w);
    return rec;
}

// Convenience overload: directly sample a fixed probability.
inline CountRecord sample_counts(double p_plus, const ExperimentConfig& cfg, std::mt19937_64& rng) {
    return sample_counts(p_plus, 1.0, cfg.count_rate, cfg, rng);
}

inline std::string operator_label(int j, int k) {
    return "O" + std::to_string(j) + std::to_string(k);
}

inline std::string context_operator_label(const Context& ctx) {
    std::string s;
    for (auto [j, k] : ctx.members) {
        if (!s.empty()) s += " ";
        s += operator_label(j, k);
    }
    return s;
}

// Analytic (infinite statistics) kappa report under the configured noise;
// used for the corrected-bound bookkeeping without Monte Carlo scatter.
inline KappaReport analytic_kappa_report(const ExperimentConfig& cfg) {
    PMSquare square = build_pm_square(cfg.effective_square_params());
    KappaReport report;
    for (const auto& pr : in_context_pairs()) {
        const auto& a = square.at(pr.first.first, pr.first.second);
        const auto& b = square.at(pr.second.first, pr.second.second);
        KappaEntry e;
        e.context = pr.context;
        e.pair_label = operator_label(pr.first.first, pr.first.second) + " " +
                       operator_label(pr.second.first, pr.second.second);
        e.kappa = commutativity_test(cfg, a, b);
        report.pairs.push_back(e);
    }
    report.finalize();
    return report;
}

// Full six-context run: Hadamard tests, count sampling, inequality value,
// quadrature error propagation, corrected bound.
inline InequalityReport run_pm_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    PMSquare square = build_pm_square(cfg.effective_square_params());
    auto contexts = all_contexts();
    InequalityReport report;
    std::array<double, 6> expectations{};
    double var = 0.0;
    for (int i = 0; i < 6; ++i) {
        const auto& ctx = contexts[static_cast<size_t>(i)];
        auto ops = context_ops(square, ctx);
        cx raw = backend_expectation(cfg, ops);
        double p_backend = 0.5 * (1.0 + std::real(raw));
        double v = effective_visibility(cfg.noise, i);
        auto rng = task_rng(cfg.rng_seed, static_cast<std::uint64_t>(i));
        CountRecord counts = sample_counts(p_backend, v, cfg.context_rate(i), cfg, rng);
        ContextEntry& entry = report.per_context[static_cast<size_t>(i)];
        entry.label = ctx.label;
        entry.operator_label = context_operator_label(ctx);
        entry.n_plus = counts.n_plus;
        entry.n_minus = counts.n_minus;
        entry.expectation = counts.expectation;
        entry.sd = counts.sd;
        entry.complex_expectation = raw;
        expectations[static_cast<size_t>(i)] = counts.expectation;
        var += counts.sd * counts.sd;
    }
    report.L = evaluate_L(expectations);
    report.sd = std::sqrt(var);
    report.significance = report.sd > 0.0 ? (report.L - nc_bound()) / report.sd
                                          : (report.L > nc_bound()
                                                 ? std::numeric_limits<double>::infinity()
                                                 : -std::numeric_limits<double>::infinity());
    report.violation = report.L > nc_bound();
    KappaReport kappas = analytic_kappa_report(cfg);
    report.corrected_bound = corrected_bound(kappas, cfg.slots_per_context);
    report.corrected_violation = report.L > report.corrected_bound;
    return report;
}

// All 18 ordered in-context pairs with sampled counts.
inline KappaReport run_commutativity_suite(const ExperimentConfig& cfg) {
    cfg.validate();
    PMSquare square = build_pm_square(cfg.effective_square_params());
    KappaReport report;
    std::uint64_t task = 100;  // offset so pair streams never collide with context streams
    for (const auto& pr : in_context_pairs()) {
        const auto& a = square.at(pr.first.first, pr.first.second);
        const auto& b = square.at(pr.second.first, pr.second.second);
        double k_ideal;
        if (cfg.backend.kind == BackendKind::Gaussian) {
            k_ideal = kappa_ideal(a, b);
        } else {
            k_ideal = commutativity_test_exact(cfg.probe.fock(cfg.backend.cutoff), a, b);
        }
        auto rng = task_rng(cfg.rng_seed, task++);
        double lambda = cfg.kappa_count_rate * cfg.window_s;
        std::poisson_distribution<long long> window_counts(lambda);
        KappaEntry entry;
        entry.context = pr.context;
        entry.pair_label = operator_label(pr.first.first, pr.first.second) + " " +
                           operator_label(pr.second.first, pr.second.second);
        std::vector<double> per_window(static_cast<size_t>(cfg.n_windows));
        double sum_k = 0.0;
        for (int w = 0; w < cfg.n_windows; ++w) {
            long long n = window_counts(rng);
            double vw = truncated_normal(cfg.noise.visibility_sagnac, cfg.noise.visibility_jitter_sd,
                                         0.0, 1.0, rng);
            double pw = 0.5 * (1.0 - vw) + vw * k_ideal;
            long long nm = 0;
            if (n > 0) {
                std::binomial_distribution<long long> split(n, pw);
                nm = split(rng);
            }
            double kw = n > 0 ? static_cast<double>(nm) / static_cast<double>(n) : 0.0;
            per_window[static_cast<size_t>(w)] = kw;
            sum_k += kw;
            entry.n_plus += static_cast<double>(n - nm);
            entry.n_minus += static_cast<double>(nm);
        }
        entry.n_plus /= cfg.n_windows;
        entry.n_minus /= cfg.n_windows;
        entry.kappa = sum_k / cfg.n_windows;
        double var = 0.0;
        for (double kw : per_window) var += (kw - entry.kappa) * (kw - entry.kappa);
        if (cfg.n_windows > 1) var /= (cfg.n_windows - 1.0);
        entry.sd = std::sqrt(var / cfg.n_windows);
        report.pairs.push_back(entry);
    }
    report.finalize();
    return report;
}

}  // namespace cvpm
