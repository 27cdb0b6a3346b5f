#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvpm {

using cx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// Wraps an angle to (-pi, pi].
inline double wrap_angle(double theta) {
    double w = std::remainder(theta, 2.0 * pi);
    if (w <= -pi) w = pi;
    return w;
}

// A two-mode Weyl operator: unit phase times D_x(amp_x) D_y(amp_y).
// The phase is tracked as an exact angle so long products of square
// entries land on +-1 without drift; the complex value is derived.
struct DisplacementProduct {
    double phase_angle = 0.0;  // phase = exp(i * phase_angle)
    cx amp_x{0.0, 0.0};
    cx amp_y{0.0, 0.0};

    cx phase() const { return std::polar(1.0, phase_angle); }

    static DisplacementProduct identity() { return {}; }

    // Single-mode displacement on mode x or y.
    static DisplacementProduct on_x(cx alpha) { return {0.0, alpha, cx{0.0, 0.0}}; }
    static DisplacementProduct on_y(cx alpha) { return {0.0, cx{0.0, 0.0}, alpha}; }

    DisplacementProduct negated() const {
        return {wrap_angle(phase_angle + pi), amp_x, amp_y};
    }

    DisplacementProduct adjoint() const {
        return {wrap_angle(-phase_angle), -amp_x, -amp_y};
    }
};

// Operator product a*b. Per mode, D(alpha) D(beta) = e^{i Im(alpha beta*)} D(alpha+beta).
inline DisplacementProduct compose(const DisplacementProduct& a, const DisplacementProduct& b) {
    double weyl = std::imag(a.amp_x * std::conj(b.amp_x)) + std::imag(a.amp_y * std::conj(b.amp_y));
    return {wrap_angle(a.phase_angle + b.phase_angle + weyl), a.amp_x + b.amp_x, a.amp_y + b.amp_y};
}

// Sequential application: the first list element acts first, so the
// result is ops[n-1] * ... * ops[0] as a matrix product.
inline DisplacementProduct compose(const std::vector<DisplacementProduct>& ops) {
    DisplacementProduct acc = DisplacementProduct::identity();
    for (const auto& op : ops) acc = compose(op, acc);
    return acc;
}

// Angle of compose(a,b).phase / compose(b,a).phase; 0 iff a and b commute.
inline double exchange_angle(const DisplacementProduct& a, const DisplacementProduct& b) {
    double w = 2.0 * (std::imag(a.amp_x * std::conj(b.amp_x)) + std::imag(a.amp_y * std::conj(b.amp_y)));
    return wrap_angle(w);
}

inline cx exchange_phase(const DisplacementProduct& a, const DisplacementProduct& b) {
    return std::polar(1.0, exchange_angle(a, b));
}

// Noncommutation fraction sin^2(dphi/2); state-independent for
// displacement products since |[A,B]|^2 is proportional to identity.
inline double kappa_ideal(const DisplacementProduct& a, const DisplacementProduct& b) {
    double s = std::sin(0.5 * exchange_angle(a, b));
    return s * s;
}

struct SquareParams {
    double q0 = 0.0;
    double p0 = 0.0;

    // q0 = p0 = sqrt(pi/2); only the product is constrained, the
    // symmetric choice keeps Fock cutoff requirements low.
    static SquareParams canonical() {
        double r = std::sqrt(pi / 2.0);
        return {r, r};
    }

    double product() const { return q0 * p0; }
    bool is_canonical(double tol = 1e-12) const { return std::abs(product() - pi / 2.0) < tol; }
};

// 3x3 grid of displacement operators, 1-based (j,k) = (row, column).
struct PMSquare {
    std::array<std::array<DisplacementProduct, 3>, 3> ops;

    const DisplacementProduct& at(int j, int k) const {
        if (j < 1 || j > 3 || k < 1 || k > 3) throw std::out_of_range("PMSquare index");
        return ops[static_cast<size_t>(j - 1)][static_cast<size_t>(k - 1)];
    }
};

inline PMSquare build_pm_square(const SquareParams& params) {
    const double q0 = params.q0, p0 = params.p0;
    const cx iq{0.0, 1.0};
    PMSquare sq;
    sq.ops[0][0] = DisplacementProduct::on_x(-q0);
    sq.ops[0][1] = DisplacementProduct::on_y(-iq * p0);
    sq.ops[0][2] = DisplacementProduct{pi, q0, iq * p0};
    sq.ops[1][0] = DisplacementProduct::on_y(-q0);
    sq.ops[1][1] = DisplacementProduct::on_x(-iq * p0);
    sq.ops[1][2] = DisplacementProduct{pi, iq * p0, q0};
    sq.ops[2][0] = DisplacementProduct{0.0, q0, q0};
    sq.ops[2][1] = DisplacementProduct{0.0, iq * p0, iq * p0};
    sq.ops[2][2] = DisplacementProduct{0.0, -q0 - iq * p0, -q0 - iq * p0};
    return sq;
}

enum class ContextLabel { Row1, Row2, Row3, Col1, Col2, Col3 };

inline const char* context_name(ContextLabel l) {
    switch (l) {
        case ContextLabel::Row1: return "Row 1";
        case ContextLabel::Row2: return "Row 2";
        case ContextLabel::Row3: return "Row 3";
        case ContextLabel::Col1: return "Column 1";
        case ContextLabel::Col2: return "Column 2";
        case ContextLabel::Col3: return "Column 3";
    }
    return "?";
}

struct Context {
    ContextLabel label;
    std::array<std::pair<int, int>, 3> members;  // (j,k), in measurement order
    int sign;                                    // +1 rows, -1 columns as they enter the inequality

    bool is_row() const { return sign > 0; }
};

inline std::array<Context, 6> all_contexts() {
    std::array<Context, 6> cs;
    for (int j = 1; j <= 3; ++j) {
        cs[static_cast<size_t>(j - 1)] = {static_cast<ContextLabel>(j - 1),
                                          {{{j, 1}, {j, 2}, {j, 3}}},
                                          +1};
    }
    for (int k = 1; k <= 3; ++k) {
        cs[static_cast<size_t>(2 + k)] = {static_cast<ContextLabel>(2 + k),
                                          {{{1, k}, {2, k}, {3, k}}},
                                          -1};
    }
    return cs;
}

inline std::vector<DisplacementProduct> context_ops(const PMSquare& square, const Context& ctx) {
    std::vector<DisplacementProduct> ops;
    ops.reserve(3);
    for (auto [j, k] : ctx.members) ops.push_back(square.at(j, k));
    return ops;
}

inline DisplacementProduct context_product(const PMSquare& square, const Context& ctx) {
    return compose(context_ops(square, ctx));
}

// The 18 ordered in-context pairs, cyclic within each context:
// (O1,O2), (O2,O3), (O3,O1), rows first. Matches the measured pair order.
struct ContextPair {
    ContextLabel context;
    std::pair<int, int> first, second;  // (j,k) indices
};

inline std::vector<ContextPair> in_context_pairs() {
    std::vector<ContextPair> pairs;
    pairs.reserve(18);
    for (const auto& ctx : all_contexts()) {
        for (int i = 0; i < 3; ++i) {
            pairs.push_back({ctx.label, ctx.members[static_cast<size_t>(i)],
                             ctx.members[static_cast<size_t>((i + 1) % 3)]});
        }
    }
    return pairs;
}

// Miscalibrated squares are allowed; this reports how far the square is
// from the canonical commutation structure instead of rejecting it.
struct SquareValidity {
    bool canonical_product = false;
    double product = 0.0;
    double max_in_context_kappa = 0.0;
};

inline SquareValidity validate_square(const SquareParams& params) {
    SquareValidity v;
    v.product = params.product();
    v.canonical_product = params.is_canonical();
    PMSquare sq = build_pm_square(params);
    for (const auto& pr : in_context_pairs()) {
        double k = kappa_ideal(sq.at(pr.first.first, pr.first.second),
                               sq.at(pr.second.first, pr.second.second));
        v.max_in_context_kappa = std::max(v.max_in_context_kappa, k);
    }
    return v;
}

}  // namespace cvpm
