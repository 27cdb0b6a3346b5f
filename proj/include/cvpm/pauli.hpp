#pragma once

#include <Eigen/Dense>
#include <array>
#include <stdexcept>

#include "displacement.hpp"

namespace cvpm {

enum class Pauli { I, X, Y, Z };

// Signed Pauli string over two qubits.
struct PauliString {
    std::array<Pauli, 2> factors{Pauli::I, Pauli::I};
    int sign = +1;
};

inline Eigen::Matrix2cd pauli_matrix(Pauli p) {
    const cx i{0.0, 1.0};
    Eigen::Matrix2cd m;
    switch (p) {
        case Pauli::I: m << 1, 0, 0, 1; break;
        case Pauli::X: m << 0, 1, 1, 0; break;
        case Pauli::Y: m << 0, -i, i, 0; break;
        case Pauli::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

inline Eigen::Matrix4cd pauli_string_matrix(const PauliString& s) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    Eigen::Matrix2cd a = pauli_matrix(s.factors[0]);
    Eigen::Matrix2cd b = pauli_matrix(s.factors[1]);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) m.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
    return static_cast<double>(s.sign) * m;
}

// GKP substitution: X -> q-displacement, Z -> p-displacement, Y = iXZ.
// Applied letter-wise (qubit 1 -> mode x, qubit 2 -> mode y), so entries
// agree with the displacement square up to amplitude sign balancing.
inline DisplacementProduct pauli_to_displacement(const PauliString& s, const SquareParams& params) {
    if (s.factors.size() > 2) throw std::invalid_argument("PauliString must act on 2 qubits");
    const cx iq{0.0, 1.0};
    DisplacementProduct out = DisplacementProduct::identity();
    for (int n = 0; n < 2; ++n) {
        cx q = params.q0, p = iq * params.p0;
        DisplacementProduct d;
        switch (s.factors[static_cast<size_t>(n)]) {
            case Pauli::I: continue;
            case Pauli::X: d = (n == 0) ? DisplacementProduct::on_x(q) : DisplacementProduct::on_y(q); break;
            case Pauli::Z: d = (n == 0) ? DisplacementProduct::on_x(p) : DisplacementProduct::on_y(p); break;
            case Pauli::Y: {
                // Y = i X Z; the Weyl phase of D(q0)D(ip0) cancels the i at q0 p0 = pi/2.
                DisplacementProduct x = (n == 0) ? DisplacementProduct::on_x(q) : DisplacementProduct::on_y(q);
                DisplacementProduct z = (n == 0) ? DisplacementProduct::on_x(p) : DisplacementProduct::on_y(p);
                d = compose(x, z);
                d.phase_angle = wrap_angle(d.phase_angle + pi / 2.0);
                break;
            }
        }
        out = compose(out, d);
    }
    if (s.sign < 0) out = out.negated();
    return out;
}

// Same operator up to a sign flip of the displacement amplitudes.
inline bool same_displacement_class(const DisplacementProduct& a, const DisplacementProduct& b,
                                    double tol = 1e-12) {
    bool phase_ok = std::abs(std::polar(1.0, a.phase_angle) - std::polar(1.0, b.phase_angle)) < tol;
    bool same = std::abs(a.amp_x - b.amp_x) < tol && std::abs(a.amp_y - b.amp_y) < tol;
    bool flipped = std::abs(a.amp_x + b.amp_x) < tol && std::abs(a.amp_y + b.amp_y) < tol;
    return phase_ok && (same || flipped);
}

// The DV square: Pauli strings whose grid mirrors the displacement square.
inline std::array<std::array<PauliString, 3>, 3> pauli_square_strings() {
    using P = Pauli;
    std::array<std::array<PauliString, 3>, 3> s;
    s[0][0] = {{P::X, P::I}, +1};
    s[0][1] = {{P::I, P::Z}, +1};
    s[0][2] = {{P::X, P::Z}, -1};
    s[1][0] = {{P::I, P::X}, +1};
    s[1][1] = {{P::Z, P::I}, +1};
    s[1][2] = {{P::Z, P::X}, -1};
    s[2][0] = {{P::X, P::X}, +1};
    s[2][1] = {{P::Z, P::Z}, +1};
    s[2][2] = {{P::Y, P::Y}, +1};
    return s;
}

struct PauliSquare {
    std::array<std::array<Eigen::Matrix4cd, 3>, 3> ops;

    const Eigen::Matrix4cd& at(int j, int k) const {
        if (j < 1 || j > 3 || k < 1 || k > 3) throw std::out_of_range("PauliSquare index");
        return ops[static_cast<size_t>(j - 1)][static_cast<size_t>(k - 1)];
    }
};

inline PauliSquare build_pauli_square() {
    PauliSquare sq;
    auto strings = pauli_square_strings();
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            sq.ops[static_cast<size_t>(j)][static_cast<size_t>(k)] =
                pauli_string_matrix(strings[static_cast<size_t>(j)][static_cast<size_t>(k)]);
    return sq;
}

}  // namespace cvpm
