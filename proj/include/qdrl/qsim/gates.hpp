#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <variant>

namespace qdrl::qsim {

using Complex = std::complex<double>;

// 2x2 unitary, row-major: {m00, m01, m10, m11}.
using Mat2 = std::array<Complex, 4>;

struct RxGate {
    int wire;
    double theta;
};

struct RyGate {
    int wire;
    double theta;
};

struct RzGate {
    int wire;
    double theta;
};

struct CnotGate {
    int control;
    int target;
};

struct Cu3Gate {
    int control;
    int target;
    double theta;
    double phi;
    double lambda;
};

using Gate = std::variant<RxGate, RyGate, RzGate, CnotGate, Cu3Gate>;

inline Mat2 rx_matrix(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {Complex{c, 0.0}, Complex{0.0, -s}, Complex{0.0, -s}, Complex{c, 0.0}};
}

inline Mat2 ry_matrix(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {Complex{c, 0.0}, Complex{-s, 0.0}, Complex{s, 0.0}, Complex{c, 0.0}};
}

inline Mat2 rz_matrix(double theta) {
    return {std::polar(1.0, -theta / 2.0), Complex{0.0, 0.0},
            Complex{0.0, 0.0}, std::polar(1.0, theta / 2.0)};
}

// U3(theta, phi, lambda) =
//   [[cos(t/2),            -e^{i lambda} sin(t/2)],
//    [e^{i phi} sin(t/2),   e^{i (phi+lambda)} cos(t/2)]]
inline Mat2 u3_matrix(double theta, double phi, double lambda) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {Complex{c, 0.0}, -std::polar(s, lambda),
            std::polar(s, phi), std::polar(c, phi + lambda)};
}

inline Mat2 x_matrix() {
    return {Complex{0.0, 0.0}, Complex{1.0, 0.0}, Complex{1.0, 0.0}, Complex{0.0, 0.0}};
}

// The 2x2 block a gate applies to its target wire: the whole matrix for
// rotations, the controlled block for CNOT/CU3.
inline Mat2 target_block(const Gate& gate) {
    return std::visit(
        [](const auto& g) -> Mat2 {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, RxGate>) {
                return rx_matrix(g.theta);
            } else if constexpr (std::is_same_v<T, RyGate>) {
                return ry_matrix(g.theta);
            } else if constexpr (std::is_same_v<T, RzGate>) {
                return rz_matrix(g.theta);
            } else if constexpr (std::is_same_v<T, CnotGate>) {
                return x_matrix();
            } else {
                return u3_matrix(g.theta, g.phi, g.lambda);
            }
        },
        gate);
}

inline int target_wire(const Gate& gate) {
    return std::visit(
        [](const auto& g) -> int {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, CnotGate> || std::is_same_v<T, Cu3Gate>) {
                return g.target;
            } else {
                return g.wire;
            }
        },
        gate);
}

// -1 for uncontrolled gates.
inline int control_wire(const Gate& gate) {
    return std::visit(
        [](const auto& g) -> int {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, CnotGate> || std::is_same_v<T, Cu3Gate>) {
                return g.control;
            } else {
                return -1;
            }
        },
        gate);
}

}  // namespace qdrl::qsim
