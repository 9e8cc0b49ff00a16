#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qdrl/qsim/gates.hpp"

namespace qdrl::qsim {

// Practical register cap; dense amplitudes above this are pointless here.
inline constexpr int kMaxQubits = 20;

// Amplitude vector over computational basis states. Wire 0 is the MOST
// significant bit of the amplitude index: with q wires, basis index i has
// wire w in state (i >> (q-1-w)) & 1.
struct StateVector {
    int num_qubits = 0;
    std::vector<Complex> amplitudes;

    double norm_sq() const {
        double acc = 0.0;
        for (const Complex& a : amplitudes) acc += std::norm(a);
        return acc;
    }
};

inline std::size_t wire_bit(int num_qubits, int wire) {
    return std::size_t{1} << (num_qubits - 1 - wire);
}

inline StateVector new_zero_state(int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("new_zero_state: num_qubits must be in [1, " +
                                    std::to_string(kMaxQubits) + "], got " +
                                    std::to_string(num_qubits));
    }
    StateVector state;
    state.num_qubits = num_qubits;
    state.amplitudes.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
    state.amplitudes[0] = Complex{1.0, 0.0};
    return state;
}

namespace detail {

inline void check_wire(const StateVector& state, int wire, const char* what) {
    if (wire < 0 || wire >= state.num_qubits) {
        throw std::invalid_argument(std::string(what) + ": wire " + std::to_string(wire) +
                                    " out of range for " + std::to_string(state.num_qubits) +
                                    " qubits");
    }
}

// In-place single-qubit update: stride iteration over amplitude pairs that
// differ only in the target wire's bit.
inline void apply_single_qubit(StateVector& state, int wire, const Mat2& u) {
    const std::size_t bit = wire_bit(state.num_qubits, wire);
    const std::size_t n = state.amplitudes.size();
    for (std::size_t i = 0; i < n; ++i) {
        if ((i & bit) == 0) {
            const Complex a = state.amplitudes[i];
            const Complex b = state.amplitudes[i | bit];
            state.amplitudes[i] = u[0] * a + u[1] * b;
            state.amplitudes[i | bit] = u[2] * a + u[3] * b;
        }
    }
}

// Same, but only on the subspace where the control wire's bit is 1.
inline void apply_controlled(StateVector& state, int control, int target, const Mat2& u) {
    const std::size_t cbit = wire_bit(state.num_qubits, control);
    const std::size_t tbit = wire_bit(state.num_qubits, target);
    const std::size_t n = state.amplitudes.size();
    for (std::size_t i = 0; i < n; ++i) {
        if ((i & cbit) != 0 && (i & tbit) == 0) {
            const Complex a = state.amplitudes[i];
            const Complex b = state.amplitudes[i | tbit];
            state.amplitudes[i] = u[0] * a + u[1] * b;
            state.amplitudes[i | tbit] = u[2] * a + u[3] * b;
        }
    }
}

}  // namespace detail

inline StateVector apply_gate(StateVector state, const Gate& gate) {
    const int target = target_wire(gate);
    const int control = control_wire(gate);
    detail::check_wire(state, target, "apply_gate");
    if (control < 0) {
        detail::apply_single_qubit(state, target, target_block(gate));
    } else {
        detail::check_wire(state, control, "apply_gate");
        if (control == target) {
            throw std::invalid_argument("apply_gate: control and target must differ");
        }
        detail::apply_controlled(state, control, target, target_block(gate));
    }
    return state;
}

// <Z> on one wire: sum of basis probabilities signed by that wire's bit.
inline double expectation_z(const StateVector& state, int wire) {
    detail::check_wire(state, wire, "expectation_z");
    const std::size_t bit = wire_bit(state.num_qubits, wire);
    double acc = 0.0;
    const std::size_t n = state.amplitudes.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double p = std::norm(state.amplitudes[i]);
        acc += (i & bit) ? -p : p;
    }
    return acc;
}

inline std::vector<double> expectation_z_all(const StateVector& state) {
    std::vector<double> out(static_cast<std::size_t>(state.num_qubits));
    for (int w = 0; w < state.num_qubits; ++w) {
        out[static_cast<std::size_t>(w)] = expectation_z(state, w);
    }
    return out;
}

}  // namespace qdrl::qsim
