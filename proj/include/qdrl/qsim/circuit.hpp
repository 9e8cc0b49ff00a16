#pragma once

#include <utility>
#include <vector>

#include "qdrl/qsim/gates.hpp"
#include "qdrl/qsim/state_vector.hpp"

namespace qdrl::qsim {

// Ordered gate sequence; position 0 is applied to the state first.
using Circuit = std::vector<Gate>;

inline StateVector apply_circuit(StateVector state, const Circuit& circuit) {
    for (const Gate& gate : circuit) {
        state = apply_gate(std::move(state), gate);
    }
    return state;
}

}  // namespace qdrl::qsim
