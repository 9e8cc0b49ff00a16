#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdrl/errors.hpp"

namespace qdrl::qpolicy {

// Empty slot in the final chunk of an encoding plan.
inline constexpr int kPad = -1;

// Deterministic mapping from an observation vector of length d onto
// ceil(d/q) data-upload repetitions of q angle slots each. Every feature
// index lands in exactly one slot; the final chunk is padded with kPad.
struct EncodingPlan {
    int repetitions = 0;
    std::vector<std::vector<int>> chunks;  // [repetitions][num_qubits]
};

inline EncodingPlan build_encoding_plan(int obs_dim, int num_qubits) {
    if (obs_dim < 1 || num_qubits < 1) {
        throw std::invalid_argument("build_encoding_plan: obs_dim and num_qubits must be >= 1");
    }
    EncodingPlan plan;
    plan.repetitions = (obs_dim + num_qubits - 1) / num_qubits;
    plan.chunks.assign(static_cast<std::size_t>(plan.repetitions),
                       std::vector<int>(static_cast<std::size_t>(num_qubits), kPad));
    for (int f = 0; f < obs_dim; ++f) {
        plan.chunks[static_cast<std::size_t>(f / num_qubits)]
                   [static_cast<std::size_t>(f % num_qubits)] = f;
    }
    return plan;
}

// Closed interval a feature is expected to live in; values outside are
// clamped before angle mapping.
struct FeatureBound {
    double min = 0.0;
    double max = 1.0;
};

// Affine map of each feature from [min, max] onto [-pi, pi].
inline std::vector<double> scale_features(const std::vector<double>& obs,
                                          const std::vector<FeatureBound>& bounds) {
    if (obs.size() != bounds.size()) {
        throw std::invalid_argument("scale_features: got " + std::to_string(obs.size()) +
                                    " features but " + std::to_string(bounds.size()) +
                                    " bounds");
    }
    constexpr double kPi = 3.14159265358979323846;
    std::vector<double> angles(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const FeatureBound& b = bounds[i];
        if (!(b.min < b.max)) {
            throw ConfigError("scale_features: feature " + std::to_string(i) +
                              " has empty bound interval");
        }
        const double clamped = std::clamp(obs[i], b.min, b.max);
        angles[i] = -kPi + 2.0 * kPi * (clamped - b.min) / (b.max - b.min);
    }
    return angles;
}

}  // namespace qdrl::qpolicy
