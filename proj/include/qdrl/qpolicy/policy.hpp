#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdrl/errors.hpp"
#include "qdrl/qpolicy/encoding.hpp"
#include "qdrl/qsim/circuit.hpp"
#include "qdrl/rng.hpp"

namespace qdrl::qpolicy {

struct QPolicyConfig {
    int num_qubits = 5;  // one wire per action; <Z> of wire c is action c's value
    int obs_dim = 0;
    int num_blocks = 1;       // B
    int layers_per_block = 1; // L
    std::vector<FeatureBound> feature_bounds;  // size obs_dim
    double value_scale = 2.5;   // beta: Q = beta * <Z>

    void validate(int num_actions) const {
        if (num_qubits != num_actions) {
            throw ConfigError("policy: num_qubits (" + std::to_string(num_qubits) +
                              ") must equal the action count (" +
                              std::to_string(num_actions) + ")");
        }
        if (obs_dim < 1) throw ConfigError("policy: obs_dim must be >= 1");
        if (num_blocks < 1) throw ConfigError("policy: num_blocks must be >= 1");
        if (layers_per_block < 1) throw ConfigError("policy: layers_per_block must be >= 1");
        if (!(value_scale > 0.0)) throw ConfigError("policy: value_scale must be > 0");
        if (feature_bounds.size() != static_cast<std::size_t>(obs_dim)) {
            throw ConfigError("policy: feature_bounds must have one entry per feature");
        }
        for (std::size_t i = 0; i < feature_bounds.size(); ++i) {
            if (!(feature_bounds[i].min < feature_bounds[i].max)) {
                throw ConfigError("policy: feature bound " + std::to_string(i) +
                                  " has min >= max");
            }
        }
    }
};

inline int num_repetitions(const QPolicyConfig& config) {
    return (config.obs_dim + config.num_qubits - 1) / config.num_qubits;
}

// Trainable angle count: one RZ per wire per repetition plus three CU3
// angles per wire per layer.
inline std::size_t param_count(const QPolicyConfig& config) {
    const std::size_t q = static_cast<std::size_t>(config.num_qubits);
    const std::size_t reps = static_cast<std::size_t>(num_repetitions(config));
    const std::size_t layers =
        static_cast<std::size_t>(config.num_blocks) *
        static_cast<std::size_t>(config.layers_per_block);
    return reps * q + 3 * layers * q;
}

// Leading flattened components that are plain single-qubit rotation angles
// (the encoder RZ block); the two-term parameter-shift rule is exact only
// for these.
inline std::size_t encoder_param_count(const QPolicyConfig& config) {
    return static_cast<std::size_t>(num_repetitions(config)) *
           static_cast<std::size_t>(config.num_qubits);
}

// All trainable angles of one agent's policy. The flattened layout is the
// encoder angles row-major [rep][wire], then the CU3 angles
// [block][layer][wire][theta, phi, lambda].
struct QPolicyParams {
    std::vector<std::vector<double>> encoder_angles;  // [N_rep][q]
    std::vector<std::vector<std::vector<std::array<double, 3>>>> block_angles;  // [B][L][q]

    static QPolicyParams zeros(const QPolicyConfig& config) {
        QPolicyParams p;
        const std::size_t q = static_cast<std::size_t>(config.num_qubits);
        p.encoder_angles.assign(static_cast<std::size_t>(num_repetitions(config)),
                                std::vector<double>(q, 0.0));
        p.block_angles.assign(
            static_cast<std::size_t>(config.num_blocks),
            std::vector<std::vector<std::array<double, 3>>>(
                static_cast<std::size_t>(config.layers_per_block),
                std::vector<std::array<double, 3>>(q, {0.0, 0.0, 0.0})));
        return p;
    }

    static QPolicyParams random(const QPolicyConfig& config, Rng& rng, double spread) {
        QPolicyParams p = zeros(config);
        for (auto& row : p.encoder_angles) {
            for (double& a : row) a = rng.uniform(-spread, spread);
        }
        for (auto& block : p.block_angles) {
            for (auto& layer : block) {
                for (auto& wire : layer) {
                    for (double& a : wire) a = rng.uniform(-spread, spread);
                }
            }
        }
        return p;
    }

    std::vector<double> flatten() const {
        std::vector<double> flat;
        for (const auto& row : encoder_angles) {
            flat.insert(flat.end(), row.begin(), row.end());
        }
        for (const auto& block : block_angles) {
            for (const auto& layer : block) {
                for (const auto& wire : layer) {
                    flat.insert(flat.end(), wire.begin(), wire.end());
                }
            }
        }
        return flat;
    }

    static QPolicyParams unflatten(const QPolicyConfig& config,
                                   const std::vector<double>& flat) {
        if (flat.size() != param_count(config)) {
            throw std::invalid_argument("QPolicyParams::unflatten: expected " +
                                        std::to_string(param_count(config)) +
                                        " values, got " + std::to_string(flat.size()));
        }
        QPolicyParams p = zeros(config);
        std::size_t idx = 0;
        for (auto& row : p.encoder_angles) {
            for (double& a : row) a = flat[idx++];
        }
        for (auto& block : p.block_angles) {
            for (auto& layer : block) {
                for (auto& wire : layer) {
                    for (double& a : wire) a = flat[idx++];
                }
            }
        }
        return p;
    }
};

// Data re-uploading circuit: per repetition, an RY data upload on every wire
// (padded slots upload angle 0) followed by a trainable RZ; then the
// entangling CU3 ring layers, control w onto wire (w+1) mod q. A ring needs
// at least two wires, so q = 1 emits no entangling gates (the block angles
// stay in the parameter vector but are inert).
inline qsim::Circuit build_policy_circuit(const QPolicyConfig& config,
                                          const QPolicyParams& params,
                                          const std::vector<double>& obs) {
    if (obs.size() != static_cast<std::size_t>(config.obs_dim)) {
        throw std::invalid_argument("build_policy_circuit: observation length " +
                                    std::to_string(obs.size()) + " != obs_dim " +
                                    std::to_string(config.obs_dim));
    }
    const EncodingPlan plan = build_encoding_plan(config.obs_dim, config.num_qubits);
    if (params.encoder_angles.size() != static_cast<std::size_t>(plan.repetitions) ||
        params.block_angles.size() != static_cast<std::size_t>(config.num_blocks)) {
        throw std::invalid_argument("build_policy_circuit: params shape does not match config");
    }
    const std::vector<double> data_angles = scale_features(obs, config.feature_bounds);
    const int q = config.num_qubits;

    qsim::Circuit circuit;
    circuit.reserve(static_cast<std::size_t>(plan.repetitions * 2 * q +
                                             config.num_blocks * config.layers_per_block * q));
    for (int rep = 0; rep < plan.repetitions; ++rep) {
        for (int w = 0; w < q; ++w) {
            const int feature = plan.chunks[static_cast<std::size_t>(rep)]
                                           [static_cast<std::size_t>(w)];
            const double angle =
                feature == kPad ? 0.0 : data_angles[static_cast<std::size_t>(feature)];
            circuit.push_back(qsim::RyGate{w, angle});
        }
        for (int w = 0; w < q; ++w) {
            circuit.push_back(qsim::RzGate{
                w, params.encoder_angles[static_cast<std::size_t>(rep)]
                                        [static_cast<std::size_t>(w)]});
        }
    }
    if (q >= 2) {
        for (int b = 0; b < config.num_blocks; ++b) {
            for (int l = 0; l < config.layers_per_block; ++l) {
                for (int w = 0; w < q; ++w) {
                    const auto& a = params.block_angles[static_cast<std::size_t>(b)]
                                                       [static_cast<std::size_t>(l)]
                                                       [static_cast<std::size_t>(w)];
                    circuit.push_back(qsim::Cu3Gate{w, (w + 1) % q, a[0], a[1], a[2]});
                }
            }
        }
    }
    return circuit;
}

// Observable vector in [-1, 1]^C: per-wire <Z> of the policy circuit run on
// |0...0>.
inline std::vector<double> forward(const QPolicyConfig& config, const QPolicyParams& params,
                                   const std::vector<double>& obs) {
    qsim::StateVector state = qsim::apply_circuit(qsim::new_zero_state(config.num_qubits),
                                                  build_policy_circuit(config, params, obs));
    return qsim::expectation_z_all(state);
}

inline std::vector<double> q_values(const QPolicyConfig& config, const QPolicyParams& params,
                                    const std::vector<double>& obs) {
    std::vector<double> values = forward(config, params, obs);
    for (double& v : values) v *= config.value_scale;
    return values;
}

}  // namespace qdrl::qpolicy
