#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdrl/rng.hpp"

namespace qdrl::baseline {

// d -> hidden -> C, tanh activation, linear output. Flattened parameter
// layout: W1 row-major [hidden][d], b1, W2 row-major [C][hidden], b2.
struct MlpConfig {
    int input_dim = 0;
    int hidden_size = 64;
    int output_dim = 5;
};

inline std::size_t mlp_param_count(int input_dim, int hidden_size, int output_dim) {
    if (input_dim < 1 || hidden_size < 1 || output_dim < 1) {
        throw std::invalid_argument("mlp_param_count: dimensions must be >= 1");
    }
    return static_cast<std::size_t>(input_dim + 1) * static_cast<std::size_t>(hidden_size) +
           static_cast<std::size_t>(hidden_size + 1) * static_cast<std::size_t>(output_dim);
}

inline std::size_t mlp_param_count(const MlpConfig& config) {
    return mlp_param_count(config.input_dim, config.hidden_size, config.output_dim);
}

namespace detail {

inline void check_shapes(const MlpConfig& config, const std::vector<double>& params,
                         const std::vector<double>& obs, const char* what) {
    if (params.size() != mlp_param_count(config)) {
        throw std::invalid_argument(std::string(what) + ": expected " +
                                    std::to_string(mlp_param_count(config)) +
                                    " parameters, got " + std::to_string(params.size()));
    }
    if (obs.size() != static_cast<std::size_t>(config.input_dim)) {
        throw std::invalid_argument(std::string(what) + ": expected input length " +
                                    std::to_string(config.input_dim) + ", got " +
                                    std::to_string(obs.size()));
    }
}

}  // namespace detail

inline std::vector<double> mlp_forward(const MlpConfig& config,
                                       const std::vector<double>& params,
                                       const std::vector<double>& obs) {
    detail::check_shapes(config, params, obs, "mlp_forward");
    const std::size_t d = static_cast<std::size_t>(config.input_dim);
    const std::size_t h = static_cast<std::size_t>(config.hidden_size);
    const std::size_t c = static_cast<std::size_t>(config.output_dim);
    const double* w1 = params.data();
    const double* b1 = w1 + h * d;
    const double* w2 = b1 + h;
    const double* b2 = w2 + c * h;

    std::vector<double> hidden(h);
    for (std::size_t j = 0; j < h; ++j) {
        double acc = b1[j];
        for (std::size_t i = 0; i < d; ++i) acc += w1[j * d + i] * obs[i];
        hidden[j] = std::tanh(acc);
    }
    std::vector<double> out(c);
    for (std::size_t k = 0; k < c; ++k) {
        double acc = b2[k];
        for (std::size_t j = 0; j < h; ++j) acc += w2[k * h + j] * hidden[j];
        out[k] = acc;
    }
    return out;
}

// Analytic gradient of (q[action] - target)^2 with respect to every
// parameter. Only the selected output row propagates.
inline std::vector<double> mlp_grad(const MlpConfig& config, const std::vector<double>& params,
                                    const std::vector<double>& obs, int action, double target) {
    detail::check_shapes(config, params, obs, "mlp_grad");
    if (action < 0 || action >= config.output_dim) {
        throw std::invalid_argument("mlp_grad: action out of range");
    }
    const std::size_t d = static_cast<std::size_t>(config.input_dim);
    const std::size_t h = static_cast<std::size_t>(config.hidden_size);
    const std::size_t c = static_cast<std::size_t>(config.output_dim);
    const std::size_t a = static_cast<std::size_t>(action);
    const double* w1 = params.data();
    const double* b1 = w1 + h * d;
    const double* w2 = b1 + h;
    const double* b2 = w2 + c * h;

    std::vector<double> hidden(h);
    for (std::size_t j = 0; j < h; ++j) {
        double acc = b1[j];
        for (std::size_t i = 0; i < d; ++i) acc += w1[j * d + i] * obs[i];
        hidden[j] = std::tanh(acc);
    }
    double q = b2[a];
    for (std::size_t j = 0; j < h; ++j) q += w2[a * h + j] * hidden[j];

    const double dq = 2.0 * (q - target);
    std::vector<double> grad(params.size(), 0.0);
    double* g_w1 = grad.data();
    double* g_b1 = g_w1 + h * d;
    double* g_w2 = g_b1 + h;
    double* g_b2 = g_w2 + c * h;

    g_b2[a] = dq;
    for (std::size_t j = 0; j < h; ++j) {
        g_w2[a * h + j] = dq * hidden[j];
        const double dh = dq * w2[a * h + j] * (1.0 - hidden[j] * hidden[j]);
        g_b1[j] = dh;
        for (std::size_t i = 0; i < d; ++i) g_w1[j * d + i] = dh * obs[i];
    }
    return grad;
}

// Uniform init in +-1/sqrt(fan_in) per layer.
inline std::vector<double> mlp_init(const MlpConfig& config, Rng& rng) {
    const std::size_t d = static_cast<std::size_t>(config.input_dim);
    const std::size_t h = static_cast<std::size_t>(config.hidden_size);
    const std::size_t c = static_cast<std::size_t>(config.output_dim);
    std::vector<double> params(mlp_param_count(config));
    const double s1 = 1.0 / std::sqrt(static_cast<double>(d));
    const double s2 = 1.0 / std::sqrt(static_cast<double>(h));
    std::size_t idx = 0;
    for (std::size_t j = 0; j < h * d; ++j) params[idx++] = rng.uniform(-s1, s1);
    for (std::size_t j = 0; j < h; ++j) params[idx++] = 0.0;
    for (std::size_t j = 0; j < c * h; ++j) params[idx++] = rng.uniform(-s2, s2);
    for (std::size_t j = 0; j < c; ++j) params[idx++] = 0.0;
    return params;
}

}  // namespace qdrl::baseline
