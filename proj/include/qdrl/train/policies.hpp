#pragma once

#include <cstddef>
#include <vector>

#include "qdrl/baseline/mlp.hpp"
#include "qdrl/qpolicy/policy.hpp"
#include "qdrl/rng.hpp"
#include "qdrl/train/gradient.hpp"

namespace qdrl::train {

// Adapters giving the trainer a uniform view of the two policy classes:
// flattened parameters, Q-values, softmax inputs, and a loss gradient for
// one transition. Only the gradient path differs between them.

class QuantumPolicy {
  public:
    explicit QuantumPolicy(qpolicy::QPolicyConfig config, double init_spread = 0.05)
        : config_(std::move(config)), init_spread_(init_spread) {}

    const qpolicy::QPolicyConfig& config() const { return config_; }

    std::size_t param_count() const { return qpolicy::param_count(config_); }

    std::vector<double> init_params(Rng& rng) const {
        return qpolicy::QPolicyParams::random(config_, rng, init_spread_).flatten();
    }

    std::vector<double> q_values(const std::vector<double>& params,
                                 const std::vector<double>& obs) const {
        return qpolicy::q_values(config_, qpolicy::QPolicyParams::unflatten(config_, params),
                                 obs);
    }

    // Softmax input during training: the raw observables.
    std::vector<double> action_scores(const std::vector<double>& params,
                                      const std::vector<double>& obs) const {
        return qpolicy::forward(config_, qpolicy::QPolicyParams::unflatten(config_, params),
                                obs);
    }

    // Symmetric difference quotient of the squared TD error; 2 * param_count
    // circuit evaluations.
    std::vector<double> loss_grad(const std::vector<double>& params,
                                  const std::vector<double>& obs, int action, double target,
                                  double sdq_epsilon) const {
        const auto loss_fn = [&](const std::vector<double>& p) {
            const double err =
                q_values(p, obs)[static_cast<std::size_t>(action)] - target;
            return err * err;
        };
        return grad_sdq(loss_fn, params, sdq_epsilon);
    }

  private:
    qpolicy::QPolicyConfig config_;
    double init_spread_;
};

class ClassicalPolicy {
  public:
    // input_scales divide each observation feature before the network sees
    // it; raw grid coordinates and counts otherwise push the tanh layer into
    // saturation at useful learning rates. Empty means no scaling.
    explicit ClassicalPolicy(baseline::MlpConfig config,
                             std::vector<double> input_scales = {})
        : config_(config), input_scales_(std::move(input_scales)) {}

    const baseline::MlpConfig& config() const { return config_; }

    std::size_t param_count() const { return baseline::mlp_param_count(config_); }

    std::vector<double> init_params(Rng& rng) const {
        return baseline::mlp_init(config_, rng);
    }

    std::vector<double> q_values(const std::vector<double>& params,
                                 const std::vector<double>& obs) const {
        return baseline::mlp_forward(config_, params, scaled(obs));
    }

    std::vector<double> action_scores(const std::vector<double>& params,
                                      const std::vector<double>& obs) const {
        return q_values(params, obs);
    }

    std::vector<double> loss_grad(const std::vector<double>& params,
                                  const std::vector<double>& obs, int action, double target,
                                  double /*sdq_epsilon*/) const {
        return baseline::mlp_grad(config_, params, scaled(obs), action, target);
    }

  private:
    std::vector<double> scaled(const std::vector<double>& obs) const {
        if (input_scales_.empty()) return obs;
        std::vector<double> out = obs;
        for (std::size_t i = 0; i < out.size() && i < input_scales_.size(); ++i) {
            if (input_scales_[i] != 0.0) out[i] /= input_scales_[i];
        }
        return out;
    }

    baseline::MlpConfig config_;
    std::vector<double> input_scales_;
};

}  // namespace qdrl::train
