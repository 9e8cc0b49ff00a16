#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdrl/errors.hpp"

namespace qdrl::train {

// One environment step for all M agents.
struct Transition {
    std::vector<std::vector<double>> observations;
    std::vector<int> actions;
    std::vector<double> rewards;
    std::vector<std::vector<double>> next_observations;
    bool terminal = false;
};

// Actor parameters plus the intermittently refreshed target copy.
struct AgentLearner {
    int agent_id = 0;
    std::vector<double> actor_params;
    std::vector<double> target_params;
    int steps_since_target_update = 0;
};

struct TrainConfig {
    double discount = 0.6;         // gamma
    double learning_rate = 0.08;   // eta; 0 disables updates (random-baseline mode)
    double sdq_epsilon = 0.01;     // probe angle for the difference quotient, radians
    int target_update_interval = 200;  // K, in environment steps
    double temperature_initial = 2.0;
    double temperature_final = 0.03;
    // Steps over which the temperature anneals linearly; < 0 means 40% of
    // episodes * steps_per_episode.
    long long temperature_decay_steps = -1;
    int episodes = 200;
    int steps_per_episode = 40;

    void validate() const {
        if (!(discount >= 0.0 && discount < 1.0)) {
            throw ConfigError("train: gamma must be in [0, 1)");
        }
        if (learning_rate < 0.0) throw ConfigError("train: learning_rate must be >= 0");
        if (!(sdq_epsilon > 0.0)) throw ConfigError("train: sdq_epsilon must be > 0");
        if (target_update_interval < 1) {
            throw ConfigError("train: target_update_interval must be >= 1");
        }
        if (!(temperature_initial > 0.0) || !(temperature_final > 0.0)) {
            throw ConfigError("train: temperatures must be > 0");
        }
        if (episodes < 0) throw ConfigError("train: episodes must be >= 0");
        if (steps_per_episode < 1) throw ConfigError("train: steps_per_episode must be >= 1");
    }

    long long effective_decay_steps() const {
        if (temperature_decay_steps >= 0) return temperature_decay_steps;
        const long long total = static_cast<long long>(episodes) * steps_per_episode;
        return (total * 4) / 10;
    }

    double temperature_at(long long global_step) const {
        const long long decay = effective_decay_steps();
        if (decay <= 0 || global_step >= decay) return temperature_final;
        const double t = static_cast<double>(global_step) / static_cast<double>(decay);
        return temperature_initial + (temperature_final - temperature_initial) * t;
    }
};

// One-step TD target from the frozen target network.
template <typename Policy>
double td_target(const Policy& policy, double reward,
                 const std::vector<double>& next_obs,
                 const std::vector<double>& target_params, double discount,
                 bool terminal) {
    if (terminal) return reward;
    const std::vector<double> q = policy.q_values(target_params, next_obs);
    return reward + discount * *std::max_element(q.begin(), q.end());
}

// Per-agent regression item: predict q(obs)[action] toward target.
struct TransitionSample {
    std::vector<double> obs;
    int action = 0;
    double target = 0.0;
};

template <typename Policy>
double loss(const Policy& policy, const std::vector<double>& params,
            const std::vector<TransitionSample>& batch) {
    if (batch.empty()) {
        throw std::invalid_argument("loss: empty batch");
    }
    double acc = 0.0;
    for (const TransitionSample& item : batch) {
        const double err =
            policy.q_values(params, item.obs)[static_cast<std::size_t>(item.action)] -
            item.target;
        acc += err * err;
    }
    return acc / static_cast<double>(batch.size());
}

// Counts a step; on the interval boundary hard-copies actor into target and
// resets the counter.
inline void maybe_update_target(AgentLearner& learner, int interval) {
    if (interval < 1) {
        throw std::invalid_argument("maybe_update_target: interval must be >= 1");
    }
    if (++learner.steps_since_target_update >= interval) {
        learner.target_params = learner.actor_params;
        learner.steps_since_target_update = 0;
    }
}

}  // namespace qdrl::train
