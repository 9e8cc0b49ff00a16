#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qdrl/env/drone_env.hpp"
#include "qdrl/qpolicy/action_select.hpp"
#include "qdrl/rng.hpp"
#include "qdrl/train/gradient.hpp"
#include "qdrl/train/qlearning.hpp"

namespace qdrl::train {

struct EpisodeRecord {
    int episode = 0;
    std::vector<double> agent_rewards;  // cumulative over the episode
    double total_reward = 0.0;
    double mean_loss = 0.0;     // over steps x agents
    double support_rate = 0.0;  // mean over the episode's steps
    double qos = 0.0;           // mean over the episode's steps
    double temperature = 0.0;   // at the episode's last step
};

struct TrajectoryFrame {
    int episode = 0;
    int timestep = 0;
    std::vector<std::array<double, 2>> drone_positions;
    std::vector<bool> malfunctioned;
    std::vector<std::array<double, 2>> user_positions;
    std::vector<bool> covered;  // per user
    double support_rate = 0.0;
    double qos = 0.0;
    std::vector<double> rewards;
};

struct RunResult {
    std::vector<EpisodeRecord> episodes;
    std::vector<TrajectoryFrame> trajectories;
    std::vector<std::vector<double>> final_params;  // actor params per agent
    bool completed = true;
    std::string diagnostic;
};

// Fixed tags for deriving the run's independent random streams from the seed.
inline constexpr std::uint64_t kEnvStreamTag = 1;
inline constexpr std::uint64_t kActionStreamTag = 2;
inline constexpr std::uint64_t kInitStreamTag = 100;  // + agent_id

namespace detail {

inline TrajectoryFrame make_frame(int episode, const env::EnvState& state,
                                  const env::StepMetrics& metrics,
                                  const std::vector<double>& rewards) {
    TrajectoryFrame frame;
    frame.episode = episode;
    frame.timestep = state.timestep;
    for (const env::Vec2& p : state.drone_positions) {
        frame.drone_positions.push_back({p.x, p.y});
    }
    frame.malfunctioned = state.malfunctioned;
    for (const env::Vec2& p : state.user_positions) {
        frame.user_positions.push_back({p.x, p.y});
    }
    frame.covered = metrics.covered;
    frame.support_rate = metrics.support_rate;
    frame.qos = metrics.qos;
    frame.rewards = rewards;
    return frame;
}

}  // namespace detail

// Online one-step independent Q-learning for all agents; fully deterministic
// given the seed. Each step samples actions from the softmax over
// observables at the annealed temperature, applies the joint action, and
// per agent regresses q(obs)[action] toward the one-step TD target with a
// single SGD step. A zero learning rate skips the gradient work entirely,
// which is what the random-action baseline runs use.
template <typename Policy>
RunResult train_run(const env::EnvConfig& env_config, const Policy& policy,
                    const TrainConfig& train_config, std::uint64_t seed,
                    const std::set<int>& trajectory_episodes = {}) {
    env_config.validate();
    train_config.validate();

    RunResult result;
    if (train_config.episodes == 0) return result;

    Rng env_rng(sub_seed(seed, kEnvStreamTag));
    Rng action_rng(sub_seed(seed, kActionStreamTag));

    const int num_agents = env_config.num_drones;
    std::vector<AgentLearner> learners;
    learners.reserve(static_cast<std::size_t>(num_agents));
    for (int m = 0; m < num_agents; ++m) {
        Rng init_rng(sub_seed(seed, kInitStreamTag + static_cast<std::uint64_t>(m)));
        AgentLearner learner;
        learner.agent_id = m;
        learner.actor_params = policy.init_params(init_rng);
        learner.target_params = learner.actor_params;
        learners.push_back(std::move(learner));
    }

    long long global_step = 0;
    for (int episode = 0; episode < train_config.episodes; ++episode) {
        auto [state, observations] = env::reset(env_config, env_rng.next_u64());
        const bool record = trajectory_episodes.count(episode) > 0;

        std::vector<double> episode_rewards(static_cast<std::size_t>(num_agents), 0.0);
        double loss_sum = 0.0;
        double support_sum = 0.0;
        double qos_sum = 0.0;
        double temperature = train_config.temperature_initial;

        for (int s = 0; s < train_config.steps_per_episode; ++s) {
            temperature = train_config.temperature_at(global_step);

            std::vector<int> actions(static_cast<std::size_t>(num_agents));
            for (int m = 0; m < num_agents; ++m) {
                const std::size_t mi = static_cast<std::size_t>(m);
                const std::vector<double> scores =
                    policy.action_scores(learners[mi].actor_params, observations[mi]);
                const std::vector<double> dist =
                    qpolicy::action_distribution(scores, temperature);
                actions[mi] = qpolicy::select_action(dist, qpolicy::SelectMode::kSample,
                                                     action_rng);
            }

            env::StepResult outcome = env::step(std::move(state), actions, env_config);
            const bool terminal = (s == train_config.steps_per_episode - 1);

            Transition transition{observations, actions, outcome.rewards,
                                  outcome.observations, terminal};

            for (int m = 0; m < num_agents; ++m) {
                const std::size_t mi = static_cast<std::size_t>(m);
                AgentLearner& learner = learners[mi];
                const double target =
                    td_target(policy, transition.rewards[mi],
                              transition.next_observations[mi], learner.target_params,
                              train_config.discount, transition.terminal);
                const std::vector<TransitionSample> batch{
                    {transition.observations[mi], transition.actions[mi], target}};
                const double loss_value = loss(policy, learner.actor_params, batch);
                if (!std::isfinite(loss_value)) {
                    result.completed = false;
                    result.diagnostic = "non-finite loss at episode " +
                                        std::to_string(episode) + " step " +
                                        std::to_string(s) + " agent " + std::to_string(m);
                    for (AgentLearner& l : learners) {
                        result.final_params.push_back(std::move(l.actor_params));
                    }
                    return result;
                }
                loss_sum += loss_value;
                if (train_config.learning_rate != 0.0) {
                    const std::vector<double> gradient = policy.loss_grad(
                        learner.actor_params, transition.observations[mi],
                        transition.actions[mi], target, train_config.sdq_epsilon);
                    learner.actor_params = sgd_step(std::move(learner.actor_params),
                                                    gradient, train_config.learning_rate);
                }
                maybe_update_target(learner, train_config.target_update_interval);

                episode_rewards[mi] += transition.rewards[mi];
            }

            support_sum += outcome.metrics.support_rate;
            qos_sum += outcome.metrics.qos;
            if (record) {
                result.trajectories.push_back(detail::make_frame(
                    episode, outcome.state, outcome.metrics, outcome.rewards));
            }

            state = std::move(outcome.state);
            observations = std::move(outcome.observations);
            ++global_step;
        }

        EpisodeRecord record_row;
        record_row.episode = episode;
        record_row.agent_rewards = episode_rewards;
        for (double r : episode_rewards) record_row.total_reward += r;
        const double steps = static_cast<double>(train_config.steps_per_episode);
        record_row.mean_loss = loss_sum / (steps * num_agents);
        record_row.support_rate = support_sum / steps;
        record_row.qos = qos_sum / steps;
        record_row.temperature = temperature;
        result.episodes.push_back(std::move(record_row));
    }

    for (AgentLearner& learner : learners) {
        result.final_params.push_back(std::move(learner.actor_params));
    }
    return result;
}

// Greedy rollout of fixed parameters; no learning, all episodes recorded.
// Episode metrics reuse EpisodeRecord with mean_loss and temperature 0.
template <typename Policy>
RunResult evaluate_run(const env::EnvConfig& env_config, const Policy& policy,
                       const std::vector<std::vector<double>>& params_per_agent,
                       int episodes, std::uint64_t seed) {
    env_config.validate();
    RunResult result;
    result.final_params = params_per_agent;
    if (episodes <= 0) return result;

    Rng env_rng(sub_seed(seed, kEnvStreamTag));
    Rng greedy_rng(sub_seed(seed, kActionStreamTag));  // greedy mode never draws
    const int num_agents = env_config.num_drones;

    for (int episode = 0; episode < episodes; ++episode) {
        auto [state, observations] = env::reset(env_config, env_rng.next_u64());
        std::vector<double> episode_rewards(static_cast<std::size_t>(num_agents), 0.0);
        double support_sum = 0.0;
        double qos_sum = 0.0;

        for (int s = 0; s < env_config.steps_per_episode; ++s) {
            std::vector<int> actions(static_cast<std::size_t>(num_agents));
            for (int m = 0; m < num_agents; ++m) {
                const std::size_t mi = static_cast<std::size_t>(m);
                const std::vector<double> scores =
                    policy.action_scores(params_per_agent[mi], observations[mi]);
                // softmax is monotone, so greedy over the distribution is
                // greedy over the scores; temperature 1 keeps it finite.
                const std::vector<double> dist = qpolicy::action_distribution(scores, 1.0);
                actions[mi] = qpolicy::select_action(dist, qpolicy::SelectMode::kGreedy,
                                                     greedy_rng);
            }

            env::StepResult outcome = env::step(std::move(state), actions, env_config);
            for (int m = 0; m < num_agents; ++m) {
                episode_rewards[static_cast<std::size_t>(m)] +=
                    outcome.rewards[static_cast<std::size_t>(m)];
            }
            support_sum += outcome.metrics.support_rate;
            qos_sum += outcome.metrics.qos;
            result.trajectories.push_back(detail::make_frame(episode, outcome.state,
                                                             outcome.metrics,
                                                             outcome.rewards));
            state = std::move(outcome.state);
            observations = std::move(outcome.observations);
        }

        EpisodeRecord row;
        row.episode = episode;
        row.agent_rewards = episode_rewards;
        for (double r : episode_rewards) row.total_reward += r;
        const double steps = static_cast<double>(env_config.steps_per_episode);
        row.support_rate = support_sum / steps;
        row.qos = qos_sum / steps;
        result.episodes.push_back(std::move(row));
    }
    return result;
}

}  // namespace qdrl::train
