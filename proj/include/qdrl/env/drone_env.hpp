#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qdrl/errors.hpp"
#include "qdrl/rng.hpp"

namespace qdrl::env {

// Discrete movement set: +y, -y, +x, -x, hover.
inline constexpr int kNumActions = 5;

// Octant bins for the unserved-user counts in an observation.
inline constexpr int kSectorCount = 8;

struct MalfunctionEvent {
    int timestep = 0;
    int drone_id = 0;
};

struct EnvConfig {
    int grid_width = 8;
    int grid_height = 8;
    int num_drones = 2;
    int num_users = 12;
    double coverage_radius = 1.25;
    std::vector<MalfunctionEvent> malfunction_schedule;
    int steps_per_episode = 40;  // T
    double w_support = 0.3;
    double w_qos = 0.7;

    void validate() const {
        if (grid_width < 1 || grid_height < 1) throw ConfigError("env: grid must be >= 1x1");
        if (num_drones < 1) throw ConfigError("env: num_drones must be >= 1");
        if (num_users < 1) throw ConfigError("env: num_users must be >= 1");
        if (!(coverage_radius > 0.0)) throw ConfigError("env: coverage_radius must be > 0");
        if (steps_per_episode < 1) throw ConfigError("env: steps_per_episode must be >= 1");
        if (w_support < 0.0 || w_qos < 0.0 || (w_support == 0.0 && w_qos == 0.0)) {
            throw ConfigError("env: reward weights must be >= 0 and not both 0");
        }
        for (const MalfunctionEvent& ev : malfunction_schedule) {
            if (ev.drone_id < 0 || ev.drone_id >= num_drones) {
                throw ConfigError("env: malfunction drone_id " + std::to_string(ev.drone_id) +
                                  " out of range");
            }
            if (ev.timestep < 1) {
                throw ConfigError("env: malfunction timestep must be >= 1");
            }
        }
    }

    // own position + other drones' positions + unserved-user sector counts
    int obs_dim() const { return 2 + 2 * (num_drones - 1) + kSectorCount; }
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

struct EnvState {
    std::vector<Vec2> drone_positions;
    std::vector<Vec2> user_positions;
    std::vector<bool> malfunctioned;
    int timestep = 0;
};

// Per-user index of the serving drone: the nearest active drone within the
// coverage radius, ties broken by lowest drone id; -1 if uncovered.
inline std::vector<int> serving_drones(const EnvState& state, const EnvConfig& config) {
    std::vector<int> serving(state.user_positions.size(), -1);
    for (std::size_t u = 0; u < state.user_positions.size(); ++u) {
        double best = config.coverage_radius;
        for (std::size_t m = 0; m < state.drone_positions.size(); ++m) {
            if (state.malfunctioned[m]) continue;
            const double d = distance(state.user_positions[u], state.drone_positions[m]);
            if (d < best || (d == best && serving[u] < 0)) {
                best = d;
                serving[u] = static_cast<int>(m);
            }
        }
    }
    return serving;
}

inline double support_rate(const EnvState& state, const EnvConfig& config) {
    const std::vector<int> serving = serving_drones(state, config);
    std::size_t covered = 0;
    for (int s : serving) covered += (s >= 0);
    return static_cast<double>(covered) / static_cast<double>(state.user_positions.size());
}

// Per-user service quality: linear falloff from 1 at the drone to 0 at the
// coverage radius, best over active drones.
inline double user_quality(const EnvState& state, const EnvConfig& config, std::size_t user) {
    double best = 0.0;
    for (std::size_t m = 0; m < state.drone_positions.size(); ++m) {
        if (state.malfunctioned[m]) continue;
        const double d = distance(state.user_positions[user], state.drone_positions[m]);
        best = std::max(best, std::max(0.0, 1.0 - d / config.coverage_radius));
    }
    return best;
}

inline double qos(const EnvState& state, const EnvConfig& config) {
    double acc = 0.0;
    for (std::size_t u = 0; u < state.user_positions.size(); ++u) {
        acc += user_quality(state, config, u);
    }
    return acc / static_cast<double>(state.user_positions.size());
}

// r_m = w_support * (share of users served by drone m) + w_qos * (mean
// quality over those users). Malfunctioned drones earn 0.
inline std::vector<double> reward(const EnvState& state, const EnvConfig& config) {
    const std::vector<int> serving = serving_drones(state, config);
    std::vector<double> rewards(state.drone_positions.size(), 0.0);
    std::vector<int> counts(state.drone_positions.size(), 0);
    std::vector<double> quality_sums(state.drone_positions.size(), 0.0);
    for (std::size_t u = 0; u < serving.size(); ++u) {
        if (serving[u] < 0) continue;
        const std::size_t m = static_cast<std::size_t>(serving[u]);
        counts[m] += 1;
        quality_sums[m] += user_quality(state, config, u);
    }
    for (std::size_t m = 0; m < rewards.size(); ++m) {
        if (state.malfunctioned[m] || counts[m] == 0) continue;
        rewards[m] = config.w_support * static_cast<double>(counts[m]) /
                         static_cast<double>(state.user_positions.size()) +
                     config.w_qos * quality_sums[m] / static_cast<double>(counts[m]);
    }
    return rewards;
}

// Fixed-layout observation: own (x, y), other drones' (x, y) in id order,
// then the count of users unserved by any active drone in each of the 8
// octants around this drone.
inline std::vector<double> observe(const EnvState& state, int agent_id,
                                   const EnvConfig& config) {
    if (agent_id < 0 || agent_id >= config.num_drones) {
        throw std::invalid_argument("observe: agent_id " + std::to_string(agent_id) +
                                    " out of range");
    }
    constexpr double kPi = 3.14159265358979323846;
    const Vec2 own = state.drone_positions[static_cast<std::size_t>(agent_id)];
    std::vector<double> obs;
    obs.reserve(static_cast<std::size_t>(config.obs_dim()));
    obs.push_back(own.x);
    obs.push_back(own.y);
    for (std::size_t m = 0; m < state.drone_positions.size(); ++m) {
        if (static_cast<int>(m) == agent_id) continue;
        obs.push_back(state.drone_positions[m].x);
        obs.push_back(state.drone_positions[m].y);
    }
    std::vector<double> sectors(kSectorCount, 0.0);
    const std::vector<int> serving = serving_drones(state, config);
    for (std::size_t u = 0; u < state.user_positions.size(); ++u) {
        if (serving[u] >= 0) continue;
        double ang = std::atan2(state.user_positions[u].y - own.y,
                                state.user_positions[u].x - own.x);
        if (ang < 0.0) ang += 2.0 * kPi;
        const int sector = std::min(kSectorCount - 1,
                                    static_cast<int>(ang / (2.0 * kPi / kSectorCount)));
        sectors[static_cast<std::size_t>(sector)] += 1.0;
    }
    obs.insert(obs.end(), sectors.begin(), sectors.end());
    return obs;
}

inline std::vector<std::vector<double>> observe_all(const EnvState& state,
                                                    const EnvConfig& config) {
    std::vector<std::vector<double>> all;
    all.reserve(static_cast<std::size_t>(config.num_drones));
    for (int m = 0; m < config.num_drones; ++m) {
        all.push_back(observe(state, m, config));
    }
    return all;
}

// Per-feature intervals of the observation layout, for angle scaling.
// Positions are bounded by the grid, sector counts by the user count.
struct ObservationBound {
    double min = 0.0;
    double max = 1.0;
};

inline std::vector<ObservationBound> observation_bounds(const EnvConfig& config) {
    std::vector<ObservationBound> bounds;
    bounds.reserve(static_cast<std::size_t>(config.obs_dim()));
    for (int m = 0; m < config.num_drones; ++m) {
        bounds.push_back({0.0, static_cast<double>(config.grid_width)});
        bounds.push_back({0.0, static_cast<double>(config.grid_height)});
    }
    for (int s = 0; s < kSectorCount; ++s) {
        bounds.push_back({0.0, static_cast<double>(config.num_users)});
    }
    return bounds;
}

// Drones evenly spaced along the bottom edge, users uniform strictly inside
// the grid, all flags cleared.
inline std::pair<EnvState, std::vector<std::vector<double>>> reset(const EnvConfig& config,
                                                                   std::uint64_t seed) {
    config.validate();
    EnvState state;
    state.drone_positions.resize(static_cast<std::size_t>(config.num_drones));
    for (int m = 0; m < config.num_drones; ++m) {
        state.drone_positions[static_cast<std::size_t>(m)] = {
            static_cast<double>(config.grid_width) * (m + 1) / (config.num_drones + 1), 0.0};
    }
    Rng rng(seed);
    state.user_positions.resize(static_cast<std::size_t>(config.num_users));
    for (Vec2& user : state.user_positions) {
        user.x = rng.uniform_open(0.0, static_cast<double>(config.grid_width));
        user.y = rng.uniform_open(0.0, static_cast<double>(config.grid_height));
    }
    state.malfunctioned.assign(static_cast<std::size_t>(config.num_drones), false);
    state.timestep = 0;
    return {state, observe_all(state, config)};
}

struct StepMetrics {
    double support_rate = 0.0;
    double qos = 0.0;
    std::vector<bool> covered;  // per user
};

struct StepResult {
    EnvState state;
    std::vector<std::vector<double>> observations;
    std::vector<double> rewards;
    StepMetrics metrics;
};

// Moves every active drone one cell (clamped to the grid), fires scheduled
// malfunctions for the new timestep, then scores the post-move state.
inline StepResult step(EnvState state, const std::vector<int>& joint_action,
                       const EnvConfig& config) {
    if (state.timestep >= config.steps_per_episode) {
        throw EpisodeFinishedError("step: episode horizon reached at t=" +
                                   std::to_string(state.timestep));
    }
    if (joint_action.size() != state.drone_positions.size()) {
        throw std::invalid_argument("step: expected one action per drone");
    }
    for (std::size_t m = 0; m < joint_action.size(); ++m) {
        const int a = joint_action[m];
        if (a < 0 || a >= kNumActions) {
            throw std::invalid_argument("step: action index " + std::to_string(a) +
                                        " out of range");
        }
        if (state.malfunctioned[m]) continue;
        Vec2& pos = state.drone_positions[m];
        switch (a) {
            case 0: pos.y += 1.0; break;
            case 1: pos.y -= 1.0; break;
            case 2: pos.x += 1.0; break;
            case 3: pos.x -= 1.0; break;
            default: break;  // hover
        }
        pos.x = std::clamp(pos.x, 0.0, static_cast<double>(config.grid_width));
        pos.y = std::clamp(pos.y, 0.0, static_cast<double>(config.grid_height));
    }
    for (const MalfunctionEvent& ev : config.malfunction_schedule) {
        if (ev.timestep == state.timestep + 1) {
            state.malfunctioned[static_cast<std::size_t>(ev.drone_id)] = true;
        }
    }
    state.timestep += 1;

    StepResult result;
    result.metrics.support_rate = support_rate(state, config);
    result.metrics.qos = qos(state, config);
    const std::vector<int> serving = serving_drones(state, config);
    result.metrics.covered.resize(serving.size());
    for (std::size_t u = 0; u < serving.size(); ++u) {
        result.metrics.covered[u] = serving[u] >= 0;
    }
    result.rewards = reward(state, config);
    result.observations = observe_all(state, config);
    result.state = std::move(state);
    return result;
}

}  // namespace qdrl::env
