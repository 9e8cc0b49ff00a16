#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qdrl/env/drone_env.hpp"
#include "qdrl/errors.hpp"
#include "qdrl/harness/text_format.hpp"
#include "qdrl/train/qlearning.hpp"

namespace qdrl::harness {

struct PolicySettings {
    int num_qubits = 5;
    int num_blocks = 2;
    int layers_per_block = 1;
    double value_scale = 2.5;
    int hidden_size = 64;  // classical baseline width
};

// Everything one run needs, resolved from a config file over the desk-scale
// defaults. The episode horizon lives in [env] steps_per_episode and is
// mirrored into the train config at load.
struct ConfigBundle {
    env::EnvConfig env;
    PolicySettings policy;
    train::TrainConfig train;
    int final_window = 20;  // summary aggregation window, episodes

    ConfigBundle() {
        env.malfunction_schedule = {{20, 1}};
        train.steps_per_episode = env.steps_per_episode;
    }

    void validate() const {
        env.validate();
        if (policy.num_qubits != env::kNumActions) {
            throw ConfigError("policy.num_qubits: one qubit per action is required (" +
                              std::to_string(env::kNumActions) + " actions, got " +
                              std::to_string(policy.num_qubits) + " qubits)");
        }
        if (policy.num_blocks < 1) throw ConfigError("policy.num_blocks must be >= 1");
        if (policy.layers_per_block < 1) {
            throw ConfigError("policy.layers_per_block must be >= 1");
        }
        if (!(policy.value_scale > 0.0)) throw ConfigError("policy.value_scale must be > 0");
        if (policy.hidden_size < 1) throw ConfigError("policy.hidden_size must be >= 1");
        train.validate();
        if (train.steps_per_episode != env.steps_per_episode) {
            throw ConfigError("train steps_per_episode diverged from env horizon");
        }
        if (final_window < 1) throw ConfigError("train.final_window must be >= 1");
    }
};

namespace detail {

inline std::string format_schedule(const std::vector<env::MalfunctionEvent>& schedule) {
    std::string out;
    for (const env::MalfunctionEvent& ev : schedule) {
        if (!out.empty()) out += ",";
        out += std::to_string(ev.timestep) + ":" + std::to_string(ev.drone_id);
    }
    return out;
}

inline std::vector<env::MalfunctionEvent> parse_schedule(std::string_view value) {
    std::vector<env::MalfunctionEvent> schedule;
    if (trim(value).empty()) return schedule;
    for (std::string_view entry : split(value, ',')) {
        const std::vector<std::string_view> parts = split(trim(entry), ':');
        if (parts.size() != 2) {
            throw ConfigError("malfunction_schedule: expected 'timestep:drone_id' entries");
        }
        schedule.push_back({static_cast<int>(parse_int(trim(parts[0]))),
                            static_cast<int>(parse_int(trim(parts[1])))});
    }
    return schedule;
}

}  // namespace detail

// Flat INI-style text: [env] / [policy] / [train] sections, 'key = value'
// lines, '#' comments. Unknown keys are rejected so typos cannot silently
// fall back to defaults; missing keys keep the defaults.
inline ConfigBundle parse_config(const std::string& text) {
    ConfigBundle bundle;

    using Setter = std::function<void(ConfigBundle&, std::string_view)>;
    const std::map<std::string, Setter, std::less<>> setters = {
        {"env.grid_width", [](ConfigBundle& b, std::string_view v) {
             b.env.grid_width = static_cast<int>(parse_int(v)); }},
        {"env.grid_height", [](ConfigBundle& b, std::string_view v) {
             b.env.grid_height = static_cast<int>(parse_int(v)); }},
        {"env.num_drones", [](ConfigBundle& b, std::string_view v) {
             b.env.num_drones = static_cast<int>(parse_int(v)); }},
        {"env.num_users", [](ConfigBundle& b, std::string_view v) {
             b.env.num_users = static_cast<int>(parse_int(v)); }},
        {"env.coverage_radius", [](ConfigBundle& b, std::string_view v) {
             b.env.coverage_radius = parse_double(v); }},
        {"env.steps_per_episode", [](ConfigBundle& b, std::string_view v) {
             b.env.steps_per_episode = static_cast<int>(parse_int(v)); }},
        {"env.w_support", [](ConfigBundle& b, std::string_view v) {
             b.env.w_support = parse_double(v); }},
        {"env.w_qos", [](ConfigBundle& b, std::string_view v) {
             b.env.w_qos = parse_double(v); }},
        {"env.malfunction_schedule", [](ConfigBundle& b, std::string_view v) {
             b.env.malfunction_schedule = detail::parse_schedule(v); }},
        {"policy.num_qubits", [](ConfigBundle& b, std::string_view v) {
             b.policy.num_qubits = static_cast<int>(parse_int(v)); }},
        {"policy.num_blocks", [](ConfigBundle& b, std::string_view v) {
             b.policy.num_blocks = static_cast<int>(parse_int(v)); }},
        {"policy.layers_per_block", [](ConfigBundle& b, std::string_view v) {
             b.policy.layers_per_block = static_cast<int>(parse_int(v)); }},
        {"policy.value_scale", [](ConfigBundle& b, std::string_view v) {
             b.policy.value_scale = parse_double(v); }},
        {"policy.hidden_size", [](ConfigBundle& b, std::string_view v) {
             b.policy.hidden_size = static_cast<int>(parse_int(v)); }},
        {"train.episodes", [](ConfigBundle& b, std::string_view v) {
             b.train.episodes = static_cast<int>(parse_int(v)); }},
        {"train.gamma", [](ConfigBundle& b, std::string_view v) {
             b.train.discount = parse_double(v); }},
        {"train.learning_rate", [](ConfigBundle& b, std::string_view v) {
             b.train.learning_rate = parse_double(v); }},
        {"train.sdq_epsilon", [](ConfigBundle& b, std::string_view v) {
             b.train.sdq_epsilon = parse_double(v); }},
        {"train.target_update_interval", [](ConfigBundle& b, std::string_view v) {
             b.train.target_update_interval = static_cast<int>(parse_int(v)); }},
        {"train.temperature_initial", [](ConfigBundle& b, std::string_view v) {
             b.train.temperature_initial = parse_double(v); }},
        {"train.temperature_final", [](ConfigBundle& b, std::string_view v) {
             b.train.temperature_final = parse_double(v); }},
        {"train.temperature_decay_steps", [](ConfigBundle& b, std::string_view v) {
             b.train.temperature_decay_steps = parse_int(v); }},
        {"train.final_window", [](ConfigBundle& b, std::string_view v) {
             b.final_window = static_cast<int>(parse_int(v)); }},
    };

    std::string section;
    std::size_t line_no = 0;
    std::istringstream stream(text);
    std::string raw_line;
    while (std::getline(stream, raw_line)) {
        ++line_no;
        std::string_view line = trim(raw_line);
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = trim(line.substr(0, hash));
        }
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": unterminated section header");
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "env" && section != "policy" && section != "train") {
                throw ConfigError("config: unknown section [" + section + "]");
            }
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        if (section.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": key outside any section");
        }
        const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw ConfigError("config: unknown key '" + key + "'");
        }
        try {
            it->second(bundle, value);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError("config key '" + key + "': " + e.what());
        }
    }

    bundle.train.steps_per_episode = bundle.env.steps_per_episode;
    bundle.validate();
    return bundle;
}

inline ConfigBundle load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

// Canonical form: every key in a fixed order; reloading reproduces the
// bundle exactly (doubles are shortest-round-trip).
inline std::string serialize_config(const ConfigBundle& bundle) {
    std::ostringstream out;
    out << "[env]\n";
    out << "grid_width = " << bundle.env.grid_width << "\n";
    out << "grid_height = " << bundle.env.grid_height << "\n";
    out << "num_drones = " << bundle.env.num_drones << "\n";
    out << "num_users = " << bundle.env.num_users << "\n";
    out << "coverage_radius = " << format_double(bundle.env.coverage_radius) << "\n";
    out << "steps_per_episode = " << bundle.env.steps_per_episode << "\n";
    out << "w_support = " << format_double(bundle.env.w_support) << "\n";
    out << "w_qos = " << format_double(bundle.env.w_qos) << "\n";
    out << "malfunction_schedule = " << detail::format_schedule(bundle.env.malfunction_schedule)
        << "\n";
    out << "\n[policy]\n";
    out << "num_qubits = " << bundle.policy.num_qubits << "\n";
    out << "num_blocks = " << bundle.policy.num_blocks << "\n";
    out << "layers_per_block = " << bundle.policy.layers_per_block << "\n";
    out << "value_scale = " << format_double(bundle.policy.value_scale) << "\n";
    out << "hidden_size = " << bundle.policy.hidden_size << "\n";
    out << "\n[train]\n";
    out << "episodes = " << bundle.train.episodes << "\n";
    out << "gamma = " << format_double(bundle.train.discount) << "\n";
    out << "learning_rate = " << format_double(bundle.train.learning_rate) << "\n";
    out << "sdq_epsilon = " << format_double(bundle.train.sdq_epsilon) << "\n";
    out << "target_update_interval = " << bundle.train.target_update_interval << "\n";
    out << "temperature_initial = " << format_double(bundle.train.temperature_initial) << "\n";
    out << "temperature_final = " << format_double(bundle.train.temperature_final) << "\n";
    out << "temperature_decay_steps = " << bundle.train.temperature_decay_steps << "\n";
    out << "final_window = " << bundle.final_window << "\n";
    return out.str();
}

}  // namespace qdrl::harness
