#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdrl/harness/text_format.hpp"
#include "qdrl/train/train_loop.hpp"

namespace qdrl::harness {

using Json = nlohmann::ordered_json;

// Mean and population standard deviation over the last `window` entries
// (fewer if the series is shorter). Every consumer of these aggregates must
// go through here so that recomputing from a persisted CSV reproduces the
// stored summary bit-for-bit.
struct WindowStats {
    int window = 0;
    double mean = 0.0;
    double stddev = 0.0;
};

inline WindowStats final_window_stats(const std::vector<double>& series, int window) {
    WindowStats stats;
    if (series.empty() || window < 1) return stats;
    const std::size_t w = std::min(series.size(), static_cast<std::size_t>(window));
    stats.window = static_cast<int>(w);
    const std::size_t start = series.size() - w;
    double sum = 0.0;
    for (std::size_t i = start; i < series.size(); ++i) sum += series[i];
    stats.mean = sum / static_cast<double>(w);
    double sq = 0.0;
    for (std::size_t i = start; i < series.size(); ++i) {
        const double d = series[i] - stats.mean;
        sq += d * d;
    }
    stats.stddev = std::sqrt(sq / static_cast<double>(w));
    return stats;
}

struct RunSummary {
    std::string run_id;
    std::string policy_kind;
    std::uint64_t seed = 0;
    int episodes = 0;
    int final_window = 20;
    WindowStats reward;
    WindowStats support_rate;
    WindowStats qos;
    std::size_t param_count_per_agent = 0;
    int num_agents = 0;
    std::string status = "completed";
    std::string diagnostic;
};

// ---- metrics CSV ----------------------------------------------------------

inline std::string metrics_header(int num_agents) {
    std::string header = "episode,total_reward";
    for (int m = 0; m < num_agents; ++m) {
        header += ",reward_agent_" + std::to_string(m);
    }
    header += ",mean_loss,support_rate,qos,temperature";
    return header;
}

inline std::string format_metrics_csv(const std::vector<train::EpisodeRecord>& episodes,
                                      int num_agents) {
    std::string out = metrics_header(num_agents) + "\n";
    for (const train::EpisodeRecord& row : episodes) {
        out += std::to_string(row.episode);
        out += "," + format_double(row.total_reward);
        for (double r : row.agent_rewards) out += "," + format_double(r);
        out += "," + format_double(row.mean_loss);
        out += "," + format_double(row.support_rate);
        out += "," + format_double(row.qos);
        out += "," + format_double(row.temperature);
        out += "\n";
    }
    return out;
}

struct MetricsTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column_index(const std::string& name) const {
        const auto it = std::find(columns.begin(), columns.end(), name);
        if (it == columns.end()) {
            throw std::invalid_argument("metrics: no column named '" + name + "'");
        }
        return static_cast<std::size_t>(it - columns.begin());
    }

    std::vector<double> column(const std::string& name) const {
        const std::size_t idx = column_index(name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& row : rows) out.push_back(row[idx]);
        return out;
    }
};

inline MetricsTable parse_metrics_csv(const std::string& text) {
    MetricsTable table;
    std::istringstream stream(text);
    std::string line;
    if (!std::getline(stream, line)) {
        throw std::invalid_argument("metrics: empty file");
    }
    for (std::string_view name : split(trim(line), ',')) {
        table.columns.emplace_back(name);
    }
    while (std::getline(stream, line)) {
        const std::string_view row_text = trim(line);
        if (row_text.empty()) continue;
        std::vector<double> row;
        for (std::string_view cell : split(row_text, ',')) {
            row.push_back(parse_double(cell));
        }
        if (row.size() != table.columns.size()) {
            throw std::invalid_argument("metrics: ragged row");
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

// ---- trajectory frames (one JSON object per line) --------------------------

inline Json frame_to_json(const train::TrajectoryFrame& frame) {
    Json j;
    j["episode"] = frame.episode;
    j["t"] = frame.timestep;
    j["drones"] = frame.drone_positions;
    j["malfunctioned"] = frame.malfunctioned;
    j["users"] = frame.user_positions;
    j["covered"] = frame.covered;
    j["support_rate"] = frame.support_rate;
    j["qos"] = frame.qos;
    j["rewards"] = frame.rewards;
    return j;
}

inline train::TrajectoryFrame frame_from_json(const Json& j) {
    train::TrajectoryFrame frame;
    frame.episode = j.at("episode").get<int>();
    frame.timestep = j.at("t").get<int>();
    frame.drone_positions = j.at("drones").get<std::vector<std::array<double, 2>>>();
    frame.malfunctioned = j.at("malfunctioned").get<std::vector<bool>>();
    frame.user_positions = j.at("users").get<std::vector<std::array<double, 2>>>();
    frame.covered = j.at("covered").get<std::vector<bool>>();
    frame.support_rate = j.at("support_rate").get<double>();
    frame.qos = j.at("qos").get<double>();
    frame.rewards = j.at("rewards").get<std::vector<double>>();
    return frame;
}

inline std::string format_trajectories_jsonl(const std::vector<train::TrajectoryFrame>& frames) {
    std::string out;
    for (const train::TrajectoryFrame& frame : frames) {
        out += frame_to_json(frame).dump();
        out += "\n";
    }
    return out;
}

inline std::vector<train::TrajectoryFrame> parse_trajectories_jsonl(const std::string& text) {
    std::vector<train::TrajectoryFrame> frames;
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        if (trim(line).empty()) continue;
        frames.push_back(frame_from_json(Json::parse(line)));
    }
    return frames;
}

// ---- summary ---------------------------------------------------------------

inline RunSummary summarize(const std::vector<train::EpisodeRecord>& episodes,
                            int final_window) {
    RunSummary summary;
    summary.episodes = static_cast<int>(episodes.size());
    summary.final_window = final_window;
    std::vector<double> reward, support, qos;
    reward.reserve(episodes.size());
    for (const train::EpisodeRecord& row : episodes) {
        reward.push_back(row.total_reward);
        support.push_back(row.support_rate);
        qos.push_back(row.qos);
    }
    summary.reward = final_window_stats(reward, final_window);
    summary.support_rate = final_window_stats(support, final_window);
    summary.qos = final_window_stats(qos, final_window);
    return summary;
}

inline Json summary_to_json(const RunSummary& s) {
    Json j;
    j["run_id"] = s.run_id;
    j["policy"] = s.policy_kind;
    j["seed"] = s.seed;
    j["episodes"] = s.episodes;
    j["final_window"] = s.final_window;
    j["reward_mean"] = s.reward.mean;
    j["reward_std"] = s.reward.stddev;
    j["support_rate_mean"] = s.support_rate.mean;
    j["support_rate_std"] = s.support_rate.stddev;
    j["qos_mean"] = s.qos.mean;
    j["qos_std"] = s.qos.stddev;
    j["param_count_per_agent"] = s.param_count_per_agent;
    j["num_agents"] = s.num_agents;
    j["status"] = s.status;
    j["diagnostic"] = s.diagnostic;
    return j;
}

inline RunSummary summary_from_json(const Json& j) {
    RunSummary s;
    s.run_id = j.at("run_id").get<std::string>();
    s.policy_kind = j.at("policy").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.episodes = j.at("episodes").get<int>();
    s.final_window = j.at("final_window").get<int>();
    s.reward = {s.final_window, j.at("reward_mean").get<double>(),
                j.at("reward_std").get<double>()};
    s.support_rate = {s.final_window, j.at("support_rate_mean").get<double>(),
                      j.at("support_rate_std").get<double>()};
    s.qos = {s.final_window, j.at("qos_mean").get<double>(), j.at("qos_std").get<double>()};
    s.param_count_per_agent = j.at("param_count_per_agent").get<std::size_t>();
    s.num_agents = j.at("num_agents").get<int>();
    s.status = j.at("status").get<std::string>();
    s.diagnostic = j.at("diagnostic").get<std::string>();
    return s;
}

// ---- policy parameters ------------------------------------------------------

inline Json policy_to_json(const std::string& kind,
                           const std::vector<std::vector<double>>& params_per_agent) {
    Json j;
    j["kind"] = kind;
    j["num_agents"] = params_per_agent.size();
    j["params"] = params_per_agent;
    return j;
}

// ---- file helpers -----------------------------------------------------------

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write failed for '" + path.string() + "'");
    }
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace qdrl::harness
