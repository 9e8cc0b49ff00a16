#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdrl/harness/config.hpp"
#include "qdrl/harness/run_store.hpp"
#include "qdrl/harness/svg_plot.hpp"
#include "qdrl/qpolicy/policy.hpp"
#include "qdrl/train/policies.hpp"
#include "qdrl/train/train_loop.hpp"

namespace qdrl::harness {

enum class PolicyKind { kQuantum, kClassical };

inline std::string to_string(PolicyKind kind) {
    return kind == PolicyKind::kQuantum ? "quantum" : "classical";
}

inline PolicyKind policy_kind_from_string(const std::string& name) {
    if (name == "quantum") return PolicyKind::kQuantum;
    if (name == "classical") return PolicyKind::kClassical;
    throw std::invalid_argument("unknown policy kind '" + name + "'");
}

// Sub-seed tag for deriving the default evaluation seed from a run's
// training seed.
inline constexpr std::uint64_t kEvalSeedTag = 777;

struct RunPaths {
    std::filesystem::path dir;

    std::filesystem::path config() const { return dir / "config.ini"; }
    std::filesystem::path policy() const { return dir / "policy.json"; }
    std::filesystem::path metrics() const { return dir / "metrics.csv"; }
    std::filesystem::path trajectories() const { return dir / "trajectories.jsonl"; }
    std::filesystem::path summary() const { return dir / "summary.json"; }
};

inline RunPaths run_paths(const std::filesystem::path& runs_root, const std::string& run_id) {
    return RunPaths{runs_root / run_id};
}

struct RunArtifacts {
    std::string run_id;
    ConfigBundle config;
    RunSummary summary;
    train::RunResult result;
    RunPaths paths;
};

// Sector counts above this clamp before angle scaling; typical counts are
// 0..3 and squeezing them against the full user count wastes angle range.
inline constexpr double kSectorScaleCap = 4.0;

inline qpolicy::QPolicyConfig make_qpolicy_config(const ConfigBundle& bundle) {
    qpolicy::QPolicyConfig config;
    config.num_qubits = bundle.policy.num_qubits;
    config.obs_dim = bundle.env.obs_dim();
    config.num_blocks = bundle.policy.num_blocks;
    config.layers_per_block = bundle.policy.layers_per_block;
    config.value_scale = bundle.policy.value_scale;
    // Scaling bounds are symmetric around zero so the nonnegative feature
    // values land in [0, pi], where <Z> of an RY upload is injective; mapping
    // [0, max] onto the full [-pi, pi] would alias low and high values
    // (RY(-pi) and RY(pi) differ only by a global phase).
    const auto value_bounds = env::observation_bounds(bundle.env);
    for (std::size_t i = 0; i < value_bounds.size(); ++i) {
        const bool sector = i >= 2 * static_cast<std::size_t>(bundle.env.num_drones);
        const double hi =
            sector ? std::min(value_bounds[i].max, kSectorScaleCap) : value_bounds[i].max;
        config.feature_bounds.push_back({-hi, hi});
    }
    return config;
}

inline baseline::MlpConfig make_mlp_config(const ConfigBundle& bundle) {
    return baseline::MlpConfig{bundle.env.obs_dim(), bundle.policy.hidden_size,
                               env::kNumActions};
}

// Per-feature divisors normalizing the raw observation into [0, 1] for the
// classical network.
inline std::vector<double> make_mlp_input_scales(const ConfigBundle& bundle) {
    std::vector<double> scales;
    for (const env::ObservationBound& b : env::observation_bounds(bundle.env)) {
        scales.push_back(b.max);
    }
    return scales;
}

// Same bundle with learning switched off and the temperature pinned huge:
// uniform random actions, no updates. This is the reference the learning
// trend is judged against.
inline ConfigBundle make_random_baseline(ConfigBundle bundle) {
    bundle.train.learning_rate = 0.0;
    bundle.train.temperature_initial = 1e6;
    bundle.train.temperature_final = 1e6;
    bundle.train.temperature_decay_steps = 0;
    return bundle;
}

namespace detail {

inline void persist_run(const RunArtifacts& artifacts, const ConfigBundle& bundle,
                        PolicyKind kind) {
    std::filesystem::create_directories(artifacts.paths.dir);
    write_text_file(artifacts.paths.config(), serialize_config(bundle));
    write_text_file(artifacts.paths.policy(),
                    policy_to_json(to_string(kind), artifacts.result.final_params).dump(2) +
                        "\n");
    write_text_file(artifacts.paths.metrics(),
                    format_metrics_csv(artifacts.result.episodes, bundle.env.num_drones));
    write_text_file(artifacts.paths.trajectories(),
                    format_trajectories_jsonl(artifacts.result.trajectories));
    write_text_file(artifacts.paths.summary(),
                    summary_to_json(artifacts.summary).dump(2) + "\n");
}

template <typename Policy>
RunArtifacts run_with_policy(const ConfigBundle& bundle, const Policy& policy,
                             PolicyKind kind, std::uint64_t seed, const std::string& run_id,
                             const std::filesystem::path& runs_root) {
    // Training episodes never fire the malfunction scenario; it belongs to
    // evaluation rollouts.
    env::EnvConfig train_env = bundle.env;
    train_env.malfunction_schedule.clear();

    std::set<int> trajectory_episodes;
    if (bundle.train.episodes > 0) trajectory_episodes.insert(bundle.train.episodes - 1);

    RunArtifacts artifacts;
    artifacts.run_id = run_id;
    artifacts.config = bundle;
    artifacts.paths = run_paths(runs_root, run_id);
    artifacts.result =
        train::train_run(train_env, policy, bundle.train, seed, trajectory_episodes);

    artifacts.summary = summarize(artifacts.result.episodes, bundle.final_window);
    artifacts.summary.run_id = run_id;
    artifacts.summary.policy_kind = to_string(kind);
    artifacts.summary.seed = seed;
    artifacts.summary.param_count_per_agent = policy.param_count();
    artifacts.summary.num_agents = bundle.env.num_drones;
    artifacts.summary.status = artifacts.result.completed ? "completed" : "failed";
    artifacts.summary.diagnostic = artifacts.result.diagnostic;

    persist_run(artifacts, bundle, kind);
    return artifacts;
}

}  // namespace detail

// Trains one run and persists metrics.csv, trajectories.jsonl, summary.json,
// policy.json and the config snapshot under runs_root/run_id/.
inline RunArtifacts run(const ConfigBundle& bundle, PolicyKind kind, std::uint64_t seed,
                        const std::string& run_id,
                        const std::filesystem::path& runs_root = "runs") {
    bundle.validate();
    if (run_id.empty()) throw std::invalid_argument("run: run_id must not be empty");
    if (kind == PolicyKind::kQuantum) {
        return detail::run_with_policy(bundle, train::QuantumPolicy(make_qpolicy_config(bundle)),
                                       kind, seed, run_id, runs_root);
    }
    return detail::run_with_policy(
        bundle,
        train::ClassicalPolicy(make_mlp_config(bundle), make_mlp_input_scales(bundle)),
        kind, seed, run_id, runs_root);
}

// Greedy rollout of a stored run's final parameters with the configured
// malfunction scenario armed; artifacts land under runs_root/run_id/eval/.
inline RunArtifacts evaluate(const std::string& run_id, int episodes,
                             const std::filesystem::path& runs_root = "runs",
                             std::uint64_t seed = 0, bool seed_given = false) {
    const RunPaths trained = run_paths(runs_root, run_id);
    const ConfigBundle bundle = load_config(trained.config());
    const Json policy_json = Json::parse(read_text_file(trained.policy()));
    const RunSummary trained_summary =
        summary_from_json(Json::parse(read_text_file(trained.summary())));
    const PolicyKind kind = policy_kind_from_string(policy_json.at("kind").get<std::string>());
    const auto params = policy_json.at("params").get<std::vector<std::vector<double>>>();
    if (episodes < 1) throw std::invalid_argument("evaluate: episodes must be >= 1");

    const std::uint64_t eval_seed =
        seed_given ? seed : sub_seed(trained_summary.seed, kEvalSeedTag);

    train::RunResult result;
    std::size_t params_per_agent = 0;
    if (kind == PolicyKind::kQuantum) {
        const train::QuantumPolicy policy(make_qpolicy_config(bundle));
        params_per_agent = policy.param_count();
        result = train::evaluate_run(bundle.env, policy, params, episodes, eval_seed);
    } else {
        const train::ClassicalPolicy policy(make_mlp_config(bundle),
                                            make_mlp_input_scales(bundle));
        params_per_agent = policy.param_count();
        result = train::evaluate_run(bundle.env, policy, params, episodes, eval_seed);
    }

    RunArtifacts artifacts;
    artifacts.run_id = run_id;
    artifacts.config = bundle;
    artifacts.paths = RunPaths{trained.dir / "eval"};
    artifacts.result = std::move(result);
    artifacts.summary = summarize(artifacts.result.episodes, bundle.final_window);
    artifacts.summary.run_id = run_id;
    artifacts.summary.policy_kind = to_string(kind);
    artifacts.summary.seed = eval_seed;
    artifacts.summary.param_count_per_agent = params_per_agent;
    artifacts.summary.num_agents = bundle.env.num_drones;

    std::filesystem::create_directories(artifacts.paths.dir);
    write_text_file(artifacts.paths.metrics(),
                    format_metrics_csv(artifacts.result.episodes, bundle.env.num_drones));
    write_text_file(artifacts.paths.trajectories(),
                    format_trajectories_jsonl(artifacts.result.trajectories));
    write_text_file(artifacts.paths.summary(),
                    summary_to_json(artifacts.summary).dump(2) + "\n");
    return artifacts;
}

// ---- compare ----------------------------------------------------------------

struct CompareColumn {
    std::string run_id;
    int episodes = 0;
    WindowStats reward;
    WindowStats support_rate;
    WindowStats qos;
    std::size_t param_count = 0;
    std::string policy_kind;
};

struct CompareReport {
    std::vector<CompareColumn> columns;
    std::string table;
};

// Final-window mean +- std per run, recomputed from the persisted metrics
// tables, plus parameter counts. Reporting only; no judgment.
inline CompareReport compare(const std::vector<std::string>& run_ids,
                             const std::filesystem::path& runs_root = "runs") {
    if (run_ids.size() < 2) {
        throw std::invalid_argument("compare: need at least two runs");
    }
    CompareReport report;
    int episodes = -1;
    for (const std::string& id : run_ids) {
        const RunPaths paths = run_paths(runs_root, id);
        const MetricsTable table = parse_metrics_csv(read_text_file(paths.metrics()));
        const RunSummary summary =
            summary_from_json(Json::parse(read_text_file(paths.summary())));
        if (episodes < 0) {
            episodes = static_cast<int>(table.rows.size());
        } else if (episodes != static_cast<int>(table.rows.size())) {
            throw std::invalid_argument("compare: run '" + id + "' has " +
                                        std::to_string(table.rows.size()) +
                                        " episodes, expected " + std::to_string(episodes));
        }
        CompareColumn col;
        col.run_id = id;
        col.episodes = static_cast<int>(table.rows.size());
        col.reward = final_window_stats(table.column("total_reward"), summary.final_window);
        col.support_rate =
            final_window_stats(table.column("support_rate"), summary.final_window);
        col.qos = final_window_stats(table.column("qos"), summary.final_window);
        col.param_count = summary.param_count_per_agent;
        col.policy_kind = summary.policy_kind;
        report.columns.push_back(std::move(col));
    }

    std::ostringstream out;
    const auto cell = [](const WindowStats& s) {
        std::ostringstream os;
        os << std::fixed << std::setprecision(4) << s.mean << " +- " << s.stddev;
        return os.str();
    };
    constexpr int kLabelWidth = 24;
    constexpr int kColWidth = 22;
    out << std::left << std::setw(kLabelWidth) << "metric";
    for (const CompareColumn& col : report.columns) {
        out << std::setw(kColWidth) << col.run_id;
    }
    out << "\n";
    const auto row = [&](const std::string& label, auto getter) {
        out << std::setw(kLabelWidth) << label;
        for (const CompareColumn& col : report.columns) {
            out << std::setw(kColWidth) << getter(col);
        }
        out << "\n";
    };
    row("policy", [](const CompareColumn& c) { return c.policy_kind; });
    row("episodes", [](const CompareColumn& c) { return std::to_string(c.episodes); });
    row("reward (final window)", [&](const CompareColumn& c) { return cell(c.reward); });
    row("support_rate", [&](const CompareColumn& c) { return cell(c.support_rate); });
    row("qos", [&](const CompareColumn& c) { return cell(c.qos); });
    row("param_count",
        [](const CompareColumn& c) { return std::to_string(c.param_count); });
    report.table = out.str();
    return report;
}

// ---- plot -------------------------------------------------------------------

inline std::string metric_column_name(const std::string& metric) {
    if (metric == "reward") return "total_reward";
    if (metric == "support_rate") return "support_rate";
    if (metric == "qos") return "qos";
    throw std::invalid_argument("plot: unknown metric '" + metric +
                                "' (expected reward, support_rate, or qos)");
}

// Writes an SVG with one smoothed polyline per run. Smoothing is display
// only; the persisted metrics are untouched.
inline void plot(const std::vector<std::string>& run_ids, const std::string& metric,
                 const std::filesystem::path& out_path,
                 const std::filesystem::path& runs_root = "runs", int window = 10) {
    const std::string column = metric_column_name(metric);
    if (run_ids.empty()) throw std::invalid_argument("plot: need at least one run");
    std::vector<PlotSeries> series;
    for (const std::string& id : run_ids) {
        const RunPaths paths = run_paths(runs_root, id);
        const MetricsTable table = parse_metrics_csv(read_text_file(paths.metrics()));
        const std::vector<double> episodes = table.column("episode");
        const std::vector<double> values = table.column(column);
        const int effective_window =
            std::min<int>(window, static_cast<int>(values.size()));
        PlotSeries s;
        s.label = id;
        s.y = moving_average(values, std::max(1, effective_window));
        // x = episode at each smoothing window's end
        const std::size_t skip = values.size() - s.y.size();
        s.x.assign(episodes.begin() + static_cast<std::ptrdiff_t>(skip), episodes.end());
        series.push_back(std::move(s));
    }
    write_text_file(out_path,
                    render_line_plot(series, metric + " per episode", "episode", metric));
}

}  // namespace qdrl::harness
