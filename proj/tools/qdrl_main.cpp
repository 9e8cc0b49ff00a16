// Command-line front end: train / eval / compare / plot over run directories.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdrl/harness/config.hpp"
#include "qdrl/harness/runner.hpp"

namespace {

qdrl::harness::ConfigBundle load_bundle(const std::string& config_path) {
    if (config_path.empty()) return qdrl::harness::ConfigBundle{};
    return qdrl::harness::load_config(config_path);
}

std::vector<std::string> split_run_ids(const std::string& csv) {
    std::vector<std::string> ids;
    for (std::string_view part : qdrl::harness::split(csv, ',')) {
        const std::string_view id = qdrl::harness::trim(part);
        if (!id.empty()) ids.emplace_back(id);
    }
    return ids;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum multi-drone reinforcement learning harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string policy = "quantum";
    std::uint64_t seed = 1;
    std::string run_id;
    std::string runs_dir = "runs";
    std::string runs_csv;
    std::string metric = "reward";
    std::string out_path;
    int episodes = 5;
    int window = 10;
    std::uint64_t eval_seed = 0;

    CLI::App* train = app.add_subcommand("train", "Train one run and persist its artifacts");
    train->add_option("--config", config_path, "Config file (defaults when omitted)");
    train->add_option("--policy", policy, "Policy kind: quantum | classical")
        ->check(CLI::IsMember({"quantum", "classical"}));
    train->add_option("--seed", seed, "Root random seed");
    train->add_option("--run-id", run_id, "Run directory name (default <policy>-seed<N>)");
    train->add_option("--runs-dir", runs_dir, "Root directory for run artifacts");

    CLI::App* eval = app.add_subcommand(
        "eval", "Greedy evaluation of a trained run with the malfunction scenario");
    eval->add_option("--run-id", run_id, "Trained run to evaluate")->required();
    eval->add_option("--episodes", episodes, "Evaluation episodes");
    CLI::Option* eval_seed_opt =
        eval->add_option("--seed", eval_seed, "Evaluation seed (default derived from the run)");
    eval->add_option("--runs-dir", runs_dir, "Root directory for run artifacts");

    CLI::App* cmp = app.add_subcommand("compare", "Tabulate final-window stats across runs");
    cmp->add_option("--runs", runs_csv, "Comma-separated run ids")->required();
    cmp->add_option("--runs-dir", runs_dir, "Root directory for run artifacts");

    CLI::App* plot = app.add_subcommand("plot", "Render a metric across runs as SVG");
    plot->add_option("--runs", runs_csv, "Comma-separated run ids")->required();
    plot->add_option("--metric", metric, "reward | support_rate | qos");
    plot->add_option("--out", out_path, "Output SVG path")->required();
    plot->add_option("--window", window, "Moving-average window (display only)");
    plot->add_option("--runs-dir", runs_dir, "Root directory for run artifacts");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            const auto kind = qdrl::harness::policy_kind_from_string(policy);
            if (run_id.empty()) run_id = policy + "-seed" + std::to_string(seed);
            const auto artifacts =
                qdrl::harness::run(load_bundle(config_path), kind, seed, run_id, runs_dir);
            std::cout << "run " << run_id << " " << artifacts.summary.status
                      << ": reward(final " << artifacts.summary.reward.window
                      << ") = " << artifacts.summary.reward.mean << " +- "
                      << artifacts.summary.reward.stddev << "\n";
            if (artifacts.summary.status != "completed") {
                std::cerr << "error: " << artifacts.summary.diagnostic << "\n";
                return 1;
            }
        } else if (eval->parsed()) {
            const auto artifacts = qdrl::harness::evaluate(run_id, episodes, runs_dir,
                                                           eval_seed, !eval_seed_opt->empty());
            std::cout << "eval " << run_id << ": reward(final "
                      << artifacts.summary.reward.window
                      << ") = " << artifacts.summary.reward.mean << ", support_rate = "
                      << artifacts.summary.support_rate.mean << ", qos = "
                      << artifacts.summary.qos.mean << "\n";
        } else if (cmp->parsed()) {
            const auto report = qdrl::harness::compare(split_run_ids(runs_csv), runs_dir);
            std::cout << report.table;
        } else if (plot->parsed()) {
            qdrl::harness::plot(split_run_ids(runs_csv), metric, out_path, runs_dir, window);
            std::cout << "wrote " << out_path << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
