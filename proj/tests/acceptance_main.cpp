// Acceptance suite: runs every criterion end to end and prints one
// pass/fail line each. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qdrl/harness/runner.hpp"

using namespace qdrl;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v, int precision = 3) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

std::string fmt_sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2e", v);
    return buf;
}

qsim::Gate random_gate(Rng& rng, int num_qubits) {
    const int kind = static_cast<int>(rng.uniform01() * 5.0);
    const int wire = static_cast<int>(rng.uniform01() * num_qubits);
    const double theta = rng.uniform(-2.0 * kPi, 2.0 * kPi);
    switch (kind) {
        case 0: return qsim::RxGate{wire, theta};
        case 1: return qsim::RyGate{wire, theta};
        case 2: return qsim::RzGate{wire, theta};
        default: {
            if (num_qubits < 2) return qsim::RyGate{wire, theta};
            int other = static_cast<int>(rng.uniform01() * (num_qubits - 1));
            if (other >= wire) ++other;
            if (kind == 3) return qsim::CnotGate{wire, other};
            return qsim::Cu3Gate{wire, other, theta, rng.uniform(-kPi, kPi),
                                 rng.uniform(-kPi, kPi)};
        }
    }
}

// ---- criterion 1: quantum kernel ---------------------------------------------

void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(10001);
    bool ok = true;

    // norm preservation across 10,000 random gate applications
    auto state = qsim::new_zero_state(5);
    double worst_norm = 0.0;
    for (int i = 0; i < 10000; ++i) {
        state = qsim::apply_gate(std::move(state), random_gate(rng, 5));
        worst_norm = std::max(worst_norm, std::abs(state.norm_sq() - 1.0));
    }
    if (worst_norm >= 1e-10) ok = false;

    // unitarity of every variant over 100 random angle draws
    double worst_unitarity = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        const double theta = rng.uniform(-2.0 * kPi, 2.0 * kPi);
        const double phi = rng.uniform(-2.0 * kPi, 2.0 * kPi);
        const double lambda = rng.uniform(-2.0 * kPi, 2.0 * kPi);
        const std::vector<qsim::Gate> gates = {
            qsim::RxGate{0, theta}, qsim::RyGate{0, theta}, qsim::RzGate{0, theta},
            qsim::CnotGate{0, 1}, qsim::Cu3Gate{0, 1, theta, phi, lambda}};
        for (const auto& gate : gates) {
            const int q = qsim::control_wire(gate) >= 0 ? 2 : 1;
            const auto m = oracles::dense_gate_matrix(gate, q);
            const auto mtm = oracles::matmul(oracles::adjoint(m), m);
            worst_unitarity =
                std::max(worst_unitarity, oracles::max_deviation_from_identity(mtm));
        }
    }
    if (worst_unitarity >= 1e-12) ok = false;

    // CNOT truth table, exact
    for (std::size_t basis = 0; basis < 4; ++basis) {
        auto in = qsim::new_zero_state(2);
        in.amplitudes[0] = {0.0, 0.0};
        in.amplitudes[basis] = {1.0, 0.0};
        const auto out = qsim::apply_gate(in, qsim::CnotGate{0, 1});
        const std::size_t expect = (basis & 2) ? (basis ^ 1) : basis;
        for (std::size_t i = 0; i < 4; ++i) {
            const qsim::Complex want =
                i == expect ? qsim::Complex{1, 0} : qsim::Complex{0, 0};
            if (out.amplitudes[i] != want) ok = false;
        }
    }

    // CU3 reduction: control set applies the U3 block, control clear is identity
    const double theta = 1.234, phi = -0.777, lambda = 2.5;
    for (std::size_t basis = 0; basis < 4; ++basis) {
        auto in = qsim::new_zero_state(2);
        in.amplitudes[0] = {0.0, 0.0};
        in.amplitudes[basis] = {1.0, 0.0};
        const auto controlled =
            qsim::apply_gate(in, qsim::Cu3Gate{0, 1, theta, phi, lambda});
        if (basis & 2) {
            const auto u = qsim::u3_matrix(theta, phi, lambda);
            const std::size_t tbit = basis & 1;
            const std::size_t row0 = basis & ~std::size_t{1};
            if (std::abs(controlled.amplitudes[row0] - u[tbit]) > 1e-15) ok = false;
            if (std::abs(controlled.amplitudes[row0 | 1] - u[2 + tbit]) > 1e-15) ok = false;
        } else {
            if (controlled.amplitudes != in.amplitudes) ok = false;
        }
    }

    // CNOT equals CU3(pi, 0, pi) on amplitude magnitudes
    Rng mag_rng(10002);
    for (int trial = 0; trial < 50; ++trial) {
        auto in = qsim::new_zero_state(2);
        for (auto& a : in.amplitudes) a = {mag_rng.uniform(-1, 1), mag_rng.uniform(-1, 1)};
        const double norm = std::sqrt(in.norm_sq());
        for (auto& a : in.amplitudes) a /= norm;
        const auto via_cnot = qsim::apply_gate(in, qsim::CnotGate{0, 1});
        const auto via_cu3 = qsim::apply_gate(in, qsim::Cu3Gate{0, 1, kPi, 0.0, kPi});
        for (std::size_t i = 0; i < 4; ++i) {
            if (std::abs(std::abs(via_cnot.amplitudes[i]) -
                         std::abs(via_cu3.amplitudes[i])) > 1e-12) {
                ok = false;
            }
        }
    }

    const double secs = elapsed_s(start);
    if (secs >= 10.0) ok = false;
    report(1, ok,
           "quantum kernel: max norm drift " + fmt_sci(worst_norm) + ", max unitarity dev " +
               fmt_sci(worst_unitarity) + ", truth tables exact, " + fmt(secs, 2) + "s");
}

// ---- criterion 2: gradient correctness ----------------------------------------

void criterion_2() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;

    const auto ry_expectation = [](const std::vector<double>& p) {
        return qsim::expectation_z(
            qsim::apply_gate(qsim::new_zero_state(1), qsim::RyGate{0, p[0]}), 0);
    };
    const double theta = kPi / 3;
    const double exact = -std::sin(theta);
    const double sdq = train::grad_sdq(ry_expectation, {theta}, 0.01)[0];
    const double err_full = std::abs(sdq - exact);
    if (err_full >= 1e-4) ok = false;

    const double err_half =
        std::abs(train::grad_sdq(ry_expectation, {theta}, 0.005)[0] - exact);
    const double ratio = err_full / err_half;
    if (ratio < 3.2 || ratio > 4.8) ok = false;

    // shift-rule agreement on 20 random eligible circuits
    Rng rng(20202);
    double worst_gap = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int q = 1 + static_cast<int>(rng.uniform01() * 3.0);
        const int len = 1 + static_cast<int>(rng.uniform01() * 6.0);
        std::vector<int> wires;
        std::vector<bool> is_ry;
        for (int i = 0; i < len; ++i) {
            wires.push_back(static_cast<int>(rng.uniform01() * q));
            is_ry.push_back(rng.uniform01() < 0.5);
        }
        const int measure = static_cast<int>(rng.uniform01() * q);
        const auto observable = [&](const std::vector<double>& angles) {
            qsim::Circuit circuit;
            for (std::size_t i = 0; i < wires.size(); ++i) {
                if (is_ry[i]) {
                    circuit.push_back(qsim::RyGate{wires[i], angles[i]});
                } else {
                    circuit.push_back(qsim::RzGate{wires[i], angles[i]});
                }
            }
            return qsim::expectation_z(
                qsim::apply_circuit(qsim::new_zero_state(q), circuit), measure);
        };
        std::vector<double> angles(wires.size());
        for (double& a : angles) a = rng.uniform(-kPi, kPi);
        const auto approx = train::grad_sdq(observable, angles, 0.01);
        for (std::size_t c = 0; c < angles.size(); ++c) {
            const double shift = train::parameter_shift_grad(observable, angles, c);
            worst_gap = std::max(worst_gap, std::abs(approx[c] - shift));
        }
    }
    if (worst_gap >= 1e-4) ok = false;

    const double secs = elapsed_s(start);
    if (secs >= 10.0) ok = false;
    report(2, ok,
           "gradients: sdq error " + fmt_sci(err_full) + ", halving ratio " + fmt(ratio, 3) +
               ", shift-rule gap " + fmt_sci(worst_gap) + ", " + fmt(secs, 2) + "s");
}

// ---- criterion 3: encoding formula --------------------------------------------

void criterion_3() {
    bool ok = true;
    for (int d = 1; d <= 64; ++d) {
        for (int q = 1; q <= 10; ++q) {
            const auto plan = qpolicy::build_encoding_plan(d, q);
            const int expected = d / q + (d % q != 0 ? 1 : 0);
            if (plan.repetitions != expected) ok = false;
            int features = 0;
            for (const auto& chunk : plan.chunks) {
                for (int f : chunk) features += (f != qpolicy::kPad);
            }
            if (features != d) ok = false;
        }
    }
    report(3, ok, "encoding plan matches ceil(d/q) for all (d, q) in [1,64] x [1,10]");
}

// ---- criterion 4: observable bounds and determinism ----------------------------

void criterion_4() {
    bool ok = true;
    const harness::ConfigBundle bundle;
    const auto config = harness::make_qpolicy_config(bundle);
    Rng rng(40404);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto params = qpolicy::QPolicyParams::random(config, rng, kPi);
        std::vector<double> obs(static_cast<std::size_t>(config.obs_dim));
        for (double& x : obs) x = rng.uniform(-2.0, 14.0);
        const auto first = qpolicy::forward(config, params, obs);
        if (first.size() != 5) ok = false;
        for (double v : first) {
            worst = std::max(worst, std::abs(v));
            if (v < -1.0 - 1e-12 || v > 1.0 + 1e-12) ok = false;
        }
        const auto second = qpolicy::forward(config, params, obs);
        if (first != second) ok = false;
    }
    report(4, ok,
           "1000 random forwards within [-1,1]^5 (max |observable| " + fmt(worst, 6) +
               "), repeat evaluations bit-identical");
}

// ---- criterion 5: environment oracle equivalence -------------------------------

void criterion_5() {
    bool ok = true;
    const harness::ConfigBundle bundle;
    auto config = bundle.env;
    config.malfunction_schedule.clear();
    Rng rng(50505);
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        env::EnvState state;
        for (int m = 0; m < config.num_drones; ++m) {
            state.drone_positions.push_back(
                {rng.uniform(0, config.grid_width), rng.uniform(0, config.grid_height)});
            state.malfunctioned.push_back(rng.uniform01() < 0.2);
        }
        for (int u = 0; u < config.num_users; ++u) {
            state.user_positions.push_back(
                {rng.uniform(0, config.grid_width), rng.uniform(0, config.grid_height)});
        }
        const auto expected = oracles::brute_force_metrics(state, config);
        worst = std::max(worst,
                         std::abs(env::support_rate(state, config) - expected.support_rate));
        worst = std::max(worst, std::abs(env::qos(state, config) - expected.qos));
        const auto rewards = env::reward(state, config);
        for (std::size_t m = 0; m < rewards.size(); ++m) {
            worst = std::max(worst, std::abs(rewards[m] - expected.rewards[m]));
        }
    }
    if (worst > 1e-12) ok = false;

    auto support_only = config;
    support_only.w_support = 0.7;
    support_only.w_qos = 0.0;
    double worst_conservation = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        env::EnvState state;
        for (int m = 0; m < support_only.num_drones; ++m) {
            state.drone_positions.push_back({rng.uniform(0, 8), rng.uniform(0, 8)});
            state.malfunctioned.push_back(rng.uniform01() < 0.2);
        }
        for (int u = 0; u < support_only.num_users; ++u) {
            state.user_positions.push_back({rng.uniform(0, 8), rng.uniform(0, 8)});
        }
        double total = 0.0;
        for (double r : env::reward(state, support_only)) total += r;
        worst_conservation =
            std::max(worst_conservation,
                     std::abs(total - 0.7 * env::support_rate(state, support_only)));
    }
    if (worst_conservation > 1e-12) ok = false;

    report(5, ok,
           "environment matches brute force on 500 random states (max dev " +
               fmt_sci(worst) + "), reward conservation dev " + fmt_sci(worst_conservation));
}

// ---- criteria 6-10: desk-scale runs --------------------------------------------

int serving_of(const train::TrajectoryFrame& f, std::size_t u, double rho) {
    int best = -1;
    double best_d = rho;
    for (std::size_t m = 0; m < f.drone_positions.size(); ++m) {
        if (f.malfunctioned[m]) continue;
        const double d = std::hypot(f.user_positions[u][0] - f.drone_positions[m][0],
                                    f.user_positions[u][1] - f.drone_positions[m][1]);
        if (d < best_d || (d == best_d && best < 0)) {
            best_d = d;
            best = static_cast<int>(m);
        }
    }
    return best;
}

void criteria_6_to_10(const fs::path& runs_root) {
    const harness::ConfigBundle bundle;  // desk-scale defaults
    constexpr int kSeeds = 5;
    constexpr int kEvalEpisodes = 10;

    // criterion 6: learning trend against the random-action baseline
    double random_pooled = 0.0;
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
        const auto artifacts =
            harness::run(harness::make_random_baseline(bundle),
                         harness::PolicyKind::kQuantum, seed,
                         "random-seed" + std::to_string(seed), runs_root);
        random_pooled += artifacts.summary.reward.mean / kSeeds;
    }

    std::vector<std::string> quantum_ids;
    std::vector<double> quantum_means;
    double max_seed_seconds = 0.0;
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
        const auto start = std::chrono::steady_clock::now();
        const std::string id = "quantum-seed" + std::to_string(seed);
        const auto artifacts =
            harness::run(bundle, harness::PolicyKind::kQuantum, seed, id, runs_root);
        max_seed_seconds = std::max(max_seed_seconds, elapsed_s(start));
        quantum_ids.push_back(id);
        quantum_means.push_back(artifacts.summary.reward.mean);
    }
    const double bar = 1.3 * random_pooled;
    int above = 0;
    std::string means_text;
    for (double mean : quantum_means) {
        above += (mean >= bar);
        means_text += fmt(mean, 2) + " ";
    }
    report(6, above >= 4,
           "learning trend: final-20 means [ " + means_text + "] vs bar " + fmt(bar, 2) +
               " (1.3 x random " + fmt(random_pooled, 2) + "): " + std::to_string(above) +
               "/5 seeds above; slowest seed " + fmt(max_seed_seconds, 1) + "s");

    // criterion 7: parameter budget
    const std::size_t quantum_params =
        qpolicy::param_count(harness::make_qpolicy_config(bundle));
    const std::size_t classical_params =
        baseline::mlp_param_count(harness::make_mlp_config(bundle));
    const std::size_t quantum_flat =
        qpolicy::QPolicyParams::zeros(harness::make_qpolicy_config(bundle)).flatten().size();
    Rng init_rng(7);
    const std::size_t classical_flat =
        baseline::mlp_init(harness::make_mlp_config(bundle), init_rng).size();
    const double budget_ratio =
        static_cast<double>(quantum_params) / static_cast<double>(classical_params);
    const bool pass7 = budget_ratio < 0.10 && quantum_flat == quantum_params &&
                       classical_flat == classical_params;
    report(7, pass7,
           "parameter budget: quantum " + std::to_string(quantum_params) + " vs classical " +
               std::to_string(classical_params) + ", ratio " + fmt(budget_ratio, 4) +
               " < 0.10, flattened lengths agree");

    // criterion 8: stability report over quantum and classical runs
    std::vector<std::string> all_ids = quantum_ids;
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
        const std::string id = "classical-seed" + std::to_string(seed);
        harness::run(bundle, harness::PolicyKind::kClassical, seed, id, runs_root);
        all_ids.push_back(id);
    }
    const auto comparison = harness::compare(all_ids, runs_root);
    bool pass8 = comparison.columns.size() == 2 * kSeeds;
    double quantum_std_mean = 0.0, classical_std_mean = 0.0;
    for (int i = 0; i < kSeeds; ++i) {
        quantum_std_mean +=
            comparison.columns[static_cast<std::size_t>(i)].reward.stddev / kSeeds;
        classical_std_mean +=
            comparison.columns[static_cast<std::size_t>(kSeeds + i)].reward.stddev / kSeeds;
    }
    if (comparison.table.find("+-") == std::string::npos) pass8 = false;
    std::printf("%s", comparison.table.c_str());
    report(8, pass8,
           "stability report emitted: mean final-window reward std, quantum " +
               fmt(quantum_std_mean, 3) + " vs classical " + fmt(classical_std_mean, 3) +
               " (reported, not gated)");

    // criterion 9: malfunction response in greedy evaluation
    int responding_seeds = 0;
    std::string response_text;
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
        const auto eval = harness::evaluate("quantum-seed" + std::to_string(seed),
                                            kEvalEpisodes, runs_root);
        double sum20 = 0.0, sum40 = 0.0;
        int used = 0;
        for (int ep = 0; ep < kEvalEpisodes; ++ep) {
            const train::TrajectoryFrame *pre = nullptr, *at20 = nullptr, *at40 = nullptr;
            for (const auto& frame : eval.result.trajectories) {
                if (frame.episode != ep) continue;
                if (frame.timestep == 19) pre = &frame;
                if (frame.timestep == 20) at20 = &frame;
                if (frame.timestep == 40) at40 = &frame;
            }
            if (pre == nullptr || at20 == nullptr || at40 == nullptr) continue;
            double cx = 0.0, cy = 0.0;
            int count = 0;
            for (std::size_t u = 0; u < pre->user_positions.size(); ++u) {
                if (serving_of(*pre, u, bundle.env.coverage_radius) == 1) {
                    cx += pre->user_positions[u][0];
                    cy += pre->user_positions[u][1];
                    ++count;
                }
            }
            if (count == 0) {
                // the failed drone served nobody; fall back to its position
                cx = pre->drone_positions[1][0];
                cy = pre->drone_positions[1][1];
            } else {
                cx /= count;
                cy /= count;
            }
            sum20 += std::hypot(at20->drone_positions[0][0] - cx,
                                at20->drone_positions[0][1] - cy);
            sum40 += std::hypot(at40->drone_positions[0][0] - cx,
                                at40->drone_positions[0][1] - cy);
            ++used;
        }
        const bool responded = used > 0 && sum40 / used < sum20 / used;
        responding_seeds += responded;
        response_text += "s" + std::to_string(seed) + ":" + fmt(sum20 / used, 2) + "->" +
                         fmt(sum40 / used, 2) + (responded ? "(v) " : "(x) ");
    }
    report(9, responding_seeds >= 4,
           "malfunction response: mean centroid distance t=20 -> t=40 per seed [ " +
               response_text + "]: " + std::to_string(responding_seeds) +
               "/5 seeds strictly decreased (needs 4)");

    // criterion 10: end-to-end determinism
    const auto rerun = harness::run(bundle, harness::PolicyKind::kQuantum, 1,
                                    "quantum-seed1-repeat", runs_root);
    const std::string first =
        harness::read_text_file(harness::run_paths(runs_root, "quantum-seed1").metrics());
    const std::string second = harness::read_text_file(rerun.paths.metrics());
    report(10, first == second,
           "determinism: repeated run with identical config and seed produced "
           "byte-identical metrics (" +
               std::to_string(first.size()) + " bytes)");
}

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    const fs::path runs_root = "acceptance_runs";
    fs::remove_all(runs_root);

    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criteria_6_to_10(runs_root);

    std::printf("acceptance: %d/10 criteria passed in %.1fs\n", 10 - g_failures,
                elapsed_s(start));
    return g_failures == 0 ? 0 : 1;
}
