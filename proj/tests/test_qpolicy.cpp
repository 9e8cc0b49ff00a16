#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qdrl/qpolicy/action_select.hpp"
#include "qdrl/qpolicy/policy.hpp"
#include "qdrl/rng.hpp"

using namespace qdrl;

namespace {

constexpr double kPi = 3.14159265358979323846;

qpolicy::QPolicyConfig make_config(int obs_dim, int num_qubits = 5, int blocks = 1,
                                   int layers = 1) {
    qpolicy::QPolicyConfig config;
    config.num_qubits = num_qubits;
    config.obs_dim = obs_dim;
    config.num_blocks = blocks;
    config.layers_per_block = layers;
    config.feature_bounds.assign(static_cast<std::size_t>(obs_dim), {-1.0, 1.0});
    config.value_scale = 10.0;
    return config;
}

}  // namespace

TEST_CASE("encoding plan splits features into ceil(d/q) chunks") {
    const auto plan = qpolicy::build_encoding_plan(16, 5);
    REQUIRE(plan.repetitions == 4);
    REQUIRE(plan.chunks.size() == 4);
    REQUIRE(plan.chunks[0] == std::vector<int>{0, 1, 2, 3, 4});
    REQUIRE(plan.chunks[3] == std::vector<int>{15, qpolicy::kPad, qpolicy::kPad,
                                               qpolicy::kPad, qpolicy::kPad});

    const auto exact = qpolicy::build_encoding_plan(5, 5);
    REQUIRE(exact.repetitions == 1);
    REQUIRE(exact.chunks[0] == std::vector<int>{0, 1, 2, 3, 4});

    const auto single = qpolicy::build_encoding_plan(1, 5);
    REQUIRE(single.repetitions == 1);
    REQUIRE(single.chunks[0] == std::vector<int>{0, qpolicy::kPad, qpolicy::kPad,
                                                 qpolicy::kPad, qpolicy::kPad});

    REQUIRE_THROWS_AS(qpolicy::build_encoding_plan(0, 5), std::invalid_argument);
    REQUIRE_THROWS_AS(qpolicy::build_encoding_plan(4, 0), std::invalid_argument);
}

TEST_CASE("encoding plan repetition count matches integer ceiling everywhere") {
    for (int d = 1; d <= 64; ++d) {
        for (int q = 1; q <= 10; ++q) {
            const auto plan = qpolicy::build_encoding_plan(d, q);
            const int expected = d / q + (d % q != 0 ? 1 : 0);
            REQUIRE(plan.repetitions == expected);
            // every feature exactly once, padding only in the last chunk
            std::vector<int> seen;
            for (const auto& chunk : plan.chunks) {
                REQUIRE(chunk.size() == static_cast<std::size_t>(q));
                for (int f : chunk) {
                    if (f != qpolicy::kPad) seen.push_back(f);
                }
            }
            REQUIRE(seen.size() == static_cast<std::size_t>(d));
            for (int f = 0; f < d; ++f) REQUIRE(seen[static_cast<std::size_t>(f)] == f);
        }
    }
}

TEST_CASE("scale_features maps bounds onto [-pi, pi] with clamping") {
    const std::vector<qpolicy::FeatureBound> bounds = {{0.0, 10.0}, {-4.0, 4.0}};

    const auto mid = qpolicy::scale_features({5.0, 0.0}, bounds);
    REQUIRE(std::abs(mid[0]) < 1e-15);
    REQUIRE(std::abs(mid[1]) < 1e-15);

    const auto edges = qpolicy::scale_features({10.0, -4.0}, bounds);
    REQUIRE(edges[0] == Catch::Approx(kPi));
    REQUIRE(edges[1] == Catch::Approx(-kPi));

    const auto derived = qpolicy::scale_features({7.5, 999.0}, bounds);
    REQUIRE(derived[0] == Catch::Approx(kPi / 2));
    REQUIRE(derived[1] == Catch::Approx(kPi));  // clamped to max

    REQUIRE_THROWS_AS(qpolicy::scale_features({1.0}, bounds), std::invalid_argument);
    REQUIRE_THROWS_AS(qpolicy::scale_features({1.0, 1.0}, {{0.0, 10.0}, {2.0, 2.0}}),
                      ConfigError);
}

TEST_CASE("policy circuit has the expected gate count") {
    SECTION("d=5, q=5, B=1, L=1") {
        const auto config = make_config(5);
        const auto params = qpolicy::QPolicyParams::zeros(config);
        const auto circuit =
            qpolicy::build_policy_circuit(config, params, std::vector<double>(5, 0.0));
        REQUIRE(circuit.size() == 15);
    }
    SECTION("d=16, q=5, B=2, L=1") {
        const auto config = make_config(16, 5, 2, 1);
        const auto params = qpolicy::QPolicyParams::zeros(config);
        const auto circuit =
            qpolicy::build_policy_circuit(config, params, std::vector<double>(16, 0.0));
        REQUIRE(circuit.size() == 50);
    }
    SECTION("observation length is checked") {
        const auto config = make_config(5);
        const auto params = qpolicy::QPolicyParams::zeros(config);
        REQUIRE_THROWS_AS(
            qpolicy::build_policy_circuit(config, params, std::vector<double>(4, 0.0)),
            std::invalid_argument);
    }
}

TEST_CASE("policy circuit gate sequence is data, encoder, then entangler rings") {
    const auto config = make_config(5, 5, 2, 1);
    const auto params = qpolicy::QPolicyParams::zeros(config);
    const auto circuit =
        qpolicy::build_policy_circuit(config, params, std::vector<double>(5, 0.0));
    REQUIRE(circuit.size() == 20);
    for (int w = 0; w < 5; ++w) {
        const auto* ry = std::get_if<qsim::RyGate>(&circuit[static_cast<std::size_t>(w)]);
        REQUIRE(ry != nullptr);
        REQUIRE(ry->wire == w);
        const auto* rz = std::get_if<qsim::RzGate>(&circuit[static_cast<std::size_t>(5 + w)]);
        REQUIRE(rz != nullptr);
        REQUIRE(rz->wire == w);
    }
    // two rings of CU3(w -> (w+1) mod 5), ascending control wire within each
    for (int ring = 0; ring < 2; ++ring) {
        for (int w = 0; w < 5; ++w) {
            const auto* cu3 = std::get_if<qsim::Cu3Gate>(
                &circuit[static_cast<std::size_t>(10 + 5 * ring + w)]);
            REQUIRE(cu3 != nullptr);
            REQUIRE(cu3->control == w);
            REQUIRE(cu3->target == (w + 1) % 5);
        }
    }
}

TEST_CASE("all-zero angles leave the register in |0...0>") {
    const auto config = make_config(5);
    const auto params = qpolicy::QPolicyParams::zeros(config);
    // midpoint of (-1, 1) is 0, which scales to angle 0
    const auto obs = std::vector<double>(5, 0.0);
    const auto state = qsim::apply_circuit(
        qsim::new_zero_state(5), qpolicy::build_policy_circuit(config, params, obs));
    REQUIRE(std::abs(state.amplitudes[0] - qsim::Complex{1.0, 0.0}) < 1e-12);
    REQUIRE(qpolicy::forward(config, params, obs) ==
            std::vector<double>{1.0, 1.0, 1.0, 1.0, 1.0});
}

TEST_CASE("forward stays within [-1, 1] and is deterministic") {
    Rng rng(555);
    const auto config = make_config(12, 5, 2, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const auto params = qpolicy::QPolicyParams::random(config, rng, kPi);
        std::vector<double> obs(12);
        for (double& x : obs) x = rng.uniform(-1.5, 1.5);
        const auto first = qpolicy::forward(config, params, obs);
        REQUIRE(first.size() == 5);
        for (double v : first) {
            REQUIRE(v >= -1.0 - 1e-12);
            REQUIRE(v <= 1.0 + 1e-12);
        }
        const auto second = qpolicy::forward(config, params, obs);
        REQUIRE(first == second);  // bit-identical
    }
}

TEST_CASE("single-qubit policy with inert block reproduces cos(x)") {
    qpolicy::QPolicyConfig config;
    config.num_qubits = 1;
    config.obs_dim = 1;
    config.num_blocks = 1;
    config.layers_per_block = 1;
    config.feature_bounds = {{-kPi, kPi}};
    config.value_scale = 1.0;
    config.validate(1);
    const auto params = qpolicy::QPolicyParams::zeros(config);
    for (double x : {0.0, 0.4, -1.1, 2.7}) {
        const auto out = qpolicy::forward(config, params, {x});
        REQUIRE(out.size() == 1);
        REQUIRE(out[0] == Catch::Approx(std::cos(x)).margin(1e-12));
    }
}

TEST_CASE("q_values scale observables and preserve the argmax") {
    Rng rng(321);
    const auto config = make_config(12, 5, 2, 1);
    const auto params = qpolicy::QPolicyParams::random(config, rng, kPi);
    std::vector<double> obs(12);
    for (double& x : obs) x = rng.uniform(-1.0, 1.0);

    const auto observables = qpolicy::forward(config, params, obs);
    const auto values = qpolicy::q_values(config, params, obs);
    for (std::size_t i = 0; i < values.size(); ++i) {
        REQUIRE(values[i] == Catch::Approx(10.0 * observables[i]).margin(1e-12));
    }

    const auto argmax = [](const std::vector<double>& v) {
        return std::max_element(v.begin(), v.end()) - v.begin();
    };
    for (double beta : {0.1, 1.0, 10.0, 12345.0}) {
        auto scaled = config;
        scaled.value_scale = beta;
        REQUIRE(argmax(qpolicy::q_values(scaled, params, obs)) == argmax(observables));
    }
}

TEST_CASE("zero-angle case yields uniform q-values at the scale") {
    const auto config = make_config(5);
    const auto params = qpolicy::QPolicyParams::zeros(config);
    const auto values = qpolicy::q_values(config, params, std::vector<double>(5, 0.0));
    REQUIRE(values == std::vector<double>{10.0, 10.0, 10.0, 10.0, 10.0});
}

TEST_CASE("param_count matches the flattened length") {
    const auto config_a = make_config(16, 5, 2, 1);
    REQUIRE(qpolicy::param_count(config_a) == 50);
    REQUIRE(qpolicy::QPolicyParams::zeros(config_a).flatten().size() == 50);

    const auto config_b = make_config(5, 5, 1, 1);
    REQUIRE(qpolicy::param_count(config_b) == 20);
    REQUIRE(qpolicy::QPolicyParams::zeros(config_b).flatten().size() == 20);

    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + static_cast<int>(rng.uniform01() * 30.0);
        const int b = 1 + static_cast<int>(rng.uniform01() * 3.0);
        const int l = 1 + static_cast<int>(rng.uniform01() * 3.0);
        const auto config = make_config(d, 5, b, l);
        REQUIRE(qpolicy::QPolicyParams::random(config, rng, 1.0).flatten().size() ==
                qpolicy::param_count(config));
    }
}

TEST_CASE("flatten and unflatten round-trip exactly") {
    Rng rng(8080);
    const auto config = make_config(12, 5, 2, 1);
    const auto params = qpolicy::QPolicyParams::random(config, rng, kPi);
    const auto flat = params.flatten();
    const auto back = qpolicy::QPolicyParams::unflatten(config, flat);
    REQUIRE(back.flatten() == flat);
    REQUIRE(back.encoder_angles == params.encoder_angles);
    REQUIRE(back.block_angles == params.block_angles);

    REQUIRE_THROWS_AS(qpolicy::QPolicyParams::unflatten(config, std::vector<double>(3, 0.0)),
                      std::invalid_argument);
}

TEST_CASE("action_distribution is a softmax with max-subtraction") {
    SECTION("equal observables give the uniform distribution") {
        const auto dist = qpolicy::action_distribution({0.2, 0.2, 0.2, 0.2}, 1.0);
        for (double p : dist) REQUIRE(p == Catch::Approx(0.25).margin(1e-12));
    }
    SECTION("closed-form two-class case") {
        const auto dist = qpolicy::action_distribution({1.0, -1.0}, 1.0);
        REQUIRE(dist[0] == Catch::Approx(0.880797).margin(1e-5));
        REQUIRE(dist[1] == Catch::Approx(0.119203).margin(1e-5));
    }
    SECTION("huge temperature flattens the distribution") {
        const auto dist = qpolicy::action_distribution({1.0, -1.0, 0.5}, 1e6);
        for (double p : dist) REQUIRE(p == Catch::Approx(1.0 / 3.0).margin(1e-4));
    }
    SECTION("extreme observables do not overflow") {
        const auto dist = qpolicy::action_distribution({1000.0, -1000.0}, 1.0);
        REQUIRE(std::isfinite(dist[0]));
        REQUIRE(dist[0] == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("normalization holds for random inputs") {
        Rng rng(5150);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> obs(5);
            for (double& v : obs) v = rng.uniform(-1.0, 1.0);
            const auto dist =
                qpolicy::action_distribution(obs, rng.uniform_open(0.01, 5.0));
            double sum = 0.0;
            for (double p : dist) {
                REQUIRE(p >= 0.0);
                sum += p;
            }
            REQUIRE(std::abs(sum - 1.0) < 1e-12);
        }
    }
    SECTION("temperature must be positive") {
        REQUIRE_THROWS_AS(qpolicy::action_distribution({1.0}, 0.0), std::invalid_argument);
        REQUIRE_THROWS_AS(qpolicy::action_distribution({1.0}, -2.0), std::invalid_argument);
    }
}

TEST_CASE("select_action greedy and sampling modes") {
    Rng rng(12);
    REQUIRE(qpolicy::select_action({0.1, 0.7, 0.2}, qpolicy::SelectMode::kGreedy, rng) == 1);
    REQUIRE(qpolicy::select_action({0.25, 0.25, 0.25, 0.25}, qpolicy::SelectMode::kGreedy,
                                   rng) == 0);  // tie-break lowest index
    for (int i = 0; i < 50; ++i) {
        REQUIRE(qpolicy::select_action({0.0, 1.0, 0.0}, qpolicy::SelectMode::kSample, rng) ==
                1);
    }
    REQUIRE_THROWS_AS(qpolicy::select_action({}, qpolicy::SelectMode::kGreedy, rng),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(qpolicy::select_action({0.5, 0.6}, qpolicy::SelectMode::kSample, rng),
                      std::invalid_argument);
}

TEST_CASE("sampled actions follow the distribution") {
    Rng rng(999);
    const std::vector<double> dist = {0.5, 0.3, 0.2};
    std::vector<int> counts(3, 0);
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) {
        counts[static_cast<std::size_t>(
            qpolicy::select_action(dist, qpolicy::SelectMode::kSample, rng))]++;
    }
    for (std::size_t a = 0; a < 3; ++a) {
        REQUIRE(static_cast<double>(counts[a]) / draws ==
                Catch::Approx(dist[a]).margin(0.02));
    }
}

TEST_CASE("padding slots always upload a zero angle") {
    // d=6 on q=5 wires: the second repetition carries feature 5 on wire 0
    // and padding on wires 1..4.
    const auto config = make_config(6, 5, 1, 1);
    const auto params = qpolicy::QPolicyParams::zeros(config);
    std::vector<double> obs(6, 0.0);
    obs[5] = 0.9;  // only the second chunk's real feature is nonzero
    const auto circuit = qpolicy::build_policy_circuit(config, params, obs);
    // gates: rep0 (5 RY + 5 RZ), rep1 (5 RY + 5 RZ), block (5 CU3)
    REQUIRE(circuit.size() == 25);
    for (int w = 1; w < 5; ++w) {
        const auto& gate = circuit[static_cast<std::size_t>(10 + w)];
        const auto* ry = std::get_if<qsim::RyGate>(&gate);
        REQUIRE(ry != nullptr);
        REQUIRE(ry->wire == w);
        REQUIRE(ry->theta == 0.0);
    }
}
