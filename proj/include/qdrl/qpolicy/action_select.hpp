#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdrl/rng.hpp"

namespace qdrl::qpolicy {

// softmax(observables / temperature), computed with max-subtraction.
inline std::vector<double> action_distribution(const std::vector<double>& observables,
                                               double temperature) {
    if (!(temperature > 0.0)) {
        throw std::invalid_argument("action_distribution: temperature must be > 0");
    }
    if (observables.empty()) {
        throw std::invalid_argument("action_distribution: empty observable vector");
    }
    const double top = *std::max_element(observables.begin(), observables.end());
    std::vector<double> probs(observables.size());
    double z = 0.0;
    for (std::size_t i = 0; i < observables.size(); ++i) {
        probs[i] = std::exp((observables[i] - top) / temperature);
        z += probs[i];
    }
    for (double& p : probs) p /= z;
    return probs;
}

enum class SelectMode { kGreedy, kSample };

// Greedy: lowest index attaining the maximum probability. Sample: inverse
// CDF draw from the provided generator.
inline int select_action(const std::vector<double>& distribution, SelectMode mode, Rng& rng) {
    if (distribution.empty()) {
        throw std::invalid_argument("select_action: empty distribution");
    }
    double sum = 0.0;
    for (double p : distribution) sum += p;
    if (std::abs(sum - 1.0) > 1e-6) {
        throw std::invalid_argument("select_action: distribution sums to " +
                                    std::to_string(sum));
    }
    if (mode == SelectMode::kGreedy) {
        int best = 0;
        for (std::size_t i = 1; i < distribution.size(); ++i) {
            if (distribution[i] > distribution[static_cast<std::size_t>(best)]) {
                best = static_cast<int>(i);
            }
        }
        return best;
    }
    const double u = rng.uniform01();
    double acc = 0.0;
    int last_positive = 0;
    for (std::size_t i = 0; i < distribution.size(); ++i) {
        if (distribution[i] > 0.0) last_positive = static_cast<int>(i);
        acc += distribution[i];
        if (u < acc) return static_cast<int>(i);
    }
    // u landed past the accumulated mass (rounding); take the last live slot.
    return last_positive;
}

}  // namespace qdrl::qpolicy
