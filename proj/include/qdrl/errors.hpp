#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdrl {

// Configuration rejected by validation (bad values, malformed config files,
// unknown keys).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A non-finite value surfaced during gradient estimation. Carries the index
// of the parameter component whose probe produced it.
struct NumericalError : std::runtime_error {
    NumericalError(const std::string& what, std::size_t component_index)
        : std::runtime_error(what + " (component " + std::to_string(component_index) + ")"),
          component(component_index) {}

    std::size_t component;
};

// The two-term parameter-shift rule was asked for a component it is not
// exact for.
struct UnsupportedComponentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// step() called on an episode that already reached its horizon.
struct EpisodeFinishedError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace qdrl
