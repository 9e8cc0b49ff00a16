#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qdrl/errors.hpp"

namespace qdrl::train {

// Central-difference gradient of a scalar loss: component i is
// (f(p + eps*e_i) - f(p - eps*e_i)) / (2 eps). Exactly two loss evaluations
// per component; the input vector is left untouched.
template <typename LossFn>
std::vector<double> grad_sdq(const LossFn& loss_fn, const std::vector<double>& params,
                             double epsilon) {
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("grad_sdq: epsilon must be > 0");
    }
    std::vector<double> gradient(params.size());
    std::vector<double> probe = params;
    for (std::size_t i = 0; i < params.size(); ++i) {
        probe[i] = params[i] + epsilon;
        const double up = loss_fn(probe);
        probe[i] = params[i] - epsilon;
        const double down = loss_fn(probe);
        probe[i] = params[i];
        if (!std::isfinite(up) || !std::isfinite(down)) {
            throw NumericalError("grad_sdq: non-finite loss", i);
        }
        gradient[i] = (up - down) / (2.0 * epsilon);
    }
    return gradient;
}

inline constexpr std::size_t kAllComponents = std::numeric_limits<std::size_t>::max();

// Exact derivative of an observable with respect to one single-qubit
// rotation angle: (f(p + pi/2) - f(p - pi/2)) / 2. Components at or beyond
// num_shift_exact (e.g. CU3 angles, whose generators do not have +-1/2
// eigenvalues) are rejected.
template <typename ObservableFn>
double parameter_shift_grad(const ObservableFn& observable_fn,
                            const std::vector<double>& params, std::size_t component,
                            std::size_t num_shift_exact = kAllComponents) {
    if (component >= params.size()) {
        throw std::invalid_argument("parameter_shift_grad: component out of range");
    }
    if (component >= num_shift_exact) {
        throw UnsupportedComponentError(
            "parameter_shift_grad: the two-term rule is not exact for component " +
            std::to_string(component));
    }
    constexpr double kHalfPi = 1.57079632679489661923;
    std::vector<double> probe = params;
    probe[component] = params[component] + kHalfPi;
    const double up = observable_fn(probe);
    probe[component] = params[component] - kHalfPi;
    const double down = observable_fn(probe);
    return (up - down) / 2.0;
}

inline std::vector<double> sgd_step(std::vector<double> params,
                                    const std::vector<double>& gradient,
                                    double learning_rate) {
    if (params.size() != gradient.size()) {
        throw std::invalid_argument("sgd_step: params and gradient lengths differ");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        params[i] -= learning_rate * gradient[i];
    }
    return params;
}

}  // namespace qdrl::train
