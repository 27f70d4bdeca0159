#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ntklens {

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string &what) : std::runtime_error(what) {}
};

enum class OdeMethod { Euler, Rk4 };

OdeMethod ode_method_from_name(const std::string &name);

using DriftFn = std::function<std::vector<double>(const std::vector<double> &)>;

// One fixed-step update of y' = f(y), in place. Throws NumericError if any
// stage produces a non-finite derivative.
void ode_step(const DriftFn &f, std::vector<double> &state, double dt, OdeMethod method);

} // namespace ntklens
