#include "ntklens/ode.hpp"

#include "ntklens/matrix.hpp"

namespace ntklens {

OdeMethod ode_method_from_name(const std::string &name) {
    if (name == "euler") return OdeMethod::Euler;
    if (name == "rk4") return OdeMethod::Rk4;
    throw std::invalid_argument("unknown ode method: " + name);
}

namespace {

std::vector<double> eval_drift(const DriftFn &f, const std::vector<double> &y) {
    std::vector<double> d = f(y);
    if (d.size() != y.size()) throw NumericError("drift returned wrong dimension");
    if (!all_finite(d)) throw NumericError("drift returned non-finite values");
    return d;
}

} // namespace

void ode_step(const DriftFn &f, std::vector<double> &state, double dt, OdeMethod method) {
    const std::size_t n = state.size();
    if (method == OdeMethod::Euler) {
        const std::vector<double> k1 = eval_drift(f, state);
        for (std::size_t i = 0; i < n; ++i) state[i] += dt * k1[i];
        return;
    }
    // Classic RK4.
    const std::vector<double> k1 = eval_drift(f, state);
    std::vector<double> tmp(n);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * dt * k1[i];
    const std::vector<double> k2 = eval_drift(f, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * dt * k2[i];
    const std::vector<double> k3 = eval_drift(f, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = state[i] + dt * k3[i];
    const std::vector<double> k4 = eval_drift(f, tmp);
    for (std::size_t i = 0; i < n; ++i)
        state[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

} // namespace ntklens
