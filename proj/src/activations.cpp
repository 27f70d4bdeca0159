#include "ntklens/activations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ntklens {
namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }
double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

} // namespace

Activation activation_from_name(const std::string &name) {
    if (name == "relu") return Activation::Relu;
    if (name == "identity") return Activation::Identity;
    if (name == "tanh") return Activation::Tanh;
    if (name == "gelu") return Activation::Gelu;
    if (name == "silu") return Activation::Silu;
    if (name == "step") return Activation::Step;
    throw std::invalid_argument("unknown activation: " + name);
}

std::string activation_name(Activation a) {
    switch (a) {
    case Activation::Relu: return "relu";
    case Activation::Identity: return "identity";
    case Activation::Tanh: return "tanh";
    case Activation::Gelu: return "gelu";
    case Activation::Silu: return "silu";
    case Activation::Step: return "step";
    }
    throw std::invalid_argument("bad activation enum");
}

double activate(Activation a, double x) {
    switch (a) {
    case Activation::Relu: return x > 0.0 ? x : 0.0;
    case Activation::Identity: return x;
    case Activation::Tanh: return std::tanh(x);
    case Activation::Gelu: return x * std_normal_cdf(x);
    case Activation::Silu: return x * sigmoid(x);
    case Activation::Step: return x > 0.0 ? 1.0 : 0.0;
    }
    throw std::invalid_argument("bad activation enum");
}

double activate_deriv(Activation a, double x) {
    switch (a) {
    case Activation::Relu: return x > 0.0 ? 1.0 : 0.0;
    case Activation::Identity: return 1.0;
    case Activation::Tanh: {
        const double t = std::tanh(x);
        return 1.0 - t * t;
    }
    case Activation::Gelu: return std_normal_cdf(x) + x * std_normal_pdf(x);
    case Activation::Silu: {
        const double s = sigmoid(x);
        return s * (1.0 + x * (1.0 - s));
    }
    case Activation::Step: throw std::invalid_argument("step has no derivative");
    }
    throw std::invalid_argument("bad activation enum");
}

void activate_inplace(Activation a, std::span<double> x) {
    for (auto &v : x) v = activate(a, v);
}

std::vector<double> activate_deriv_vec(Activation a, std::span<const double> x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = activate_deriv(a, x[i]);
    return out;
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double softplus(double x) {
    if (x > 30.0) return x;
    if (x < -30.0) return std::exp(x);
    return std::log1p(std::exp(x));
}

std::vector<double> softmax(std::span<const double> z) {
    if (z.empty()) throw std::invalid_argument("softmax: empty input");
    const double zmax = *std::max_element(z.begin(), z.end());
    std::vector<double> out(z.size());
    double total = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        out[i] = std::exp(z[i] - zmax);
        total += out[i];
    }
    for (auto &v : out) v /= total;
    return out;
}

} // namespace ntklens
