#pragma once

#include <span>
#include <string>
#include <vector>

namespace ntklens {

enum class Activation { Relu, Identity, Tanh, Gelu, Silu, Step };

Activation activation_from_name(const std::string &name); // throws std::invalid_argument
std::string activation_name(Activation a);

double activate(Activation a, double x);
double activate_deriv(Activation a, double x); // Step has no derivative -> throws

void activate_inplace(Activation a, std::span<double> x);
std::vector<double> activate_deriv_vec(Activation a, std::span<const double> x);

// Logistic sigmoid and friends, numerically stable.
double sigmoid(double x);
double softplus(double x);                       // log(1 + e^x)
std::vector<double> softmax(std::span<const double> z);

} // namespace ntklens
