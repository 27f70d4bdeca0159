#include "ntklens/kernels.hpp"

#include <array>
#include <stdexcept>

namespace ntklens {
namespace {

constexpr std::array<double, 1> kUnitWeight{1.0};

void require_single_head(const Model &model) {
    if (model.heads() != 1)
        throw std::invalid_argument("empirical ntk is defined for single-head models");
}

} // namespace

double empirical_ntk(const Model &model, const TrackedUnit &unit, const Instance &x) {
    require_single_head(model);
    const FlatGradient gu = model.unit_score_gradient(unit, kUnitWeight);
    const FlatGradient gx = model.score_gradient(x, kUnitWeight);
    return gu.dot(gx);
}

double empirical_ntk(const Model &model, const Instance &a, const Instance &b) {
    require_single_head(model);
    const FlatGradient ga = model.score_gradient(a, kUnitWeight);
    const FlatGradient gb = model.score_gradient(b, kUnitWeight);
    return ga.dot(gb);
}

} // namespace ntklens
