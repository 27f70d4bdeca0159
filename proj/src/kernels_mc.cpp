#include "ntklens/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace ntklens {
namespace {

double apply_mc_fn(McKind kind, bool second, double x) {
    (void)second;
    switch (kind) {
    case McKind::ReluRelu: return x > 0.0 ? x : 0.0;
    case McKind::StepStep:
    case McKind::StepSq: return x > 0.0 ? 1.0 : 0.0;
    case McKind::TanhTanh: return std::tanh(x);
    case McKind::TanhSq: {
        const double t = std::tanh(x);
        return 1.0 - t * t;
    }
    }
    throw std::invalid_argument("bad mc kind");
}

} // namespace

McEstimate mc_expectation(McKind kind, int shared, int total, double s2, std::size_t samples,
                          RngStream rng) {
    if (total < 1 || shared < 0 || shared > total)
        throw std::invalid_argument("mc_expectation: need 0 <= shared <= total, total >= 1");
    if (s2 <= 0.0) throw std::invalid_argument("mc_expectation: s2 must be positive");
    if (samples < 2) throw std::invalid_argument("mc_expectation: need at least two samples");
    if (kind == McKind::StepSq && shared != total)
        throw std::invalid_argument("mc_expectation: StepSq is the shared == total anchor");

    const double sigma = std::sqrt(s2);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        double u = 0.0;
        double shared_part = 0.0;
        for (int k = 0; k < total; ++k) {
            const double w = sigma * rng.next_gaussian();
            u += w;
            if (k < shared) shared_part += w;
        }
        double v = shared_part;
        for (int k = shared; k < total; ++k) v += sigma * rng.next_gaussian();
        const double g = apply_mc_fn(kind, false, u) * apply_mc_fn(kind, true, v);
        sum += g;
        sum_sq += g * g;
    }
    McEstimate est;
    est.samples = samples;
    est.mean = sum / static_cast<double>(samples);
    const double var =
        (sum_sq / static_cast<double>(samples) - est.mean * est.mean) *
        static_cast<double>(samples) / static_cast<double>(samples - 1);
    est.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
    return est;
}

} // namespace ntklens
