#include "model_kinds.hpp"

#include <cmath>

namespace ntklens::detail {
namespace {

// Shared forward/backward over one window of kernel_size token slots
// (entries may be pad, which embeds to zero and receives no gradient).
// Adds (1/sqrt(d)) phi(c) to feat for c = sum_k W^c_k (1/sqrt(d)) W^e e_k.
void cnn_accumulate_window(const Model &m, std::span<const int> window, MaybeVw vw,
                           FlatGradient *grad, std::vector<double> &feat) {
    const auto d = static_cast<std::size_t>(m.width());
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    const double inv_d = 1.0 / static_cast<double>(d);
    const Activation act = m.config().activation;

    std::vector<double> c(d, 0.0);
    for (std::size_t k = 0; k < window.size(); ++k) {
        if (window[k] == Vocab::kPadId) continue;
        const std::vector<double> u = scaled_embedding(m, window[k]);
        const std::vector<double> part = matvec(m.conv[k], u);
        axpy(c, part, 1.0);
    }
    for (std::size_t r = 0; r < d; ++r) feat[r] += inv_sqrt_d * activate(act, c[r]);
    if (vw) {
        std::vector<double> a(d);
        for (std::size_t r = 0; r < d; ++r) a[r] = activate_deriv(act, c[r]) * (*vw)[r];
        for (std::size_t k = 0; k < window.size(); ++k) {
            if (window[k] == Vocab::kPadId) continue;
            const auto t = static_cast<std::size_t>(window[k]);
            grad->block("conv" + std::to_string(k)).add_outer(a, m.emb.col_copy(t), inv_d);
            grad->block("emb").add_to_col(t, matvec_t(m.conv[k], a), inv_d);
        }
    }
}

} // namespace

// Full instance: K-1 pad slots on each side, giving l + K - 1 windows.
std::vector<double> cnn_feature(const Model &m, std::span<const int> tokens, MaybeVw vw,
                                FlatGradient *grad) {
    validate_tokens(m, tokens, false);
    const int K = m.config().kernel_size;
    const auto l = tokens.size();
    std::vector<int> padded(l + 2 * static_cast<std::size_t>(K - 1), Vocab::kPadId);
    for (std::size_t j = 0; j < l; ++j) padded[j + static_cast<std::size_t>(K - 1)] = tokens[j];

    std::vector<double> feat(static_cast<std::size_t>(m.width()), 0.0);
    const std::size_t windows = l + static_cast<std::size_t>(K - 1);
    for (std::size_t w = 0; w < windows; ++w)
        cnn_accumulate_window(m, std::span<const int>(padded).subspan(w, static_cast<std::size_t>(K)),
                              vw, grad, feat);
    return feat;
}

std::vector<double> cnn_window_feature(const Model &m, std::span<const int> window, MaybeVw vw,
                                       FlatGradient *grad) {
    if (window.size() != static_cast<std::size_t>(m.config().kernel_size))
        throw std::invalid_argument("window length must equal kernel size");
    validate_tokens(m, window, true);
    bool any_real = false;
    for (int t : window) any_real |= t != Vocab::kPadId;
    if (!any_real) throw std::invalid_argument("window of padding only");

    std::vector<double> feat(static_cast<std::size_t>(m.width()), 0.0);
    cnn_accumulate_window(m, window, vw, grad, feat);
    return feat;
}

} // namespace ntklens::detail
