#include "model_kinds.hpp"

#include <array>
#include <cmath>

namespace ntklens::detail {
namespace {

// y <- (W^h/sqrt(d))^T y
void recur_t_apply(const Model &m, std::vector<double> &y) {
    y = matvec_t(m.recur, y);
    scale_inplace(y, 1.0 / std::sqrt(static_cast<double>(m.width())));
}

// y <- (W^h/sqrt(d)) y
void recur_apply(const Model &m, std::vector<double> &y) {
    y = matvec(m.recur, y);
    scale_inplace(y, 1.0 / std::sqrt(static_cast<double>(m.width())));
}

} // namespace

// h_t = (1/sqrt(d)) W^h h_{t-1} + (1/d) W W^e e_t, feature = h_T.
// With A = W^h/sqrt(d) and z_j = W W^e e_j: h_T = (1/d) sum_j A^{T-j} z_j.
// Backward, y_p = (A^T)^p vw:
//   dW^e col x_j += (1/d) W^T y_{T-j}
//   dW           += (1/d) y_{T-j} z... (u_j^T with u_j the raw embedding)
//   dW^h         += (1/(d sqrt(d))) sum_j sum_{i<T-j} y_{T-j-1-i} (A^i z_j)^T
std::vector<double> lrnn_feature(const Model &m, std::span<const int> tokens, MaybeVw vw,
                                 FlatGradient *grad) {
    validate_tokens(m, tokens, false);
    const auto d = static_cast<std::size_t>(m.width());
    const auto T = tokens.size();
    const double inv_d = 1.0 / static_cast<double>(d);
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));

    std::vector<std::vector<double>> z;
    z.reserve(T);
    for (const int t : tokens)
        z.push_back(matvec(m.hidden, m.emb.col_copy(static_cast<std::size_t>(t))));

    std::vector<double> h(d, 0.0);
    for (std::size_t j = 0; j < T; ++j) {
        recur_apply(m, h);
        axpy(h, z[j], inv_d);
    }

    if (vw) {
        // y_p for p = 0..T-1.
        std::vector<std::vector<double>> y;
        y.reserve(T);
        y.push_back(*vw);
        for (std::size_t p = 1; p < T; ++p) {
            std::vector<double> next = y.back();
            recur_t_apply(m, next);
            y.push_back(std::move(next));
        }
        Matrix &demb = grad->block("emb");
        Matrix &dhid = grad->block("hidden");
        Matrix &drec = grad->block("recur");
        for (std::size_t j = 0; j < T; ++j) {
            const std::size_t p = T - 1 - j; // power applied to token j's feed
            const std::vector<double> u = m.emb.col_copy(static_cast<std::size_t>(tokens[j]));
            demb.add_to_col(static_cast<std::size_t>(tokens[j]), matvec_t(m.hidden, y[p]), inv_d);
            dhid.add_outer(y[p], u, inv_d);
            std::vector<double> q = z[j];
            for (std::size_t i = 0; i < p; ++i) {
                drec.add_outer(y[p - 1 - i], q, inv_d * inv_sqrt_d);
                if (i + 1 < p) recur_apply(m, q);
            }
        }
    }
    return h;
}

std::vector<double> lrnn_token_pos_feature(const Model &m, int token, int distance, MaybeVw vw,
                                           FlatGradient *grad) {
    const std::array<int, 1> toks{token};
    validate_tokens(m, toks, false);
    if (distance < 0) throw std::invalid_argument("distance must be >= 0");
    const auto d = static_cast<std::size_t>(m.width());
    const double inv_d = 1.0 / static_cast<double>(d);
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    const auto p = static_cast<std::size_t>(distance);

    const std::vector<double> u = m.emb.col_copy(static_cast<std::size_t>(token));
    const std::vector<double> z = matvec(m.hidden, u);
    std::vector<double> feat = z;
    for (std::size_t i = 0; i < p; ++i) recur_apply(m, feat);
    scale_inplace(feat, inv_d);

    if (vw) {
        std::vector<std::vector<double>> y;
        y.reserve(p + 1);
        y.push_back(*vw);
        for (std::size_t i = 1; i <= p; ++i) {
            std::vector<double> next = y.back();
            recur_t_apply(m, next);
            y.push_back(std::move(next));
        }
        grad->block("emb").add_to_col(static_cast<std::size_t>(token), matvec_t(m.hidden, y[p]),
                                      inv_d);
        grad->block("hidden").add_outer(y[p], u, inv_d);
        Matrix &drec = grad->block("recur");
        std::vector<double> q = z;
        for (std::size_t i = 0; i < p; ++i) {
            drec.add_outer(y[p - 1 - i], q, inv_d * inv_sqrt_d);
            if (i + 1 < p) recur_apply(m, q);
        }
    }
    return feat;
}

} // namespace ntklens::detail
