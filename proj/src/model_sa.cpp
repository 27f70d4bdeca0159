#include "model_kinds.hpp"

#include <array>
#include <cmath>

namespace ntklens::detail {
namespace {

struct SaForward {
    std::vector<std::vector<double>> u; // raw embeddings per position
    std::vector<std::vector<double>> q; // embedding + positional row
    Matrix alpha;                       // row softmax of q_i.q_j / d
};

SaForward sa_forward(const Model &m, std::span<const int> tokens) {
    validate_tokens(m, tokens, false);
    const auto l = tokens.size();
    if (l > static_cast<std::size_t>(m.config().max_positions))
        throw std::invalid_argument("instance longer than positional table");
    const auto d = static_cast<std::size_t>(m.width());

    SaForward f;
    f.u.reserve(l);
    f.q.reserve(l);
    for (std::size_t i = 0; i < l; ++i) {
        f.u.push_back(m.emb.col_copy(static_cast<std::size_t>(tokens[i])));
        std::vector<double> qi = f.u.back();
        axpy(qi, m.pos.row(i), 1.0);
        f.q.push_back(std::move(qi));
    }
    f.alpha = Matrix(l, l);
    std::vector<double> logits(l);
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = 0; j < l; ++j)
            logits[j] = dot(f.q[i], f.q[j]) / static_cast<double>(d);
        const std::vector<double> row = softmax(logits);
        for (std::size_t j = 0; j < l; ++j) f.alpha(i, j) = row[j];
    }
    return f;
}

} // namespace

Matrix sa_attention_matrix(const Model &m, std::span<const int> tokens) {
    return sa_forward(m, tokens).alpha;
}

// s_h = sum_i sum_j alpha_ij (1/sqrt(d)) v_h . W^e e_j, so
// feat = (1/sqrt(d)) sum_j colsum_j u_j with colsum_j = sum_i alpha_ij.
// The embedding gradient has a value path through u_j and an attention path
// through the logits:
//   d(vw.feat)/da_ik = alpha_ik (tau_k - r_i), tau_j = (1/sqrt(d)) vw.u_j,
//   r_i = sum_j alpha_ij tau_j, and da_ik/dW^e = (1/d)(q_k e_i^T + q_i e_k^T).
std::vector<double> sa_feature(const Model &m, std::span<const int> tokens, MaybeVw vw,
                               FlatGradient *grad) {
    const SaForward f = sa_forward(m, tokens);
    const auto l = tokens.size();
    const auto d = static_cast<std::size_t>(m.width());
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));

    std::vector<double> colsum(l, 0.0);
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < l; ++j) colsum[j] += f.alpha(i, j);

    std::vector<double> feat(d, 0.0);
    for (std::size_t j = 0; j < l; ++j) axpy(feat, f.u[j], inv_sqrt_d * colsum[j]);

    if (vw) {
        Matrix &demb = grad->block("emb");
        // Value path.
        for (std::size_t j = 0; j < l; ++j)
            demb.add_to_col(static_cast<std::size_t>(tokens[j]), *vw, inv_sqrt_d * colsum[j]);
        // Attention path.
        std::vector<double> tau(l), r(l, 0.0);
        for (std::size_t j = 0; j < l; ++j) tau[j] = inv_sqrt_d * dot(*vw, f.u[j]);
        for (std::size_t i = 0; i < l; ++i)
            for (std::size_t j = 0; j < l; ++j) r[i] += f.alpha(i, j) * tau[j];
        for (std::size_t i = 0; i < l; ++i) {
            for (std::size_t k = 0; k < l; ++k) {
                const double coef = f.alpha(i, k) * (tau[k] - r[i]) / static_cast<double>(d);
                if (coef == 0.0) continue;
                demb.add_to_col(static_cast<std::size_t>(tokens[i]), f.q[k], coef);
                demb.add_to_col(static_cast<std::size_t>(tokens[k]), f.q[i], coef);
            }
        }
    }
    return feat;
}

std::vector<double> sa_token_feature(const Model &m, int token, MaybeVw vw, FlatGradient *grad) {
    const std::array<int, 1> toks{token};
    validate_tokens(m, toks, false);
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(m.width()));
    std::vector<double> feat = m.emb.col_copy(static_cast<std::size_t>(token));
    scale_inplace(feat, inv_sqrt_d);
    if (vw)
        grad->block("emb").add_to_col(static_cast<std::size_t>(token), *vw, inv_sqrt_d);
    return feat;
}

} // namespace ntklens::detail
