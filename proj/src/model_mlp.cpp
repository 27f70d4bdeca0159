#include "model_kinds.hpp"

#include <cmath>

namespace ntklens::detail {

// s_h = (1/sqrt(d)) v_h . sum_j phi(W (1/sqrt(d)) W^e e_j), so the feature
// is (1/sqrt(d)) sum_j phi(c_j). Backward pass per token j:
//   d(vw.feat)/dW   += (1/d) (phi'(c_j) o vw) (W^e e_j)^T
//   d(vw.feat)/dW^e += (1/d) W^T (phi'(c_j) o vw) e_j^T
std::vector<double> mlp_feature(const Model &m, std::span<const int> tokens, MaybeVw vw,
                                FlatGradient *grad) {
    validate_tokens(m, tokens, false);
    const auto d = static_cast<std::size_t>(m.width());
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    const double inv_d = 1.0 / static_cast<double>(d);
    const Activation act = m.config().activation;

    std::vector<double> feat(d, 0.0);
    for (const int t : tokens) {
        const std::vector<double> u = scaled_embedding(m, t);
        const std::vector<double> c = matvec(m.hidden, u);
        for (std::size_t r = 0; r < d; ++r) feat[r] += inv_sqrt_d * activate(act, c[r]);
        if (vw) {
            std::vector<double> a(d);
            for (std::size_t r = 0; r < d; ++r) a[r] = activate_deriv(act, c[r]) * (*vw)[r];
            const std::vector<double> e = m.emb.col_copy(static_cast<std::size_t>(t));
            grad->block("hidden").add_outer(a, e, inv_d);
            grad->block("emb").add_to_col(static_cast<std::size_t>(t), matvec_t(m.hidden, a),
                                          inv_d);
        }
    }
    return feat;
}

} // namespace ntklens::detail
