#include "model_kinds.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace ntklens::detail {
namespace {

// Adds the bigram term (1/d) diag(W W^e e_a) W^e e_b to feat and,
// when vw is set, its gradient contributions:
//   dW   += (1/d) (u_b o vw) u_a^T
//   dW^e col a += (1/d) W^T (u_b o vw)
//   dW^e col b += (1/d) (vw o W u_a)
// The 1/d normalization is the one under which the tangent kernel of this
// bilinear form has a finite nonzero width limit; a 1/(d sqrt(d)) factor
// would send both score and kernel to zero as d grows.
void mv_accumulate_pair(const Model &m, int first, int second, MaybeVw vw, FlatGradient *grad,
                        std::vector<double> &feat) {
    const auto d = static_cast<std::size_t>(m.width());
    const double scale = 1.0 / static_cast<double>(d);

    const std::vector<double> ua = m.emb.col_copy(static_cast<std::size_t>(first));
    const std::vector<double> ub = m.emb.col_copy(static_cast<std::size_t>(second));
    const std::vector<double> wa = matvec(m.hidden, ua);
    for (std::size_t r = 0; r < d; ++r) feat[r] += scale * wa[r] * ub[r];

    if (vw) {
        const std::vector<double> bvw = hadamard(ub, *vw);
        grad->block("hidden").add_outer(bvw, ua, scale);
        grad->block("emb").add_to_col(static_cast<std::size_t>(first), matvec_t(m.hidden, bvw),
                                      scale);
        grad->block("emb").add_to_col(static_cast<std::size_t>(second), hadamard(*vw, wa), scale);
    }
}

} // namespace

std::vector<double> mv_feature(const Model &m, std::span<const int> tokens, MaybeVw vw,
                               FlatGradient *grad) {
    validate_tokens(m, tokens, false);
    if (tokens.size() < 2)
        throw std::invalid_argument("mv model needs at least two tokens");
    std::vector<double> feat(static_cast<std::size_t>(m.width()), 0.0);
    for (std::size_t j = 0; j + 1 < tokens.size(); ++j)
        mv_accumulate_pair(m, tokens[j], tokens[j + 1], vw, grad, feat);
    return feat;
}

std::vector<double> mv_bigram_feature(const Model &m, int first, int second, MaybeVw vw,
                                      FlatGradient *grad) {
    const std::array<int, 2> toks{first, second};
    validate_tokens(m, toks, false);
    std::vector<double> feat(static_cast<std::size_t>(m.width()), 0.0);
    mv_accumulate_pair(m, first, second, vw, grad, feat);
    return feat;
}

} // namespace ntklens::detail
