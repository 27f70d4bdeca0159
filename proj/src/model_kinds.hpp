#pragma once

// Internal per-kind forward/backward kernels. Every model score factors as
// s_h = head_row_h . feat for a head-independent feature vector; these
// functions compute feat and optionally accumulate the gradient of
// (vw . feat) into every block except the head, where vw = head^T w for the
// caller's head weighting w.

#include "ntklens/model.hpp"

#include <span>
#include <vector>

namespace ntklens::detail {

using MaybeVw = const std::vector<double> *; // nullptr = no gradient wanted

std::vector<double> mlp_feature(const Model &m, std::span<const int> tokens, MaybeVw vw,
                                FlatGradient *grad);
std::vector<double> cnn_feature(const Model &m, std::span<const int> tokens, MaybeVw vw,
                                FlatGradient *grad);
std::vector<double> cnn_window_feature(const Model &m, std::span<const int> window, MaybeVw vw,
                                       FlatGradient *grad);
std::vector<double> sa_feature(const Model &m, std::span<const int> tokens, MaybeVw vw,
                               FlatGradient *grad);
std::vector<double> sa_token_feature(const Model &m, int token, MaybeVw vw, FlatGradient *grad);
std::vector<double> mv_feature(const Model &m, std::span<const int> tokens, MaybeVw vw,
                               FlatGradient *grad);
std::vector<double> mv_bigram_feature(const Model &m, int first, int second, MaybeVw vw,
                                      FlatGradient *grad);
std::vector<double> lrnn_feature(const Model &m, std::span<const int> tokens, MaybeVw vw,
                                 FlatGradient *grad);
std::vector<double> lrnn_token_pos_feature(const Model &m, int token, int distance, MaybeVw vw,
                                           FlatGradient *grad);

// Attention weights for SA (row softmax over scaled dot products).
Matrix sa_attention_matrix(const Model &m, std::span<const int> tokens);

// Rejects pad (unless allowed) and out-of-range ids.
void validate_tokens(const Model &m, std::span<const int> tokens, bool allow_pad);

// (1/sqrt(d)) * emb column; the shared input scaling.
std::vector<double> scaled_embedding(const Model &m, int token);

} // namespace ntklens::detail
