#pragma once

#include "ntklens/activations.hpp"
#include "ntklens/corpus.hpp"
#include "ntklens/matrix.hpp"
#include "ntklens/rng.hpp"
#include "ntklens/units.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ntklens {

enum class ModelKind { Mlp, Cnn, Sa, Mv, Lrnn };

ModelKind model_kind_from_name(const std::string &name);
std::string model_kind_name(ModelKind kind);

// Initialization variances (sigma^2, not sigma) for embedding, hidden,
// head and recurrent weights.
struct VarianceProfile {
    double emb = 0.01;
    double hidden = 0.01;
    double head = 0.01;
    double recur = 0.01;
};

struct ModelConfig {
    ModelKind kind = ModelKind::Mlp;
    int width = 64;      // d
    int vocab_size = 0;  // including the pad entry at id 0
    int heads = 1;       // 1 = binary scalar score, L = one score per class
    VarianceProfile vars;
    Activation activation = Activation::Relu; // MLP and CNN
    int kernel_size = 3;                      // CNN window size K
    int max_positions = 64;                   // SA positional table size
    int cnn_token_slot = 0;                   // window slot used for single-token scores
};

// Gradient of a scalar (or head-weighted) score with respect to every
// trainable block, laid out in the model's block order.
struct FlatGradient {
    std::vector<std::pair<std::string, Matrix>> blocks;

    Matrix &block(const std::string &name);
    const Matrix &block(const std::string &name) const;
    double dot(const FlatGradient &other) const; // requires identical layout
    void add_scaled(const FlatGradient &other, double scale);
    void scale(double s);
    double max_abs() const;
    bool all_finite() const;
};

// One of the five text classifiers at finite width. All scores are plain
// doubles; `heads` rows of the head matrix give one score per class when
// more than one.
//
// Blocks by kind (trainable order):
//   mlp:  emb, hidden, head
//   cnn:  emb, conv0..conv{K-1}, head
//   sa:   emb, head           (positional table is frozen)
//   mv:   emb, hidden, head
//   lrnn: emb, hidden, recur, head
class Model {
public:
    Model(const ModelConfig &config, RngStream rng);

    const ModelConfig &config() const { return config_; }
    ModelKind kind() const { return config_.kind; }
    int width() const { return config_.width; }
    int heads() const { return config_.heads; }

    std::vector<std::pair<std::string, Matrix *>> trainable_blocks();
    std::vector<std::pair<std::string, const Matrix *>> trainable_blocks() const;
    FlatGradient zero_gradient() const;

    // Scores: one entry per head.
    std::vector<double> forward(const Instance &x) const;
    double binary_score(const Instance &x) const; // heads must be 1

    // Gradient of sum_h head_weights[h] * s_h over all trainable blocks.
    FlatGradient score_gradient(const Instance &x, std::span<const double> head_weights) const;

    std::vector<double> unit_score(const TrackedUnit &unit) const;
    double binary_unit_score(const TrackedUnit &unit) const;
    FlatGradient unit_score_gradient(const TrackedUnit &unit,
                                     std::span<const double> head_weights) const;

    // Row-softmax attention matrix (SA only).
    Matrix sa_attention(const Instance &x) const;

    // True when unit_score is defined for this model/unit pairing.
    bool supports_unit(const TrackedUnit &unit) const;

    // Raw blocks; emb column 0 (padding) is all zeros and must stay so.
    Matrix emb;               // d x vocab_size
    Matrix hidden;            // d x d   (mlp, mv, lrnn)
    Matrix recur;             // d x d   (lrnn)
    std::vector<Matrix> conv; // K matrices d x d (cnn)
    Matrix head;              // heads x d
    Matrix pos;               // max_positions x d (sa, frozen)

private:
    ModelConfig config_;
};

} // namespace ntklens
