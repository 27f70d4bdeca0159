#pragma once

#include "ntklens/corpus.hpp"
#include "ntklens/model.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ntklens {

enum class OptimizerKind { Gd, Adagrad, Adam };

OptimizerKind optimizer_from_name(const std::string &name);
std::string optimizer_name(OptimizerKind kind);

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::Adagrad;
    double lr = 0.05;
    double eps = 1e-8;
    double beta1 = 0.9; // adam
    double beta2 = 0.999;
};

// Per-block accumulator state; layout is pinned to the model it was built
// for.
class Optimizer {
public:
    Optimizer(const Model &model, const OptimizerConfig &config);
    void step(Model &model, const FlatGradient &grad);

private:
    OptimizerConfig config_;
    long steps_ = 0;
    std::vector<std::string> names_;
    std::vector<Matrix> first_;  // adagrad sum of squares / adam first moment
    std::vector<Matrix> second_; // adam second moment
};

// Mean log loss over the batch: binary models use the logistic loss on
// y in {-1,+1}, multi-head models softmax cross-entropy on class ids.
double batch_loss(const Model &model, std::span<const Instance> batch);
std::pair<double, FlatGradient> loss_and_grad(const Model &model, std::span<const Instance> batch);

struct EvalResult {
    double accuracy = 0.0;
    std::vector<std::int64_t> per_class_correct;
    std::vector<std::int64_t> per_class_total;

    double recall(int cls) const;
};

// Binary rule: positive iff score > 0 (ties fall to the negative class).
// Multi-head rule: argmax, ties to the lowest class id.
int predict(const Model &model, const Instance &x);
EvalResult evaluate(const Model &model, const Corpus &corpus);

struct TrainConfig {
    int epochs = 60;
    int batch_size = 0; // 0 = full batch
    OptimizerConfig optimizer;
    std::uint64_t shuffle_seed = 0;
    std::vector<TrackedUnit> tracked;
};

// Row 0 is the state before any update; row e the state after epoch e.
struct TrainTrace {
    int heads = 1;
    std::vector<TrackedUnit> tracked;
    std::vector<double> loss;     // epochs + 1 entries
    std::vector<double> accuracy; // on the training corpus
    Matrix tracked_scores;        // (epochs + 1) x (units * heads)
};

TrainTrace train(Model &model, const Corpus &corpus, const TrainConfig &config);

// Long CSV: epoch,series,name,class,value with series in
// {loss, accuracy, unit}.
std::string train_trace_csv(const TrainTrace &trace, const Vocab &vocab);
void write_train_trace_csv(const std::string &path, const TrainTrace &trace, const Vocab &vocab);

} // namespace ntklens
