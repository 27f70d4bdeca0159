#include "ntklens/trainer.hpp"

#include "ntklens/activations.hpp"
#include "ntklens/errors.hpp"
#include "ntklens/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ntklens {

OptimizerKind optimizer_from_name(const std::string &name) {
    if (name == "gd") return OptimizerKind::Gd;
    if (name == "adagrad") return OptimizerKind::Adagrad;
    if (name == "adam") return OptimizerKind::Adam;
    throw std::invalid_argument("unknown optimizer: " + name);
}

std::string optimizer_name(OptimizerKind kind) {
    switch (kind) {
    case OptimizerKind::Gd: return "gd";
    case OptimizerKind::Adagrad: return "adagrad";
    case OptimizerKind::Adam: return "adam";
    }
    throw std::invalid_argument("bad optimizer enum");
}

Optimizer::Optimizer(const Model &model, const OptimizerConfig &config) : config_(config) {
    if (config.lr <= 0.0) throw std::invalid_argument("learning rate must be positive");
    for (const auto &[name, m] : model.trainable_blocks()) {
        names_.push_back(name);
        if (config.kind != OptimizerKind::Gd) first_.emplace_back(m->rows(), m->cols());
        if (config.kind == OptimizerKind::Adam) second_.emplace_back(m->rows(), m->cols());
    }
}

void Optimizer::step(Model &model, const FlatGradient &grad) {
    auto blocks = model.trainable_blocks();
    if (blocks.size() != names_.size() || grad.blocks.size() != names_.size())
        throw std::invalid_argument("optimizer layout mismatch");
    ++steps_;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].first != names_[b] || grad.blocks[b].first != names_[b])
            throw std::invalid_argument("optimizer layout mismatch");
        std::span<double> theta = blocks[b].second->flat();
        std::span<const double> g = grad.blocks[b].second.flat();
        switch (config_.kind) {
        case OptimizerKind::Gd:
            for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= config_.lr * g[i];
            break;
        case OptimizerKind::Adagrad: {
            std::span<double> acc = first_[b].flat();
            for (std::size_t i = 0; i < theta.size(); ++i) {
                acc[i] += g[i] * g[i];
                theta[i] -= config_.lr * g[i] / std::sqrt(acc[i] + config_.eps);
            }
            break;
        }
        case OptimizerKind::Adam: {
            std::span<double> m1 = first_[b].flat();
            std::span<double> m2 = second_[b].flat();
            const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(steps_));
            const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(steps_));
            for (std::size_t i = 0; i < theta.size(); ++i) {
                m1[i] = config_.beta1 * m1[i] + (1.0 - config_.beta1) * g[i];
                m2[i] = config_.beta2 * m2[i] + (1.0 - config_.beta2) * g[i] * g[i];
                theta[i] -= config_.lr * (m1[i] / c1) / (std::sqrt(m2[i] / c2) + config_.eps);
            }
            break;
        }
        }
    }
}

namespace {

void check_batch(const Model &model, std::span<const Instance> batch) {
    if (batch.empty()) throw std::invalid_argument("empty batch");
    for (const Instance &x : batch) {
        if (model.heads() == 1) {
            if (x.label < 0 || x.label > 1)
                throw std::invalid_argument("binary model needs labels in {0, 1}");
        } else if (x.label < 0 || x.label >= model.heads()) {
            throw std::invalid_argument("label out of range for model heads");
        }
    }
}

} // namespace

double batch_loss(const Model &model, std::span<const Instance> batch) {
    check_batch(model, batch);
    double total = 0.0;
    for (const Instance &x : batch) {
        const std::vector<double> s = model.forward(x);
        if (model.heads() == 1) {
            const double y = x.label == 1 ? 1.0 : -1.0;
            total += softplus(-y * s[0]);
        } else {
            const std::vector<double> p = softmax(s);
            total += -std::log(std::max(p[static_cast<std::size_t>(x.label)], 1e-300));
        }
    }
    return total / static_cast<double>(batch.size());
}

std::pair<double, FlatGradient> loss_and_grad(const Model &model,
                                              std::span<const Instance> batch) {
    check_batch(model, batch);
    const double inv_m = 1.0 / static_cast<double>(batch.size());
    double total = 0.0;
    FlatGradient grad = model.zero_gradient();
    std::vector<double> w(static_cast<std::size_t>(model.heads()));
    for (const Instance &x : batch) {
        const std::vector<double> s = model.forward(x);
        if (model.heads() == 1) {
            const double y = x.label == 1 ? 1.0 : -1.0;
            total += softplus(-y * s[0]);
            w[0] = -inv_m * y * sigmoid(-y * s[0]);
        } else {
            const std::vector<double> p = softmax(s);
            total += -std::log(std::max(p[static_cast<std::size_t>(x.label)], 1e-300));
            for (std::size_t a = 0; a < p.size(); ++a)
                w[a] = inv_m * (p[a] - (static_cast<std::size_t>(x.label) == a ? 1.0 : 0.0));
        }
        grad.add_scaled(model.score_gradient(x, w), 1.0);
    }
    return {total * inv_m, std::move(grad)};
}

double EvalResult::recall(int cls) const {
    const auto c = static_cast<std::size_t>(cls);
    if (c >= per_class_total.size() || per_class_total[c] == 0) return 0.0;
    return static_cast<double>(per_class_correct[c]) / static_cast<double>(per_class_total[c]);
}

int predict(const Model &model, const Instance &x) {
    const std::vector<double> s = model.forward(x);
    if (model.heads() == 1) return s[0] > 0.0 ? 1 : 0;
    std::size_t best = 0;
    for (std::size_t a = 1; a < s.size(); ++a)
        if (s[a] > s[best]) best = a;
    return static_cast<int>(best);
}

EvalResult evaluate(const Model &model, const Corpus &corpus) {
    if (corpus.instances.empty()) throw std::invalid_argument("empty corpus");
    const int classes = model.heads() == 1 ? 2 : model.heads();
    EvalResult r;
    r.per_class_correct.assign(static_cast<std::size_t>(classes), 0);
    r.per_class_total.assign(static_cast<std::size_t>(classes), 0);
    std::int64_t correct = 0;
    for (const Instance &x : corpus.instances) {
        if (x.label < 0 || x.label >= classes)
            throw std::invalid_argument("label out of range in evaluation corpus");
        ++r.per_class_total[static_cast<std::size_t>(x.label)];
        if (predict(model, x) == x.label) {
            ++correct;
            ++r.per_class_correct[static_cast<std::size_t>(x.label)];
        }
    }
    r.accuracy = static_cast<double>(correct) / static_cast<double>(corpus.instances.size());
    return r;
}

TrainTrace train(Model &model, const Corpus &corpus, const TrainConfig &config) {
    if (config.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (corpus.instances.empty()) throw std::invalid_argument("empty corpus");
    for (const TrackedUnit &u : config.tracked)
        if (!model.supports_unit(u))
            throw UnsupportedError("tracked unit of kind " + unit_kind_name(u.kind) +
                                   " unsupported by " + model_kind_name(model.kind()));

    Optimizer opt(model, config.optimizer);
    const auto L = static_cast<std::size_t>(model.heads());
    const std::size_t units = config.tracked.size();

    TrainTrace trace;
    trace.heads = model.heads();
    trace.tracked = config.tracked;
    trace.tracked_scores = Matrix(static_cast<std::size_t>(config.epochs) + 1, units * L);

    const auto record = [&](std::size_t epoch) {
        trace.loss.push_back(batch_loss(model, corpus.instances));
        trace.accuracy.push_back(evaluate(model, corpus).accuracy);
        for (std::size_t i = 0; i < units; ++i) {
            const std::vector<double> s = model.unit_score(config.tracked[i]);
            for (std::size_t a = 0; a < L; ++a) trace.tracked_scores(epoch, i * L + a) = s[a];
        }
    };

    record(0);
    const std::size_t m = corpus.instances.size();
    const std::size_t batch =
        config.batch_size <= 0 ? m : std::min<std::size_t>(static_cast<std::size_t>(config.batch_size), m);
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;

    std::vector<Instance> scratch;
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        if (batch == m) {
            auto [loss, grad] = loss_and_grad(model, corpus.instances);
            (void)loss;
            opt.step(model, grad);
        } else {
            RngStream rng = RngStream(config.shuffle_seed, 0xba7c).split(
                static_cast<std::uint64_t>(epoch));
            for (std::size_t i = m; i > 1; --i)
                std::swap(order[i - 1], order[rng.next_below(i)]);
            for (std::size_t start = 0; start < m; start += batch) {
                const std::size_t stop = std::min(m, start + batch);
                scratch.clear();
                for (std::size_t i = start; i < stop; ++i)
                    scratch.push_back(corpus.instances[order[i]]);
                auto [loss, grad] = loss_and_grad(model, scratch);
                (void)loss;
                opt.step(model, grad);
            }
        }
        record(static_cast<std::size_t>(epoch));
    }
    return trace;
}

std::string train_trace_csv(const TrainTrace &trace, const Vocab &vocab) {
    std::ostringstream out;
    out.precision(12);
    out << "epoch,series,name,class,value\n";
    const auto L = static_cast<std::size_t>(trace.heads);
    for (std::size_t e = 0; e < trace.loss.size(); ++e) {
        out << e << ",loss,,," << trace.loss[e] << '\n';
        out << e << ",accuracy,,," << trace.accuracy[e] << '\n';
        for (std::size_t i = 0; i < trace.tracked.size(); ++i)
            for (std::size_t a = 0; a < L; ++a)
                out << e << ",unit," << trace.tracked[i].display(vocab) << ',' << a << ','
                    << trace.tracked_scores(e, i * L + a) << '\n';
    }
    return out.str();
}

void write_train_trace_csv(const std::string &path, const TrainTrace &trace, const Vocab &vocab) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write train trace: " + path);
    out << train_trace_csv(trace, vocab);
    if (!out) throw ConfigError("train trace write failed: " + path);
}

} // namespace ntklens
