#include "ntklens/errors.hpp"
#include "ntklens/trainer.hpp"

#include "doctest.h"

#include <cmath>
#include <vector>

using namespace ntklens;

namespace {

ModelConfig small_config(ModelKind kind = ModelKind::Mlp, int heads = 1) {
    ModelConfig c;
    c.kind = kind;
    c.width = 4;
    c.vocab_size = 6;
    c.heads = heads;
    return c;
}

Instance inst(std::vector<int> tokens, int label) {
    Instance x;
    x.tokens = std::move(tokens);
    x.label = label;
    return x;
}

Corpus tiny_separable() {
    Corpus c;
    c.num_classes = 2;
    c.instances = {inst({1, 3}, 1), inst({1, 4}, 1), inst({2, 3}, 0), inst({2, 5}, 0)};
    return c;
}

std::vector<double> snapshot(Model &m) {
    std::vector<double> out;
    for (auto &[name, block] : m.trainable_blocks())
        out.insert(out.end(), block->flat().begin(), block->flat().end());
    return out;
}

} // namespace

TEST_CASE("zero scores give log 2 binary loss and log L softmax loss") {
    Model m(small_config(), RngStream(1));
    m.head.fill(0.0);
    const Corpus c = tiny_separable();
    CHECK(batch_loss(m, c.instances) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    Model mc(small_config(ModelKind::Mlp, 3), RngStream(1));
    mc.head.fill(0.0);
    const std::vector<Instance> batch{inst({1, 2}, 0), inst({3}, 2)};
    CHECK(batch_loss(mc, batch) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("loss gradient matches finite differences") {
    for (const int heads : {1, 3}) {
        Model m(small_config(ModelKind::Mlp, heads), RngStream(7));
        std::vector<Instance> batch{inst({1, 2}, 0), inst({3, 4, 1}, heads == 1 ? 1 : 2)};
        const auto [loss, grad] = loss_and_grad(m, batch);
        CHECK(loss == doctest::Approx(batch_loss(m, batch)).epsilon(1e-12));
        double worst = 0.0;
        const double h = 1e-5;
        for (auto &[name, block] : m.trainable_blocks()) {
            const Matrix &g = grad.block(name);
            for (std::size_t i = 0; i < block->size(); ++i) {
                double &p = block->flat()[i];
                const double keep = p;
                p = keep + h;
                const double up = batch_loss(m, batch);
                p = keep - h;
                const double dn = batch_loss(m, batch);
                p = keep;
                const double fd = (up - dn) / (2 * h);
                const double diff = std::abs(g.flat()[i] - fd);
                if (diff < 1e-12) continue;
                worst = std::max(worst,
                                 diff / std::max({std::abs(g.flat()[i]), std::abs(fd), 1e-8}));
            }
        }
        CHECK(worst < 1e-4);
    }
}

TEST_CASE("a twenty-unit margin saturates the loss and its gradient") {
    ModelConfig cfg = small_config();
    cfg.width = 1;
    Model m(cfg, RngStream(1));
    // hand-built scorer: relu(1 * 1) * head = head
    m.emb.fill(0.0);
    m.emb(0, 1) = 1.0;
    m.hidden(0, 0) = 1.0;
    m.head(0, 0) = 21.0;
    const std::vector<Instance> batch{inst({1}, 1)};
    CHECK(m.binary_score(batch[0]) == doctest::Approx(21.0).epsilon(1e-12));
    const auto [loss, grad] = loss_and_grad(m, batch);
    CHECK(loss < 1e-8);
    CHECK(grad.max_abs() < 1e-7);
}

TEST_CASE("plain gradient descent at unit rate subtracts the gradient") {
    Model m(small_config(), RngStream(3));
    const std::vector<Instance> batch{inst({1, 2}, 1), inst({3}, 0)};
    const std::vector<double> before = snapshot(m);
    const auto [loss, grad] = loss_and_grad(m, batch);
    OptimizerConfig oc;
    oc.kind = OptimizerKind::Gd;
    oc.lr = 1.0;
    Optimizer opt(m, oc);
    opt.step(m, grad);
    std::size_t at = 0;
    for (auto &[name, block] : m.trainable_blocks()) {
        const Matrix &g = grad.block(name);
        for (std::size_t i = 0; i < block->size(); ++i, ++at)
            CHECK(block->flat()[i] == before[at] - g.flat()[i]);
    }
}

TEST_CASE("adagrad follows the accumulator rule and its steps shrink") {
    Model m(small_config(), RngStream(4));
    const std::vector<Instance> batch{inst({1, 2}, 1)};
    OptimizerConfig oc;
    oc.kind = OptimizerKind::Adagrad;
    oc.lr = 0.1;
    oc.eps = 1e-8;
    Optimizer opt(m, oc);

    const std::vector<double> p0 = snapshot(m);
    const FlatGradient g1 = loss_and_grad(m, batch).second;
    opt.step(m, g1);
    const std::vector<double> p1 = snapshot(m);
    std::size_t at = 0;
    for (auto &[name, block] : m.trainable_blocks()) {
        const Matrix &g = g1.block(name);
        for (std::size_t i = 0; i < block->size(); ++i, ++at) {
            const double want =
                p0[at] - oc.lr * g.flat()[i] / std::sqrt(g.flat()[i] * g.flat()[i] + oc.eps);
            CHECK(block->flat()[i] == doctest::Approx(want).epsilon(1e-12));
        }
    }

    // feed the same gradient again: the accumulator halves the step scale
    opt.step(m, g1);
    const std::vector<double> p2 = snapshot(m);
    at = 0;
    for (auto &[name, block] : m.trainable_blocks()) {
        const Matrix &g = g1.block(name);
        for (std::size_t i = 0; i < block->size(); ++i, ++at) {
            const double gi = g.flat()[i];
            const double want = p1[at] - oc.lr * gi / std::sqrt(2 * gi * gi + oc.eps);
            CHECK(block->flat()[i] == doctest::Approx(want).epsilon(1e-12));
            if (std::abs(gi) > 1e-6)
                CHECK(std::abs(p2[at] - p1[at]) < std::abs(p1[at] - p0[at]));
        }
    }
}

TEST_CASE("adam's first step is the bias-corrected signed gradient") {
    Model m(small_config(), RngStream(5));
    const std::vector<Instance> batch{inst({2, 3}, 0)};
    OptimizerConfig oc;
    oc.kind = OptimizerKind::Adam;
    oc.lr = 0.01;
    oc.eps = 1e-8;
    Optimizer opt(m, oc);
    const std::vector<double> p0 = snapshot(m);
    const FlatGradient g1 = loss_and_grad(m, batch).second;
    opt.step(m, g1);
    std::size_t at = 0;
    for (auto &[name, block] : m.trainable_blocks()) {
        const Matrix &g = g1.block(name);
        for (std::size_t i = 0; i < block->size(); ++i, ++at) {
            const double gi = g.flat()[i];
            const double want = p0[at] - oc.lr * gi / (std::abs(gi) + oc.eps);
            CHECK(block->flat()[i] == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("zero learning rate is rejected") {
    Model m(small_config(), RngStream(1));
    OptimizerConfig oc;
    oc.lr = 0.0;
    CHECK_THROWS_AS(Optimizer(m, oc), std::invalid_argument);
}

TEST_CASE("prediction ties fall to the negative class and class zero") {
    Model m(small_config(), RngStream(2));
    m.head.fill(0.0);
    const Corpus c = tiny_separable();
    for (const Instance &x : c.instances) CHECK(predict(m, x) == 0);
    const EvalResult r = evaluate(m, c);
    CHECK(r.accuracy == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.recall(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.recall(1) == 0.0);
    CHECK(r.per_class_total[0] == 2);
    CHECK(r.per_class_total[1] == 2);

    Model mc(small_config(ModelKind::Mlp, 4), RngStream(2));
    mc.head.fill(0.0);
    CHECK(predict(mc, c.instances[0]) == 0);
}

TEST_CASE("training a separable corpus reaches full accuracy") {
    Model m(small_config(), RngStream(11));
    const Corpus c = tiny_separable();
    TrainConfig tc;
    tc.epochs = 30;
    tc.optimizer.lr = 0.2;
    tc.tracked = {TrackedUnit::token(1), TrackedUnit::token(2)};
    const TrainTrace t = train(m, c, tc);
    REQUIRE(t.loss.size() == 31);
    REQUIRE(t.accuracy.size() == 31);
    REQUIRE(t.tracked_scores.rows() == 31);
    REQUIRE(t.tracked_scores.cols() == 2);
    CHECK(t.loss.back() < t.loss.front());
    CHECK(t.accuracy.back() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(evaluate(m, c).accuracy == doctest::Approx(1.0).epsilon(1e-12));
    // the positive-class token score rises, the negative one falls
    CHECK(t.tracked_scores(30, 0) > t.tracked_scores(0, 0));
    CHECK(t.tracked_scores(30, 1) < t.tracked_scores(0, 1));
}

TEST_CASE("row zero of the trace is the untouched initialization") {
    Model fresh(small_config(), RngStream(13));
    const double init_score = fresh.binary_unit_score(TrackedUnit::token(3));
    const double init_loss = batch_loss(fresh, tiny_separable().instances);

    Model m(small_config(), RngStream(13));
    TrainConfig tc;
    tc.epochs = 2;
    tc.tracked = {TrackedUnit::token(3)};
    const TrainTrace t = train(m, tiny_separable(), tc);
    CHECK(t.tracked_scores(0, 0) == init_score);
    CHECK(t.loss[0] == init_loss);
}

TEST_CASE("training is bit-reproducible for a fixed seed") {
    const Corpus c = tiny_separable();
    TrainConfig tc;
    tc.epochs = 8;
    tc.batch_size = 2;
    tc.shuffle_seed = 5;
    tc.tracked = {TrackedUnit::token(1)};

    Model a(small_config(), RngStream(21));
    Model b(small_config(), RngStream(21));
    const TrainTrace ta = train(a, c, tc);
    const TrainTrace tb = train(b, c, tc);
    for (std::size_t e = 0; e < ta.loss.size(); ++e) {
        CHECK(ta.loss[e] == tb.loss[e]);
        CHECK(ta.tracked_scores(e, 0) == tb.tracked_scores(e, 0));
    }
    const std::vector<double> pa = snapshot(a), pb = snapshot(b);
    for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pa[i] == pb[i]);
}

TEST_CASE("minibatches cover every instance and still learn") {
    Model m(small_config(), RngStream(31));
    Corpus c = tiny_separable();
    c.instances.push_back(inst({1, 5}, 1)); // odd count forces a short tail batch
    TrainConfig tc;
    tc.epochs = 60;
    tc.batch_size = 2;
    tc.optimizer.lr = 0.05;
    const TrainTrace t = train(m, c, tc);
    CHECK(std::isfinite(t.loss.back()));
    CHECK(t.accuracy.back() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("softmax training separates a three-class corpus") {
    Corpus c;
    c.num_classes = 3;
    c.instances = {inst({1, 4}, 0), inst({2, 4}, 1), inst({3, 4}, 2),
                   inst({1, 5}, 0), inst({2, 5}, 1), inst({3, 5}, 2)};
    Model m(small_config(ModelKind::Mlp, 3), RngStream(41));
    TrainConfig tc;
    tc.epochs = 60;
    tc.optimizer.lr = 0.3;
    tc.tracked = {TrackedUnit::token(1)};
    const TrainTrace t = train(m, c, tc);
    CHECK(t.accuracy.back() == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(t.tracked_scores.cols() == 3); // one column per class head
    // token 1 marks class 0: its class-0 score ends on top
    CHECK(t.tracked_scores(60, 0) > t.tracked_scores(60, 1));
    CHECK(t.tracked_scores(60, 0) > t.tracked_scores(60, 2));
}

TEST_CASE("bad labels and unsupported tracked units are rejected") {
    Model m(small_config(), RngStream(1));
    const std::vector<Instance> bad{inst({1}, 2)};
    CHECK_THROWS_AS(batch_loss(m, bad), std::invalid_argument);
    TrainConfig tc;
    tc.tracked = {TrackedUnit::bigram(1, 2)}; // not an mlp unit
    Corpus c = tiny_separable();
    CHECK_THROWS_AS(train(m, c, tc), UnsupportedError);
    tc.tracked.clear();
    tc.epochs = 0;
    CHECK_THROWS_AS(train(m, c, tc), std::invalid_argument);
    CHECK_THROWS_AS(train(m, Corpus{}, TrainConfig{}), std::invalid_argument);
}

TEST_CASE("optimizer names round-trip and unknown names throw") {
    for (const OptimizerKind k : {OptimizerKind::Gd, OptimizerKind::Adagrad, OptimizerKind::Adam})
        CHECK(optimizer_from_name(optimizer_name(k)) == k);
    CHECK_THROWS_AS(optimizer_from_name("sgd-with-flair"), std::invalid_argument);
}

TEST_CASE("train trace csv is long format") {
    Model m(small_config(), RngStream(2));
    Vocab v;
    // vocab ids line up with the tiny corpus convention: 1..5 used
    for (const char *w : {"t1", "t2", "t3", "t4", "t5"}) v.add(w);
    TrainConfig tc;
    tc.epochs = 1;
    tc.tracked = {TrackedUnit::token(1)};
    const TrainTrace t = train(m, tiny_separable(), tc);
    const std::string csv = train_trace_csv(t, v);
    CHECK(csv.rfind("epoch,series,name,class,value", 0) == 0);
    CHECK(csv.find("0,loss,,,") != std::string::npos);
    CHECK(csv.find("1,accuracy,,,") != std::string::npos);
    CHECK(csv.find(",unit,t1,0,") != std::string::npos);
}
