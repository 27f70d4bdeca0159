#include "ntklens/model.hpp"

#include "ntklens/errors.hpp"
#include "model_kinds.hpp"

#include <cmath>
#include <stdexcept>

namespace ntklens {

ModelKind model_kind_from_name(const std::string &name) {
    if (name == "mlp") return ModelKind::Mlp;
    if (name == "cnn") return ModelKind::Cnn;
    if (name == "sa") return ModelKind::Sa;
    if (name == "mv") return ModelKind::Mv;
    if (name == "lrnn") return ModelKind::Lrnn;
    throw std::invalid_argument("unknown model kind: " + name);
}

std::string model_kind_name(ModelKind kind) {
    switch (kind) {
    case ModelKind::Mlp: return "mlp";
    case ModelKind::Cnn: return "cnn";
    case ModelKind::Sa: return "sa";
    case ModelKind::Mv: return "mv";
    case ModelKind::Lrnn: return "lrnn";
    }
    throw std::invalid_argument("bad model kind enum");
}

Matrix &FlatGradient::block(const std::string &name) {
    for (auto &[n, m] : blocks)
        if (n == name) return m;
    throw std::invalid_argument("no gradient block named " + name);
}

const Matrix &FlatGradient::block(const std::string &name) const {
    return const_cast<FlatGradient *>(this)->block(name);
}

double FlatGradient::dot(const FlatGradient &other) const {
    if (blocks.size() != other.blocks.size())
        throw std::invalid_argument("gradient layouts differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].first != other.blocks[i].first)
            throw std::invalid_argument("gradient layouts differ");
        acc += blocks[i].second.dot(other.blocks[i].second);
    }
    return acc;
}

void FlatGradient::add_scaled(const FlatGradient &other, double scale) {
    if (blocks.size() != other.blocks.size())
        throw std::invalid_argument("gradient layouts differ");
    for (std::size_t i = 0; i < blocks.size(); ++i)
        blocks[i].second.add_scaled(other.blocks[i].second, scale);
}

void FlatGradient::scale(double s) {
    for (auto &[n, m] : blocks) scale_inplace(m.flat(), s);
}

double FlatGradient::max_abs() const {
    double v = 0.0;
    for (const auto &[n, m] : blocks) v = std::max(v, m.max_abs());
    return v;
}

bool FlatGradient::all_finite() const {
    for (const auto &[n, m] : blocks)
        if (!m.all_finite()) return false;
    return true;
}

namespace {

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, double variance, RngStream rng) {
    Matrix m(rows, cols);
    const double sigma = std::sqrt(variance);
    for (double &v : m.flat()) v = sigma * rng.next_gaussian();
    return m;
}

void validate_config(const ModelConfig &c) {
    if (c.width < 1) throw std::invalid_argument("model width must be >= 1");
    if (c.vocab_size < 2) throw std::invalid_argument("vocab must hold pad plus a token");
    if (c.heads < 1) throw std::invalid_argument("heads must be >= 1");
    if (c.vars.emb <= 0 || c.vars.hidden <= 0 || c.vars.head <= 0 || c.vars.recur <= 0)
        throw std::invalid_argument("variances must be positive");
    if (c.kind == ModelKind::Cnn) {
        if (c.kernel_size < 1) throw std::invalid_argument("kernel size must be >= 1");
        if (c.cnn_token_slot < 0 || c.cnn_token_slot >= c.kernel_size)
            throw std::invalid_argument("cnn token slot out of range");
        if (c.activation == Activation::Step)
            throw std::invalid_argument("step is not a trainable activation");
    }
    if (c.kind == ModelKind::Mlp && c.activation == Activation::Step)
        throw std::invalid_argument("step is not a trainable activation");
    if (c.kind == ModelKind::Sa && c.max_positions < 1)
        throw std::invalid_argument("max positions must be >= 1");
}

} // namespace

Model::Model(const ModelConfig &config, RngStream rng) : config_(config) {
    validate_config(config);
    const auto d = static_cast<std::size_t>(config.width);
    const auto v = static_cast<std::size_t>(config.vocab_size);

    emb = gaussian_matrix(d, v, config.vars.emb, rng.split(0));
    for (std::size_t r = 0; r < d; ++r) emb(r, 0) = 0.0; // pad embeds to zero

    switch (config.kind) {
    case ModelKind::Mlp:
    case ModelKind::Mv:
        hidden = gaussian_matrix(d, d, config.vars.hidden, rng.split(1));
        break;
    case ModelKind::Lrnn:
        hidden = gaussian_matrix(d, d, config.vars.hidden, rng.split(1));
        recur = gaussian_matrix(d, d, config.vars.recur, rng.split(3));
        break;
    case ModelKind::Cnn: {
        RngStream conv_rng = rng.split(2);
        conv.reserve(static_cast<std::size_t>(config.kernel_size));
        for (int k = 0; k < config.kernel_size; ++k)
            conv.push_back(gaussian_matrix(d, d, config.vars.hidden,
                                           conv_rng.split(static_cast<std::uint64_t>(k))));
        break;
    }
    case ModelKind::Sa:
        pos = gaussian_matrix(static_cast<std::size_t>(config.max_positions), d, config.vars.emb,
                              rng.split(5));
        break;
    }
    head = gaussian_matrix(static_cast<std::size_t>(config.heads), d, config.vars.head,
                           rng.split(4));
}

std::vector<std::pair<std::string, Matrix *>> Model::trainable_blocks() {
    std::vector<std::pair<std::string, Matrix *>> out;
    out.emplace_back("emb", &emb);
    switch (config_.kind) {
    case ModelKind::Mlp:
    case ModelKind::Mv: out.emplace_back("hidden", &hidden); break;
    case ModelKind::Lrnn:
        out.emplace_back("hidden", &hidden);
        out.emplace_back("recur", &recur);
        break;
    case ModelKind::Cnn:
        for (std::size_t k = 0; k < conv.size(); ++k)
            out.emplace_back("conv" + std::to_string(k), &conv[k]);
        break;
    case ModelKind::Sa: break; // positional table stays frozen
    }
    out.emplace_back("head", &head);
    return out;
}

std::vector<std::pair<std::string, const Matrix *>> Model::trainable_blocks() const {
    std::vector<std::pair<std::string, const Matrix *>> out;
    for (auto &[name, m] : const_cast<Model *>(this)->trainable_blocks()) out.emplace_back(name, m);
    return out;
}

FlatGradient Model::zero_gradient() const {
    FlatGradient g;
    for (const auto &[name, m] : trainable_blocks())
        g.blocks.emplace_back(name, Matrix(m->rows(), m->cols()));
    return g;
}

namespace {

std::vector<double> dispatch_feature(const Model &m, const Instance &x,
                                     const std::vector<double> *vw, FlatGradient *grad) {
    switch (m.kind()) {
    case ModelKind::Mlp: return detail::mlp_feature(m, x.tokens, vw, grad);
    case ModelKind::Cnn: return detail::cnn_feature(m, x.tokens, vw, grad);
    case ModelKind::Sa: return detail::sa_feature(m, x.tokens, vw, grad);
    case ModelKind::Mv: return detail::mv_feature(m, x.tokens, vw, grad);
    case ModelKind::Lrnn: return detail::lrnn_feature(m, x.tokens, vw, grad);
    }
    throw std::invalid_argument("bad model kind enum");
}

std::vector<double> dispatch_unit_feature(const Model &m, const TrackedUnit &u,
                                          const std::vector<double> *vw, FlatGradient *grad) {
    const std::string pairing =
        model_kind_name(m.kind()) + " model with " + unit_kind_name(u.kind) + " unit";
    switch (m.kind()) {
    case ModelKind::Mlp:
        if (u.kind == TrackedUnit::Kind::Token)
            return detail::mlp_feature(m, u.tokens, vw, grad);
        break;
    case ModelKind::Cnn:
        if (u.kind == TrackedUnit::Kind::Window)
            return detail::cnn_window_feature(m, u.tokens, vw, grad);
        if (u.kind == TrackedUnit::Kind::Token) {
            std::vector<int> window(static_cast<std::size_t>(m.config().kernel_size), Vocab::kPadId);
            window[static_cast<std::size_t>(m.config().cnn_token_slot)] = u.tokens[0];
            return detail::cnn_window_feature(m, window, vw, grad);
        }
        break;
    case ModelKind::Sa:
        if (u.kind == TrackedUnit::Kind::Token)
            return detail::sa_token_feature(m, u.tokens[0], vw, grad);
        break;
    case ModelKind::Mv:
        if (u.kind == TrackedUnit::Kind::Bigram)
            return detail::mv_bigram_feature(m, u.tokens[0], u.tokens[1], vw, grad);
        break;
    case ModelKind::Lrnn:
        if (u.kind == TrackedUnit::Kind::TokenPosition)
            return detail::lrnn_token_pos_feature(m, u.tokens[0], u.distance, vw, grad);
        break;
    }
    throw UnsupportedError("unsupported pairing: " + pairing);
}

} // namespace

std::vector<double> Model::forward(const Instance &x) const {
    return matvec(head, dispatch_feature(*this, x, nullptr, nullptr));
}

double Model::binary_score(const Instance &x) const {
    if (heads() != 1) throw std::invalid_argument("binary score needs a single-head model");
    return forward(x)[0];
}

FlatGradient Model::score_gradient(const Instance &x, std::span<const double> head_weights) const {
    if (head_weights.size() != static_cast<std::size_t>(heads()))
        throw std::invalid_argument("head weight count mismatch");
    FlatGradient grad = zero_gradient();
    const std::vector<double> vw = matvec_t(head, head_weights);
    const std::vector<double> feat = dispatch_feature(*this, x, &vw, &grad);
    grad.block("head").add_outer(head_weights, feat, 1.0);
    return grad;
}

std::vector<double> Model::unit_score(const TrackedUnit &unit) const {
    return matvec(head, dispatch_unit_feature(*this, unit, nullptr, nullptr));
}

double Model::binary_unit_score(const TrackedUnit &unit) const {
    if (heads() != 1) throw std::invalid_argument("binary score needs a single-head model");
    return unit_score(unit)[0];
}

FlatGradient Model::unit_score_gradient(const TrackedUnit &unit,
                                        std::span<const double> head_weights) const {
    if (head_weights.size() != static_cast<std::size_t>(heads()))
        throw std::invalid_argument("head weight count mismatch");
    FlatGradient grad = zero_gradient();
    const std::vector<double> vw = matvec_t(head, head_weights);
    const std::vector<double> feat = dispatch_unit_feature(*this, unit, &vw, &grad);
    grad.block("head").add_outer(head_weights, feat, 1.0);
    return grad;
}

Matrix Model::sa_attention(const Instance &x) const {
    if (kind() != ModelKind::Sa) throw UnsupportedError("attention weights exist only for sa");
    return detail::sa_attention_matrix(*this, x.tokens);
}

bool Model::supports_unit(const TrackedUnit &unit) const {
    switch (kind()) {
    case ModelKind::Mlp: return unit.kind == TrackedUnit::Kind::Token;
    case ModelKind::Cnn:
        return unit.kind == TrackedUnit::Kind::Token || unit.kind == TrackedUnit::Kind::Window;
    case ModelKind::Sa: return unit.kind == TrackedUnit::Kind::Token;
    case ModelKind::Mv: return unit.kind == TrackedUnit::Kind::Bigram;
    case ModelKind::Lrnn: return unit.kind == TrackedUnit::Kind::TokenPosition;
    }
    return false;
}

namespace detail {

void validate_tokens(const Model &m, std::span<const int> tokens, bool allow_pad) {
    if (tokens.empty()) throw std::invalid_argument("empty token sequence");
    for (int t : tokens) {
        if (t == Vocab::kPadId && allow_pad) continue;
        if (t < 1 || t >= m.config().vocab_size)
            throw std::invalid_argument("token id out of range: " + std::to_string(t));
    }
}

std::vector<double> scaled_embedding(const Model &m, int token) {
    std::vector<double> e = m.emb.col_copy(static_cast<std::size_t>(token));
    scale_inplace(e, 1.0 / std::sqrt(static_cast<double>(m.width())));
    return e;
}

} // namespace detail

} // namespace ntklens
