#include "ntklens/kernels.hpp"

#include "kernels_detail.hpp"
#include "ntklens/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ntklens {
namespace {

std::vector<int> token_as_window(const KernelSpec &spec, int token) {
    std::vector<int> window(static_cast<std::size_t>(spec.kernel_size), Vocab::kPadId);
    window[static_cast<std::size_t>(spec.cnn_token_slot)] = token;
    return window;
}

Matrix alpha_for(const Instance &x, const KernelSpec &spec, std::uint64_t salt) {
    if (spec.sa_uniform_alpha) return uniform_alpha(x.tokens.size());
    return estimate_alpha(x, spec.vars, spec.alpha_probe_width, spec.alpha_samples,
                          RngStream(spec.seed, 0xa1fa).split(salt));
}

double converged_unit_value(const KernelSpec &spec, const TrackedUnit &unit, const Instance &x,
                            const Matrix *alpha) {
    const std::string pairing =
        model_kind_name(spec.model) + " kernel with " + unit_kind_name(unit.kind) + " unit";
    switch (spec.model) {
    case ModelKind::Mlp:
        if (unit.kind == TrackedUnit::Kind::Token) {
            if (spec.activation == Activation::Relu)
                return converged_mlp_token(unit.tokens[0], x, spec.vars);
            return converged_mlp_variant(spec.activation, unit.tokens[0], x, spec.vars,
                                         spec.mc_samples);
        }
        break;
    case ModelKind::Cnn:
        if (unit.kind == TrackedUnit::Kind::Window)
            return converged_cnn_window(unit.tokens, x, spec.vars);
        if (unit.kind == TrackedUnit::Kind::Token)
            return converged_cnn_window(token_as_window(spec, unit.tokens[0]), x, spec.vars);
        break;
    case ModelKind::Sa:
        if (unit.kind == TrackedUnit::Kind::Token)
            return converged_sa_token(unit.tokens[0], x, spec.vars, *alpha);
        break;
    case ModelKind::Mv:
        if (unit.kind == TrackedUnit::Kind::Bigram)
            return converged_mv_bigram(unit.tokens[0], unit.tokens[1], x, spec.vars);
        break;
    case ModelKind::Lrnn:
        if (unit.kind == TrackedUnit::Kind::TokenPosition)
            return converged_lrnn_token_pos(unit.tokens[0], unit.distance, x, spec.vars);
        break;
    }
    throw UnsupportedError("unsupported pairing: " + pairing);
}

ModelConfig model_config_for(const KernelSpec &spec, const Vocab &vocab, int max_len) {
    ModelConfig c;
    c.kind = spec.model;
    c.width = spec.width;
    c.vocab_size = vocab.size();
    c.heads = 1;
    c.vars = spec.vars;
    c.activation = spec.activation;
    c.kernel_size = spec.kernel_size;
    c.cnn_token_slot = spec.cnn_token_slot;
    c.max_positions = std::max(spec.max_positions, max_len);
    return c;
}

std::size_t gradient_entries(const Model &model) {
    std::size_t n = 0;
    for (const auto &[name, m] : model.trainable_blocks()) n += m->size();
    return n;
}

void fill_empirical(KernelMatrix &km, const std::vector<TrackedUnit> &units,
                    const Corpus &corpus, const Vocab &vocab, const KernelSpec &spec) {
    if (spec.seeds < 1) throw std::invalid_argument("need at least one seed");
    int max_len = 1;
    for (const auto &inst : corpus.instances)
        max_len = std::max(max_len, static_cast<int>(inst.tokens.size()));
    const ModelConfig mc = model_config_for(spec, vocab, max_len);

    const std::array<double, 1> w{1.0};
    for (int s = 0; s < spec.seeds; ++s) {
        const Model model(mc, RngStream(spec.seed).split(static_cast<std::uint64_t>(s)));
        // Hold only as many unit gradients as fit a ~1.2e8-double budget so
        // wide models stay inside memory; instance gradients are recomputed
        // once per chunk.
        const std::size_t per_grad = std::max<std::size_t>(gradient_entries(model), 1);
        const std::size_t chunk = std::max<std::size_t>(1, 120'000'000 / per_grad);
        for (std::size_t u0 = 0; u0 < units.size(); u0 += chunk) {
            const std::size_t u1 = std::min(units.size(), u0 + chunk);
            std::vector<FlatGradient> unit_grads;
            unit_grads.reserve(u1 - u0);
            for (std::size_t u = u0; u < u1; ++u)
                unit_grads.push_back(model.unit_score_gradient(units[u], w));
            for (std::size_t i = 0; i < corpus.instances.size(); ++i) {
                const FlatGradient gx = model.score_gradient(corpus.instances[i], w);
                for (std::size_t u = u0; u < u1; ++u)
                    km.values(u, i) += unit_grads[u - u0].dot(gx);
            }
        }
    }
    scale_inplace(km.values.flat(), 1.0 / static_cast<double>(spec.seeds));
}

} // namespace

KernelMatrix build_kernel_matrix(const std::vector<TrackedUnit> &units, const Corpus &corpus,
                                 const Vocab &vocab, const KernelSpec &spec) {
    if (units.empty()) throw std::invalid_argument("no units given");
    if (corpus.instances.empty()) throw std::invalid_argument("empty corpus");

    KernelMatrix km;
    km.units = units;
    km.num_instances = corpus.instances.size();
    km.values = Matrix(units.size(), corpus.instances.size());

    if (spec.provenance == KernelProvenance::Empirical) {
        km.provenance = "empirical(d=" + std::to_string(spec.width) +
                        ",seeds=" + std::to_string(spec.seeds) + ")";
        fill_empirical(km, units, corpus, vocab, spec);
        return km;
    }

    km.provenance = "converged";
    if (spec.model == ModelKind::Cnn && spec.activation != Activation::Relu)
        throw UnsupportedError("no analytic window kernel for activation " +
                               activation_name(spec.activation));
    const bool needs_alpha = spec.model == ModelKind::Sa;
    for (std::size_t i = 0; i < corpus.instances.size(); ++i) {
        const Instance &x = corpus.instances[i];
        Matrix alpha;
        if (needs_alpha) alpha = alpha_for(x, spec, static_cast<std::uint64_t>(i));
        for (std::size_t u = 0; u < units.size(); ++u)
            km.values(u, i) =
                converged_unit_value(spec, units[u], x, needs_alpha ? &alpha : nullptr);
    }
    return km;
}

Matrix build_instance_kernel(const Corpus &corpus, const KernelSpec &spec) {
    if (spec.provenance != KernelProvenance::Converged)
        throw UnsupportedError("instance kernels are built from converged formulas");
    const std::size_t m = corpus.instances.size();
    if (m == 0) throw std::invalid_argument("empty corpus");
    if (spec.model == ModelKind::Cnn && spec.activation != Activation::Relu)
        throw UnsupportedError("no analytic window kernel for activation " +
                               activation_name(spec.activation));
    Matrix k(m, m);

    std::vector<Matrix> alphas;
    if (spec.model == ModelKind::Sa) {
        alphas.reserve(m);
        for (std::size_t i = 0; i < m; ++i)
            alphas.push_back(alpha_for(corpus.instances[i], spec, static_cast<std::uint64_t>(i)));
    }

    const auto value = [&](std::size_t a, std::size_t b) -> double {
        const Instance &xa = corpus.instances[a];
        const Instance &xb = corpus.instances[b];
        switch (spec.model) {
        case ModelKind::Mlp: {
            if (spec.activation == Activation::Relu)
                return converged_mlp_instance(xa, xb, spec.vars);
            double acc = 0.0;
            for (int t : xa.tokens)
                acc += converged_mlp_variant(spec.activation, t, xb, spec.vars, spec.mc_samples);
            return acc;
        }
        case ModelKind::Cnn: {
            // Sum of window kernels over the padded windows of xa.
            const int K = spec.kernel_size;
            const auto l = static_cast<int>(xa.tokens.size());
            double acc = 0.0;
            for (int j = 0; j < l + K - 1; ++j) {
                std::vector<int> window(static_cast<std::size_t>(K), Vocab::kPadId);
                for (int k = 0; k < K; ++k) {
                    const int idx = j + k - (K - 1);
                    if (idx >= 0 && idx < l) window[static_cast<std::size_t>(k)] =
                        xa.tokens[static_cast<std::size_t>(idx)];
                }
                acc += detail::cnn_window_value(window, xb, spec.vars, false);
            }
            return acc;
        }
        case ModelKind::Sa: {
            // Double attention weighting over both instances.
            const Matrix &aa = alphas[a];
            double acc = 0.0;
            for (std::size_t i = 0; i < xa.tokens.size(); ++i)
                for (std::size_t j = 0; j < xa.tokens.size(); ++j)
                    acc += aa(i, j) *
                           converged_sa_token(xa.tokens[j], xb, spec.vars, alphas[b]);
            return acc;
        }
        case ModelKind::Mv: {
            double acc = 0.0;
            for (std::size_t j = 0; j + 1 < xa.tokens.size(); ++j)
                acc += converged_mv_bigram(xa.tokens[j], xa.tokens[j + 1], xb, spec.vars);
            return acc;
        }
        case ModelKind::Lrnn: {
            const int depth = static_cast<int>(std::min(xa.tokens.size(), xb.tokens.size()));
            double acc = 0.0;
            for (int kd = 0; kd < depth; ++kd)
                acc += converged_lrnn_token_pos(
                    xa.tokens[xa.tokens.size() - 1 - static_cast<std::size_t>(kd)], kd, xb,
                    spec.vars);
            return acc;
        }
        }
        throw std::invalid_argument("bad model kind enum");
    };

    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) k(a, b) = value(a, b);
    return k;
}

std::string kernel_csv(const KernelMatrix &km, const Vocab &vocab) {
    std::ostringstream out;
    out << "unit,instance_idx,value,provenance\n";
    out.precision(17);
    for (std::size_t u = 0; u < km.units.size(); ++u)
        for (std::size_t i = 0; i < km.num_instances; ++i)
            out << km.units[u].display(vocab) << ',' << i << ',' << km.values(u, i) << ','
                << km.provenance << '\n';
    return out.str();
}

void write_kernel_csv(const std::string &path, const KernelMatrix &km, const Vocab &vocab) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write kernel csv: " + path);
    out << kernel_csv(km, vocab);
    if (!out) throw ConfigError("kernel csv write failed: " + path);
}

ProbeGrid make_probe_grid(ModelKind kind, int kernel_size) {
    ProbeGrid grid;
    const int alpha = grid.vocab.add("alpha");
    const int beta = grid.vocab.add("beta");
    const int gamma = grid.vocab.add("gamma");
    const int delta = grid.vocab.add("delta");
    const int edge = grid.vocab.add("edge");

    grid.instances.push_back({{alpha, beta, gamma, alpha, beta}, 1});
    grid.instances.push_back({{gamma, delta, delta, alpha}, 0});
    grid.instances.push_back({{beta, beta, beta, edge, gamma, delta}, 1});
    grid.instances.push_back({{edge, alpha, edge, beta}, 0});

    switch (kind) {
    case ModelKind::Mlp:
    case ModelKind::Sa:
        for (int id : {alpha, beta, gamma, delta, edge})
            grid.units.push_back(TrackedUnit::token(id));
        break;
    case ModelKind::Cnn: {
        if (kernel_size != 3) throw std::invalid_argument("probe grid is built for K = 3");
        const int pad = Vocab::kPadId;
        grid.units.push_back(TrackedUnit::window({pad, alpha, beta}));
        grid.units.push_back(TrackedUnit::window({alpha, beta, gamma}));
        grid.units.push_back(TrackedUnit::window({beta, gamma, delta}));
        grid.units.push_back(TrackedUnit::window({gamma, delta, edge}));
        grid.units.push_back(TrackedUnit::window({delta, edge, alpha}));
        break;
    }
    case ModelKind::Mv:
        grid.units.push_back(TrackedUnit::bigram(alpha, beta));
        grid.units.push_back(TrackedUnit::bigram(beta, gamma));
        grid.units.push_back(TrackedUnit::bigram(delta, alpha));
        grid.units.push_back(TrackedUnit::bigram(beta, beta));
        grid.units.push_back(TrackedUnit::bigram(edge, alpha));
        break;
    case ModelKind::Lrnn:
        grid.units.push_back(TrackedUnit::token_position(beta, 0));
        grid.units.push_back(TrackedUnit::token_position(alpha, 1));
        grid.units.push_back(TrackedUnit::token_position(gamma, 2));
        grid.units.push_back(TrackedUnit::token_position(delta, 1));
        grid.units.push_back(TrackedUnit::token_position(edge, 3));
        break;
    }
    return grid;
}

double relative_l1_error(const Matrix &got, const Matrix &want) {
    if (!got.same_shape(want)) throw std::invalid_argument("relative error shape mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < got.rows(); ++i)
        for (std::size_t j = 0; j < got.cols(); ++j) {
            num += std::abs(got(i, j) - want(i, j));
            den += std::abs(want(i, j));
        }
    if (den == 0.0) throw std::invalid_argument("relative error against all-zero reference");
    return num / den;
}

} // namespace ntklens
