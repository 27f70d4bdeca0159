#include "ntklens/synthetic.hpp"

#include <algorithm>
#include <stdexcept>

namespace ntklens {
namespace {

std::vector<int> add_names(Vocab &vocab, const std::vector<std::string> &names) {
    std::vector<int> ids;
    ids.reserve(names.size());
    for (const auto &n : names) ids.push_back(vocab.add(n));
    return ids;
}

std::vector<std::string> numbered(const std::string &prefix, int n) {
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

int pick(const std::vector<int> &ids, RngStream &rng) {
    return ids[rng.next_below(ids.size())];
}

void shuffle_instances(std::vector<Instance> &v, RngStream &rng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rng.next_below(i)]);
}

} // namespace

std::vector<std::string> positional_planted_names(const PositionalSpec &spec, int cls) {
    return numbered(cls == 1 ? "pos" : "neg", spec.planted_per_class);
}

Corpus gen_synthetic_positional(const PositionalSpec &spec, Vocab &vocab, RngStream rng) {
    if (spec.min_length <= spec.distance)
        throw std::invalid_argument("length range too small for planted distance");
    if (spec.min_length < 1 || spec.max_length < spec.min_length)
        throw std::invalid_argument("bad length range");
    if (spec.n_per_class < 1 || spec.planted_per_class < 1 || spec.filler_vocab < 1)
        throw std::invalid_argument("bad positional spec counts");

    const std::vector<int> pos_ids = add_names(vocab, positional_planted_names(spec, 1));
    const std::vector<int> neg_ids = add_names(vocab, positional_planted_names(spec, 0));
    const std::vector<int> fillers = add_names(vocab, numbered("f", spec.filler_vocab));

    Corpus corpus;
    corpus.num_classes = 2;
    const int span = spec.max_length - spec.min_length + 1;
    for (int cls = 0; cls < 2; ++cls) {
        const auto &planted = cls == 1 ? pos_ids : neg_ids;
        for (int i = 0; i < spec.n_per_class; ++i) {
            const int len = spec.min_length + static_cast<int>(rng.next_below(span));
            Instance inst;
            inst.label = cls;
            inst.tokens.resize(static_cast<std::size_t>(len));
            for (auto &t : inst.tokens) t = pick(fillers, rng);
            inst.tokens[static_cast<std::size_t>(len - 1 - spec.distance)] = pick(planted, rng);
            corpus.instances.push_back(std::move(inst));
        }
    }
    shuffle_instances(corpus.instances, rng);
    return corpus;
}

std::vector<std::string> mixture_class_token_names(const MixtureSpec &spec, int cls) {
    if (spec.num_classes == 2)
        return numbered(cls == 1 ? "pos" : "neg", spec.tokens_per_class);
    return numbered("c" + std::to_string(cls) + "w", spec.tokens_per_class);
}

Corpus gen_synthetic_mixture(const MixtureSpec &spec, Vocab &vocab, RngStream rng) {
    if (spec.num_classes < 2) throw std::invalid_argument("need at least two classes");
    if (spec.length_ranges.empty() ||
        (spec.length_ranges.size() != 1 &&
         spec.length_ranges.size() != static_cast<std::size_t>(spec.num_classes)))
        throw std::invalid_argument("length_ranges must have one entry or one per class");
    if (spec.own_weight + spec.other_weight > 1.0 || spec.own_weight <= 0.0 ||
        spec.other_weight < 0.0)
        throw std::invalid_argument("bad mixture weights");

    std::vector<std::vector<int>> class_ids;
    for (int c = 0; c < spec.num_classes; ++c)
        class_ids.push_back(add_names(vocab, mixture_class_token_names(spec, c)));
    const std::vector<int> fillers = add_names(vocab, numbered("f", spec.filler_vocab));

    Corpus corpus;
    corpus.num_classes = spec.num_classes;
    for (int cls = 0; cls < spec.num_classes; ++cls) {
        const auto [lo, hi] =
            spec.length_ranges[spec.length_ranges.size() == 1 ? 0 : static_cast<std::size_t>(cls)];
        if (lo < 2 || hi < lo) throw std::invalid_argument("bad length range");
        for (int i = 0; i < spec.n_per_class; ++i) {
            const int len = lo + static_cast<int>(rng.next_below(hi - lo + 1));
            Instance inst;
            inst.label = cls;
            inst.tokens.resize(static_cast<std::size_t>(len));
            for (auto &t : inst.tokens) {
                const double u = rng.next_unit();
                if (u < spec.own_weight) {
                    t = pick(class_ids[static_cast<std::size_t>(cls)], rng);
                } else if (u < spec.own_weight + spec.other_weight) {
                    int other = static_cast<int>(rng.next_below(spec.num_classes - 1));
                    if (other >= cls) ++other;
                    t = pick(class_ids[static_cast<std::size_t>(other)], rng);
                } else {
                    t = pick(fillers, rng);
                }
            }
            if (spec.own_class_tail) {
                inst.tokens[static_cast<std::size_t>(len - 1)] =
                    pick(class_ids[static_cast<std::size_t>(cls)], rng);
                inst.tokens[static_cast<std::size_t>(len - 2)] =
                    pick(class_ids[static_cast<std::size_t>(cls)], rng);
            }
            corpus.instances.push_back(std::move(inst));
        }
    }
    shuffle_instances(corpus.instances, rng);
    return corpus;
}

std::vector<std::string> anchored_rare_names(const AnchoredSpec &spec, int cls) {
    return numbered(cls == 1 ? "posr" : "negr", spec.rare_per_class);
}

Corpus gen_synthetic_anchored(const AnchoredSpec &spec, Vocab &vocab, RngStream rng) {
    if (spec.length < 2 || spec.n_pos < 1 || spec.n_neg < 1)
        throw std::invalid_argument("bad anchored spec counts");
    if (spec.anchors_per_class < 1 || spec.rare_per_class < 1 || spec.filler_vocab < 1)
        throw std::invalid_argument("bad anchored spec counts");
    if (spec.insert_prob < 0.0 || spec.insert_prob > 1.0)
        throw std::invalid_argument("insert_prob must be in [0, 1]");

    const std::vector<int> pos_anchor = add_names(vocab, numbered("anchorp", spec.anchors_per_class));
    const std::vector<int> neg_anchor = add_names(vocab, numbered("anchorn", spec.anchors_per_class));
    const std::vector<int> pos_rare = add_names(vocab, anchored_rare_names(spec, 1));
    const std::vector<int> neg_rare = add_names(vocab, anchored_rare_names(spec, 0));
    const std::vector<int> fillers = add_names(vocab, numbered("f", spec.filler_vocab));

    Corpus corpus;
    corpus.num_classes = 2;
    for (int cls = 0; cls < 2; ++cls) {
        const auto &anchors = cls == 1 ? pos_anchor : neg_anchor;
        const auto &rares = cls == 1 ? pos_rare : neg_rare;
        const int n = cls == 1 ? spec.n_pos : spec.n_neg;
        for (int i = 0; i < n; ++i) {
            Instance inst;
            inst.label = cls;
            inst.tokens.resize(static_cast<std::size_t>(spec.length - 1));
            for (auto &t : inst.tokens) t = pick(fillers, rng);
            for (const int r : rares)
                if (rng.next_unit() < spec.insert_prob)
                    inst.tokens.insert(
                        inst.tokens.begin() +
                            static_cast<std::ptrdiff_t>(rng.next_below(inst.tokens.size() + 1)),
                        r);
            // anchor always holds the last slot, rotated so each anchor
            // token covers half its class
            inst.tokens.push_back(anchors[static_cast<std::size_t>(i) % anchors.size()]);
            corpus.instances.push_back(std::move(inst));
        }
    }
    shuffle_instances(corpus.instances, rng);
    return corpus;
}

std::vector<std::string> negation_adjective_names(const NegationSpec &spec, int cls) {
    return numbered(cls == 1 ? "good" : "bad", spec.n_phrases);
}

Corpus gen_synthetic_negation(const NegationSpec &spec, Vocab &vocab, RngStream rng) {
    if (spec.n_phrases < 1 || spec.noun_vocab < 1)
        throw std::invalid_argument("bad negation spec counts");

    const int not_id = vocab.add("not");
    const std::vector<int> good = add_names(vocab, negation_adjective_names(spec, 1));
    const std::vector<int> bad = add_names(vocab, negation_adjective_names(spec, 0));
    const std::vector<int> nouns = add_names(vocab, numbered("noun", spec.noun_vocab));

    Corpus corpus;
    corpus.num_classes = 2;
    // Spread instances over adjectives round-robin so every adjective keeps
    // the same base/negated proportion.
    const auto emit = [&](const std::vector<int> &adjs, int count, bool negated, int label) {
        for (int i = 0; i < count; ++i) {
            Instance inst;
            inst.label = label;
            if (negated) inst.tokens.push_back(not_id);
            inst.tokens.push_back(adjs[static_cast<std::size_t>(i) % adjs.size()]);
            inst.tokens.push_back(pick(nouns, rng));
            corpus.instances.push_back(std::move(inst));
        }
    };
    emit(good, spec.base_pos, false, 1);
    emit(bad, spec.base_neg, false, 0);
    emit(good, spec.negated_pos, true, 0);
    emit(bad, spec.negated_neg, true, 1);
    shuffle_instances(corpus.instances, rng);
    return corpus;
}

} // namespace ntklens
