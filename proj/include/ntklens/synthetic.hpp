#pragma once

#include "ntklens/corpus.hpp"
#include "ntklens/rng.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ntklens {

// Binary corpus with one class-specific token planted at a fixed distance
// from the last token; all other positions hold shared filler tokens.
// Planted tokens are named pos0.., neg0.., fillers f0...
struct PositionalSpec {
    int n_per_class = 1000;
    int distance = 2;
    int planted_per_class = 5;
    int filler_vocab = 50;
    int min_length = 5;
    int max_length = 9;
};

Corpus gen_synthetic_positional(const PositionalSpec &spec, Vocab &vocab, RngStream rng);
std::vector<std::string> positional_planted_names(const PositionalSpec &spec, int cls);

// Multi-class corpus of mixed class-specific and filler tokens. Each
// position draws an own-class token with probability own_weight, a token of
// some other class with other_weight, a filler otherwise. The last two
// positions can be forced to own-class tokens so last-token features stay
// class-pure. Class tokens are named pos0../neg0.. (binary) or c<k>w<i>,
// fillers f0...
struct MixtureSpec {
    int num_classes = 2;
    int n_per_class = 300;
    int tokens_per_class = 10;
    int filler_vocab = 30;
    double own_weight = 0.6;
    double other_weight = 0.1;
    // One shared range, or one per class (class lengths may differ).
    std::vector<std::pair<int, int>> length_ranges = {{8, 12}};
    bool own_class_tail = true;
};

Corpus gen_synthetic_mixture(const MixtureSpec &spec, Vocab &vocab, RngStream rng);
std::vector<std::string> mixture_class_token_names(const MixtureSpec &spec, int cls);

// Binary corpus whose class signal splits into two tiers: every instance
// ends in one of a few high-frequency anchor tokens of its class, and a
// handful of rare class tokens are inserted independently with a small
// probability at a random earlier position. The anchors absorb the margin
// so the rare tokens stay in the kernel regime; their drift is then driven
// by the shared mean kernel, which the class imbalance n_pos - n_neg tilts
// toward the positive class. Tokens are named anchorp0../anchorn0..,
// posr0../negr0.., fillers f0...
struct AnchoredSpec {
    int n_pos = 208;
    int n_neg = 192;
    int length = 7; // includes the final anchor slot
    int anchors_per_class = 2;
    int rare_per_class = 4;
    double insert_prob = 0.52;
    int filler_vocab = 20;
};

Corpus gen_synthetic_anchored(const AnchoredSpec &spec, Vocab &vocab, RngStream rng);
std::vector<std::string> anchored_rare_names(const AnchoredSpec &spec, int cls);

// Binary negation corpus. Instances are "ADJ NOUN" phrases plus negated
// variants "not ADJ NOUN" with flipped label. Counts are chosen so the
// token `not` appears in negative instances roughly 2.57x as often as in
// positive ones. Adjectives are named good0.. / bad0.., nouns noun0...
struct NegationSpec {
    int n_phrases = 10; // adjectives per polarity
    int base_pos = 500; // "good noun" labelled +1
    int base_neg = 372; // "bad noun"  labelled -1
    int negated_pos = 209; // "not good noun" labelled -1
    int negated_neg = 81;  // "not bad noun"  labelled +1
    int noun_vocab = 8;
};

Corpus gen_synthetic_negation(const NegationSpec &spec, Vocab &vocab, RngStream rng);
std::vector<std::string> negation_adjective_names(const NegationSpec &spec, int cls);

} // namespace ntklens
