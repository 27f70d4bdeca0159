#pragma once

#include "ntklens/vocab.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace ntklens {

struct CorpusError : std::runtime_error {
    explicit CorpusError(const std::string &what) : std::runtime_error(what) {}
};

// One labelled token sequence. `label` is a class id in [0, num_classes).
// For binary corpora class 1 is the positive class (+1) and class 0 the
// negative one (-1).
struct Instance {
    std::vector<int> tokens;
    int label = 0;
};

struct Corpus {
    std::vector<Instance> instances;
    int num_classes = 2;

    std::size_t size() const { return instances.size(); }
};

// y in {-1,+1} for binary corpora.
inline int binary_label(const Instance &x) { return x.label == 1 ? 1 : -1; }

// TSV format: "<label>\t<token> <token> ...". Label is an integer class id,
// or the literals +1/-1 which map to classes 1/0. Lines that are empty or
// start with '#' are skipped.
//
// When `fixed_vocab` is true, tokens missing from `vocab` raise CorpusError
// (message names the token and line); otherwise they are added.
Corpus load_tsv(const std::string &path, Vocab &vocab, bool fixed_vocab = false);
void save_tsv(const std::string &path, const Corpus &corpus, const Vocab &vocab);

// Parses one in-memory TSV body; used by load_tsv and the tests.
Corpus parse_tsv(const std::string &text, Vocab &vocab, bool fixed_vocab,
                 const std::string &origin = "<memory>");

// Convenience for building instances in code; adds unknown tokens.
Instance make_instance(Vocab &vocab, const std::vector<std::string> &tokens, int label);

} // namespace ntklens
