#include "ntklens/cooccurrence.hpp"
#include "ntklens/corpus.hpp"
#include "ntklens/synthetic.hpp"
#include "ntklens/vocab.hpp"

#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>

using namespace ntklens;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string &name) {
        path = (std::filesystem::temp_directory_path() / name).string();
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("vocab reserves pad at id 0") {
    Vocab v;
    CHECK(v.size() == 1);
    const int a = v.add("good");
    CHECK(a == 1);
    CHECK(v.add("good") == a);
    CHECK(v.id("good") == a);
    CHECK(v.id("absent") == -1);
    CHECK(v.token(Vocab::kPadId) != "good");
}

TEST_CASE("tsv parsing: labels, comments, errors") {
    Vocab v;
    const Corpus c = parse_tsv("+1\tgood movie\n# comment\n\n-1\tbad movie\n", v, false);
    REQUIRE(c.instances.size() == 2);
    CHECK(c.num_classes == 2);
    CHECK(c.instances[0].label == 1);
    CHECK(c.instances[0].tokens.size() == 2);
    CHECK(c.instances[1].label == 0);
    CHECK(binary_label(c.instances[0]) == 1);
    CHECK(binary_label(c.instances[1]) == -1);
    CHECK(v.id("movie") == c.instances[0].tokens[1]);

    Vocab fixed;
    fixed.add("good");
    CHECK_THROWS_WITH_AS(parse_tsv("+1\tgood surprise\n", fixed, true),
                         doctest::Contains("surprise"), CorpusError);
    CHECK_THROWS_AS(parse_tsv("nolabel\n", v, false), CorpusError);
}

TEST_CASE("tsv round trip preserves ids and labels") {
    Vocab vocab;
    MixtureSpec spec;
    spec.n_per_class = 50;
    const Corpus corpus = gen_synthetic_mixture(spec, vocab, RngStream(3));

    TempFile f("ntklens_roundtrip.tsv");
    save_tsv(f.path, corpus, vocab);
    Vocab vocab2;
    const Corpus back = load_tsv(f.path, vocab2);

    REQUIRE(back.instances.size() == corpus.instances.size());
    for (std::size_t i = 0; i < corpus.instances.size(); ++i) {
        CHECK(back.instances[i].label == corpus.instances[i].label);
        REQUIRE(back.instances[i].tokens.size() == corpus.instances[i].tokens.size());
        for (std::size_t j = 0; j < corpus.instances[i].tokens.size(); ++j)
            CHECK(vocab2.token(back.instances[i].tokens[j]) ==
                  vocab.token(corpus.instances[i].tokens[j]));
    }
}

TEST_CASE("extraction: counts, ratio and Laplace floor") {
    Vocab v;
    Corpus c;
    // "e" 9 times in class 1, 3 times in class 0; "f" balanced
    for (int i = 0; i < 3; ++i) c.instances.push_back(make_instance(v, {"e", "e", "e"}, 1));
    c.instances.push_back(make_instance(v, {"e", "e", "e"}, 0));
    c.instances.push_back(make_instance(v, {"f", "f"}, 1));
    c.instances.push_back(make_instance(v, {"f", "f"}, 0));

    const CooccurrenceTable t = extract_cooccurrence(c, TrackedUnit::Kind::Token, 3.0);
    REQUIRE(t.extracted.size() == 1);
    CHECK(t.extracted[0].unit == TrackedUnit::token(v.id("e")));
    CHECK(t.extracted[0].dominant_class == 1);
    CHECK(t.extracted[0].ratio == doctest::Approx(3.0));
    CHECK(t.extracted[0].counts[1] == 9);
    CHECK(t.extracted[0].counts[0] == 3);

    // balanced token is never extracted at any ratio > 1
    const CooccurrenceTable t2 = extract_cooccurrence(c, TrackedUnit::Kind::Token, 1.0001);
    for (const auto &row : t2.extracted) CHECK(row.unit != TrackedUnit::token(v.id("f")));

    CHECK_THROWS_AS(extract_cooccurrence(Corpus{}, TrackedUnit::Kind::Token, 3.0),
                    std::invalid_argument);
}

TEST_CASE("bigram extraction with one-sided counts") {
    Vocab v;
    Corpus c;
    c.instances.push_back(make_instance(v, {"a", "b"}, 1));
    c.instances.push_back(make_instance(v, {"c", "b"}, 0));

    const CooccurrenceTable t = extract_cooccurrence(c, TrackedUnit::Kind::Bigram, 3.0);
    REQUIRE(t.extracted.size() == 2);
    std::map<std::string, int> dominant;
    for (const auto &row : t.extracted)
        dominant[row.unit.display(v)] = row.dominant_class;
    CHECK(dominant.at("a b") == 1); // seen once positive, never negative: floor passes it
    CHECK(dominant.at("c b") == 0);
}

TEST_CASE("extraction is label-permutation equivariant") {
    Vocab v;
    Corpus c;
    c.instances.push_back(make_instance(v, {"p", "p", "x"}, 1));
    c.instances.push_back(make_instance(v, {"n", "x"}, 0));
    Corpus flipped = c;
    for (auto &inst : flipped.instances) inst.label = 1 - inst.label;

    const CooccurrenceTable a = extract_cooccurrence(c, TrackedUnit::Kind::Token, 2.0);
    const CooccurrenceTable b = extract_cooccurrence(flipped, TrackedUnit::Kind::Token, 2.0);
    REQUIRE(a.extracted.size() == b.extracted.size());
    for (const auto &row : a.extracted) {
        const auto match = std::find_if(b.extracted.begin(), b.extracted.end(),
                                        [&](const auto &r) { return r.unit == row.unit; });
        REQUIRE(match != b.extracted.end());
        CHECK(match->dominant_class == 1 - row.dominant_class);
    }
}

TEST_CASE("token-position extraction at distance 0 is last-token extraction") {
    Vocab v;
    Corpus c;
    c.instances.push_back(make_instance(v, {"x", "y", "p"}, 1));
    c.instances.push_back(make_instance(v, {"p", "y", "n"}, 0));
    c.instances.push_back(make_instance(v, {"y", "p"}, 1));

    const CooccurrenceTable t =
        extract_cooccurrence(c, TrackedUnit::Kind::TokenPosition, 2.0);
    // last tokens: p(+) twice, n(-) once; "p" at distance 0 dominant positive
    bool found = false;
    for (const auto &row : t.extracted)
        if (row.unit == TrackedUnit::token_position(v.id("p"), 0)) {
            found = true;
            CHECK(row.dominant_class == 1);
            CHECK(row.counts[1] == 2);
        }
    CHECK(found);
}

TEST_CASE("positional generator plants at the requested distance") {
    PositionalSpec spec;
    spec.n_per_class = 40;
    Vocab v;
    const Corpus c = gen_synthetic_positional(spec, v, RngStream(9));
    REQUIRE(c.instances.size() == 80);

    const auto planted_pos = positional_planted_names(spec, 1);
    const auto planted_neg = positional_planted_names(spec, 0);
    const auto is_planted = [&](int id, int cls) {
        const auto &names = cls == 1 ? planted_pos : planted_neg;
        return std::find(names.begin(), names.end(), v.token(id)) != names.end();
    };
    for (const Instance &x : c.instances) {
        const auto l = x.tokens.size();
        REQUIRE(l >= static_cast<std::size_t>(spec.min_length));
        REQUIRE(l <= static_cast<std::size_t>(spec.max_length));
        CHECK(is_planted(x.tokens[l - 1 - spec.distance], x.label));
        // planted tokens appear nowhere else
        for (std::size_t j = 0; j < l; ++j)
            if (j != l - 1 - static_cast<std::size_t>(spec.distance)) {
                CHECK_FALSE(is_planted(x.tokens[j], 0));
                CHECK_FALSE(is_planted(x.tokens[j], 1));
            }
    }

    PositionalSpec bad = spec;
    bad.distance = bad.min_length;
    Vocab v2;
    CHECK_THROWS_AS(gen_synthetic_positional(bad, v2, RngStream(1)), std::invalid_argument);
}

TEST_CASE("positional extraction recovers exactly the planted sets") {
    PositionalSpec spec;
    // large enough that filler counts concentrate well below the ratio gate
    spec.n_per_class = 400;
    Vocab v;
    const Corpus c = gen_synthetic_positional(spec, v, RngStream(12));
    const CooccurrenceTable t = extract_cooccurrence(c, TrackedUnit::Kind::Token, 3.0);

    std::map<int, std::string> got;
    for (const auto &row : t.extracted)
        got[row.dominant_class] += row.unit.display(v) + " ";
    for (const auto &name : positional_planted_names(spec, 1))
        CHECK(got[1].find(name) != std::string::npos);
    for (const auto &name : positional_planted_names(spec, 0))
        CHECK(got[0].find(name) != std::string::npos);
    CHECK(t.extracted.size() == 2 * static_cast<std::size_t>(spec.planted_per_class));
}

TEST_CASE("mixture generator respects weights and tails") {
    MixtureSpec spec;
    spec.n_per_class = 60;
    spec.own_weight = 0.5;
    spec.other_weight = 0.0;
    Vocab v;
    const Corpus c = gen_synthetic_mixture(spec, v, RngStream(4));
    const auto own = [&](const Instance &x, int id) {
        const auto names = mixture_class_token_names(spec, x.label);
        return std::find(names.begin(), names.end(), v.token(id)) != names.end();
    };
    for (const Instance &x : c.instances) {
        const auto l = x.tokens.size();
        CHECK(own(x, x.tokens[l - 1]));
        CHECK(own(x, x.tokens[l - 2]));
    }

    MixtureSpec bad = spec;
    bad.own_weight = 0.0;
    Vocab v2;
    CHECK_THROWS_AS(gen_synthetic_mixture(bad, v2, RngStream(1)), std::invalid_argument);
}

TEST_CASE("negation generator hits the documented frequency ratio") {
    NegationSpec spec;
    Vocab v;
    const Corpus c = gen_synthetic_negation(spec, v, RngStream(6));
    const int not_id = v.id("not");
    REQUIRE(not_id > 0);
    int in_neg = 0, in_pos = 0;
    for (const Instance &x : c.instances)
        for (const int t : x.tokens)
            if (t == not_id) (x.label == 0 ? in_neg : in_pos)++;
    CHECK(in_pos > 0);
    const double ratio = static_cast<double>(in_neg) / in_pos;
    CHECK(ratio == doctest::Approx(2086.0 / 813.0).epsilon(0.10));

    // negated variants carry the flipped label of their base phrase
    const CooccurrenceTable t = extract_cooccurrence(c, TrackedUnit::Kind::Token, 2.0);
    bool not_extracted_negative = false;
    for (const auto &row : t.extracted)
        if (row.unit == TrackedUnit::token(not_id) && row.dominant_class == 0)
            not_extracted_negative = true;
    CHECK(not_extracted_negative);
}

TEST_CASE("anchored generator: anchors close every instance, rares stay rare") {
    AnchoredSpec spec;
    Vocab v;
    const Corpus c = gen_synthetic_anchored(spec, v, RngStream(7));
    REQUIRE(c.instances.size() ==
            static_cast<std::size_t>(spec.n_pos + spec.n_neg));

    int pos_seen = 0, rare_hits = 0;
    for (const Instance &x : c.instances) {
        pos_seen += x.label;
        const std::string last = v.token(x.tokens.back());
        CHECK(last.substr(0, 6) == "anchor");
        CHECK(last[6] == (x.label == 1 ? 'p' : 'n'));
        for (const int t : x.tokens) {
            const std::string name = v.token(t);
            if (name.size() > 4 && name.substr(1, 3) == "osr") ++rare_hits;
            if (name.size() > 4 && name.substr(1, 3) == "egr")
                CHECK(x.label == 0); // class-pure
        }
    }
    CHECK(pos_seen == spec.n_pos);
    // insertion probability honored within sampling noise
    const double hit_rate = static_cast<double>(rare_hits) /
                            (static_cast<double>(spec.n_pos) * spec.rare_per_class);
    CHECK(hit_rate == doctest::Approx(spec.insert_prob).epsilon(0.15));
}

TEST_CASE("generators are deterministic in the stream") {
    Vocab v1, v2;
    MixtureSpec spec;
    spec.n_per_class = 30;
    const Corpus a = gen_synthetic_mixture(spec, v1, RngStream(21));
    const Corpus b = gen_synthetic_mixture(spec, v2, RngStream(21));
    REQUIRE(a.instances.size() == b.instances.size());
    for (std::size_t i = 0; i < a.instances.size(); ++i) {
        CHECK(a.instances[i].label == b.instances[i].label);
        CHECK(a.instances[i].tokens == b.instances[i].tokens);
    }
}
