#include "ntklens/cli.hpp"

#include "ntklens/checkpoint.hpp"
#include "ntklens/cooccurrence.hpp"
#include "ntklens/corpus.hpp"
#include "ntklens/dynamics.hpp"
#include "ntklens/errors.hpp"
#include "ntklens/kernels.hpp"
#include "ntklens/report.hpp"
#include "ntklens/synthetic.hpp"
#include "ntklens/trainer.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;

namespace ntklens {
namespace {

// ---------------- plumbing ----------------

// route any writer through tmp + rename so reruns never expose partial files
template <class Fn> void atomic_write(const fs::path &path, Fn writer) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    writer(tmp.string());
    fs::rename(tmp, path);
}

struct Run {
    const KeyValueConfig &cfg;
    fs::path out;
    std::uint64_t seed;
    int threads;
    std::vector<std::string> outputs;
    json results = json::object();

    explicit Run(const KeyValueConfig &cfg_)
        : cfg(cfg_), out(cfg_.get_string("out", "out")),
          seed(static_cast<std::uint64_t>(cfg_.get_int("seed", 0))),
          threads(static_cast<int>(cfg_.get_int("threads", 1))) {
        if (threads < 1) throw ConfigError("threads must be >= 1");
        fs::create_directories(out);
    }

    fs::path path(const std::string &name) {
        outputs.push_back(name);
        return out / name;
    }

    void manifest(const std::string &command) {
        json j;
        j["format_version"] = 1;
        j["command"] = command;
        json c = json::object();
        for (const auto &[k, v] : cfg.entries()) c[k] = v;
        j["config"] = c;
        std::sort(outputs.begin(), outputs.end());
        j["outputs"] = outputs;
        j["results"] = results;
        write_text_file((out / "manifest.json").string(), j.dump(2) + "\n");
    }
};

std::vector<std::string> with_common(std::initializer_list<const char *> keys) {
    std::vector<std::string> all = {"out", "seed", "threads"};
    for (const char *k : keys) all.emplace_back(k);
    return all;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)> &fn) {
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    for (std::thread &t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------- config readers ----------------

ModelKind model_from_cfg(const KeyValueConfig &cfg) {
    const std::string name = cfg.get_string("model");
    try {
        return model_kind_from_name(name);
    } catch (const std::exception &) {
        throw ConfigError("unknown model: " + name);
    }
}

Activation activation_from_cfg(const KeyValueConfig &cfg) {
    const std::string name = cfg.get_string("activation", "relu");
    try {
        return activation_from_name(name);
    } catch (const std::exception &) {
        throw ConfigError("unknown activation: " + name);
    }
}

VarianceProfile variances_from_cfg(const KeyValueConfig &cfg, bool ignore_head = false) {
    VarianceProfile v;
    v.emb = cfg.get_double("var_emb", v.emb);
    v.hidden = cfg.get_double("var_hidden", v.hidden);
    if (!ignore_head) v.head = cfg.get_double("var_head", v.head);
    v.recur = cfg.get_double("var_recur", v.recur);
    if (v.emb <= 0 || v.hidden <= 0 || v.head <= 0 || v.recur <= 0)
        throw ConfigError("variances must be positive");
    return v;
}

OptimizerConfig optimizer_from_cfg(const KeyValueConfig &cfg) {
    OptimizerConfig oc;
    const std::string name = cfg.get_string("optimizer", "adagrad");
    try {
        oc.kind = optimizer_from_name(name);
    } catch (const std::exception &) {
        throw ConfigError("unknown optimizer: " + name);
    }
    oc.lr = cfg.get_double("lr", oc.lr);
    oc.eps = cfg.get_double("eps", oc.eps);
    oc.beta1 = cfg.get_double("beta1", oc.beta1);
    oc.beta2 = cfg.get_double("beta2", oc.beta2);
    if (oc.lr <= 0) throw ConfigError("lr must be positive");
    return oc;
}

KernelSpec kernel_spec_from_cfg(const KeyValueConfig &cfg, ModelKind kind,
                                const VarianceProfile &vars, std::uint64_t seed) {
    KernelSpec spec;
    spec.model = kind;
    spec.vars = vars;
    spec.activation = activation_from_cfg(cfg);
    spec.provenance = KernelProvenance::Converged;
    spec.seed = seed;
    spec.kernel_size = static_cast<int>(cfg.get_int("kernel_size", 3));
    spec.cnn_token_slot = static_cast<int>(cfg.get_int("cnn_token_slot", 0));
    spec.max_positions = static_cast<int>(cfg.get_int("max_positions", 256));
    const std::string alpha = cfg.get_string("sa_alpha", "uniform");
    if (alpha == "uniform")
        spec.sa_uniform_alpha = true;
    else if (alpha == "estimate")
        spec.sa_uniform_alpha = false;
    else
        throw ConfigError("sa_alpha must be uniform or estimate");
    spec.alpha_probe_width = static_cast<int>(cfg.get_int("alpha_probe_width", 1024));
    spec.alpha_samples = static_cast<int>(cfg.get_int("alpha_samples", 256));
    spec.mc_samples = static_cast<std::size_t>(cfg.get_int("mc_samples", 2'000'000));
    return spec;
}

Corpus load_corpus_from_cfg(const KeyValueConfig &cfg, const std::string &key, Vocab &vocab,
                            bool fixed_vocab = false) {
    const std::string path = cfg.get_string(key);
    if (!fs::exists(path)) throw ConfigError("corpus path does not exist: " + path);
    try {
        return load_tsv(path, vocab, fixed_vocab);
    } catch (const CorpusError &e) {
        throw ConfigError(e.what());
    }
}

// ---------------- tracked units ----------------

TrackedUnit::Kind default_unit_kind(ModelKind kind) {
    switch (kind) {
    case ModelKind::Mlp:
    case ModelKind::Cnn:
    case ModelKind::Sa: return TrackedUnit::Kind::Token;
    case ModelKind::Mv: return TrackedUnit::Kind::Bigram;
    case ModelKind::Lrnn: return TrackedUnit::Kind::TokenPosition;
    }
    throw ConfigError("bad model kind");
}

TrackedUnit::Kind unit_kind_from_cfg(const KeyValueConfig &cfg, ModelKind model) {
    if (!cfg.has("unit")) return default_unit_kind(model);
    const std::string name = cfg.get_string("unit");
    try {
        return unit_kind_from_name(name);
    } catch (const std::exception &) {
        throw ConfigError("unknown unit kind: " + name);
    }
}

std::vector<std::string> split_ws(const std::string &s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

int lookup_token(Vocab &vocab, const std::string &name, bool allow_new) {
    if (name == "_" || name == "<pad>") return Vocab::kPadId;
    if (allow_new) return vocab.add(name);
    const int id = vocab.id(name);
    if (id < 0) throw ConfigError("tracked token not in corpus vocabulary: " + name);
    return id;
}

TrackedUnit parse_unit(const std::string &text, TrackedUnit::Kind kind, Vocab &vocab,
                       int kernel_size, bool allow_new) {
    const std::vector<std::string> words = split_ws(text);
    switch (kind) {
    case TrackedUnit::Kind::Token:
        if (words.size() != 1)
            throw ConfigError("token unit wants one token: \"" + text + "\"");
        return TrackedUnit::token(lookup_token(vocab, words[0], allow_new));
    case TrackedUnit::Kind::Bigram:
        if (words.size() != 2)
            throw ConfigError("bigram unit wants two tokens: \"" + text + "\"");
        return TrackedUnit::bigram(lookup_token(vocab, words[0], allow_new),
                                   lookup_token(vocab, words[1], allow_new));
    case TrackedUnit::Kind::Window: {
        if (static_cast<int>(words.size()) != kernel_size)
            throw ConfigError("window unit wants one token per slot (use _ for padding): \"" +
                              text + "\"");
        std::vector<int> ids;
        for (const std::string &w : words) ids.push_back(lookup_token(vocab, w, allow_new));
        return TrackedUnit::window(std::move(ids));
    }
    case TrackedUnit::Kind::TokenPosition: {
        const std::size_t at = words.size() == 1 ? words[0].rfind('@') : std::string::npos;
        if (at == std::string::npos || at == 0)
            throw ConfigError("token-position unit wants token@distance: \"" + text + "\"");
        int dist = 0;
        try {
            std::size_t used = 0;
            dist = std::stoi(words[0].substr(at + 1), &used);
            if (used != words[0].size() - at - 1) throw std::invalid_argument("junk");
        } catch (const std::exception &) {
            throw ConfigError("bad distance in token-position unit: \"" + text + "\"");
        }
        if (dist < 0) throw ConfigError("unit distance must be >= 0");
        return TrackedUnit::token_position(lookup_token(vocab, words[0].substr(0, at), allow_new),
                                           dist);
    }
    }
    throw ConfigError("bad unit kind");
}

struct TrackedSelection {
    std::vector<TrackedUnit> units;
    std::vector<int> classes; // majority class per unit, -1 when unknown
};

TrackedSelection select_units(const KeyValueConfig &cfg, const Corpus &corpus, Vocab &vocab,
                              TrackedUnit::Kind kind, int kernel_size) {
    TrackedSelection sel;
    const bool allow_new = corpus.instances.empty();
    if (cfg.has("tracked")) {
        for (const std::string &item : cfg.get_string_list("tracked"))
            sel.units.push_back(parse_unit(item, kind, vocab, kernel_size, allow_new));
        sel.classes.assign(sel.units.size(), -1);
        if (kind != TrackedUnit::Kind::Window && !corpus.instances.empty()) {
            const CooccurrenceTable table = extract_cooccurrence(corpus, kind, 2.0);
            for (std::size_t i = 0; i < sel.units.size(); ++i)
                for (const CooccurrenceRow &row : table.rows)
                    if (row.unit == sel.units[i]) {
                        std::int64_t best = -1;
                        int best_cls = -1;
                        bool tie = false;
                        for (std::size_t c = 0; c < row.counts.size(); ++c) {
                            if (row.counts[c] > best) {
                                best = row.counts[c];
                                best_cls = static_cast<int>(c);
                                tie = false;
                            } else if (row.counts[c] == best) {
                                tie = true;
                            }
                        }
                        sel.classes[i] = tie ? -1 : best_cls;
                        break;
                    }
        }
        return sel;
    }

    if (kind == TrackedUnit::Kind::Window)
        throw ConfigError("window units must be listed explicitly via tracked =");
    const double ratio = cfg.get_double("ratio", 3.0);
    const auto cap = static_cast<std::size_t>(cfg.get_int("max_tracked", 16));
    if (corpus.instances.empty()) throw ConfigError("cannot extract units from an empty corpus");
    CooccurrenceTable table = extract_cooccurrence(corpus, kind, ratio);
    std::stable_sort(table.extracted.begin(), table.extracted.end(),
                     [](const CooccurrenceRow &a, const CooccurrenceRow &b) {
                         return a.counts[static_cast<std::size_t>(a.dominant_class)] >
                                b.counts[static_cast<std::size_t>(b.dominant_class)];
                     });
    for (const CooccurrenceRow &row : table.extracted) {
        if (sel.units.size() >= cap) break;
        sel.units.push_back(row.unit);
        sel.classes.push_back(row.dominant_class);
    }
    if (sel.units.empty())
        throw ConfigError("no units pass the extraction ratio; lower ratio or list tracked =");
    return sel;
}

std::string class_tag(int cls, int num_classes) {
    if (cls < 0) return "";
    if (num_classes == 2) return cls == 1 ? " (+)" : " (-)";
    return " (c" + std::to_string(cls) + ")";
}

// ---------------- gen ----------------

std::pair<int, int> parse_range(const std::string &text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw ConfigError("length range wants lo:hi, got \"" + text + "\"");
    try {
        return {std::stoi(trim(text.substr(0, colon))), std::stoi(trim(text.substr(colon + 1)))};
    } catch (const std::exception &) {
        throw ConfigError("bad length range: \"" + text + "\"");
    }
}

void cmd_gen(const KeyValueConfig &cfg) {
    static const std::vector<std::string> keys = with_common(
        {"kind", "test_fraction", "n_per_class", "distance", "planted_per_class",
         "filler_vocab", "min_length", "max_length", "classes", "tokens_per_class",
         "own_weight", "other_weight", "length_ranges", "own_class_tail", "n_phrases",
         "base_pos", "base_neg", "negated_pos", "negated_neg", "noun_vocab", "n_pos",
         "n_neg", "length", "anchors_per_class", "rare_per_class", "insert_prob"});
    cfg.restrict_keys(keys);
    Run run(cfg);

    const std::string kind = cfg.get_string("kind");
    Vocab vocab;
    Corpus corpus;
    json truth = json::object();

    if (kind == "positional") {
        PositionalSpec spec;
        spec.n_per_class = static_cast<int>(cfg.get_int("n_per_class", spec.n_per_class));
        spec.distance = static_cast<int>(cfg.get_int("distance", spec.distance));
        spec.planted_per_class =
            static_cast<int>(cfg.get_int("planted_per_class", spec.planted_per_class));
        spec.filler_vocab = static_cast<int>(cfg.get_int("filler_vocab", spec.filler_vocab));
        spec.min_length = static_cast<int>(cfg.get_int("min_length", spec.min_length));
        spec.max_length = static_cast<int>(cfg.get_int("max_length", spec.max_length));
        try {
            corpus = gen_synthetic_positional(spec, vocab, RngStream(run.seed));
        } catch (const std::invalid_argument &e) {
            throw ConfigError(e.what());
        }
        truth["distance"] = spec.distance;
        truth["planted"] = {{"pos", positional_planted_names(spec, 1)},
                            {"neg", positional_planted_names(spec, 0)}};
    } else if (kind == "mixture") {
        MixtureSpec spec;
        spec.num_classes = static_cast<int>(cfg.get_int("classes", spec.num_classes));
        spec.n_per_class = static_cast<int>(cfg.get_int("n_per_class", spec.n_per_class));
        spec.tokens_per_class =
            static_cast<int>(cfg.get_int("tokens_per_class", spec.tokens_per_class));
        spec.filler_vocab = static_cast<int>(cfg.get_int("filler_vocab", spec.filler_vocab));
        spec.own_weight = cfg.get_double("own_weight", spec.own_weight);
        spec.other_weight = cfg.get_double("other_weight", spec.other_weight);
        spec.own_class_tail = cfg.get_bool("own_class_tail", spec.own_class_tail);
        if (cfg.has("length_ranges")) {
            spec.length_ranges.clear();
            for (const std::string &item : cfg.get_string_list("length_ranges"))
                spec.length_ranges.push_back(parse_range(item));
        } else {
            spec.length_ranges = {{static_cast<int>(cfg.get_int("min_length", 8)),
                                   static_cast<int>(cfg.get_int("max_length", 12))}};
        }
        try {
            corpus = gen_synthetic_mixture(spec, vocab, RngStream(run.seed));
        } catch (const std::invalid_argument &e) {
            throw ConfigError(e.what());
        }
        json cls = json::object();
        for (int c = 0; c < spec.num_classes; ++c)
            cls[std::to_string(c)] = mixture_class_token_names(spec, c);
        truth["class_tokens"] = cls;
    } else if (kind == "anchored") {
        AnchoredSpec spec;
        spec.n_pos = static_cast<int>(cfg.get_int("n_pos", spec.n_pos));
        spec.n_neg = static_cast<int>(cfg.get_int("n_neg", spec.n_neg));
        spec.length = static_cast<int>(cfg.get_int("length", spec.length));
        spec.anchors_per_class =
            static_cast<int>(cfg.get_int("anchors_per_class", spec.anchors_per_class));
        spec.rare_per_class = static_cast<int>(cfg.get_int("rare_per_class", spec.rare_per_class));
        spec.insert_prob = cfg.get_double("insert_prob", spec.insert_prob);
        spec.filler_vocab = static_cast<int>(cfg.get_int("filler_vocab", spec.filler_vocab));
        try {
            corpus = gen_synthetic_anchored(spec, vocab, RngStream(run.seed));
        } catch (const std::invalid_argument &e) {
            throw ConfigError(e.what());
        }
        truth["rare"] = {{"pos", anchored_rare_names(spec, 1)},
                         {"neg", anchored_rare_names(spec, 0)}};
    } else if (kind == "negation") {
        NegationSpec spec;
        spec.n_phrases = static_cast<int>(cfg.get_int("n_phrases", spec.n_phrases));
        spec.base_pos = static_cast<int>(cfg.get_int("base_pos", spec.base_pos));
        spec.base_neg = static_cast<int>(cfg.get_int("base_neg", spec.base_neg));
        spec.negated_pos = static_cast<int>(cfg.get_int("negated_pos", spec.negated_pos));
        spec.negated_neg = static_cast<int>(cfg.get_int("negated_neg", spec.negated_neg));
        spec.noun_vocab = static_cast<int>(cfg.get_int("noun_vocab", spec.noun_vocab));
        try {
            corpus = gen_synthetic_negation(spec, vocab, RngStream(run.seed));
        } catch (const std::invalid_argument &e) {
            throw ConfigError(e.what());
        }
        truth["negation_token"] = "not";
        truth["adjectives"] = {{"pos", negation_adjective_names(spec, 1)},
                               {"neg", negation_adjective_names(spec, 0)}};
    } else {
        throw ConfigError("kind must be positional, mixture, anchored or negation, got \"" + kind +
                          "\"");
    }

    const double test_fraction = cfg.get_double("test_fraction", 0.0);
    if (test_fraction < 0.0 || test_fraction >= 1.0)
        throw ConfigError("test_fraction must be in [0, 1)");
    Corpus train_part = corpus;
    Corpus test_part;
    test_part.num_classes = corpus.num_classes;
    if (test_fraction > 0.0) {
        // the generators shuffle, so a tail split is already random
        const auto test_n = static_cast<std::size_t>(
            std::llround(test_fraction * static_cast<double>(corpus.instances.size())));
        if (test_n == 0 || test_n >= corpus.instances.size())
            throw ConfigError("test_fraction leaves an empty split");
        train_part.instances.assign(corpus.instances.begin(),
                                    corpus.instances.end() - static_cast<std::ptrdiff_t>(test_n));
        test_part.instances.assign(corpus.instances.end() - static_cast<std::ptrdiff_t>(test_n),
                                   corpus.instances.end());
    }

    atomic_write(run.path("train.tsv"),
                 [&](const std::string &p) { save_tsv(p, train_part, vocab); });
    if (!test_part.instances.empty())
        atomic_write(run.path("test.tsv"),
                     [&](const std::string &p) { save_tsv(p, test_part, vocab); });

    run.results["ground_truth"] = truth;
    run.results["train_instances"] = train_part.instances.size();
    run.results["test_instances"] = test_part.instances.size();
    run.results["vocab_size"] = vocab.size();
    run.manifest("gen");
    std::cout << "wrote " << (run.out / "train.tsv").string() << " ("
              << train_part.instances.size() << " instances, vocab " << vocab.size() << ")\n";
    if (!test_part.instances.empty())
        std::cout << "wrote " << (run.out / "test.tsv").string() << " ("
                  << test_part.instances.size() << " instances)\n";
}

// ---------------- extract ----------------

void cmd_extract(const KeyValueConfig &cfg) {
    static const std::vector<std::string> keys = with_common({"corpus", "unit", "ratio"});
    cfg.restrict_keys(keys);
    Run run(cfg);

    Vocab vocab;
    const Corpus corpus = load_corpus_from_cfg(cfg, "corpus", vocab);
    const std::string kind_name = cfg.get_string("unit", "token");
    TrackedUnit::Kind kind;
    try {
        kind = unit_kind_from_name(kind_name);
    } catch (const std::exception &) {
        throw ConfigError("unknown unit kind: " + kind_name);
    }
    const double ratio = cfg.get_double("ratio", 3.0);

    CooccurrenceTable table;
    try {
        table = extract_cooccurrence(corpus, kind, ratio);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    atomic_write(run.path("cooccurrence.csv"),
                 [&](const std::string &p) { write_cooccurrence_csv(p, table, vocab); });

    std::vector<std::int64_t> per_class(static_cast<std::size_t>(table.num_classes), 0);
    for (const CooccurrenceRow &row : table.extracted)
        ++per_class[static_cast<std::size_t>(row.dominant_class)];
    run.results["observed_units"] = table.rows.size();
    run.results["extracted_units"] = table.extracted.size();
    run.results["extracted_per_class"] = per_class;
    run.manifest("extract");
    std::cout << "extracted " << table.extracted.size() << " / " << table.rows.size() << " "
              << unit_kind_name(kind) << " units at ratio " << ratio << "\n";
}

// ---------------- ntk-check ----------------

void cmd_ntk_check(const KeyValueConfig &cfg) {
    static const std::vector<std::string> keys = with_common(
        {"model", "activation", "widths", "seeds", "kernel_size", "cnn_token_slot",
         "var_emb", "var_hidden", "var_head", "var_recur", "sa_alpha", "alpha_probe_width",
         "alpha_samples", "mc_samples"});
    cfg.restrict_keys(keys);
    Run run(cfg);

    const ModelKind kind = model_from_cfg(cfg);
    const VarianceProfile vars = variances_from_cfg(cfg);
    KernelSpec spec = kernel_spec_from_cfg(cfg, kind, vars, run.seed);
    std::vector<std::int64_t> widths = {64, 256, 1024, 4096};
    if (cfg.has("widths")) widths = cfg.get_int_list("widths");
    for (std::int64_t w : widths)
        if (w < 1) throw ConfigError("widths must be positive");
    const auto seeds = static_cast<int>(cfg.get_int("seeds", 10));
    if (seeds < 1) throw ConfigError("seeds must be >= 1");

    const ProbeGrid grid = make_probe_grid(kind, spec.kernel_size);
    Corpus probe;
    probe.instances = grid.instances;

    const KernelMatrix converged = build_kernel_matrix(grid.units, probe, grid.vocab, spec);
    atomic_write(run.path("converged_kernel.csv"),
                 [&](const std::string &p) { write_kernel_csv(p, converged, grid.vocab); });

    std::vector<double> errors(widths.size(), 0.0);
    parallel_for(widths.size(), run.threads, [&](std::size_t i) {
        KernelSpec emp = spec;
        emp.provenance = KernelProvenance::Empirical;
        emp.width = static_cast<int>(widths[i]);
        emp.seeds = seeds;
        const KernelMatrix km = build_kernel_matrix(grid.units, probe, grid.vocab, emp);
        errors[i] = relative_l1_error(km.values, converged.values);
    });

    std::ostringstream csv;
    csv.precision(12);
    csv << "width,rel_error\n";
    for (std::size_t i = 0; i < widths.size(); ++i)
        csv << widths[i] << ',' << errors[i] << '\n';
    write_text_file(run.path("convergence.csv").string(), csv.str());

    Series series;
    series.name = model_kind_name(kind) + " rel error";
    for (std::size_t i = 0; i < widths.size(); ++i) {
        series.x.push_back(static_cast<double>(widths[i]));
        series.y.push_back(errors[i]);
    }
    ChartSpec chart;
    chart.title = "empirical vs converged kernel, " + model_kind_name(kind);
    chart.x_label = "width d";
    chart.y_label = "relative L1 error";
    chart.log_x = true;
    chart.log_y = true;
    write_text_file(run.path("convergence.svg").string(), line_chart_svg(chart, {series}));

    bool monotone = true;
    for (std::size_t i = 1; i < errors.size(); ++i)
        if (errors[i] >= errors[i - 1]) monotone = false;
    run.results["widths"] = widths;
    run.results["errors"] = errors;
    run.results["monotone_decreasing"] = monotone;
    run.results["final_error"] = errors.empty() ? 0.0 : errors.back();
    run.manifest("ntk-check");
    for (std::size_t i = 0; i < widths.size(); ++i)
        std::cout << "d=" << widths[i] << ": rel error " << errors[i] << "\n";
    std::cout << (monotone ? "error decreases monotonically\n" : "error is NOT monotone\n");
}

// ---------------- dynamics ----------------

void cmd_dynamics(const KeyValueConfig &cfg) {
    static const std::vector<std::string> keys = with_common(
        {"model", "activation", "corpus", "unit", "tracked", "ratio", "max_tracked",
         "kernel_size", "cnn_token_slot", "max_positions", "var_emb", "var_hidden", "var_head",
         "var_recur", "sa_alpha", "alpha_probe_width", "alpha_samples", "mc_samples", "dt",
         "steps", "method", "record_stride", "divergence_cap"});
    cfg.restrict_keys(keys);
    Run run(cfg);

    Vocab vocab;
    const Corpus corpus = load_corpus_from_cfg(cfg, "corpus", vocab);
    const ModelKind kind = model_from_cfg(cfg);
    const VarianceProfile vars = variances_from_cfg(cfg);
    const KernelSpec spec = kernel_spec_from_cfg(cfg, kind, vars, run.seed);
    const TrackedUnit::Kind ukind = unit_kind_from_cfg(cfg, kind);
    const TrackedSelection sel = select_units(cfg, corpus, vocab, ukind, spec.kernel_size);

    const int heads = corpus.num_classes > 2 ? corpus.num_classes : 1;
    std::vector<int> labels;
    for (const Instance &x : corpus.instances) labels.push_back(x.label);

    Matrix tracked_values(sel.units.size(), corpus.instances.size());
    Matrix train_values(corpus.instances.size(), corpus.instances.size());
    if (!corpus.instances.empty()) {
        const KernelMatrix km = build_kernel_matrix(sel.units, corpus, vocab, spec);
        tracked_values = km.values;
        train_values = build_instance_kernel(corpus, spec);
        atomic_write(run.path("tracked_kernel.csv"),
                     [&](const std::string &p) { write_kernel_csv(p, km, vocab); });
    }

    SimSetup setup;
    setup.train = MulticlassKernel::isotropic(std::move(train_values), heads);
    setup.tracked = MulticlassKernel::isotropic(std::move(tracked_values), heads);
    setup.labels = labels;
    setup.heads = heads;

    DynamicsConfig dc;
    const std::string method = cfg.get_string("method", "rk4");
    if (method == "rk4")
        dc.method = OdeMethod::Rk4;
    else if (method == "euler")
        dc.method = OdeMethod::Euler;
    else
        throw ConfigError("method must be rk4 or euler");
    dc.dt = cfg.get_double("dt", dc.dt);
    dc.steps = static_cast<int>(cfg.get_int("steps", dc.steps));
    dc.record_stride = static_cast<int>(cfg.get_int("record_stride", dc.record_stride));
    dc.divergence_cap = cfg.get_double("divergence_cap", dc.divergence_cap);
    if (dc.dt <= 0 || dc.steps < 1 || dc.record_stride < 1)
        throw ConfigError("dt, steps and record_stride must be positive");

    const SimTrace trace = simulate(setup, dc);

    std::vector<std::string> names;
    for (std::size_t i = 0; i < sel.units.size(); ++i)
        names.push_back(sel.units[i].display(vocab));
    atomic_write(run.path("dynamics_trace.csv"),
                 [&](const std::string &p) { write_sim_trace_csv(p, trace, names); });

    const auto L = static_cast<std::size_t>(heads);
    std::vector<Series> series;
    for (std::size_t i = 0; i < sel.units.size() && series.size() < 12; ++i)
        for (std::size_t a = 0; a < L && series.size() < 12; ++a) {
            Series s;
            s.name = names[i] + (L > 1 ? "/" + std::to_string(a)
                                       : class_tag(sel.classes[i], corpus.num_classes));
            s.x = trace.times;
            for (std::size_t r = 0; r < trace.tracked_scores.rows(); ++r)
                s.y.push_back(trace.tracked_scores(r, i * L + a));
            series.push_back(std::move(s));
        }
    ChartSpec chart;
    chart.title = "label-score dynamics, " + model_kind_name(kind) + " (converged kernel)";
    chart.x_label = "time";
    chart.y_label = "label score";
    write_text_file(run.path("dynamics.svg").string(), line_chart_svg(chart, series));

    json finals = json::array();
    if (trace.tracked_scores.rows() > 0) {
        const std::size_t last = trace.tracked_scores.rows() - 1;
        for (std::size_t i = 0; i < sel.units.size(); ++i)
            for (std::size_t a = 0; a < L; ++a)
                finals.push_back({{"unit", names[i]},
                                  {"class", a},
                                  {"majority_class", sel.classes[i]},
                                  {"score", trace.tracked_scores(last, i * L + a)}});
    }
    run.results["final_scores"] = finals;
    run.results["records"] = trace.times.size();
    run.manifest("dynamics");
    std::cout << "simulated " << dc.steps << " steps, " << trace.times.size() << " records, "
              << sel.units.size() << " tracked units\n";
}

// ---------------- train ----------------

struct TrainPoint {
    double var_head = 0.01;
    fs::path dir;
    std::vector<std::string> files; // relative to run out dir
    double final_loss = 0.0;
    double final_acc = 0.0;
    double test_acc = -1.0;
    std::vector<double> test_recall;
    double bias_ratio = -1.0; // mean |score| class 0 over class 1, binary only
};

void cmd_train(const KeyValueConfig &cfg) {
    static const std::vector<std::string> keys = with_common(
        {"model", "width", "activation", "kernel_size", "cnn_token_slot", "max_positions",
         "var_emb", "var_hidden", "var_head", "var_recur", "optimizer", "lr", "eps", "beta1",
         "beta2", "epochs", "batch_size", "corpus", "test_corpus", "unit", "tracked", "ratio",
         "max_tracked"});
    cfg.restrict_keys(keys);
    Run run(cfg);

    Vocab vocab;
    const Corpus corpus = load_corpus_from_cfg(cfg, "corpus", vocab);
    if (corpus.instances.empty()) throw ConfigError("training corpus is empty");
    Corpus test;
    bool have_test = false;
    if (cfg.has("test_corpus")) {
        test = load_corpus_from_cfg(cfg, "test_corpus", vocab, true);
        have_test = !test.instances.empty();
    }

    const ModelKind kind = model_from_cfg(cfg);
    const TrackedUnit::Kind ukind = unit_kind_from_cfg(cfg, kind);
    const auto kernel_size = static_cast<int>(cfg.get_int("kernel_size", 3));
    const TrackedSelection sel = select_units(cfg, corpus, vocab, ukind, kernel_size);
    const int heads = corpus.num_classes > 2 ? corpus.num_classes : 1;

    int max_len = 1;
    for (const Instance &x : corpus.instances)
        max_len = std::max(max_len, static_cast<int>(x.tokens.size()));
    for (const Instance &x : test.instances)
        max_len = std::max(max_len, static_cast<int>(x.tokens.size()));

    std::vector<double> head_vars = {0.01};
    if (cfg.has("var_head")) head_vars = cfg.get_double_list("var_head");
    for (double v : head_vars)
        if (v <= 0) throw ConfigError("var_head must be positive");
    const bool sweep = head_vars.size() > 1;

    const OptimizerConfig oc = optimizer_from_cfg(cfg);
    TrainConfig tc;
    tc.epochs = static_cast<int>(cfg.get_int("epochs", 60));
    tc.batch_size = static_cast<int>(cfg.get_int("batch_size", 0));
    tc.optimizer = oc;
    tc.shuffle_seed = run.seed;
    tc.tracked = sel.units;
    if (tc.epochs < 1) throw ConfigError("epochs must be >= 1");

    std::vector<TrainPoint> points(head_vars.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        points[i].var_head = head_vars[i];
        std::ostringstream tag;
        tag << "var_head_" << head_vars[i];
        points[i].dir = sweep ? run.out / tag.str() : run.out;
    }

    parallel_for(points.size(), run.threads, [&](std::size_t pi) {
        TrainPoint &pt = points[pi];
        ModelConfig mc;
        mc.kind = kind;
        mc.width = static_cast<int>(cfg.get_int("width", 64));
        mc.vocab_size = vocab.size();
        mc.heads = heads;
        mc.vars = variances_from_cfg(cfg, true);
        mc.vars.head = pt.var_head;
        mc.activation = activation_from_cfg(cfg);
        mc.kernel_size = kernel_size;
        mc.cnn_token_slot = static_cast<int>(cfg.get_int("cnn_token_slot", 0));
        mc.max_positions =
            std::max(static_cast<int>(cfg.get_int("max_positions", 64)), max_len);

        Model model(mc, RngStream(run.seed));
        const TrainTrace trace = train(model, corpus, tc);
        pt.final_loss = trace.loss.back();
        pt.final_acc = trace.accuracy.back();

        const std::string prefix = sweep ? pt.dir.filename().string() + "/" : "";
        atomic_write(pt.dir / "train_trace.csv",
                     [&](const std::string &p) { write_train_trace_csv(p, trace, vocab); });
        pt.files.push_back(prefix + "train_trace.csv");
        atomic_write(pt.dir / "checkpoint.json",
                     [&](const std::string &p) { save_model(p, model); });
        pt.files.push_back(prefix + "checkpoint.json");

        const auto L = static_cast<std::size_t>(heads);
        std::vector<Series> score_series;
        std::vector<double> epochs_axis(trace.loss.size());
        for (std::size_t e = 0; e < epochs_axis.size(); ++e)
            epochs_axis[e] = static_cast<double>(e);
        for (std::size_t i = 0; i < sel.units.size() && score_series.size() < 12; ++i)
            for (std::size_t a = 0; a < L && score_series.size() < 12; ++a) {
                Series s;
                s.name = sel.units[i].display(vocab) +
                         (L > 1 ? "/" + std::to_string(a)
                                : class_tag(sel.classes[i], corpus.num_classes));
                s.x = epochs_axis;
                for (std::size_t e = 0; e < epochs_axis.size(); ++e)
                    s.y.push_back(trace.tracked_scores(e, i * L + a));
                score_series.push_back(std::move(s));
            }
        ChartSpec score_chart;
        score_chart.title = "tracked unit scores, " + model_kind_name(kind) +
                            " var_head=" + std::to_string(pt.var_head);
        score_chart.x_label = "epoch";
        score_chart.y_label = "label score";
        write_text_file((pt.dir / "scores.svg").string(),
                        line_chart_svg(score_chart, score_series));
        pt.files.push_back(prefix + "scores.svg");

        Series loss_series{"loss", epochs_axis, trace.loss};
        Series acc_series{"accuracy", epochs_axis, trace.accuracy};
        ChartSpec fit_chart;
        fit_chart.title = "training fit, " + model_kind_name(kind);
        fit_chart.x_label = "epoch";
        fit_chart.y_label = "value";
        write_text_file((pt.dir / "fit.svg").string(),
                        line_chart_svg(fit_chart, {loss_series, acc_series}));
        pt.files.push_back(prefix + "fit.svg");

        if (have_test) {
            const EvalResult er = evaluate(model, test);
            pt.test_acc = er.accuracy;
            for (int c = 0; c < (heads == 1 ? 2 : heads); ++c)
                pt.test_recall.push_back(er.recall(c));
        }

        if (heads == 1) {
            // score change over training, not the absolute value: at large
            // head variance the random initial scores would mask the trend
            double sum_pos = 0.0, sum_neg = 0.0;
            int n_pos = 0, n_neg = 0;
            const std::size_t last = trace.loss.size() - 1;
            for (std::size_t i = 0; i < sel.units.size(); ++i) {
                const double v =
                    std::abs(trace.tracked_scores(last, i) - trace.tracked_scores(0, i));
                if (sel.classes[i] == 1) {
                    sum_pos += v;
                    ++n_pos;
                } else if (sel.classes[i] == 0) {
                    sum_neg += v;
                    ++n_neg;
                }
            }
            if (n_pos > 0 && n_neg > 0 && sum_pos > 0.0)
                pt.bias_ratio = (sum_neg / n_neg) / (sum_pos / n_pos);
        }
    });

    json runs = json::array();
    for (TrainPoint &pt : points) {
        for (const std::string &f : pt.files) run.outputs.push_back(f);
        json r;
        r["var_head"] = pt.var_head;
        r["final_loss"] = pt.final_loss;
        r["train_accuracy"] = pt.final_acc;
        if (pt.test_acc >= 0.0) {
            r["test_accuracy"] = pt.test_acc;
            r["test_recall"] = pt.test_recall;
        }
        if (pt.bias_ratio >= 0.0) r["bias_ratio"] = pt.bias_ratio;
        runs.push_back(r);
        std::cout << "var_head=" << pt.var_head << ": train acc " << pt.final_acc;
        if (pt.test_acc >= 0.0) std::cout << ", test acc " << pt.test_acc;
        if (pt.bias_ratio >= 0.0) std::cout << ", bias ratio " << pt.bias_ratio;
        std::cout << "\n";
    }
    run.results["runs"] = runs;

    if (sweep) {
        std::ostringstream csv;
        csv.precision(12);
        csv << "var_head,final_loss,train_accuracy,test_accuracy,bias_ratio\n";
        for (const TrainPoint &pt : points)
            csv << pt.var_head << ',' << pt.final_loss << ',' << pt.final_acc << ','
                << (pt.test_acc >= 0.0 ? std::to_string(pt.test_acc) : "") << ','
                << (pt.bias_ratio >= 0.0 ? std::to_string(pt.bias_ratio) : "") << '\n';
        write_text_file(run.path("summary.csv").string(), csv.str());

        Series ratio_series;
        ratio_series.name = "bias ratio";
        for (const TrainPoint &pt : points)
            if (pt.bias_ratio >= 0.0) {
                ratio_series.x.push_back(pt.var_head);
                ratio_series.y.push_back(pt.bias_ratio);
            }
        if (!ratio_series.x.empty()) {
            ChartSpec chart;
            chart.title = "negative/positive score magnitude vs head variance";
            chart.x_label = "var_head";
            chart.y_label = "mean |score| ratio";
            chart.log_x = true;
            write_text_file(run.path("bias_ratio.svg").string(),
                            line_chart_svg(chart, {ratio_series}));
        }
    }
    run.manifest("train");
}

// ---------------- negation ----------------

void cmd_negation(const KeyValueConfig &cfg) {
    static const std::vector<std::string> keys = with_common(
        {"corpus", "models", "width", "kernel_size", "cnn_token_slot", "max_positions",
         "var_emb", "var_hidden", "var_head", "var_recur", "optimizer", "lr", "eps", "beta1",
         "beta2", "epochs", "batch_size", "ratio", "trials", "negation_token"});
    cfg.restrict_keys(keys);
    Run run(cfg);

    Vocab vocab;
    const Corpus corpus = load_corpus_from_cfg(cfg, "corpus", vocab);
    if (corpus.num_classes != 2) throw ConfigError("negation probe wants a binary corpus");
    const std::string not_name = cfg.get_string("negation_token", "not");
    const int not_id = vocab.id(not_name);
    if (not_id < 0) throw ConfigError("negation token not in corpus: " + not_name);

    const double ratio = cfg.get_double("ratio", 2.0);
    const CooccurrenceTable table =
        extract_cooccurrence(corpus, TrackedUnit::Kind::Token, ratio);
    std::vector<int> pos_adj, neg_adj;
    for (const CooccurrenceRow &row : table.extracted) {
        if (row.unit.tokens[0] == not_id) continue;
        (row.dominant_class == 1 ? pos_adj : neg_adj).push_back(row.unit.tokens[0]);
    }
    if (pos_adj.empty() || neg_adj.empty())
        throw ConfigError("extraction found no adjectives on one side; lower ratio");

    std::vector<std::string> model_names = {"sa", "mv"};
    if (cfg.has("models")) model_names = cfg.get_string_list("models");
    std::vector<ModelKind> kinds;
    for (const std::string &name : model_names) {
        ModelKind k;
        try {
            k = model_kind_from_name(name);
        } catch (const std::exception &) {
            throw ConfigError("unknown model: " + name);
        }
        if (k != ModelKind::Sa && k != ModelKind::Cnn && k != ModelKind::Mv)
            throw ConfigError("negation probe covers sa, cnn and mv, not " + name);
        kinds.push_back(k);
    }

    const auto trials = static_cast<int>(cfg.get_int("trials", 3));
    if (trials < 1) throw ConfigError("trials must be >= 1");
    const OptimizerConfig oc = optimizer_from_cfg(cfg);
    int max_len = 1;
    for (const Instance &x : corpus.instances)
        max_len = std::max(max_len, static_cast<int>(x.tokens.size()));

    std::ostringstream rows;
    rows.precision(12);
    rows << "model,trial,adjective,polarity,score_plain,score_negated\n";
    std::ostringstream summary;
    summary.precision(12);
    summary << "model,polarity,median_plain,median_negated,verdict\n";
    std::vector<std::string> group_labels;
    std::vector<BarGroup> groups;
    json verdicts = json::object();

    for (ModelKind kind : kinds) {
        std::vector<double> plain_pos, negated_pos, plain_neg, negated_neg;
        for (int t = 0; t < trials; ++t) {
            ModelConfig mc;
            mc.kind = kind;
            mc.width = static_cast<int>(cfg.get_int("width", 64));
            mc.vocab_size = vocab.size();
            mc.heads = 1;
            mc.vars = variances_from_cfg(cfg);
            mc.activation = Activation::Relu;
            mc.kernel_size = static_cast<int>(cfg.get_int("kernel_size", 3));
            mc.cnn_token_slot = static_cast<int>(cfg.get_int("cnn_token_slot", 0));
            mc.max_positions =
                std::max(static_cast<int>(cfg.get_int("max_positions", 64)), max_len);

            Model model(mc, RngStream(run.seed).split(static_cast<std::uint64_t>(t)));
            TrainConfig tc;
            tc.epochs = static_cast<int>(cfg.get_int("epochs", 60));
            tc.batch_size = static_cast<int>(cfg.get_int("batch_size", 0));
            tc.optimizer = oc;
            tc.shuffle_seed = run.seed + static_cast<std::uint64_t>(t);
            train(model, corpus, tc);

            const auto probe = [&](int adj, bool negate) {
                // mv scores bigrams only, so a lone adjective scores zero
                // (an empty pair sum); calling it would be invalid
                if (kind == ModelKind::Mv && !negate) return 0.0;
                Instance x;
                if (negate) x.tokens = {not_id, adj};
                else x.tokens = {adj};
                return model.binary_score(x);
            };
            for (int adj : pos_adj) {
                const double sp = probe(adj, false);
                const double sn = probe(adj, true);
                plain_pos.push_back(sp);
                negated_pos.push_back(sn);
                rows << model_kind_name(kind) << ',' << t << ',' << vocab.token(adj)
                     << ",pos," << sp << ',' << sn << '\n';
            }
            for (int adj : neg_adj) {
                const double sp = probe(adj, false);
                const double sn = probe(adj, true);
                plain_neg.push_back(sp);
                negated_neg.push_back(sn);
                rows << model_kind_name(kind) << ',' << t << ',' << vocab.token(adj)
                     << ",neg," << sp << ',' << sn << '\n';
            }
        }

        const double mp_pos = median(plain_pos);
        const double mn_pos = median(negated_pos);
        const double mp_neg = median(plain_neg);
        const double mn_neg = median(negated_neg);
        // the plain median can sit exactly at zero (mv scores lone
        // adjectives as neutral), so the reversal test is <= / >=
        const std::string pos_verdict = mn_pos < mp_pos
                                            ? (mn_pos < 0.0 && mp_pos >= 0.0 ? "reverses"
                                                                             : "attenuates")
                                            : "no effect";
        const std::string neg_verdict = mn_neg > mp_neg
                                            ? (mn_neg > 0.0 && mp_neg <= 0.0 ? "reverses"
                                                                             : "attenuates")
                                            : "amplifies";
        summary << model_kind_name(kind) << ",pos," << mp_pos << ',' << mn_pos << ','
                << pos_verdict << '\n';
        summary << model_kind_name(kind) << ",neg," << mp_neg << ',' << mn_neg << ','
                << neg_verdict << '\n';
        groups.push_back({model_kind_name(kind) + " pos-adj", {mp_pos, mn_pos}});
        groups.push_back({model_kind_name(kind) + " neg-adj", {mp_neg, mn_neg}});
        verdicts[model_kind_name(kind)] = {
            {"pos_median_plain", mp_pos},       {"pos_median_negated", mn_pos},
            {"neg_median_plain", mp_neg},       {"neg_median_negated", mn_neg},
            {"pos_verdict", pos_verdict},       {"neg_verdict", neg_verdict},
            {"pos_attenuated", mn_pos < mp_pos}, {"neg_alleviated", mn_neg > mp_neg}};
        std::cout << model_kind_name(kind) << ": pos adj " << mp_pos << " -> " << mn_pos
                  << " (" << pos_verdict << "), neg adj " << mp_neg << " -> " << mn_neg
                  << " (" << neg_verdict << ")\n";
    }

    write_text_file(run.path("negation.csv").string(), rows.str());
    write_text_file(run.path("negation_summary.csv").string(), summary.str());
    ChartSpec chart;
    chart.title = "median label score of adjectives, plain vs negated";
    chart.x_label = "model / adjective polarity";
    chart.y_label = "median score";
    write_text_file(run.path("negation.svg").string(),
                    bar_chart_svg(chart, {"plain", not_name + " + adj"}, groups));

    run.results["verdicts"] = verdicts;
    run.results["positive_adjectives"] = pos_adj.size();
    run.results["negative_adjectives"] = neg_adj.size();
    run.manifest("negation");
}

} // namespace

int run_command(const std::string &command, const KeyValueConfig &config) {
    try {
        if (command == "gen") cmd_gen(config);
        else if (command == "extract") cmd_extract(config);
        else if (command == "ntk-check") cmd_ntk_check(config);
        else if (command == "dynamics") cmd_dynamics(config);
        else if (command == "train") cmd_train(config);
        else if (command == "negation") cmd_negation(config);
        else throw ConfigError("unknown command: " + command);
        return 0;
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CorpusError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DivergedError &e) {
        std::cerr << "numeric divergence: " << e.what() << "\n";
        return 3;
    } catch (const NumericError &e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const UnsupportedError &e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return 4;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(int argc, const char *const *argv) {
    CLI::App app{"numerical laboratory for label-score dynamics of tiny text classifiers"};
    app.require_subcommand(1);

    struct SubArgs {
        std::string config_path;
        std::string out_override;
        std::int64_t seed_override = -1;
        int threads_override = 0;
    };
    SubArgs args;
    std::string chosen;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"gen", "generate a synthetic corpus"},
        {"extract", "count and extract class-dominant units"},
        {"ntk-check", "compare empirical kernels against converged formulas"},
        {"dynamics", "simulate infinite-width label-score dynamics"},
        {"train", "train a finite-width model and record unit scores"},
        {"negation", "train on a negation corpus and probe adjective scores"},
    };
    for (const auto &[name, desc] : commands) {
        CLI::App *sub = app.add_subcommand(name, desc);
        sub->add_option("--config", args.config_path, "key = value config file")->required();
        sub->add_option("--out", args.out_override, "output directory override");
        sub->add_option("--seed", args.seed_override, "seed override");
        sub->add_option("--threads", args.threads_override, "worker threads for sweeps");
        sub->callback([&chosen, name = name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        KeyValueConfig cfg = KeyValueConfig::parse_file(args.config_path);
        if (!args.out_override.empty()) cfg.set("out", args.out_override);
        if (args.seed_override >= 0) cfg.set("seed", std::to_string(args.seed_override));
        if (args.threads_override > 0)
            cfg.set("threads", std::to_string(args.threads_override));
        return run_command(chosen, cfg);
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace ntklens
