#include "ntklens/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ntklens {
namespace {

int parse_label(const std::string &text, const std::string &origin, std::size_t line_no) {
    if (text == "+1") return 1;
    if (text == "-1") return 0;
    try {
        std::size_t used = 0;
        const int v = std::stoi(text, &used);
        if (used != text.size() || v < 0) throw std::invalid_argument("");
        return v;
    } catch (const std::exception &) {
        throw CorpusError(origin + ":" + std::to_string(line_no) + ": bad label '" + text + "'");
    }
}

} // namespace

Corpus parse_tsv(const std::string &text, Vocab &vocab, bool fixed_vocab, const std::string &origin) {
    Corpus corpus;
    int max_label = 0;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw CorpusError(origin + ":" + std::to_string(line_no) + ": missing tab separator");
        Instance inst;
        inst.label = parse_label(line.substr(0, tab), origin, line_no);
        std::istringstream toks(line.substr(tab + 1));
        std::string tok;
        while (toks >> tok) {
            int id;
            if (fixed_vocab) {
                id = vocab.id(tok);
                if (id < 0)
                    throw CorpusError(origin + ":" + std::to_string(line_no) +
                                      ": token '" + tok + "' not in vocabulary");
            } else {
                id = vocab.add(tok);
            }
            inst.tokens.push_back(id);
        }
        if (inst.tokens.empty())
            throw CorpusError(origin + ":" + std::to_string(line_no) + ": empty token list");
        max_label = std::max(max_label, inst.label);
        corpus.instances.push_back(std::move(inst));
    }
    corpus.num_classes = std::max(2, max_label + 1);
    return corpus;
}

Corpus load_tsv(const std::string &path, Vocab &vocab, bool fixed_vocab) {
    std::ifstream in(path);
    if (!in) throw CorpusError("cannot open corpus file: " + path);
    std::ostringstream body;
    body << in.rdbuf();
    return parse_tsv(body.str(), vocab, fixed_vocab, path);
}

Instance make_instance(Vocab &vocab, const std::vector<std::string> &tokens, int label) {
    Instance inst;
    inst.label = label;
    for (const auto &tok : tokens) inst.tokens.push_back(vocab.add(tok));
    return inst;
}

void save_tsv(const std::string &path, const Corpus &corpus, const Vocab &vocab) {
    std::ofstream out(path);
    if (!out) throw CorpusError("cannot write corpus file: " + path);
    for (const Instance &inst : corpus.instances) {
        if (corpus.num_classes == 2)
            out << (inst.label == 1 ? "+1" : "-1");
        else
            out << inst.label;
        out << '\t';
        for (std::size_t j = 0; j < inst.tokens.size(); ++j) {
            if (j) out << ' ';
            out << vocab.token(inst.tokens[j]);
        }
        out << '\n';
    }
    if (!out) throw CorpusError("write failed: " + path);
}

} // namespace ntklens
