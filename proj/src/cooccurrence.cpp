#include "ntklens/cooccurrence.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ntklens {
namespace {

// Map key: (kind-invariant) token ids plus distance.
using UnitKey = std::pair<std::vector<int>, int>;

UnitKey key_of(const TrackedUnit &u) { return {u.tokens, u.distance}; }

void count_instance(const Instance &inst, TrackedUnit::Kind kind,
                    std::map<UnitKey, std::vector<std::int64_t>> &counts, int num_classes) {
    const auto bump = [&](const TrackedUnit &u) {
        auto &row = counts[key_of(u)];
        if (row.empty()) row.assign(static_cast<std::size_t>(num_classes), 0);
        ++row[static_cast<std::size_t>(inst.label)];
    };
    const std::size_t l = inst.tokens.size();
    switch (kind) {
    case TrackedUnit::Kind::Token:
        for (int t : inst.tokens) bump(TrackedUnit::token(t));
        break;
    case TrackedUnit::Kind::Bigram:
        for (std::size_t j = 0; j + 1 < l; ++j)
            bump(TrackedUnit::bigram(inst.tokens[j], inst.tokens[j + 1]));
        break;
    case TrackedUnit::Kind::TokenPosition:
        // Distance from the last token; the first token (distance l-1) is
        // not counted.
        for (std::size_t k = 0; k + 1 < l; ++k)
            bump(TrackedUnit::token_position(inst.tokens[l - 1 - k], static_cast<int>(k)));
        break;
    case TrackedUnit::Kind::Window:
        throw std::invalid_argument("window units are not counted from corpora");
    }
}

TrackedUnit unit_from_key(TrackedUnit::Kind kind, const UnitKey &key) {
    TrackedUnit u;
    u.kind = kind;
    u.tokens = key.first;
    u.distance = key.second;
    return u;
}

} // namespace

std::vector<TrackedUnit> CooccurrenceTable::extracted_units(int cls) const {
    std::vector<TrackedUnit> out;
    for (const auto &row : extracted)
        if (row.dominant_class == cls) out.push_back(row.unit);
    return out;
}

CooccurrenceTable extract_cooccurrence(const Corpus &corpus, TrackedUnit::Kind kind,
                                       double ratio) {
    if (ratio < 1.0) throw std::invalid_argument("extraction ratio must be >= 1");
    if (corpus.instances.empty()) throw std::invalid_argument("empty corpus");

    std::map<UnitKey, std::vector<std::int64_t>> counts;
    for (const Instance &inst : corpus.instances)
        count_instance(inst, kind, counts, corpus.num_classes);

    CooccurrenceTable table;
    table.kind = kind;
    table.num_classes = corpus.num_classes;
    for (const auto &[key, per_class] : counts) {
        CooccurrenceRow row;
        row.unit = unit_from_key(kind, key);
        row.counts = per_class;
        table.rows.push_back(row);
        for (int c = 0; c < corpus.num_classes; ++c) {
            const std::int64_t own = per_class[static_cast<std::size_t>(c)];
            if (own <= 0) continue;
            std::int64_t other_max = 0;
            for (int o = 0; o < corpus.num_classes; ++o)
                if (o != c) other_max = std::max(other_max, per_class[static_cast<std::size_t>(o)]);
            if (static_cast<double>(own) >= ratio * static_cast<double>(other_max)) {
                CooccurrenceRow hit = row;
                hit.dominant_class = c;
                hit.ratio = static_cast<double>(own) /
                            static_cast<double>(std::max<std::int64_t>(other_max, 1));
                table.extracted.push_back(std::move(hit));
            }
        }
    }
    return table;
}

std::string cooccurrence_csv(const CooccurrenceTable &table, const Vocab &vocab) {
    std::ostringstream out;
    const bool binary = table.num_classes == 2;
    out << "unit,kind,class,";
    if (binary) {
        out << "count_pos,count_neg,ratio\n";
    } else {
        for (int c = 0; c < table.num_classes; ++c) out << "count_" << c << ",";
        out << "ratio\n";
    }
    for (const auto &row : table.extracted) {
        out << row.unit.display(vocab) << ',' << unit_kind_name(table.kind) << ',';
        if (binary)
            out << (row.dominant_class == 1 ? "+1" : "-1") << ',' << row.counts[1] << ','
                << row.counts[0] << ',';
        else {
            out << row.dominant_class << ',';
            for (const auto c : row.counts) out << c << ',';
        }
        out << row.ratio << '\n';
    }
    return out.str();
}

void write_cooccurrence_csv(const std::string &path, const CooccurrenceTable &table,
                            const Vocab &vocab) {
    std::ofstream out(path);
    if (!out) throw CorpusError("cannot write table: " + path);
    out << cooccurrence_csv(table, vocab);
    if (!out) throw CorpusError("write failed: " + path);
}

} // namespace ntklens
