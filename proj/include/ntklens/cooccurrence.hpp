#pragma once

#include "ntklens/corpus.hpp"
#include "ntklens/units.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ntklens {

struct CooccurrenceRow {
    TrackedUnit unit;
    std::vector<std::int64_t> counts; // per class, every occurrence counts
    int dominant_class = 0;           // only meaningful for extracted rows
    double ratio = 0.0;               // dominant count / max(other counts, 1)
};

struct CooccurrenceTable {
    TrackedUnit::Kind kind = TrackedUnit::Kind::Token;
    int num_classes = 2;
    std::vector<CooccurrenceRow> rows;      // all observed units
    std::vector<CooccurrenceRow> extracted; // rows passing the ratio test

    std::vector<TrackedUnit> extracted_units(int cls) const;
};

// Counts units of `kind` per class and extracts the class-dominant ones.
// A unit is extracted for class c when count(u, c) >= ratio * M where M is
// the largest count among the other classes; M == 0 (unit never seen
// elsewhere) passes at any finite ratio, and the reported ratio then uses a
// floor of 1 in the denominator.
//
// Bigrams are ordered adjacent pairs. Token positions are distances from
// the last token, 0 <= distance < length - 1.
CooccurrenceTable extract_cooccurrence(const Corpus &corpus, TrackedUnit::Kind kind,
                                       double ratio);

// CSV with header unit,kind,class,count_pos,count_neg,ratio (binary) or
// unit,kind,class,count_0..count_{L-1},ratio (multi-class). Extracted rows
// only.
void write_cooccurrence_csv(const std::string &path, const CooccurrenceTable &table,
                            const Vocab &vocab);
std::string cooccurrence_csv(const CooccurrenceTable &table, const Vocab &vocab);

} // namespace ntklens
