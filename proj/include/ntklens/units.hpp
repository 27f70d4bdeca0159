#pragma once

#include "ntklens/vocab.hpp"

#include <string>
#include <vector>

namespace ntklens {

// Interpretable unit whose score or kernel row we follow.
//   Token:         a single token (id in tokens[0])
//   Window:        a convolution window, tokens.size() == kernel size,
//                  entries may be Vocab::kPadId
//   Bigram:        an ordered adjacent pair (tokens[0], tokens[1])
//   TokenPosition: a token at `distance` counted back from the last token
//                  (distance 0 = last token)
struct TrackedUnit {
    enum class Kind { Token, Window, Bigram, TokenPosition };

    Kind kind = Kind::Token;
    std::vector<int> tokens;
    int distance = 0;

    static TrackedUnit token(int id);
    static TrackedUnit window(std::vector<int> ids);
    static TrackedUnit bigram(int first, int second);
    static TrackedUnit token_position(int id, int distance);

    bool operator==(const TrackedUnit &other) const = default;

    // "good", "good movie", "good@2", "[good bad <pad>]"
    std::string display(const Vocab &vocab) const;
};

std::string unit_kind_name(TrackedUnit::Kind kind);
TrackedUnit::Kind unit_kind_from_name(const std::string &name);

} // namespace ntklens
