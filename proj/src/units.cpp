#include "ntklens/units.hpp"

#include <stdexcept>

namespace ntklens {

TrackedUnit TrackedUnit::token(int id) { return {Kind::Token, {id}, 0}; }

TrackedUnit TrackedUnit::window(std::vector<int> ids) {
    if (ids.empty()) throw std::invalid_argument("window unit needs at least one token");
    return {Kind::Window, std::move(ids), 0};
}

TrackedUnit TrackedUnit::bigram(int first, int second) { return {Kind::Bigram, {first, second}, 0}; }

TrackedUnit TrackedUnit::token_position(int id, int distance) {
    if (distance < 0) throw std::invalid_argument("token position distance must be >= 0");
    return {Kind::TokenPosition, {id}, distance};
}

std::string TrackedUnit::display(const Vocab &vocab) const {
    switch (kind) {
    case Kind::Token: return vocab.token(tokens[0]);
    case Kind::Bigram: return vocab.token(tokens[0]) + " " + vocab.token(tokens[1]);
    case Kind::TokenPosition: return vocab.token(tokens[0]) + "@" + std::to_string(distance);
    case Kind::Window: {
        std::string out = "[";
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (i) out += ' ';
            out += vocab.token(tokens[i]);
        }
        out += ']';
        return out;
    }
    }
    throw std::invalid_argument("bad unit kind");
}

std::string unit_kind_name(TrackedUnit::Kind kind) {
    switch (kind) {
    case TrackedUnit::Kind::Token: return "token";
    case TrackedUnit::Kind::Window: return "window";
    case TrackedUnit::Kind::Bigram: return "bigram";
    case TrackedUnit::Kind::TokenPosition: return "token_position";
    }
    throw std::invalid_argument("bad unit kind");
}

TrackedUnit::Kind unit_kind_from_name(const std::string &name) {
    if (name == "token") return TrackedUnit::Kind::Token;
    if (name == "window") return TrackedUnit::Kind::Window;
    if (name == "bigram") return TrackedUnit::Kind::Bigram;
    if (name == "token_position") return TrackedUnit::Kind::TokenPosition;
    throw std::invalid_argument("unknown unit kind: " + name);
}

} // namespace ntklens
