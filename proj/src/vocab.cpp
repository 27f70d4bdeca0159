#include "ntklens/vocab.hpp"

#include <stdexcept>

namespace ntklens {

Vocab::Vocab() {
    tokens_.push_back("<pad>");
    ids_["<pad>"] = kPadId;
}

int Vocab::add(const std::string &token) {
    auto it = ids_.find(token);
    if (it != ids_.end()) return it->second;
    const int id = size();
    ids_[token] = id;
    tokens_.push_back(token);
    return id;
}

int Vocab::id(const std::string &token) const {
    auto it = ids_.find(token);
    return it == ids_.end() ? -1 : it->second;
}

const std::string &Vocab::token(int id) const {
    if (id < 0 || id >= size()) throw std::invalid_argument("Vocab::token: id out of range");
    return tokens_[static_cast<std::size_t>(id)];
}

} // namespace ntklens
