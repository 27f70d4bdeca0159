#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace ntklens {

// Token table. Id 0 is reserved for the padding symbol, which models embed
// as the zero vector; real tokens start at id 1.
class Vocab {
public:
    static constexpr int kPadId = 0;

    Vocab();

    int add(const std::string &token);      // returns existing id if known
    int id(const std::string &token) const; // -1 if unknown
    const std::string &token(int id) const;
    int size() const { return static_cast<int>(tokens_.size()); }

private:
    std::unordered_map<std::string, int> ids_;
    std::vector<std::string> tokens_;
};

} // namespace ntklens
