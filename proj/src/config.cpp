#include "ntklens/config.hpp"

#include "ntklens/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace ntklens {

std::string trim(const std::string &s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

KeyValueConfig KeyValueConfig::parse_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

KeyValueConfig KeyValueConfig::parse_text(const std::string &text, const std::string &origin) {
    KeyValueConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const std::size_t hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected key = value, got \"" + line + "\"");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (cfg.index_.count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key \"" +
                              key + "\"");
        cfg.entries_.emplace_back(key, value);
        cfg.index_[key] = value;
    }
    return cfg;
}

bool KeyValueConfig::has(const std::string &key) const { return index_.count(key) != 0; }

void KeyValueConfig::set(const std::string &key, const std::string &value) {
    if (index_.count(key)) {
        index_[key] = value;
        for (auto &[k, v] : entries_)
            if (k == key) v = value;
    } else {
        entries_.emplace_back(key, value);
        index_[key] = value;
    }
}

std::string KeyValueConfig::raw(const std::string &key) const {
    const auto it = index_.find(key);
    if (it == index_.end())
        throw ConfigError(origin_ + ": missing required key \"" + key + "\"");
    return it->second;
}

std::string KeyValueConfig::get_string(const std::string &key) const { return raw(key); }

std::string KeyValueConfig::get_string(const std::string &key,
                                       const std::string &fallback) const {
    return has(key) ? raw(key) : fallback;
}

namespace {

std::int64_t parse_int(const std::string &origin, const std::string &key,
                       const std::string &value) {
    try {
        std::size_t used = 0;
        const std::int64_t v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception &) {
        throw ConfigError(origin + ": key \"" + key + "\": not an integer: \"" + value + "\"");
    }
}

double parse_double(const std::string &origin, const std::string &key,
                    const std::string &value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception &) {
        throw ConfigError(origin + ": key \"" + key + "\": not a number: \"" + value + "\"");
    }
}

} // namespace

std::int64_t KeyValueConfig::get_int(const std::string &key) const {
    return parse_int(origin_, key, raw(key));
}

std::int64_t KeyValueConfig::get_int(const std::string &key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}

double KeyValueConfig::get_double(const std::string &key) const {
    return parse_double(origin_, key, raw(key));
}

double KeyValueConfig::get_double(const std::string &key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

bool KeyValueConfig::get_bool(const std::string &key) const {
    std::string v = raw(key);
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError(origin_ + ": key \"" + key + "\": not a boolean: \"" + raw(key) + "\"");
}

bool KeyValueConfig::get_bool(const std::string &key, bool fallback) const {
    return has(key) ? get_bool(key) : fallback;
}

std::vector<std::string> KeyValueConfig::get_string_list(const std::string &key) const {
    const std::string value = raw(key);
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        const std::size_t comma = value.find(',', start);
        const std::string item =
            trim(comma == std::string::npos ? value.substr(start)
                                            : value.substr(start, comma - start));
        if (item.empty())
            throw ConfigError(origin_ + ": key \"" + key + "\": empty list item");
        out.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<std::int64_t> KeyValueConfig::get_int_list(const std::string &key) const {
    std::vector<std::int64_t> out;
    for (const std::string &item : get_string_list(key))
        out.push_back(parse_int(origin_, key, item));
    return out;
}

std::vector<double> KeyValueConfig::get_double_list(const std::string &key) const {
    std::vector<double> out;
    for (const std::string &item : get_string_list(key))
        out.push_back(parse_double(origin_, key, item));
    return out;
}

void KeyValueConfig::restrict_keys(std::span<const std::string> allowed) const {
    for (const auto &[key, value] : entries_) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(origin_ + ": unknown key \"" + key + "\"");
    }
}

} // namespace ntklens
