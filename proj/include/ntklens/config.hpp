#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ntklens {

// Flat `key = value` config with `#` comments. Keys are unique; every typed
// accessor throws ConfigError with the origin attached on bad input. Sweeps
// are comma lists read through the *_list getters.
class KeyValueConfig {
public:
    static KeyValueConfig parse_file(const std::string &path);
    static KeyValueConfig parse_text(const std::string &text,
                                     const std::string &origin = "<config>");

    bool has(const std::string &key) const;
    void set(const std::string &key, const std::string &value); // upsert (CLI overrides)

    std::string get_string(const std::string &key) const; // required
    std::string get_string(const std::string &key, const std::string &fallback) const;
    std::int64_t get_int(const std::string &key) const;
    std::int64_t get_int(const std::string &key, std::int64_t fallback) const;
    double get_double(const std::string &key) const;
    double get_double(const std::string &key, double fallback) const;
    bool get_bool(const std::string &key) const;
    bool get_bool(const std::string &key, bool fallback) const;

    std::vector<std::string> get_string_list(const std::string &key) const;
    std::vector<std::int64_t> get_int_list(const std::string &key) const;
    std::vector<double> get_double_list(const std::string &key) const;

    // Rejects any present key outside `allowed`.
    void restrict_keys(std::span<const std::string> allowed) const;

    // Insertion order; feeds the run manifest.
    const std::vector<std::pair<std::string, std::string>> &entries() const { return entries_; }
    const std::string &origin() const { return origin_; }

private:
    std::string raw(const std::string &key) const;

    std::string origin_ = "<config>";
    std::vector<std::pair<std::string, std::string>> entries_;
    std::map<std::string, std::string> index_;
};

std::string trim(const std::string &s);

} // namespace ntklens
