#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace flexhome {

// Flat `key = value` config file. '#' starts a comment, keys are dotted
// lowercase identifiers, values are kept verbatim (trimmed) so a re-serialized
// snapshot is byte-stable. Every consumer marks the keys it reads; the stage
// entry points reject configs that still contain unread keys, which is how
// "unknown keys are errors" is enforced without a central schema table.
class Config {
public:
    Config() = default;

    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    void set(const std::string& key, const std::string& value);
    void erase(const std::string& key);

    // Typed getters. The require_* variants throw ConfigError when the key is
    // missing; the get_* variants take a default. All mark the key consumed.
    std::string require_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& def) const;
    double require_double(const std::string& key) const;
    double get_double(const std::string& key, double def) const;
    std::int64_t require_i64(const std::string& key) const;
    std::int64_t get_i64(const std::string& key, std::int64_t def) const;
    std::uint64_t require_u64(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t def) const;
    bool get_bool(const std::string& key, bool def) const;

    // Comma-separated list value.
    std::vector<std::string> get_list(const std::string& key) const;

    // Keys beginning with `prefix` (consumes nothing).
    std::vector<std::string> keys_with_prefix(const std::string& prefix) const;
    void mark_consumed(const std::string& key) const;

    // Merge all keys of another config; duplicate keys are an error.
    void merge(const Config& other, const std::string& origin);

    // Throws listing any key never consumed ("unknown key").
    void reject_unknown_keys() const;

    // Deterministic serialization: sorted keys, `key = value`, LF endings.
    std::string serialize() const;
    void write_file(const std::string& path) const;

    const std::string& origin() const { return origin_; }

private:
    std::string raw(const std::string& key) const;

    std::map<std::string, std::string> values_;
    mutable std::set<std::string> consumed_;
    std::string origin_;
};

}  // namespace flexhome
