#include "flexhome/common/config.hpp"

#include <fstream>
#include <sstream>

#include "flexhome/common/errors.hpp"
#include "flexhome/common/strconv.hpp"

namespace flexhome {

namespace {

bool valid_key(std::string_view key) {
    if (key.empty()) return false;
    for (char c : key) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '_' || c == '.';
        if (!ok) return false;
    }
    return true;
}

}  // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_config("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str(), path);
}

Config Config::from_string(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string_view line(text.data() + pos, eol - pos);
        pos = eol + 1;
        ++lineno;

        std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw_config(origin + ":" + format_u64(lineno) + ": expected `key = value`");
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (!valid_key(key))
            throw_config(origin + ":" + format_u64(lineno) + ": invalid key `" + key + "`");
        if (cfg.values_.count(key))
            throw_config(origin + ":" + format_u64(lineno) + ": duplicate key `" + key + "`");
        cfg.values_[key] = value;
    }
    return cfg;
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

void Config::erase(const std::string& key) {
    values_.erase(key);
    consumed_.erase(key);
}

std::string Config::raw(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw_config("missing required config key `" + key + "` (" + origin_ + ")");
    consumed_.insert(key);
    return it->second;
}

std::string Config::require_string(const std::string& key) const { return raw(key); }

std::string Config::get_string(const std::string& key, const std::string& def) const {
    if (!has(key)) return def;
    return raw(key);
}

double Config::require_double(const std::string& key) const {
    double v;
    std::string s = raw(key);
    if (!parse_double(s, v)) throw_config("config key `" + key + "`: not a number: `" + s + "`");
    return v;
}

double Config::get_double(const std::string& key, double def) const {
    if (!has(key)) return def;
    return require_double(key);
}

std::int64_t Config::require_i64(const std::string& key) const {
    std::int64_t v;
    std::string s = raw(key);
    if (!parse_i64(s, v)) throw_config("config key `" + key + "`: not an integer: `" + s + "`");
    return v;
}

std::int64_t Config::get_i64(const std::string& key, std::int64_t def) const {
    if (!has(key)) return def;
    return require_i64(key);
}

std::uint64_t Config::require_u64(const std::string& key) const {
    std::uint64_t v;
    std::string s = raw(key);
    if (!parse_u64(s, v)) throw_config("config key `" + key + "`: not an unsigned integer: `" + s + "`");
    return v;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t def) const {
    if (!has(key)) return def;
    return require_u64(key);
}

bool Config::get_bool(const std::string& key, bool def) const {
    if (!has(key)) return def;
    std::string s = raw(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw_config("config key `" + key + "`: not a boolean: `" + s + "`");
}

std::vector<std::string> Config::get_list(const std::string& key) const {
    std::string s = raw(key);
    if (trim(s).empty()) return {};
    return split(s, ',');
}

std::vector<std::string> Config::keys_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    for (auto it = values_.lower_bound(prefix); it != values_.end(); ++it) {
        if (it->first.compare(0, prefix.size(), prefix) != 0) break;
        out.push_back(it->first);
    }
    return out;
}

void Config::mark_consumed(const std::string& key) const { consumed_.insert(key); }

void Config::merge(const Config& other, const std::string& origin) {
    for (const auto& [k, v] : other.values_) {
        if (values_.count(k))
            throw_config("key `" + k + "` from " + origin + " collides with existing key");
        values_[k] = v;
    }
}

void Config::reject_unknown_keys() const {
    std::vector<std::string> unknown;
    for (const auto& [k, v] : values_) {
        if (!consumed_.count(k)) unknown.push_back(k);
    }
    if (!unknown.empty()) {
        std::string msg = "unknown config key(s):";
        for (const auto& k : unknown) msg += " `" + k + "`";
        msg += " (" + origin_ + ")";
        throw_config(msg);
    }
}

std::string Config::serialize() const {
    std::string out;
    for (const auto& [k, v] : values_) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

void Config::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_io("cannot write config file: " + path);
    out << serialize();
    if (!out) throw_io("failed writing config file: " + path);
}

}  // namespace flexhome
