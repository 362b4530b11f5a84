#include "rotor/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rotor/errors.hpp"

namespace rotor {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, bool& ok) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    ok = !v.empty() && end == v.c_str() + v.size();
    return x;
}

} // namespace

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config '" + path.string() + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str(), path.string());
}

Config Config::from_string(std::string_view text, std::string source) {
    Config c;
    c.source_ = std::move(source);
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') {
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(c.source_ + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(c.source_ + ":" + std::to_string(line_no) + ": empty key");
        }
        if (c.entries_.contains(key)) {
            throw ConfigError(c.source_ + ":" + std::to_string(line_no) + ": duplicate key '" +
                              key + "' (first at line " +
                              std::to_string(c.entries_[key].line) + ")");
        }
        c.entries_[key] = Entry{value, line_no};
    }
    return c;
}

void Config::fail(const std::string& key, const std::string& why) const {
    const auto it = entries_.find(key);
    const std::string at =
        it != entries_.end() ? ":" + std::to_string(it->second.line) : "";
    throw ConfigError(source_ + at + ": key '" + key + "': " + why);
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        return fallback;
    }
    bool ok = false;
    const double v = parse_double(it->second.value, ok);
    if (!ok) {
        fail(key, "not a number: '" + it->second.value + "'");
    }
    return v;
}

int Config::get_int(const std::string& key, int fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        return fallback;
    }
    bool ok = false;
    const double v = parse_double(it->second.value, ok);
    if (!ok || v != static_cast<double>(static_cast<int>(v))) {
        fail(key, "not an integer: '" + it->second.value + "'");
    }
    return static_cast<int>(v);
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        return fallback;
    }
    const std::string& v = it->second.value;
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size()) {
        fail(key, "not an unsigned integer: '" + v + "'");
    }
    return x;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        return fallback;
    }
    std::string v = it->second.value;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "on" || v == "yes") {
        return true;
    }
    if (v == "false" || v == "0" || v == "off" || v == "no") {
        return false;
    }
    fail(key, "not a boolean: '" + it->second.value + "'");
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second.value;
}

std::vector<double> Config::get_list(const std::string& key,
                                     std::span<const double> fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        return {fallback.begin(), fallback.end()};
    }
    std::vector<double> out;
    std::string cur;
    const std::string& v = it->second.value;
    for (std::size_t i = 0; i <= v.size(); ++i) {
        if (i == v.size() || v[i] == ',') {
            bool ok = false;
            const double x = parse_double(trim(cur), ok);
            if (!ok) {
                fail(key, "not a number list: '" + v + "'");
            }
            out.push_back(x);
            cur.clear();
        } else {
            cur += v[i];
        }
    }
    if (out.empty()) {
        fail(key, "empty list");
    }
    return out;
}

void Config::check_known(std::span<const std::string_view> known) const {
    for (const auto& [key, entry] : entries_) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError(source_ + ":" + std::to_string(entry.line) +
                              ": unknown key '" + key + "'");
        }
    }
}

void Config::set(const std::string& key, const std::string& value) {
    entries_[key] = Entry{value, 0};
}

} // namespace rotor
