#pragma once

// Flat key-value experiment configuration: one 'key = value' per line,
// '#' comment lines, no sections. Unknown and duplicate keys are hard errors
// so a typo in a gain name cannot pass silently.

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rotor {

class Config {
  public:
    static Config load(const std::filesystem::path& path);
    static Config from_string(std::string_view text, std::string source = "<string>");

    bool has(const std::string& key) const { return entries_.contains(key); }

    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::vector<double> get_list(const std::string& key, std::span<const double> fallback) const;

    // Rejects any key not in 'known' with a line diagnostic.
    void check_known(std::span<const std::string_view> known) const;

    void set(const std::string& key, const std::string& value); // CLI overrides

  private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::map<std::string, Entry> entries_;
    std::string source_ = "<none>";

    [[noreturn]] void fail(const std::string& key, const std::string& why) const;
};

} // namespace rotor
