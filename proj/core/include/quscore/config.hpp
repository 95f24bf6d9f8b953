#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "quscore/errors.hpp"

namespace quscore {

/// Flat TOML-style key/value file: `key = value` lines, `#` comments,
/// values either "double-quoted" or bare tokens.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig load(const std::filesystem::path& path);
    static KeyValueConfig parse(std::string_view text, const std::string& origin);

    std::optional<std::string> get(const std::string& key) const;
    double get_number(const std::string& key) const;     // throws on bad numbers
    std::int64_t get_integer(const std::string& key) const;
    bool get_bool(const std::string& key) const;

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace quscore
