#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rsde/study.hpp"

namespace rsde {

/// Value of one config key: bool, integer, float, string, or a homogeneous
/// array of numbers or strings.
using ConfigValue =
    std::variant<bool, std::int64_t, double, std::string, std::vector<double>, std::vector<std::string>>;

/// Declarative key/value tree with [section] headers; a small TOML subset
/// (quoted strings, numbers, booleans, flat arrays, # comments).
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path); // IoError when unreadable
    static ConfigFile parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;
    std::vector<std::string> keys(const std::string& section) const;

    // typed getters: throw ConfigError naming section.key on absence/mismatch
    bool get_bool(const std::string& section, const std::string& key) const;
    std::int64_t get_int(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key) const;
    std::vector<double> get_double_array(const std::string& section, const std::string& key) const;

    bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const;
    std::int64_t get_int_or(const std::string& section, const std::string& key, std::int64_t fallback) const;
    double get_double_or(const std::string& section, const std::string& key, double fallback) const;
    std::string get_string_or(const std::string& section, const std::string& key,
                              std::string fallback) const;

    /// Canonical serialization (sections and keys sorted, 17-digit numbers);
    /// input to the config hash used in report file names.
    std::string canonical() const;

private:
    std::map<std::string, std::map<std::string, ConfigValue>> sections_;
};

/// FNV-1a 64 over the canonical serialization, as 16 hex digits.
std::string config_hash(const ConfigFile& cfg);

// Builders from config sections. All resolve registered names eagerly so that
// unknown presets fail before any computation starts.
DomainShape build_domain(const ConfigFile& cfg);
ApproxDriver build_driver(const ConfigFile& cfg, std::optional<double> delta_override = std::nullopt);
Coefficients build_coefficients(const ConfigFile& cfg);
StudyConfig build_study(const ConfigFile& cfg);

} // namespace rsde
