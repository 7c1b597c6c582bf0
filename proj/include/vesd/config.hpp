#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vesd/ensemble.hpp"

namespace vesd {

/// Flat `key = value` text grouped into `[section]` blocks. `#` and `;`
/// start comments. Keys are addressed as "section.key".
class Config {
public:
    struct Entry {
        std::string value;
        std::size_t line = 0;  ///< 0 for command-line overrides
    };

    static Config parse(std::string_view text);
    static Config load(const std::filesystem::path& path);

    /// Applies "section.key=value"; rejects keys outside `known`.
    void apply_override(std::string_view assignment, const std::set<std::string>& known);
    void set(const std::string& key, std::string value);

    bool has(const std::string& key) const { return entries_.contains(key); }
    const std::map<std::string, Entry>& entries() const { return entries_; }

    /// Throws ConfigError naming the first key not in `known`.
    void reject_unknown(const std::set<std::string>& known) const;

    std::optional<std::string> get_string(const std::string& key) const;
    std::optional<double> get_double(const std::string& key) const;
    std::optional<std::uint64_t> get_uint(const std::string& key) const;
    std::optional<bool> get_bool(const std::string& key) const;
    std::optional<std::vector<std::string>> get_list(const std::string& key) const;

private:
    [[noreturn]] void fail(const std::string& key, const std::string& what) const;

    std::map<std::string, Entry> entries_;
};

/// Field names of the [ensemble] section.
const std::set<std::string>& ensemble_keys();

/// Reads an EnsembleSpec from the [ensemble] section; absent keys keep the
/// GOE defaults. Errors are reported as ConfigError with the line.
EnsembleSpec ensemble_from_config(const Config& config);

/// Inverse of ensemble_from_config, as an [ensemble] block.
std::string to_config_text(const EnsembleSpec& spec);

/// Parses an ensemble shorthand: goe, gue, real-<law>, complex-<law>.
EnsembleSpec parse_ensemble_shorthand(std::string_view text);

}  // namespace vesd
