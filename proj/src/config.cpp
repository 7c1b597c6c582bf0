#include "vesd/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "vesd/csv.hpp"

namespace vesd {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

}  // namespace

Config Config::parse(std::string_view text) {
    Config config;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section.empty()) throw ConfigError("empty section name", line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected key = value", line_no);
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("missing key before '='", line_no);
        const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
        if (config.entries_.contains(full)) throw ConfigError("duplicate key", line_no, full);
        config.entries_[full] = {std::string(trim(line.substr(eq + 1))), line_no};
        if (end == text.size()) break;
    }
    return config;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

void Config::apply_override(std::string_view assignment, const std::set<std::string>& known) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ConfigError("override must be key=value: " + std::string(assignment));
    const std::string key(trim(assignment.substr(0, eq)));
    if (!known.contains(key)) throw ConfigError("unknown key '" + key + "'", 0, key);
    set(key, std::string(trim(assignment.substr(eq + 1))));
}

void Config::set(const std::string& key, std::string value) { entries_[key] = {std::move(value), 0}; }

void Config::reject_unknown(const std::set<std::string>& known) const {
    for (const auto& [key, entry] : entries_)
        if (!known.contains(key)) throw ConfigError("unknown key '" + key + "'", entry.line, key);
}

void Config::fail(const std::string& key, const std::string& what) const {
    const auto it = entries_.find(key);
    throw ConfigError(key + ": " + what, it == entries_.end() ? 0 : it->second.line, key);
}

std::optional<std::string> Config::get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.value;
}

std::optional<double> Config::get_double(const std::string& key) const {
    const auto text = get_string(key);
    if (!text) return std::nullopt;
    try {
        return parse_double(*text);
    } catch (const DomainError&) {
        fail(key, "expected a number, got '" + *text + "'");
    }
}

std::optional<std::uint64_t> Config::get_uint(const std::string& key) const {
    const auto text = get_string(key);
    if (!text) return std::nullopt;
    std::uint64_t value = 0;
    const auto result = std::from_chars(text->data(), text->data() + text->size(), value);
    if (result.ec != std::errc{} || result.ptr != text->data() + text->size())
        fail(key, "expected a non-negative integer, got '" + *text + "'");
    return value;
}

std::optional<bool> Config::get_bool(const std::string& key) const {
    const auto text = get_string(key);
    if (!text) return std::nullopt;
    if (*text == "true" || *text == "1" || *text == "yes" || *text == "on") return true;
    if (*text == "false" || *text == "0" || *text == "no" || *text == "off") return false;
    fail(key, "expected true or false, got '" + *text + "'");
}

std::optional<std::vector<std::string>> Config::get_list(const std::string& key) const {
    const auto text = get_string(key);
    if (!text) return std::nullopt;
    std::vector<std::string> items;
    for (const auto& field : split_csv_line(*text)) {
        const auto item = trim(field);
        if (item.empty()) fail(key, "empty list item");
        items.emplace_back(item);
    }
    return items;
}

// ---------------------------------------------------------------------------

const std::set<std::string>& ensemble_keys() {
    static const std::set<std::string> keys = {
        "ensemble.n",        "ensemble.symmetry",         "ensemble.entry_law",      "ensemble.construction",
        "ensemble.truncate", "ensemble.epsilon_exponent", "ensemble.remove_diagonal"};
    return keys;
}

EnsembleSpec ensemble_from_config(const Config& config) {
    EnsembleSpec spec;
    const auto wrap = [&](const std::string& key, auto&& parse) {
        if (const auto text = config.get_string(key)) {
            try {
                parse(*text);
            } catch (const DomainError& e) {
                const auto line = config.entries().at(key).line;
                throw ConfigError(key + ": " + e.what(), line, key);
            }
        }
    };
    if (const auto n = config.get_uint("ensemble.n")) spec.n = static_cast<std::size_t>(*n);
    wrap("ensemble.symmetry", [&](const std::string& t) { spec.symmetry = parse_symmetry(t); });
    wrap("ensemble.entry_law", [&](const std::string& t) { spec.entry_law = EntryLaw::parse(t); });
    wrap("ensemble.construction", [&](const std::string& t) { spec.construction = parse_construction(t); });
    if (const auto b = config.get_bool("ensemble.truncate")) spec.preprocessing.enabled = *b;
    if (const auto e = config.get_double("ensemble.epsilon_exponent")) spec.preprocessing.epsilon_exponent = *e;
    if (const auto b = config.get_bool("ensemble.remove_diagonal")) spec.preprocessing.remove_diagonal = *b;

    // Report cross-field problems against the construction line when present.
    try {
        EnsembleSpec probe = spec;
        probe.n = std::max<std::size_t>(probe.n, 2);
        probe.validate();
    } catch (const DomainError& e) {
        const auto it = config.entries().find("ensemble.construction");
        throw ConfigError(std::string("ensemble: ") + e.what(), it == config.entries().end() ? 0 : it->second.line,
                          "ensemble.construction");
    }
    return spec;
}

std::string to_config_text(const EnsembleSpec& spec) {
    std::ostringstream out;
    out << "[ensemble]\n"
        << "n = " << spec.n << '\n'
        << "symmetry = " << to_string(spec.symmetry) << '\n'
        << "entry_law = " << spec.entry_law.name() << '\n'
        << "construction = " << to_string(spec.construction) << '\n'
        << "truncate = " << fmt_bool(spec.preprocessing.enabled) << '\n'
        << "epsilon_exponent = " << format_double(spec.preprocessing.epsilon_exponent) << '\n'
        << "remove_diagonal = " << fmt_bool(spec.preprocessing.remove_diagonal) << '\n';
    return out.str();
}

EnsembleSpec parse_ensemble_shorthand(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "goe") return EnsembleSpec::goe(2);
    if (lower == "gue") return EnsembleSpec::gue(2);
    const auto dash = lower.find('-');
    if (dash == std::string::npos) throw DomainError("unknown ensemble '" + std::string(text) + "'");
    EnsembleSpec spec;
    spec.symmetry = parse_symmetry(lower.substr(0, dash));
    spec.construction = Construction::DirectEntries;
    spec.entry_law = EntryLaw::parse(std::string(text.substr(dash + 1)));
    return spec;
}

}  // namespace vesd
