#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "phasim/phase.hpp"

namespace phasim::harness {

/// Flat `section.key = value` text format. `#` starts a comment.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::string_view text, const std::string& origin = "<string>");
    static KeyValueConfig load(const std::filesystem::path& path);

    bool contains(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> find(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::vector<int> get_int_list(const std::string& key) const;

    /// Keys never looked up through a getter.
    std::vector<std::string> unused_keys() const;

    const std::string& origin() const { return origin_; }

private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> used_;
    std::string origin_;
};

/// Accepts "<float>", "<float>pi", "pi" and "dyadic:<bits>" (bits listed a_K first).
Phase parse_phase_literal(std::string_view text);

}  // namespace phasim::harness
