#include "phasim/harness/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "phasim/errors.hpp"

namespace phasim::harness {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, const std::string& context) {
    double v = 0.0;
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) throw Error(ErrorKind::ConfigError, context + ": not a number: '" + std::string(text) + "'");
    return v;
}

long long parse_int(std::string_view text, const std::string& context) {
    long long v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw Error(ErrorKind::ConfigError, context + ": not an integer: '" + std::string(text) + "'");
    return v;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text, const std::string& origin) {
    KeyValueConfig cfg;
    cfg.origin_ = origin;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto next = text.find('\n', pos);
        std::string_view line = text.substr(pos, next == std::string_view::npos ? text.size() - pos : next - pos);
        pos = next == std::string_view::npos ? text.size() + 1 : next + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(line_no);
        if (eq == std::string_view::npos) throw Error(ErrorKind::ConfigError, where + ": expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw Error(ErrorKind::ConfigError, where + ": empty key");
        if (!cfg.values_.emplace(key, value).second) throw Error(ErrorKind::ConfigError, where + ": duplicate key '" + key + "'");
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ConfigError, "cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path.string());
}

std::optional<std::string> KeyValueConfig::find(const std::string& key) const {
    used_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    return find(key).value_or(fallback);
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
    const auto v = find(key);
    return v ? parse_int(*v, origin_ + ": " + key) : fallback;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    const auto v = find(key);
    return v ? parse_double(*v, origin_ + ": " + key) : fallback;
}

std::vector<int> KeyValueConfig::get_int_list(const std::string& key) const {
    std::vector<int> out;
    const auto v = find(key);
    if (!v) return out;
    std::string_view rest = *v;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto item = trim(rest.substr(0, comma));
        if (!item.empty()) out.push_back(static_cast<int>(parse_int(item, origin_ + ": " + key)));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return out;
}

std::vector<std::string> KeyValueConfig::unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
        if (!used_.count(k)) out.push_back(k);
    return out;
}

Phase parse_phase_literal(std::string_view text) {
    text = trim(text);
    if (text.rfind("dyadic:", 0) == 0) return DyadicPhase::from_string(text.substr(7)).to_phase();
    if (text.size() >= 2 && text.substr(text.size() - 2) == "pi") {
        const auto number = text.substr(0, text.size() - 2);
        if (number.empty()) return Phase(kPi);
        if (number == "-") return Phase(-kPi);
        try {
            return Phase(parse_double(number, "phase") * kPi);
        } catch (const Error&) {
            throw Error(ErrorKind::InvalidArgument, "bad phase literal '" + std::string(text) + "'");
        }
    }
    try {
        return Phase(parse_double(text, "phase"));
    } catch (const Error&) {
        throw Error(ErrorKind::InvalidArgument, "bad phase literal '" + std::string(text) + "'");
    }
}

}  // namespace phasim::harness
