#include "dlfr/config.hpp"

#include "dlfr/error.hpp"

#include <charconv>
#include <fstream>
#include <istream>

namespace dlfr {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

double parse_double(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    double v = 0.0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || p != t.data() + t.size())
        fail(ErrorKind::config, "invalid number '" + text + "' for " + what);
    return v;
}

long long parse_int(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    long long v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || p != t.data() + t.size())
        fail(ErrorKind::config, "invalid integer '" + text + "' for " + what);
    return v;
}

bool parse_bool(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    if (t == "1" || t == "true" || t == "on" || t == "yes") return true;
    if (t == "0" || t == "false" || t == "off" || t == "no") return false;
    fail(ErrorKind::config, "invalid boolean '" + text + "' for " + what);
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    const std::string t = trim(text);
    if (t.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = t.find(',', start);
        out.push_back(parse_double(t.substr(start, comma - start), what));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

KeyValues KeyValues::parse(std::istream& in, const std::string& origin) {
    KeyValues kv;
    kv.origin_ = origin;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(ErrorKind::config, origin + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            fail(ErrorKind::config, origin + ":" + std::to_string(lineno) + ": empty key");
        kv.values_[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

KeyValues KeyValues::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot open config " + path.string());
    return parse(in, path.string());
}

std::optional<std::string> KeyValues::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::optional<double> KeyValues::get_double(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    return parse_double(*v, key);
}

std::optional<long long> KeyValues::get_int(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    return parse_int(*v, key);
}

std::optional<bool> KeyValues::get_bool(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    return parse_bool(*v, key);
}

std::optional<std::vector<double>> KeyValues::get_doubles(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    return parse_double_list(*v, key);
}

}  // namespace dlfr
