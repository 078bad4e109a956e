#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dlfr {

/// Flat "key = value" settings file. '#' starts a comment; blank lines are
/// ignored; keys are case-sensitive. Later duplicates override earlier ones.
class KeyValues {
public:
    static KeyValues parse(std::istream& in, const std::string& origin = "<stream>");
    static KeyValues load(const std::filesystem::path& path);

    bool contains(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;
    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
    const std::map<std::string, std::string>& entries() const noexcept { return values_; }

    std::optional<double> get_double(const std::string& key) const;
    std::optional<long long> get_int(const std::string& key) const;
    std::optional<bool> get_bool(const std::string& key) const;
    std::optional<std::vector<double>> get_doubles(const std::string& key) const;

private:
    std::map<std::string, std::string> values_;
    std::string origin_;
};

double parse_double(const std::string& text, const std::string& what);
long long parse_int(const std::string& text, const std::string& what);
bool parse_bool(const std::string& text, const std::string& what);
/// Comma-separated reals; an empty string gives an empty list.
std::vector<double> parse_double_list(const std::string& text, const std::string& what);

}  // namespace dlfr
