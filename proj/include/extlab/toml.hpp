#pragma once

#include <map>
#include <string>
#include <vector>

namespace extlab {

// Minimal TOML subset for experiment configs: [tables], key = value with
// strings, integers, floats, booleans and flat arrays. Keys are exposed as
// "table.key". Parse errors carry the line number.
class TomlFile {
public:
    static TomlFile parse_file(const std::string& path);
    static TomlFile parse_string(const std::string& text, const std::string& name = "<string>");

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<double> get_double_array(const std::string& key) const;
    std::vector<std::int64_t> get_int_array(const std::string& key) const;
    std::vector<std::string> get_string_array(const std::string& key) const;

    std::string get_string_or(const std::string& key, const std::string& dflt) const;
    double get_double_or(const std::string& key, double dflt) const;
    std::int64_t get_int_or(const std::string& key, std::int64_t dflt) const;

    const std::map<std::string, std::string>& raw() const { return scalars_; }

    // canonical "key=value" serialization (keys sorted), so the derived
    // hash is stable under key reordering in the source file
    std::string canonical() const;
    std::uint64_t stable_hash() const;

private:
    std::map<std::string, std::string> scalars_;              // unquoted scalar text
    std::map<std::string, std::vector<std::string>> arrays_;  // array element text
    std::map<std::string, bool> is_string_;
    std::string name_;

    [[noreturn]] void missing(const std::string& key) const;
};

}  // namespace extlab
