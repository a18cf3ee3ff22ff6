#include "extlab/toml.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace extlab {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& name, int line, const std::string& what) {
    throw std::runtime_error(name + ":" + std::to_string(line) + ": " + what);
}

// strip a trailing comment that is not inside a string
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

}  // namespace

TomlFile TomlFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

TomlFile TomlFile::parse_string(const std::string& text, const std::string& name) {
    TomlFile t;
    t.name_ = name;
    std::istringstream in(text);
    std::string raw_line;
    std::string table;
    int line_no = 0;
    while (std::getline(in, raw_line)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw_line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(name, line_no, "unterminated table header");
            table = trim(line.substr(1, line.size() - 2));
            if (table.empty()) fail(name, line_no, "empty table name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(name, line_no, "expected key = value");
        const std::string key_local = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key_local.empty()) fail(name, line_no, "empty key");
        if (value.empty()) fail(name, line_no, "empty value");
        const std::string key = table.empty() ? key_local : table + "." + key_local;
        if (value.front() == '[') {
            if (value.back() != ']') fail(name, line_no, "unterminated array");
            std::vector<std::string> items;
            std::string body = value.substr(1, value.size() - 2);
            std::string item;
            bool in_str = false;
            for (char c : body) {
                if (c == '"') in_str = !in_str;
                if (c == ',' && !in_str) {
                    items.push_back(trim(item));
                    item.clear();
                } else {
                    item.push_back(c);
                }
            }
            if (!trim(item).empty()) items.push_back(trim(item));
            for (auto& it : items) {
                if (!it.empty() && it.front() == '"') {
                    if (it.size() < 2 || it.back() != '"')
                        fail(name, line_no, "unterminated string in array");
                    it = it.substr(1, it.size() - 2);
                }
            }
            t.arrays_[key] = std::move(items);
        } else if (value.front() == '"') {
            if (value.size() < 2 || value.back() != '"')
                fail(name, line_no, "unterminated string");
            t.scalars_[key] = value.substr(1, value.size() - 2);
            t.is_string_[key] = true;
        } else {
            t.scalars_[key] = value;
            t.is_string_[key] = false;
        }
    }
    return t;
}

void TomlFile::missing(const std::string& key) const {
    throw std::runtime_error(name_ + ": missing key '" + key + "'");
}

bool TomlFile::has(const std::string& key) const {
    return scalars_.count(key) > 0 || arrays_.count(key) > 0;
}

std::string TomlFile::get_string(const std::string& key) const {
    auto it = scalars_.find(key);
    if (it == scalars_.end()) missing(key);
    return it->second;
}

double TomlFile::get_double(const std::string& key) const {
    auto it = scalars_.find(key);
    if (it == scalars_.end()) missing(key);
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw std::runtime_error(name_ + ": key '" + key + "' is not a number");
    }
}

std::int64_t TomlFile::get_int(const std::string& key) const {
    auto it = scalars_.find(key);
    if (it == scalars_.end()) missing(key);
    try {
        return std::stoll(it->second);
    } catch (const std::exception&) {
        throw std::runtime_error(name_ + ": key '" + key + "' is not an integer");
    }
}

bool TomlFile::get_bool(const std::string& key) const {
    const std::string v = get_string(key);
    if (v == "true") return true;
    if (v == "false") return false;
    throw std::runtime_error(name_ + ": key '" + key + "' is not a boolean");
}

std::vector<double> TomlFile::get_double_array(const std::string& key) const {
    auto it = arrays_.find(key);
    if (it == arrays_.end()) missing(key);
    std::vector<double> out;
    for (const auto& s : it->second) out.push_back(std::stod(s));
    return out;
}

std::vector<std::int64_t> TomlFile::get_int_array(const std::string& key) const {
    auto it = arrays_.find(key);
    if (it == arrays_.end()) missing(key);
    std::vector<std::int64_t> out;
    for (const auto& s : it->second) out.push_back(std::stoll(s));
    return out;
}

std::vector<std::string> TomlFile::get_string_array(const std::string& key) const {
    auto it = arrays_.find(key);
    if (it == arrays_.end()) missing(key);
    return it->second;
}

std::string TomlFile::canonical() const {
    std::string out;
    for (const auto& [k, v] : scalars_) out += k + "=" + v + "\n";
    for (const auto& [k, items] : arrays_) {
        out += k + "=[";
        for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
        out += "]\n";
    }
    return out;
}

std::uint64_t TomlFile::stable_hash() const {
    // FNV-1a over the canonical form
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string TomlFile::get_string_or(const std::string& key, const std::string& dflt) const {
    return scalars_.count(key) ? scalars_.at(key) : dflt;
}

double TomlFile::get_double_or(const std::string& key, double dflt) const {
    return scalars_.count(key) ? get_double(key) : dflt;
}

std::int64_t TomlFile::get_int_or(const std::string& key, std::int64_t dflt) const {
    return scalars_.count(key) ? get_int(key) : dflt;
}

}  // namespace extlab
