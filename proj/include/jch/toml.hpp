// toml.hpp — Minimal TOML reader for flat [section] / key = value config files.
//
// Supports the subset used by the run configs: sections, comments, strings,
// booleans, integers, floats and homogeneous arrays of numbers. Nested tables
// and datetimes are out of scope.

#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace jch::toml {

using Value = std::variant<bool, long long, double, std::string, std::vector<double>>;

class Table {
public:
    void set(const std::string& section, const std::string& key, Value v) {
        values_[section + "." + key] = std::move(v);
    }

    bool contains(const std::string& dotted_key) const {
        return values_.count(dotted_key) > 0;
    }

    template <typename T>
    std::optional<T> get(const std::string& dotted_key) const {
        auto it = values_.find(dotted_key);
        if (it == values_.end()) return std::nullopt;
        if (auto* p = std::get_if<T>(&it->second)) return *p;
        // ints are accepted where doubles are requested
        if constexpr (std::is_same_v<T, double>) {
            if (auto* p = std::get_if<long long>(&it->second))
                return static_cast<double>(*p);
        }
        if constexpr (std::is_same_v<T, long long>) {
            if (auto* p = std::get_if<double>(&it->second)) {
                if (*p == static_cast<long long>(*p)) return static_cast<long long>(*p);
            }
        }
        throw std::runtime_error("config key '" + dotted_key + "' has unexpected type");
    }

    template <typename T>
    T get_or(const std::string& dotted_key, T fallback) const {
        auto v = get<T>(dotted_key);
        return v ? *v : fallback;
    }

    const std::map<std::string, Value>& items() const { return values_; }

private:
    std::map<std::string, Value> values_;
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline Value parse_scalar(const std::string& raw, int lineno) {
    std::string s = trim(raw);
    if (s.empty()) throw std::runtime_error("empty value at line " + std::to_string(lineno));
    if (s == "true") return true;
    if (s == "false") return false;
    if (s.front() == '"' && s.back() == '"' && s.size() >= 2)
        return s.substr(1, s.size() - 2);
    // number: integer if it parses cleanly without . e E
    bool looks_int = s.find_first_of(".eE") == std::string::npos;
    try {
        size_t pos = 0;
        if (looks_int) {
            long long v = std::stoll(s, &pos);
            if (pos == s.size()) return v;
        }
        double v = std::stod(s, &pos);
        if (pos == s.size()) return v;
    } catch (const std::exception&) {
        // fall through
    }
    throw std::runtime_error("cannot parse value '" + s + "' at line " + std::to_string(lineno));
}

} // namespace detail

inline Table parse(std::istream& in) {
    Table t;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip comments outside of strings
        bool in_str = false;
        for (size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_str = !in_str;
            else if (line[i] == '#' && !in_str) { line.resize(i); break; }
        }
        std::string s = detail::trim(line);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw std::runtime_error("malformed section header at line " + std::to_string(lineno));
            section = detail::trim(s.substr(1, s.size() - 2));
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("expected key = value at line " + std::to_string(lineno));
        std::string key = detail::trim(s.substr(0, eq));
        std::string val = detail::trim(s.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("empty key at line " + std::to_string(lineno));
        if (!val.empty() && val.front() == '[') {
            if (val.back() != ']')
                throw std::runtime_error("unterminated array at line " + std::to_string(lineno));
            std::vector<double> arr;
            std::string body = val.substr(1, val.size() - 2);
            std::stringstream ss(body);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = detail::trim(item);
                if (item.empty()) continue;
                Value v = detail::parse_scalar(item, lineno);
                if (auto* d = std::get_if<double>(&v)) arr.push_back(*d);
                else if (auto* i = std::get_if<long long>(&v)) arr.push_back(static_cast<double>(*i));
                else throw std::runtime_error("non-numeric array element at line " + std::to_string(lineno));
            }
            t.set(section, key, arr);
        } else {
            t.set(section, key, detail::parse_scalar(val, lineno));
        }
    }
    return t;
}

inline Table parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    return parse(f);
}

inline Table parse_string(const std::string& text) {
    std::istringstream ss(text);
    return parse(ss);
}

} // namespace jch::toml
