#pragma once

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tfdiff/report.hpp"

namespace tfdiff {

/// Flat INI-style configuration: `[section]` headers scope the keys that
/// follow; keys are stored as "section.key". `#` and `;` start comments.
/// CLI flags override file values through `set`.
class Config {
public:
    Config() = default;

    static Config from_stream(std::istream& is) {
        Config cfg;
        std::string line, section;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto comment = line.find_first_of("#;");
            if (comment != std::string::npos) line.erase(comment);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError("config line " + std::to_string(lineno) +
                                      ": unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (key.empty())
                throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
            cfg.set(section.empty() ? key : section + "." + key, value);
        }
        return cfg;
    }

    static Config from_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw ConfigError("cannot open config file: " + path);
        return from_stream(is);
    }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get(const std::string& key, const std::string& fallback = {}) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }
    std::string require(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("missing config key: " + key);
        return it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : parse_double(key, it->second);
    }
    double require_double(const std::string& key) const {
        return parse_double(key, require(key));
    }
    int get_int(const std::string& key, int fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return static_cast<int>(parse_double(key, it->second));
    }

    std::vector<double> get_double_list(const std::string& key) const {
        std::vector<double> out;
        for (const std::string& item : split_list(get(key)))
            out.push_back(parse_double(key, item));
        return out;
    }
    std::vector<int> get_int_list(const std::string& key) const {
        std::vector<int> out;
        for (double v : get_double_list(key)) out.push_back(static_cast<int>(v));
        return out;
    }
    std::vector<std::string> get_list(const std::string& key) const {
        return split_list(get(key));
    }

    const std::map<std::string, std::string>& values() const { return values_; }

    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return {};
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

private:
    static std::vector<std::string> split_list(const std::string& s) {
        std::vector<std::string> out;
        std::istringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    }

    static double parse_double(const std::string& key, const std::string& value) {
        // accept plain numbers and simple fractions like 1/500
        try {
            const auto slash = value.find('/');
            if (slash != std::string::npos) {
                const double num = std::stod(value.substr(0, slash));
                const double den = std::stod(value.substr(slash + 1));
                return num / den;
            }
            std::size_t pos = 0;
            const double v = std::stod(value, &pos);
            if (pos != value.size())
                throw ConfigError("config key " + key + ": trailing characters in '" + value + "'");
            return v;
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("config key " + key + ": cannot parse number '" + value + "'");
        }
    }

    std::map<std::string, std::string> values_;
};

/// Time-step specifications used in sweep configs: a literal number,
/// a fraction `1/40`, or an expression in the mesh size: `h`, `C h`
/// (written Ch or C*h), or `h^p`.
inline double parse_tau_spec(const std::string& spec_in, double h) {
    const std::string spec = Config::trim(spec_in);
    if (spec.empty()) throw ConfigError("empty tau specification");
    const auto hpos = spec.find('h');
    if (hpos == std::string::npos) {
        const auto slash = spec.find('/');
        if (slash != std::string::npos)
            return std::stod(spec.substr(0, slash)) / std::stod(spec.substr(slash + 1));
        return std::stod(spec);
    }
    double factor = 1.0;
    if (hpos > 0) {
        std::string head = Config::trim(spec.substr(0, hpos));
        if (!head.empty() && head.back() == '*') head.pop_back();
        head = Config::trim(head);
        if (!head.empty()) factor = std::stod(head);
    }
    double expo = 1.0;
    const auto caret = spec.find('^', hpos);
    if (caret != std::string::npos) expo = std::stod(spec.substr(caret + 1));
    return factor * std::pow(h, expo);
}

} // namespace tfdiff
