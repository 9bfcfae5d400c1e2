// Flat key/value experiment configuration: `[section]` headers, `key = value`
// pairs, `#` comments, errors anchored to line numbers.
#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace swipt {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, long line)
        : std::runtime_error("config line " + std::to_string(line) + ": " + what),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

class Config {
public:
    static Config parse(std::istream& in) {
        Config cfg;
        std::string line, section;
        long line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string s = strip(line);
            if (s.empty() || s.front() == '#') continue;
            if (s.front() == '[') {
                if (s.back() != ']' || s.size() < 3)
                    throw ConfigError("malformed section header '" + s + "'", line_no);
                section = strip(s.substr(1, s.size() - 2));
                if (section.empty()) throw ConfigError("empty section name", line_no);
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw ConfigError("expected 'key = value', got '" + s + "'", line_no);
            const std::string key = strip(s.substr(0, eq));
            const std::string value = strip(s.substr(eq + 1));
            if (key.empty()) throw ConfigError("empty key", line_no);
            if (value.empty()) throw ConfigError("empty value for key '" + key + "'", line_no);
            const std::string full = section.empty() ? key : section + "." + key;
            if (cfg.values_.count(full))
                throw ConfigError("duplicate key '" + full + "'", line_no);
            cfg.values_[full] = value;
            cfg.lines_[full] = line_no;
        }
        return cfg;
    }

    static Config parse_string(const std::string& text) {
        std::istringstream ss(text);
        return parse(ss);
    }

    static Config parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config: " + path);
        return parse(in);
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end())
            throw std::runtime_error("config: missing required key '" + key + "'");
        return it->second;
    }
    std::string get_string(const std::string& key, const std::string& fallback) const {
        return has(key) ? values_.at(key) : fallback;
    }

    double get_double(const std::string& key) const { return to_double(key, get_string(key)); }
    double get_double(const std::string& key, double fallback) const {
        return has(key) ? get_double(key) : fallback;
    }

    long get_long(const std::string& key) const {
        const std::string v = get_string(key);
        std::size_t used = 0;
        long out = 0;
        try {
            out = std::stol(v, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != v.size())
            throw ConfigError("value '" + v + "' for '" + key + "' is not an integer",
                              lines_.at(key));
        return out;
    }
    long get_long(const std::string& key, long fallback) const {
        return has(key) ? get_long(key) : fallback;
    }

    bool get_bool(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const std::string v = get_string(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError("value '" + v + "' for '" + key + "' is not a boolean",
                          lines_.at(key));
    }

    // comma-separated list of numbers
    std::vector<double> get_list(const std::string& key) const {
        const std::string v = get_string(key);
        std::vector<double> out;
        std::istringstream ss(v);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(to_double(key, strip(tok)));
        if (out.empty())
            throw ConfigError("empty list for '" + key + "'", lines_.at(key));
        return out;
    }
    std::vector<double> get_list(const std::string& key,
                                 const std::vector<double>& fallback) const {
        return has(key) ? get_list(key) : fallback;
    }

    const std::map<std::string, std::string>& items() const { return values_; }

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, long> lines_;

    static std::string strip(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    double to_double(const std::string& key, const std::string& v) const {
        std::size_t used = 0;
        double out = 0.0;
        try {
            out = std::stod(v, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != v.size())
            throw ConfigError("value '" + v + "' for '" + key + "' is not a number",
                              lines_.count(key) ? lines_.at(key) : 0);
        return out;
    }
};

} // namespace swipt
