/* Copyright 2026 The latentgeo Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "latentgeo/config.hpp"

#include "latentgeo/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace latentgeo::config {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
    if (s.empty()) return false;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    std::size_t used = 0;
    try {
        out = std::stod(s, &used);
    } catch (const std::exception&) {
        return false;
    }
    return used == s.size() && std::isfinite(out);
}

bool parse_bool(const std::string& s, bool& out) {
    if (s == "true" || s == "1" || s == "yes") return out = true, true;
    if (s == "false" || s == "0" || s == "no") return out = false, true;
    return false;
}

bool parse_size_list(const std::string& s, std::vector<std::size_t>& out) {
    out.clear();
    if (s.empty() || s == "none") return true;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::uint64_t v = 0;
        if (!parse_u64(trim(item), v) || v == 0) return false;
        out.push_back(static_cast<std::size_t>(v));
    }
    return true;
}

[[noreturn]] void bad_value(const KeySpec& k, const std::string& v, const std::string& expected) {
    fail(ErrorKind::Config, "key '" + k.name + "': expected " + expected + ", got '" + v + "'");
}

void validate(const KeySpec& k, const std::string& v) {
    std::uint64_t u = 0;
    double d = 0.0;
    bool b = false;
    std::vector<std::size_t> list;
    switch (k.kind) {
        case ValueKind::String: return;
        case ValueKind::Path:
            if (v.empty()) bad_value(k, v, "a path");
            return;
        case ValueKind::Size:
            if (!parse_u64(v, u)) bad_value(k, v, "a nonnegative integer");
            return;
        case ValueKind::PositiveSize:
            if (!parse_u64(v, u) || u == 0) bad_value(k, v, "a positive integer");
            return;
        case ValueKind::Seed:
            if (!parse_u64(v, u)) bad_value(k, v, "an unsigned 64-bit seed");
            return;
        case ValueKind::Double:
            if (!parse_double(v, d)) bad_value(k, v, "a finite number");
            return;
        case ValueKind::PositiveDouble:
            if (!parse_double(v, d) || !(d > 0.0)) bad_value(k, v, "a positive number");
            return;
        case ValueKind::Bool:
            if (!parse_bool(v, b)) bad_value(k, v, "true or false");
            return;
        case ValueKind::SizeList:
            if (!parse_size_list(v, list)) bad_value(k, v, "a comma-separated list of positive integers");
            return;
        case ValueKind::Choice:
            if (std::find(k.choices.begin(), k.choices.end(), v) == k.choices.end()) {
                std::string opts;
                for (const auto& c : k.choices) opts += (opts.empty() ? "" : "|") + c;
                bad_value(k, v, "one of " + opts);
            }
            return;
    }
}

}  // namespace

void RunConfig::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::Io, "cannot read config file: " + path.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        require(eq != std::string::npos && eq > 0, ErrorKind::Config,
                path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        file[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
}

void RunConfig::set_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    require(eq != std::string::npos && eq > 0, ErrorKind::Config,
            "override '" + assignment + "' is not of the form key=value");
    set_override(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void RunConfig::set_override(const std::string& key, const std::string& value) { cli[key] = value; }

ResolvedConfig::ResolvedConfig(const std::vector<KeySpec>& schema, const RunConfig& raw) : schema_(schema) {
    auto known = [&](const std::string& key) {
        return std::any_of(schema_.begin(), schema_.end(), [&](const KeySpec& k) { return k.name == key; });
    };
    for (const auto* layer : {&raw.file, &raw.cli})
        for (const auto& [key, value] : *layer)
            require(known(key), ErrorKind::Config, "unknown config key '" + key + "'");
    for (const KeySpec& k : schema_) {
        std::string v = k.default_value;
        bool given = false;
        if (auto it = raw.file.find(k.name); it != raw.file.end()) v = it->second, given = true;
        if (auto it = raw.cli.find(k.name); it != raw.cli.end()) v = it->second, given = true;
        validate(k, v);
        values_[k.name] = v;
        explicit_[k.name] = given;
    }
}

const KeySpec& ResolvedConfig::spec(const std::string& key) const {
    for (const KeySpec& k : schema_)
        if (k.name == key) return k;
    fail(ErrorKind::Config, "config key '" + key + "' is not part of this command");
}

const std::string& ResolvedConfig::str(const std::string& key) const {
    spec(key);
    return values_.at(key);
}

std::size_t ResolvedConfig::size(const std::string& key) const {
    std::uint64_t u = 0;
    parse_u64(str(key), u);
    return static_cast<std::size_t>(u);
}

std::uint64_t ResolvedConfig::seed(const std::string& key) const {
    std::uint64_t u = 0;
    parse_u64(str(key), u);
    return u;
}

double ResolvedConfig::number(const std::string& key) const {
    double d = 0.0;
    parse_double(str(key), d);
    return d;
}

bool ResolvedConfig::flag(const std::string& key) const {
    bool b = false;
    parse_bool(str(key), b);
    return b;
}

std::vector<std::size_t> ResolvedConfig::sizes(const std::string& key) const {
    std::vector<std::size_t> out;
    parse_size_list(str(key), out);
    return out;
}

bool ResolvedConfig::is_set(const std::string& key) const {
    spec(key);
    return explicit_.at(key);
}

std::string describe(const std::vector<KeySpec>& schema) {
    std::ostringstream out;
    for (const KeySpec& k : schema) {
        out << "  " << k.name << " (default: " << (k.default_value.empty() ? "\"\"" : k.default_value) << ")";
        if (!k.help.empty()) out << "  " << k.help;
        out << '\n';
    }
    return out.str();
}

}  // namespace latentgeo::config
