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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace latentgeo::config {

enum class ValueKind { String, Path, Size, PositiveSize, Seed, Double, PositiveDouble, Bool, SizeList, Choice };

struct KeySpec {
    std::string name;
    ValueKind kind = ValueKind::String;
    std::string default_value;
    std::string help;
    std::vector<std::string> choices = {};  // Choice only
};

/// Raw key=value layers. Resolution order is CLI over file over defaults,
/// whatever order the layers were filled in.
struct RunConfig {
    std::map<std::string, std::string> file;
    std::map<std::string, std::string> cli;

    /// Flat `key = value` lines; '#' starts a comment, blank lines ignored.
    void load_file(const std::filesystem::path& path);
    /// "key=value"
    void set_override(const std::string& assignment);
    void set_override(const std::string& key, const std::string& value);
};

/// A config validated against a key schema: every key known, every value
/// parsed. Getters never fail for keys in the schema.
class ResolvedConfig {
public:
    ResolvedConfig(const std::vector<KeySpec>& schema, const RunConfig& raw);

    const std::string& str(const std::string& key) const;
    std::filesystem::path path(const std::string& key) const { return str(key); }
    std::size_t size(const std::string& key) const;
    std::uint64_t seed(const std::string& key) const;
    double number(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::vector<std::size_t> sizes(const std::string& key) const;
    bool is_set(const std::string& key) const;  // given by file or CLI

    /// Effective values, for echoing into outputs.
    const std::map<std::string, std::string>& values() const noexcept { return values_; }

private:
    const KeySpec& spec(const std::string& key) const;

    std::vector<KeySpec> schema_;
    std::map<std::string, std::string> values_;
    std::map<std::string, bool> explicit_;
};

std::string describe(const std::vector<KeySpec>& schema);

}  // namespace latentgeo::config
