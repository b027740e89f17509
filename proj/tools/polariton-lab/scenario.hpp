#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "polariton/units.hpp"

namespace lab {

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kSchemaVersion = 1;

// A mapping node that records which keys were read so leftovers can be rejected.
class Section {
public:
    Section(YAML::Node node, std::string path);

    const std::string& path() const { return path_; }
    bool has(const std::string& key) const;

    double number(const std::string& key, std::optional<double> def = std::nullopt);
    int integer(const std::string& key, std::optional<int> def = std::nullopt);
    bool flag(const std::string& key, bool def);
    std::string text(const std::string& key, std::optional<std::string> def = std::nullopt,
                     const std::vector<std::string>& allowed = {});
    std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> def = std::nullopt);
    std::vector<std::string> texts(const std::string& key, std::optional<std::vector<std::string>> def,
                                   const std::vector<std::string>& allowed = {});
    polariton::Vec3 vec3(const std::string& key, std::optional<polariton::Vec3> def = std::nullopt);
    // Missing child reads as an empty mapping.
    Section child(const std::string& key);
    std::vector<Section> children(const std::string& key);

    // Throws on any key that was never read.
    void finish() const;

private:
    YAML::Node get(const std::string& key, bool required);
    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    YAML::Node node_;
    std::string path_;
    std::set<std::string> used_;
};

struct Scenario {
    std::string name;        // file stem or figure id
    std::string source_text; // exact bytes that were parsed
    std::string kind;
    std::string description;
    YAML::Node parameters;
    std::string output_path; // relative to the output directory
    std::string format = "csv";
};

const std::vector<std::string>& scenario_kinds();

Scenario parse_scenario(const std::string& text, const std::string& name);
Scenario load_scenario(const std::filesystem::path& file);

} // namespace lab
