#include "scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace lab {

namespace {

std::string join(const std::vector<std::string>& v)
{
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
    return out;
}

template <class T>
T convert(const YAML::Node& n, const std::string& path, const char* what)
{
    if (!n.IsScalar()) throw SchemaError(fmt::format("`{}`: expected {}", path, what));
    try {
        return n.as<T>();
    } catch (const YAML::Exception&) {
        throw SchemaError(fmt::format("`{}`: expected {}, got '{}'", path, what, n.Scalar()));
    }
}

} // namespace

Section::Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path))
{
    if (!node_ || node_.IsNull()) node_ = YAML::Node(YAML::NodeType::Map);
    if (!node_.IsMap()) throw SchemaError(fmt::format("`{}`: expected a mapping", path_.empty() ? "<root>" : path_));
}

bool Section::has(const std::string& key) const { return node_[key].IsDefined() && !node_[key].IsNull(); }

YAML::Node Section::get(const std::string& key, bool required)
{
    used_.insert(key);
    YAML::Node n = node_[key];
    if ((!n.IsDefined() || n.IsNull()) && required) throw SchemaError(fmt::format("missing required key `{}`", at(key)));
    return n;
}

double Section::number(const std::string& key, std::optional<double> def)
{
    const YAML::Node n = get(key, !def);
    if (!n.IsDefined() || n.IsNull()) return *def;
    return convert<double>(n, at(key), "a number");
}

int Section::integer(const std::string& key, std::optional<int> def)
{
    const YAML::Node n = get(key, !def);
    if (!n.IsDefined() || n.IsNull()) return *def;
    return convert<int>(n, at(key), "an integer");
}

bool Section::flag(const std::string& key, bool def)
{
    const YAML::Node n = get(key, false);
    if (!n.IsDefined() || n.IsNull()) return def;
    return convert<bool>(n, at(key), "true or false");
}

std::string Section::text(const std::string& key, std::optional<std::string> def, const std::vector<std::string>& allowed)
{
    const YAML::Node n = get(key, !def);
    const std::string v = (!n.IsDefined() || n.IsNull()) ? *def : convert<std::string>(n, at(key), "a string");
    if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), v) == allowed.end())
        throw SchemaError(fmt::format("`{}`: '{}' is not one of: {}", at(key), v, join(allowed)));
    return v;
}

std::vector<double> Section::numbers(const std::string& key, std::optional<std::vector<double>> def)
{
    const YAML::Node n = get(key, !def);
    if (!n.IsDefined() || n.IsNull()) return *def;
    if (n.IsScalar()) return {convert<double>(n, at(key), "a number")};
    if (!n.IsSequence()) throw SchemaError(fmt::format("`{}`: expected a list of numbers", at(key)));
    std::vector<double> out;
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(convert<double>(n[i], fmt::format("{}[{}]", at(key), i), "a number"));
    return out;
}

std::vector<std::string> Section::texts(const std::string& key, std::optional<std::vector<std::string>> def,
                                        const std::vector<std::string>& allowed)
{
    const YAML::Node n = get(key, !def);
    std::vector<std::string> out;
    if (!n.IsDefined() || n.IsNull()) {
        out = *def;
    } else if (n.IsScalar()) {
        out = {convert<std::string>(n, at(key), "a string")};
    } else if (n.IsSequence()) {
        for (std::size_t i = 0; i < n.size(); ++i)
            out.push_back(convert<std::string>(n[i], fmt::format("{}[{}]", at(key), i), "a string"));
    } else {
        throw SchemaError(fmt::format("`{}`: expected a list of strings", at(key)));
    }
    for (const auto& v : out)
        if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), v) == allowed.end())
            throw SchemaError(fmt::format("`{}`: '{}' is not one of: {}", at(key), v, join(allowed)));
    return out;
}

polariton::Vec3 Section::vec3(const std::string& key, std::optional<polariton::Vec3> def)
{
    const YAML::Node n = get(key, !def);
    if (!n.IsDefined() || n.IsNull()) return *def;
    if (!n.IsSequence() || n.size() != 3) throw SchemaError(fmt::format("`{}`: expected a list of 3 numbers", at(key)));
    polariton::Vec3 v;
    for (int i = 0; i < 3; ++i) v(i) = convert<double>(n[i], fmt::format("{}[{}]", at(key), i), "a number");
    return v;
}

Section Section::child(const std::string& key) { return Section(get(key, false), at(key)); }

std::vector<Section> Section::children(const std::string& key)
{
    const YAML::Node n = get(key, false);
    std::vector<Section> out;
    if (!n.IsDefined() || n.IsNull()) return out;
    if (!n.IsSequence()) throw SchemaError(fmt::format("`{}`: expected a list", at(key)));
    for (std::size_t i = 0; i < n.size(); ++i) out.emplace_back(n[i], fmt::format("{}[{}]", at(key), i));
    return out;
}

void Section::finish() const
{
    for (const auto& kv : node_) {
        const std::string k = kv.first.as<std::string>();
        if (!used_.count(k)) throw SchemaError(fmt::format("unknown key `{}`", at(k)));
    }
}

const std::vector<std::string>& scenario_kinds()
{
    static const std::vector<std::string> kinds{"eigen_sweep", "min_splitting", "spectrum",   "fieldmap", "fractions",
                                                "ensemble",    "permittivity",  "dispersion", "oracle"};
    return kinds;
}

Scenario parse_scenario(const std::string& text, const std::string& name)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw SchemaError(fmt::format("malformed scenario: {}", e.what()));
    }
    Section top(root, "");
    Scenario s;
    s.name = name;
    s.source_text = text;
    s.kind = top.text("kind", std::nullopt, scenario_kinds());
    const int version = top.integer("schema_version");
    if (version != kSchemaVersion)
        throw SchemaError(fmt::format("`schema_version`: unsupported version {} (expected {})", version, kSchemaVersion));
    s.description = top.text("description", "");
    s.parameters = root["parameters"];
    top.child("parameters"); // shape check only; the runner validates the keys
    Section out = top.child("output");
    s.output_path = out.text("path", name + ".csv");
    s.format = out.text("format", "csv", {"csv", "svg"});
    out.finish();
    top.finish();
    return s;
}

Scenario load_scenario(const std::filesystem::path& file)
{
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot read scenario file '{}'", file.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), file.stem().string());
}

} // namespace lab
