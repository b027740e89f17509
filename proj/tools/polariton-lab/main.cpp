#include <filesystem>
#include <functional>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "figures.hpp"
#include "output.hpp"
#include "polariton/parallel.hpp"
#include "polariton/polariton.hpp"
#include "scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 2, kDomain = 3, kIo = 4 };

// Writes `primary` (CSV or SVG by extension), an optional extra SVG and a summary JSON beside it.
void emit(const lab::Scenario& s, const lab::RunResult& r, const fs::path& dir, const fs::path& primary,
          const std::string& figure, bool extra_svg, bool copy_input)
{
    json summary;
    summary["tool"] = "polariton-lab";
    summary["version"] = polariton::kVersion;
    summary["schema_version"] = lab::kSchemaVersion;
    summary["kind"] = s.kind;
    summary["figure"] = figure.empty() ? json(nullptr) : json(figure);
    summary["input_sha256"] = lab::sha256_hex(s.source_text);
    summary["outputs"] = json::array();

    const std::string title = s.description.empty() ? s.name : s.description;
    auto add = [&](const fs::path& name) {
        const std::string content =
            name.extension() == ".svg" ? lab::format_svg(r.table, title) : lab::format_csv(r.table);
        lab::write_atomic(dir / name, content);
        summary["outputs"].push_back({{"path", name.generic_string()},
                                      {"sha256", lab::sha256_hex(content)},
                                      {"rows", r.table.rows.size()},
                                      {"columns", r.table.header}});
    };
    fs::path stem = primary;
    stem.replace_extension();
    add(primary);
    if (extra_svg && primary.extension() != ".svg") add(fs::path(stem.string() + ".svg"));
    if (copy_input) lab::write_atomic(dir / (stem.string() + ".yaml"), s.source_text);
    summary["metrics"] = r.metrics;
    lab::write_atomic(dir / (stem.string() + ".summary.json"), summary.dump(2) + "\n");
}

unsigned threads() { return polariton::thread_budget(); }

int guarded(const std::function<void()>& fn)
{
    try {
        fn();
        return kOk;
    } catch (const lab::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const lab::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const polariton::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDomain;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"polariton-lab: coupled-oscillator polariton models"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(polariton::kVersion));

    std::string file, id, out = ".";
    bool svg = false;

    auto* run = app.add_subcommand("run", "Run a scenario file");
    run->add_option("file", file, "Scenario YAML")->required();
    run->add_option("--out", out, "Output directory");
    run->add_flag("--svg", svg, "Also write an SVG plot");

    auto* repro = app.add_subcommand("reproduce", "Regenerate a figure from its built-in scenario");
    repro->add_option("id", id, "Figure id (see `list`)")->required();
    repro->add_option("--out", out, "Output directory");
    repro->add_flag("--svg", svg, "Also write an SVG plot");

    auto* list = app.add_subcommand("list", "List figure ids");
    auto* constants = app.add_subcommand("constants", "Print physical constants as JSON");

    auto* oracle = app.add_subcommand("oracle", "Cross-check a scenario against an independent solver");
    oracle->add_option("file", file, "Scenario YAML")->required();
    oracle->add_option("--out", out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    if (*run)
        return guarded([&] {
            const auto s = lab::load_scenario(file);
            const auto r = lab::run_scenario(s, threads());
            fs::path primary = s.output_path;
            if (s.format == "svg" && primary.extension() != ".svg") primary.replace_extension(".svg");
            emit(s, r, out, primary, "", svg, false);
        });
    if (*repro)
        return guarded([&] {
            const auto s = lab::parse_scenario(lab::figure_scenario(id), id);
            emit(s, lab::run_scenario(s, threads()), out, id + ".csv", id, svg, true);
        });
    if (*list) {
        for (const auto& i : lab::figure_ids()) std::cout << i << "\n";
        return kOk;
    }
    if (*constants) {
        const auto& u = polariton::kUnits;
        json j{{"hbar_c (eV nm)", u.hbar_c},
               {"coulomb_const (eV nm)", u.coulomb_const},
               {"proton_mass_energy (eV)", u.proton_mass_energy},
               {"debye (e nm)", u.debye_in_e_nm},
               {"amplitude_scale (eV^2 nm^2 / (e^2/m_p))", polariton::units::amplitude_scale()}};
        std::cout << j.dump(2) << "\n";
        return kOk;
    }
    if (*oracle)
        return guarded([&] {
            const auto s = lab::load_scenario(file);
            const auto r = lab::run_oracle(s, threads());
            emit(s, r, out, s.name + ".oracle.csv", "", false, false);
            std::cout << r.metrics.dump(2) << "\n";
        });
    return kUsage;
}
