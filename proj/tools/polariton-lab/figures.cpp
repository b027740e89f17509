#include "figures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include <fmt/format.h>

#include "polariton/parallel.hpp"
#include "polariton/polariton.hpp"

namespace lab {

using namespace polariton;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> linspace(double lo, double hi, int n, const std::string& what)
{
    if (n < 2) throw SchemaError(fmt::format("`{}`: need at least 2 points", what));
    if (!(hi > lo)) throw SchemaError(fmt::format("`{}`: empty range [{}, {}]", what, lo, hi));
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

const std::vector<std::string> kModelNames{"SpC",
                                           "MoC",
                                           "Linearized",
                                           "AltCoulombDressedCavity",
                                           "AltDipoleDressedMatter",
                                           "AltDipoleDipoleDressedCavity"};

ModelVariant model_from(const std::string& s)
{
    static const std::map<std::string, ModelVariant> m{
        {"SpC", ModelVariant::SpC},
        {"MoC", ModelVariant::MoC},
        {"Linearized", ModelVariant::Linearized},
        {"AltCoulombDressedCavity", ModelVariant::AltCoulombDressedCavity},
        {"AltDipoleDressedMatter", ModelVariant::AltDipoleDressedMatter},
        {"AltDipoleDipoleDressedCavity", ModelVariant::AltDipoleDipoleDressedCavity}};
    return m.at(s);
}

std::string suffix(ModelVariant v)
{
    switch (v) {
    case ModelVariant::SpC: return "spc";
    case ModelVariant::MoC: return "mc";
    case ModelVariant::Linearized: return "lin";
    case ModelVariant::AltCoulombDressedCavity: return "alt_coulomb";
    case ModelVariant::AltDipoleDressedMatter: return "alt_dipole";
    case ModelVariant::AltDipoleDipoleDressedCavity: return "alt_dd";
    }
    return "?";
}

LossConvention loss_from(const std::string& s)
{
    return s == "viscous" ? LossConvention::ViscousDamping : LossConvention::ComplexFrequency;
}

Branch branch_from(const std::string& s) { return s == "plus" ? Branch::Plus : Branch::Minus; }

// Lossless branches normalised by omega_mat; NaN where a branch is not real or a mapping does not exist.
std::pair<double, double> sweep_point(ModelVariant v, double wc, double wm, double g)
{
    CoupledModel m{{wc, wm}, v, g};
    try {
        if (v == ModelVariant::AltCoulombDressedCavity || v == ModelVariant::AltDipoleDressedMatter)
            m = alternative_model({{wc, wm}, ModelVariant::MoC, g}, v);
        else if (v == ModelVariant::AltDipoleDipoleDressedCavity)
            m = alternative_model({{wc, wm}, ModelVariant::SpC, g}, v);
    } catch (const DomainError&) {
        return {kNaN, kNaN};
    }
    const HybridModes h = eigenfrequencies(m);
    return {h.omega_plus.real() / wm, h.lower_branch_real ? h.omega_minus.real() / wm : kNaN};
}

// ---------------------------------------------------------------- eigen_sweep

RunResult eigen_sweep(Section p, unsigned threads)
{
    const double wm = p.number("omega_mat", 1.0);
    const double g = p.number("g", 0.1);
    const std::string law = p.text("spc_coupling", "constant", {"constant", "sqrt"});
    const std::string axis = p.text("sweep", "omega_cav", {"omega_cav", "g"});
    const auto names = p.texts("models", std::vector<std::string>{"SpC", "MoC"}, kModelNames);
    const auto ratios = linspace(p.number("ratio_min", 0.2), p.number("ratio_max", 2.0), p.integer("points", 601),
                                 p.path() + ".points");
    std::vector<double> gs;
    if (axis == "g")
        gs = linspace(p.number("g_min", 0.0), p.number("g_max", 0.5), p.integer("g_points", 101),
                      p.path() + ".g_points");
    p.finish();
    if (!(wm > 0.0)) throw SchemaError(fmt::format("`{}.omega_mat`: must be positive", p.path()));

    std::vector<ModelVariant> models;
    for (const auto& n : names) models.push_back(model_from(n));
    auto coupling = [&](ModelVariant v, double gg, double wc) {
        return v == ModelVariant::SpC && law == "sqrt" ? gg * std::sqrt(wc / wm) : gg;
    };

    RunResult r;
    if (axis == "omega_cav") {
        r.table.header.push_back("omega_cav/omega_mat (1)");
        for (auto v : models) {
            r.table.header.push_back(fmt::format("omega_plus_{} (omega_mat)", suffix(v)));
            r.table.header.push_back(fmt::format("omega_minus_{} (omega_mat)", suffix(v)));
        }
        r.table.rows = parallel_map(
            ratios,
            [&](double x) {
                std::vector<double> row{x};
                for (auto v : models) {
                    const auto [hp, hm] = sweep_point(v, x * wm, wm, coupling(v, g, x * wm));
                    row.push_back(hp);
                    row.push_back(hm);
                }
                return row;
            },
            threads);
        return r;
    }

    // Largest branch distance between the linearized model and each other model over the omega_cav grid.
    std::vector<ModelVariant> refs;
    for (auto v : models)
        if (v != ModelVariant::Linearized) refs.push_back(v);
    if (refs.empty()) throw SchemaError(fmt::format("`{}.models`: needs a model other than Linearized", p.path()));
    r.table.header.push_back("g/omega_mat (1)");
    for (auto v : refs) r.table.header.push_back(fmt::format("max_dev_lin_vs_{} (omega_mat)", suffix(v)));
    r.table.rows = parallel_map(
        gs,
        [&](double gg) {
            std::vector<double> row{gg / wm};
            for (auto v : refs) {
                double worst = 0.0;
                for (double x : ratios) {
                    const auto [lp, lm] = sweep_point(ModelVariant::Linearized, x * wm, wm, gg);
                    const auto [hp, hm] = sweep_point(v, x * wm, wm, coupling(v, gg, x * wm));
                    if (std::isfinite(hp)) worst = std::max(worst, std::abs(lp - hp));
                    if (std::isfinite(hm)) worst = std::max(worst, std::abs(lm - hm));
                }
                row.push_back(worst);
            }
            return row;
        },
        threads);
    return r;
}

// -------------------------------------------------------------- min_splitting

RunResult min_splitting_kind(Section p, unsigned threads)
{
    const double wm = p.number("omega_mat", 1.0);
    const auto gs = linspace(p.number("g_min", 0.0), p.number("g_max", 0.5), p.integer("points", 251),
                             p.path() + ".points");
    const auto grid = linspace(p.number("ratio_min", 0.05), p.number("ratio_max", 3.0), p.integer("grid_points", 600),
                               p.path() + ".grid_points");
    const auto names = p.texts("models", std::vector<std::string>{"SpC", "MoC"}, {"SpC", "MoC", "Linearized"});
    p.finish();
    std::vector<double> wc_grid;
    for (double x : grid) wc_grid.push_back(x * wm);
    RunResult r;
    r.table.header.push_back("g/omega_mat (1)");
    for (const auto& n : names) r.table.header.push_back(fmt::format("Omega_min_{} (omega_mat)", suffix(model_from(n))));
    r.table.rows = parallel_map(
        gs,
        [&](double g) {
            std::vector<double> row{g / wm};
            for (const auto& n : names) row.push_back(min_splitting(model_from(n), g, wm, wc_grid).omega_min / wm);
            return row;
        },
        threads);
    return r;
}

// ------------------------------------------------------- nanoparticle scenes

struct NanoparticleConfig {
    double radius;
    Vec3 emitter_position, n_cav, n_mat, e_inc;
    double mu_debye, omega_cav, kappa, gamma, E_inc;
    LossConvention loss;
    std::optional<double> g;
    bool match_g;
};

NanoparticleConfig read_nanoparticle(Section& p)
{
    NanoparticleConfig c;
    c.radius = p.number("radius", 5.0);
    c.emitter_position = p.vec3("emitter_position", Vec3(6.0, 0.0, 0.0));
    c.n_cav = p.vec3("cavity_orientation", Vec3::UnitX()).normalized();
    c.n_mat = p.vec3("emitter_orientation", Vec3::UnitX()).normalized();
    c.e_inc = p.vec3("incident_polarization", Vec3::UnitX()).normalized();
    c.mu_debye = p.number("mu_debye", 15.0);
    c.omega_cav = p.number("omega_cav", 3.0);
    c.kappa = p.number("kappa", 0.02);
    c.gamma = p.number("gamma", 0.01);
    c.E_inc = p.number("E_inc", 1.0);
    c.loss = loss_from(p.text("loss", "complex_frequency", {"complex_frequency", "viscous"}));
    if (p.has("g")) c.g = p.number("g");
    c.match_g = p.text("f_cav_scaling", "fixed", {"fixed", "match_g"}) == "match_g";
    if (c.match_g && !c.g) throw SchemaError(fmt::format("`{}.f_cav_scaling`: match_g needs `g`", p.path()));
    return c;
}

// Scene plus the model coupling. f_cav and f_mat are taken at omega_cav and held fixed under detuning.
std::pair<NanoparticleScene, double> make_nanoparticle(const NanoparticleConfig& c, double omega_mat)
{
    NanoparticleScene s;
    s.R_cav = c.radius;
    s.r_mat = c.emitter_position;
    s.n_dcav = c.n_cav;
    s.n_dmat = c.n_mat;
    s.e_inc = c.e_inc;
    s.omega_cav = c.omega_cav;
    s.omega_mat = omega_mat;
    s.kappa = c.kappa;
    s.gamma = c.gamma;
    s.loss = c.loss;
    s.f_cav = units::plasmon_oscillator_strength(c.radius, c.omega_cav);
    s.f_mat = units::dipole_moment_to_oscillator_strength(c.mu_debye, c.omega_cav);
    if (!c.g) return {s, s.coupling()};
    if (c.match_g) {
        const double g0 = std::abs(s.coupling());
        detail::require(g0 > 0.0, "geometric coupling vanishes; cannot scale f_cav");
        s.f_cav.value *= (*c.g / g0) * (*c.g / g0);
    }
    return {s, *c.g};
}

std::vector<json> find_peaks(const std::vector<double>& x, const std::vector<double>& y, std::size_t keep)
{
    std::vector<std::pair<double, double>> pk;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) pk.emplace_back(x[i], y[i]);
    std::sort(pk.begin(), pk.end(), [](auto a, auto b) { return a.second > b.second; });
    if (pk.size() > keep) pk.resize(keep);
    std::sort(pk.begin(), pk.end());
    std::vector<json> out;
    for (auto [w, s] : pk) out.push_back({{"omega", w}, {"sigma", s}});
    return out;
}

// ------------------------------------------------------------------- spectrum

struct SpectrumConfig {
    NanoparticleConfig np;
    std::vector<double> omega_mat;
    std::vector<ModelVariant> models;
    std::vector<double> omegas;
};

SpectrumConfig read_spectrum(Section& p)
{
    SpectrumConfig c;
    c.np = read_nanoparticle(p);
    c.omega_mat = p.numbers("omega_mat", std::vector<double>{3.0});
    for (const auto& n : p.texts("models", std::vector<std::string>{"SpC", "MoC"}, {"SpC", "MoC"}))
        c.models.push_back(model_from(n));
    c.omegas = linspace(p.number("omega_min", 2.4), p.number("omega_max", 3.6), p.integer("points", 2401),
                        p.path() + ".points");
    p.finish();
    if (c.omega_mat.empty()) throw SchemaError(fmt::format("`{}.omega_mat`: empty list", p.path()));
    return c;
}

RunResult spectrum(Section p, unsigned threads)
{
    const SpectrumConfig c = read_spectrum(p);
    struct Case {
        NanoparticleScene scene;
        CoupledModel model;
        std::string label;
    };
    std::vector<Case> cases;
    RunResult r;
    r.table.header = {"omega (eV)", "detuning omega-omega_cav (eV)"};
    for (double wm : c.omega_mat) {
        const auto [scene, g] = make_nanoparticle(c.np, wm);
        for (auto v : c.models) {
            CoupledModel m{{scene.omega_cav, wm, scene.kappa, scene.gamma}, v, g, scene.loss};
            const std::string label = c.omega_mat.size() == 1 ? fmt::format("sigma_{}", suffix(v))
                                                              : fmt::format("sigma_{}[omega_mat={:g}]", suffix(v), wm);
            cases.push_back({scene, m, label});
            r.table.header.push_back(label + " (nm^2)");
            r.metrics["couplings"][label] = g;
        }
    }
    r.table.rows = parallel_map(
        c.omegas,
        [&](double w) {
            std::vector<double> row{w, w - c.np.omega_cav};
            for (const auto& k : cases) {
                const auto& s = k.scene;
                const auto d = DriveSpec::make(c.np.E_inc, w, s.f_cav, s.f_mat);
                const auto resp = k.model.variant == ModelVariant::SpC ? driven_spc(k.model, s.f_cav, s.f_mat, d)
                                                                       : driven_mc(k.model, s.f_cav, s.f_mat, d);
                row.push_back(scattering_cross_section(resp, s.n_dcav, s.n_dmat, c.np.E_inc, w));
            }
            return row;
        },
        threads);
    for (std::size_t k = 0; k < cases.size(); ++k) {
        std::vector<double> y;
        for (const auto& row : r.table.rows) y.push_back(row[k + 2]);
        r.metrics["peaks"][cases[k].label] = find_peaks(c.omegas, y, 2);
    }
    return r;
}

RunResult spectrum_oracle(Section p, unsigned threads)
{
    const SpectrumConfig c = read_spectrum(p);
    if (c.omega_mat.size() != 1) throw SchemaError(fmt::format("`{}.omega_mat`: oracle takes a single value", p.path()));
    auto [scene, g] = make_nanoparticle(c.np, c.omega_mat.front());
    // The oracle derives its coupling from geometry; move the emitter so both sides see the same g.
    if (c.np.g) {
        const double g0 = scene.coupling();
        detail::require(g0 != 0.0 && *c.np.g / g0 > 0.0, "oracle needs g with the sign of the geometric coupling");
        scene.r_mat = scene.r_cav + (scene.r_mat - scene.r_cav) * std::cbrt(g0 / *c.np.g);
        g = scene.coupling();
    }
    const CoupledModel m = scene.spc_model(g);
    RunResult r;
    r.table.header = {"omega (eV)", "sigma_spc (nm^2)", "sigma_oracle (nm^2)", "max_rel_dev_dipoles (1)"};
    r.table.rows = parallel_map(
        c.omegas,
        [&](double w) {
            const auto a = driven_spc(m, scene.f_cav, scene.f_mat, DriveSpec::make(c.np.E_inc, w, scene.f_cav, scene.f_mat));
            const auto b = polarizability_oracle(scene, c.np.E_inc, w);
            const double dev = std::max(std::abs(a.d_cav - b.d_cav) / std::abs(b.d_cav),
                                        std::abs(a.d_mat - b.d_mat) / std::abs(b.d_mat));
            return std::vector<double>{w, scattering_cross_section(a, scene.n_dcav, scene.n_dmat, c.np.E_inc, w),
                                       scattering_cross_section(b, scene.n_dcav, scene.n_dmat, c.np.E_inc, w), dev};
        },
        threads);
    double worst = 0.0;
    for (const auto& row : r.table.rows) worst = std::max(worst, row[3]);
    r.metrics["max_rel_dev_dipoles"] = worst;
    r.metrics["coupling"] = g;
    return r;
}

// ----------------------------------------------------------------- box scenes

std::pair<BoxCavityScene, double> read_box(Section& p)
{
    BoxCavityScene s;
    s.L = p.vec3("L", s.L);
    s.V_eff = p.number("V_eff", s.V_eff);
    s.omega_cav = p.number("omega_cav", 3.0);
    s.r_mat = p.vec3("emitter_position", Vec3::Zero());
    s.n_d = p.vec3("dipole_orientation", Vec3::UnitZ()).normalized();
    s.core_radius = p.number("core_radius", 0.1);
    const double mu = p.number("mu_debye", 15.0);
    s.f_mat = units::dipole_moment_to_oscillator_strength(mu, s.omega_cav);
    const bool has_g = p.has("g"), has_ratio = p.has("g_over_omega_cav");
    if (has_g && has_ratio) throw SchemaError(fmt::format("`{}`: give either `g` or `g_over_omega_cav`", p.path()));
    double g;
    if (has_g)
        g = p.number("g");
    else if (has_ratio)
        g = p.number("g_over_omega_cav") * s.omega_cav;
    else
        g = units::coupling_from_mode_volume(s.f_mat, s.V_eff, 1.0, std::abs(s.n_d.z()));
    return {s, g};
}

std::vector<Vec3> line_points(Section& p, const Vec3& start, const Vec3& end, int n, std::vector<double>* abscissa,
                              const Vec3& origin)
{
    const Vec3 a = p.vec3("start", start), b = p.vec3("end", end);
    const auto t = linspace(0.0, 1.0, p.integer("points", n), p.path() + ".points");
    detail::require((b - a).norm() > 0.0, "line start and end coincide");
    const Vec3 u = (b - a).normalized();
    std::vector<Vec3> pts;
    for (double x : t) {
        pts.push_back(a + x * (b - a));
        abscissa->push_back((pts.back() - origin).dot(u));
    }
    return pts;
}

RunResult fieldmap(Section p, unsigned threads)
{
    (void)threads;
    const std::string geometry = p.text("geometry", "box", {"box", "nanoparticle"});
    RunResult r;
    std::vector<double> s_axis;
    if (geometry == "box") {
        auto [scene, g] = read_box(p);
        scene.omega_mat = p.number("omega_mat", 3.0);
        const auto branches = p.texts("branches", std::vector<std::string>{"plus", "minus"}, {"plus", "minus"});
        const auto pts = line_points(p, Vec3(-0.5 * scene.L.x(), 0, 0), Vec3(0.5 * scene.L.x(), 0, 0), 2923, &s_axis,
                                     scene.r_mat);
        p.finish();
        r.table.header.push_back("s (nm)");
        std::vector<std::vector<FieldSample>> maps;
        for (const auto& b : branches) {
            maps.push_back(hybrid_field_map_dielectric(scene, g, branch_from(b), pts));
            for (const char* part : {"E_total", "E_cav", "E_mat"})
                r.table.header.push_back(fmt::format("{}_{} (arb. u.)", part, b));
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            std::vector<double> row{s_axis[i]};
            for (const auto& m : maps) {
                const auto& f = m[i];
                for (const CVec3* e : {&f.E_total, &f.E_cav, &f.E_mat})
                    row.push_back(f.excluded ? kNaN : e->dot(scene.n_d.cast<cdouble>()).real());
            }
            r.table.rows.push_back(row);
        }
        r.metrics["coupling"] = g;
        return r;
    }

    const NanoparticleConfig c = read_nanoparticle(p);
    const double wm = p.number("omega_mat", 3.0);
    const double core = p.number("core_radius", 0.1);
    const auto branches = p.texts("branches", std::vector<std::string>{"plus", "minus"}, {"plus", "minus"});
    const auto pts = line_points(p, Vec3(-20, 0, 0), Vec3(20, 0, 0), 801, &s_axis, Vec3::Zero());
    p.finish();
    const auto [scene, g] = make_nanoparticle(c, wm);
    const CoupledModel m = scene.spc_model(g);
    const HybridModes h = eigenfrequencies(m);
    r.table.header.push_back("s (nm)");
    std::vector<std::vector<FieldSample>> maps;
    for (const auto& b : branches) {
        const double w = (b == "plus" ? h.omega_plus : h.omega_minus).real();
        auto resp = driven_spc(m, scene.f_cav, scene.f_mat, DriveSpec::make(c.E_inc, w, scene.f_cav, scene.f_mat));
        // Global phase chosen so that the sphere dipole is real and positive.
        const cdouble ph = std::conj(resp.d_cav) / std::abs(resp.d_cav);
        resp.d_cav *= ph;
        resp.d_mat *= ph;
        auto map = quasistatic_field_map(scene, resp, pts, core);
        double peak = 0.0;
        for (const auto& f : map)
            if (!f.excluded) peak = std::max(peak, std::abs(f.E_cav.dot(scene.e_inc.cast<cdouble>())));
        for (auto& f : map) {
            f.E_total /= peak;
            f.E_cav /= peak;
            f.E_mat /= peak;
        }
        maps.push_back(std::move(map));
        r.metrics["drive_frequencies"][b] = w;
        for (const char* part : {"E_total", "E_cav", "E_mat"}) r.table.header.push_back(fmt::format("{}_{} (arb. u.)", part, b));
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<double> row{s_axis[i]};
        for (const auto& mp : maps) {
            const auto& f = mp[i];
            for (const CVec3* e : {&f.E_total, &f.E_cav, &f.E_mat})
                row.push_back(f.excluded ? kNaN : e->dot(scene.e_inc.cast<cdouble>()).real());
        }
        r.table.rows.push_back(row);
    }
    r.metrics["coupling"] = g;
    return r;
}

RunResult fractions(Section p, unsigned threads)
{
    auto [scene, g] = read_box(p);
    const Vec3 pos = p.vec3("position", Vec3(10.5, 0, 0));
    const auto det = linspace(p.number("detuning_min", -0.01), p.number("detuning_max", 0.01), p.integer("points", 401),
                              p.path() + ".points");
    p.finish();
    if (scene.omega_cav + det.front() <= 0.0)
        throw SchemaError(fmt::format("`{}.detuning_min`: omega_mat must stay positive", p.path()));
    RunResult r;
    r.table.header = {"detuning omega_mat-omega_cav (eV)", "sigma_cav_plus (1)", "sigma_mat_plus (1)",
                      "sigma_cav_minus (1)", "sigma_mat_minus (1)"};
    const BoxCavityScene base = scene;
    const double gg = g;
    r.table.rows = parallel_map(
        det,
        [&](double d) {
            BoxCavityScene s = base;
            s.omega_mat = s.omega_cav + d;
            const auto fp = contribution_fractions(s, gg, Branch::Plus, pos);
            const auto fm = contribution_fractions(s, gg, Branch::Minus, pos);
            return std::vector<double>{d, fp.sigma_cav, fp.sigma_mat, fm.sigma_cav, fm.sigma_mat};
        },
        threads);
    BoxCavityScene tuned = base;
    tuned.omega_mat = tuned.omega_cav;
    const Vec3 dir = pos - base.r_mat;
    if (dir.norm() > 0.0) {
        try {
            r.metrics["equal_weight_radius_plus"] = equal_weight_radius(tuned, g, Branch::Plus, dir);
        } catch (const DomainError&) {
            r.metrics["equal_weight_radius_plus"] = nullptr;
        }
    }
    r.metrics["coupling"] = g;
    return r;
}

// ------------------------------------------------------------------- ensemble

RunResult ensemble_kind(Section p, unsigned threads)
{
    using namespace polariton::ensemble;
    Section cav = p.child("cavity");
    FabryPerotSpec fp;
    fp.L_cav = cav.number("L_cav", fp.L_cav);
    fp.lateral_period = cav.number("lateral_period", fp.lateral_period);
    fp.epsilon_inf = cav.number("epsilon_inf", 1.0);
    fp.polarization = cav.vec3("polarization", Vec3::UnitX()).normalized();
    auto modes = cav.children("modes");
    if (!modes.empty()) fp.modes.clear();
    for (auto& m : modes) {
        FabryPerotMode mode;
        mode.n = m.integer("n", 1);
        const auto k = m.numbers("k_par", std::vector<double>{0.0, 0.0});
        if (k.size() != 2) throw SchemaError(fmt::format("`{}.k_par`: expected 2 numbers", m.path()));
        mode.k_par = Eigen::Vector2d(k[0], k[1]);
        m.finish();
        fp.modes.push_back(mode);
    }
    cav.finish();
    fp.validate();

    Section lat = p.child("lattice");
    const std::string type = lat.text("type", "cubic", {"cubic", "fill"});
    const double mu = lat.number("mu_debye", 5.0);
    const double w_dip = lat.number("omega_dip", fp.omega(fp.modes.front()));
    const Vec3 orient = lat.vec3("orientation", Vec3::UnitX()).normalized();
    const auto f = units::dipole_moment_to_oscillator_strength(mu, w_dip);
    std::vector<DipoleLattice> lattices;
    if (type == "cubic") {
        const double a = lat.number("a", 1.0);
        const Vec3 centre = lat.vec3("centre", Vec3(0, 0, 0.5 * fp.L_cav));
        std::vector<std::array<int, 3>> dims;
        if (lat.has("sizes")) {
            for (double n : lat.numbers("sizes")) dims.push_back({int(n), int(n), int(n)});
        } else {
            const auto c = lat.numbers("counts", std::vector<double>{4, 4, 4});
            if (c.size() != 3) throw SchemaError(fmt::format("`{}.counts`: expected 3 integers", lat.path()));
            dims.push_back({int(c[0]), int(c[1]), int(c[2])});
        }
        for (auto d : dims) lattices.push_back(DipoleLattice::cubic(a, d[0], d[1], d[2], centre, f, w_dip, orient));
    } else {
        const int nl = lat.integer("n_lateral", 4), nz = lat.integer("nz", 10);
        lattices.push_back(DipoleLattice::fill_cavity(fp, nl, nz, f, w_dip, orient));
    }
    lat.finish();

    Section opt = p.child("options");
    FullSystemOptions fo;
    fo.dipole_dipole = opt.flag("dipole_dipole", true);
    fo.max_dipoles = static_cast<std::size_t>(opt.integer("max_dipoles", 500));
    const double cutoff = opt.number("cutoff_in_a", 10.0);
    const bool full = opt.flag("full_system", true);
    opt.finish();
    p.finish();

    struct Job {
        std::size_t lattice, mode;
    };
    std::vector<Job> jobs;
    for (std::size_t l = 0; l < lattices.size(); ++l)
        for (std::size_t m = 0; m < fp.modes.size(); ++m) jobs.push_back({l, m});

    RunResult r;
    r.table.header = {"N (1)",
                      "mode_n (1)",
                      "k_x (1/nm)",
                      "k_y (1/nm)",
                      "N_eff (1)",
                      "g_shift (eV)",
                      "G (eV)",
                      "Omega_mat (eV)",
                      "omega_cav (eV)",
                      "omega_plus_reduced (eV)",
                      "omega_minus_reduced (eV)",
                      "omega_plus_full (eV)",
                      "omega_minus_full (eV)",
                      "max_rel_deviation (1)",
                      "g_shift_cutoff_sensitivity (1)"};
    r.table.rows = parallel_map(
        jobs,
        [&](const Job& j) {
            const auto& L = lattices[j.lattice];
            const auto& mode = fp.modes[j.mode];
            double sens = kNaN;
            if (fo.dipole_dipole) {
                try {
                    sens = g_shift_cutoff_sensitivity(L, fp, mode, cutoff);
                } catch (const DomainError&) {
                }
            }
            std::vector<double> row{double(L.positions.size()), double(mode.n), mode.k_par.x(), mode.k_par.y()};
            if (full) {
                const auto rep = full_vs_reduced_check(L, fp, j.mode, fo, cutoff);
                const auto& c = rep.collective;
                row.insert(row.end(), {c.N_eff, c.g_shift, c.G, c.Omega_mat, c.omega_cav, rep.reduced_plus,
                                       rep.reduced_minus, rep.full_plus, rep.full_minus, rep.max_rel_deviation, sens});
            } else {
                const auto c = collective_reduce(L, fp, mode, cutoff, fo.dipole_dipole);
                const auto h = eigenfrequencies(reduced_model(c));
                row.insert(row.end(), {c.N_eff, c.g_shift, c.G, c.Omega_mat, c.omega_cav, h.omega_plus.real(),
                                       h.omega_minus.real(), kNaN, kNaN, kNaN, sens});
            }
            return row;
        },
        threads);
    return r;
}

// --------------------------------------------------------------- permittivity

RunResult permittivity_kind(Section p, unsigned threads)
{
    using namespace polariton::material;
    PermittivityModel m;
    if (p.has("fit")) {
        Section fit = p.child("fit");
        m = fit_polar(fit.number("omega_TO"), fit.number("omega_LO"), p.number("epsilon_inf", 1.0));
        fit.finish();
    } else {
        m.Omega_mat = p.number("Omega_mat", 1.0);
        m.G = p.number("G", 0.3);
        m.epsilon_inf = p.number("epsilon_inf", 1.0);
    }
    m.validate();
    const auto names = p.texts("variants", std::vector<std::string>{"MoC", "SpC"}, {"MoC", "SpC", "PolarLorentz"});
    const auto ws = linspace(p.number("omega_min", 0.001 * m.Omega_mat), p.number("omega_max", 2.0 * m.Omega_mat),
                             p.integer("points", 2000), p.path() + ".points");
    p.finish();
    std::vector<PermittivityModel> vs;
    RunResult r;
    r.table.header = {"omega (eV)"};
    for (const auto& n : names) {
        PermittivityModel v = m;
        v.variant = n == "MoC" ? PermittivityVariant::MoC
                  : n == "SpC" ? PermittivityVariant::SpC
                               : PermittivityVariant::PolarLorentz;
        vs.push_back(v);
        r.table.header.push_back(fmt::format("eps_{} (1)", n == "MoC" ? "mc" : n == "SpC" ? "spc" : "polar"));
    }
    r.table.rows = parallel_map(
        ws,
        [&](double w) {
            std::vector<double> row{w};
            for (const auto& v : vs) {
                try {
                    row.push_back(permittivity(v, w));
                } catch (const PoleError&) {
                    row.push_back(kNaN);
                }
            }
            return row;
        },
        threads);
    const auto [lo, hi] = reststrahlen_band(m);
    r.metrics["omega_TO"] = lo;
    r.metrics["omega_LO"] = hi;
    r.metrics["G"] = m.G;
    return r;
}

// ----------------------------------------------------------------- dispersion

RunResult dispersion_kind(Section p, unsigned threads)
{
    using namespace polariton::material;
    BulkParams b;
    b.omega_TO = p.number("omega_TO", 1.0);
    b.G = p.number("G", 0.3);
    b.epsilon_inf = p.number("epsilon_inf", 1.0);
    const auto names = p.texts("models", std::vector<std::string>{"MoC", "A1", "A2"}, {"MoC", "A1", "A2"});
    const auto xs = linspace(0.0, p.number("ck_max", 10.0), p.integer("points", 1001), p.path() + ".points");
    const std::string cols = p.text("columns", "both", {"branches", "coupling", "both"});
    p.finish();
    if (!(b.omega_TO > 0.0) || b.G < 0.0 || b.epsilon_inf < 1.0) throw DomainError("invalid bulk parameters");
    std::vector<BulkModel> models;
    for (const auto& n : names) models.push_back(n == "MoC" ? BulkModel::MoC : n == "A1" ? BulkModel::A1 : BulkModel::A2);
    const bool br = cols != "coupling", cp = cols != "branches";
    RunResult r;
    r.table.header = {"ck/omega_TO (1)"};
    for (auto m : models) {
        std::string s = to_string(m);
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
        if (br) {
            r.table.header.push_back(fmt::format("omega_lower_{} (omega_TO)", s));
            r.table.header.push_back(fmt::format("omega_upper_{} (omega_TO)", s));
        }
        if (cp) r.table.header.push_back(fmt::format("G_abs_{} (omega_TO)", s));
    }
    r.table.rows = parallel_map(
        xs,
        [&](double x) {
            const double k = x * b.omega_TO / kUnits.hbar_c;
            const double wk = b.photon(k);
            std::vector<double> row{x};
            for (auto m : models) {
                if (br) {
                    const auto [up, lo] = bulk_branches(m, b, wk);
                    row.push_back(lo / b.omega_TO);
                    row.push_back(up / b.omega_TO);
                }
                if (cp) row.push_back(std::abs(model_point(m, b, wk).coupling) / b.omega_TO);
            }
            return row;
        },
        threads);
    r.metrics["omega_LO"] = b.omega_LO();
    return r;
}

// --------------------------------------------------------------------- oracle

RunResult oracle_kind(Section p, unsigned threads)
{
    using namespace polariton::hopfield;
    const double wc = p.number("omega_cav", 1.0), wm = p.number("omega_mat", 1.0);
    const auto gs = p.numbers("g_values", std::vector<double>{0.1});
    const std::string dmode = p.text("D", "zero");
    const int n_max = p.integer("n_max", 40);
    const int levels = p.integer("levels", 5);
    const bool frames = p.flag("frames", true);
    const bool rwa = p.flag("rotating_wave", false);
    p.finish();
    std::optional<double> d_fixed;
    if (dmode != "zero" && dmode != "moc") {
        try {
            std::size_t used = 0;
            d_fixed = std::stod(dmode, &used);
            if (used != dmode.size()) throw std::invalid_argument(dmode);
        } catch (const std::exception&) {
            throw SchemaError(fmt::format("`{}.D`: expected zero, moc or a number, got '{}'", p.path(), dmode));
        }
    }
    RunResult r;
    r.table.header = {"g (eV)",
                      "D (eV)",
                      "omega_plus_quartic (eV)",
                      "omega_minus_quartic (eV)",
                      "omega_plus_fock (eV)",
                      "omega_minus_fock (eV)",
                      "ground_energy_fock (eV)",
                      "frame_defect (eV)"};
    r.table.rows = parallel_map(
        gs,
        [&](double g) {
            HopfieldParams hp{wc, wm, g, d_fixed ? *d_fixed : dmode == "moc" ? g * g / wm : 0.0};
            hp.rotating_wave = rwa;
            hp.validate();
            detail::require(hp.stable(), fmt::format("unstable Hopfield parameters at g = {}", g));
            double qp = kNaN, qm = kNaN;
            if (!rwa) std::tie(qp, qm) = quartic_eigen(hp);
            const auto gaps = single_excitation_gaps(hp, n_max);
            const double fd = frames && !rwa ? frame_equivalence_check(hp, n_max, levels) : kNaN;
            return std::vector<double>{g, hp.D, qp, qm, gaps.omega_plus, gaps.omega_minus, gaps.ground_state_energy, fd};
        },
        threads);
    double worst = 0.0, worst_frame = 0.0;
    for (const auto& row : r.table.rows) {
        if (std::isfinite(row[2])) worst = std::max({worst, std::abs(row[4] - row[2]), std::abs(row[5] - row[3])});
        if (std::isfinite(row[7])) worst_frame = std::max(worst_frame, row[7]);
    }
    r.metrics["max_gap_deviation"] = worst;
    r.metrics["max_frame_defect"] = worst_frame;
    return r;
}

const std::map<std::string, std::string>& figure_table()
{
    static const std::map<std::string, std::string> t{
        {"fig1c", R"(schema_version: 1
kind: eigen_sweep
description: SpC and MoC hybrid frequencies, g = 0.1 omega_mat
parameters: {g: 0.1, models: [SpC, MoC], ratio_min: 0.2, ratio_max: 2.0, points: 601}
)"},
        {"fig1d", R"(schema_version: 1
kind: eigen_sweep
description: SpC and MoC hybrid frequencies, g = 0.3 omega_mat
parameters: {g: 0.3, models: [SpC, MoC], ratio_min: 0.2, ratio_max: 2.0, points: 601}
)"},
        {"fig1e", R"(schema_version: 1
kind: min_splitting
description: minimum splitting versus coupling strength
parameters: {g_min: 0.0, g_max: 0.5, points: 251, ratio_min: 0.05, ratio_max: 3.0, grid_points: 600}
)"},
        {"fig2b", R"(schema_version: 1
kind: fieldmap
description: hybrid-mode fields along the box axis, g = 2.5e-4 omega_cav
parameters: {geometry: box, g_over_omega_cav: 2.5e-4, omega_mat: 3.0, points: 2923}
)"},
        {"fig2c", R"(schema_version: 1
kind: fractions
description: cavity and emitter field weights at (10.5, 0, 0) nm, g = 2.5e-4 omega_cav
parameters: {g_over_omega_cav: 2.5e-4, position: [10.5, 0, 0], detuning_min: -0.01, detuning_max: 0.01, points: 401}
)"},
        {"fig2d", R"(schema_version: 1
kind: fractions
description: cavity and emitter field weights at (10.5, 0, 0) nm, g = 0.2 omega_cav
parameters: {g_over_omega_cav: 0.2, position: [10.5, 0, 0], detuning_min: -2.95, detuning_max: 3.0, points: 596}
)"},
        {"fig3b", R"(schema_version: 1
kind: fieldmap
description: quasistatic fields of the sphere-emitter pair at the hybrid frequencies, g = 0.1 omega_cav
parameters: {geometry: nanoparticle, g: 0.3, omega_mat: 3.0}
)"},
        {"fig3c", R"(schema_version: 1
kind: spectrum
description: SpC scattering cross section, tuned and detuned, g = 0.1 omega_cav
parameters: {g: 0.3, omega_mat: [3.0, 3.2], models: [SpC], omega_min: 2.4, omega_max: 3.8, points: 2801}
)"},
        {"fig3d", R"(schema_version: 1
kind: spectrum
description: SpC versus MoC cross section, g = 0.01 omega_cav
parameters: {g: 0.03, f_cav_scaling: match_g, omega_mat: 3.0, models: [SpC, MoC], omega_min: 2.85, omega_max: 3.15, points: 3001}
)"},
        {"fig3e", R"(schema_version: 1
kind: spectrum
description: SpC versus MoC cross section, g = 0.3 omega_cav
parameters: {g: 0.9, f_cav_scaling: match_g, omega_mat: 3.0, models: [SpC, MoC], omega_min: 1.5, omega_max: 4.8, points: 3301}
)"},
        {"fig4b", R"(schema_version: 1
kind: permittivity
description: MoC and SpC permittivities, G = 0.3 Omega_mat
parameters: {Omega_mat: 1.0, G: 0.3, variants: [MoC, SpC], omega_min: 0.001, omega_max: 2.0, points: 2000}
)"},
        {"figS1a", R"(schema_version: 1
kind: eigen_sweep
description: SpC, MoC and linearized hybrid frequencies, g = 0.1 omega_mat
parameters: {g: 0.1, models: [SpC, MoC, Linearized], ratio_min: 0.2, ratio_max: 2.0, points: 601}
)"},
        {"figS1b", R"(schema_version: 1
kind: eigen_sweep
description: SpC, MoC and linearized hybrid frequencies, g = 0.3 omega_mat
parameters: {g: 0.3, models: [SpC, MoC, Linearized], ratio_min: 0.2, ratio_max: 2.0, points: 601}
)"},
        {"figS1c", R"(schema_version: 1
kind: eigen_sweep
description: largest relative deviation of the linearized model over omega_cav/omega_mat in [0.2, 2]
parameters: {sweep: g, g_min: 0.0, g_max: 0.5, g_points: 101, models: [SpC, MoC, Linearized], ratio_min: 0.2, ratio_max: 2.0, points: 601}
)"},
        {"figS2", R"(schema_version: 1
kind: eigen_sweep
description: SpC with g_SpC = 0.3 sqrt(omega_cav omega_mat) against MoC with g = 0.3 omega_mat
parameters: {omega_mat: 0.1, g: 0.03, spc_coupling: sqrt, models: [SpC, MoC], ratio_min: 0.02, ratio_max: 2.0, points: 991}
)"},
        {"figS3a", R"(schema_version: 1
kind: dispersion
description: bulk dispersion, MoC
parameters: {G: 0.3, models: [MoC], columns: branches}
)"},
        {"figS3b", R"(schema_version: 1
kind: dispersion
description: bulk dispersion, alternative model 1
parameters: {G: 0.3, models: [A1], columns: branches}
)"},
        {"figS3c", R"(schema_version: 1
kind: dispersion
description: bulk dispersion, alternative model 2
parameters: {G: 0.3, models: [A2], columns: branches}
)"},
        {"figS3d", R"(schema_version: 1
kind: dispersion
description: coupling strength versus wavevector for MoC, A1 and A2
parameters: {G: 0.3, models: [MoC, A1, A2], columns: coupling}
)"},
    };
    return t;
}

} // namespace

RunResult run_scenario(const Scenario& s, unsigned threads)
{
    Section p(s.parameters, "parameters");
    if (s.kind == "eigen_sweep") return eigen_sweep(p, threads);
    if (s.kind == "min_splitting") return min_splitting_kind(p, threads);
    if (s.kind == "spectrum") return spectrum(p, threads);
    if (s.kind == "fieldmap") return fieldmap(p, threads);
    if (s.kind == "fractions") return fractions(p, threads);
    if (s.kind == "ensemble") return ensemble_kind(p, threads);
    if (s.kind == "permittivity") return permittivity_kind(p, threads);
    if (s.kind == "dispersion") return dispersion_kind(p, threads);
    if (s.kind == "oracle") return oracle_kind(p, threads);
    throw SchemaError(fmt::format("`kind`: unknown kind '{}'", s.kind));
}

RunResult run_oracle(const Scenario& s, unsigned threads)
{
    if (s.kind == "oracle") return run_scenario(s, threads);
    if (s.kind == "spectrum") return spectrum_oracle(Section(s.parameters, "parameters"), threads);
    throw SchemaError(fmt::format("`kind`: the oracle command supports oracle and spectrum, not '{}'", s.kind));
}

const std::vector<std::string>& figure_ids()
{
    static const std::vector<std::string> ids{"fig1c",  "fig1d",  "fig1e",  "fig2b",  "fig2c",  "fig2d",  "fig3b",
                                              "fig3c",  "fig3d",  "fig3e",  "fig4b",  "figS1a", "figS1b", "figS1c",
                                              "figS2",  "figS3a", "figS3b", "figS3c", "figS3d"};
    return ids;
}

std::string figure_scenario(const std::string& id)
{
    const auto& t = figure_table();
    const auto it = t.find(id);
    if (it == t.end()) {
        std::string all;
        for (const auto& i : figure_ids()) all += (all.empty() ? "" : ", ") + i;
        throw SchemaError(fmt::format("unknown figure id '{}'; valid ids: {}", id, all));
    }
    return it->second;
}

} // namespace lab
