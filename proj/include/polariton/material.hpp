#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "polariton/error.hpp"
#include "polariton/models.hpp"
#include "polariton/units.hpp"

// Permittivities and bulk dispersion implied by the coupled-oscillator models.
// Wavevectors are in nm^-1 and c k is expressed in eV through hbar c.
namespace polariton::material {

enum class PermittivityVariant { MoC, SpC, PolarLorentz };

struct PermittivityModel {
    double Omega_mat = 1.0; // omega_TO
    double G = 0.0;
    double epsilon_inf = 1.0;
    PermittivityVariant variant = PermittivityVariant::MoC;

    void validate() const
    {
        detail::require_finite(Omega_mat, "Omega_mat");
        detail::require_finite(G, "G");
        detail::require(Omega_mat > 0.0, "Omega_mat must be positive");
        detail::require(G >= 0.0, "G must be non-negative");
        detail::require(epsilon_inf >= 1.0, "epsilon_inf must be at least 1");
    }

    double omega_LO() const { return std::sqrt(Omega_mat * Omega_mat + 4.0 * G * G); }
};

inline double permittivity_mc(const PermittivityModel& m, double omega)
{
    m.validate();
    detail::require(omega >= 0.0, "omega must be non-negative");
    const double den = m.Omega_mat * m.Omega_mat - omega * omega;
    if (den == 0.0) throw PoleError("permittivity pole at omega = Omega_mat");
    return m.epsilon_inf * (1.0 + 4.0 * m.G * m.G / den);
}

// eps_inf (w_LO^2 - w^2) / (w_TO^2 - w^2).
inline double permittivity_polar(const PermittivityModel& m, double omega)
{
    m.validate();
    const double den = m.Omega_mat * m.Omega_mat - omega * omega;
    if (den == 0.0) throw PoleError("permittivity pole at omega = omega_TO");
    const double lo = m.omega_LO();
    return m.epsilon_inf * (lo * lo - omega * omega) / den;
}

inline double permittivity_spc(const PermittivityModel& m, double omega)
{
    m.validate();
    if (omega == 0.0) throw PoleError("spring-coupled permittivity diverges at omega = 0");
    detail::require(omega > 0.0, "omega must be positive");
    const double den = m.Omega_mat * m.Omega_mat - omega * omega;
    if (den == 0.0) throw PoleError("permittivity pole at omega = Omega_mat");
    const double X = 2.0 * m.G * m.G * m.Omega_mat / (omega * den);
    const double y = X >= 0.0 ? X + std::sqrt(1.0 + X * X) : 1.0 / (std::sqrt(1.0 + X * X) - X);
    return m.epsilon_inf * y * y;
}

inline double permittivity(const PermittivityModel& m, double omega)
{
    switch (m.variant) {
    case PermittivityVariant::MoC: return permittivity_mc(m, omega);
    case PermittivityVariant::SpC: return permittivity_spc(m, omega);
    case PermittivityVariant::PolarLorentz: return permittivity_polar(m, omega);
    }
    return 0.0;
}

inline std::pair<double, double> reststrahlen_band(const PermittivityModel& m)
{
    m.validate();
    return {m.Omega_mat, m.omega_LO()};
}

inline PermittivityModel fit_polar(double omega_TO, double omega_LO, double epsilon_inf = 1.0)
{
    detail::require(omega_TO > 0.0, "omega_TO must be positive");
    detail::require(omega_LO >= omega_TO, "omega_LO must not be below omega_TO");
    return {omega_TO, 0.5 * std::sqrt(omega_LO * omega_LO - omega_TO * omega_TO), epsilon_inf,
            PermittivityVariant::MoC};
}

enum class BulkModel { MoC, A1, A2 };

inline std::string to_string(BulkModel b)
{
    switch (b) {
    case BulkModel::MoC: return "MoC";
    case BulkModel::A1: return "A1";
    case BulkModel::A2: return "A2";
    }
    return "?";
}

struct BulkParams {
    double omega_TO = 1.0;
    double G = 0.3;
    double epsilon_inf = 1.0;

    double omega_LO() const { return std::sqrt(omega_TO * omega_TO + 4.0 * G * G); }
    double photon(double k) const { return kUnits.hbar_c * k / std::sqrt(epsilon_inf); }
};

struct DispersionBranch {
    std::vector<double> k;
    std::vector<double> omega;
    bool upper = true;
    BulkModel model = BulkModel::MoC;
};

// Bare frequencies and coupling used by each model at photon frequency w_k.
struct ModelPoint {
    double omega_photon;
    double omega_matter;
    double coupling;
};

inline ModelPoint model_point(BulkModel b, const BulkParams& p, double wk)
{
    switch (b) {
    case BulkModel::MoC: return {wk, p.omega_TO, p.G};
    case BulkModel::A1: {
        const double wa = std::sqrt(wk * wk + 4.0 * p.G * p.G);
        return {wa, p.omega_TO, -p.G * std::sqrt(p.omega_TO / wa)};
    }
    case BulkModel::A2: {
        const double lo = p.omega_LO();
        return {wk, lo, p.G * std::sqrt(wk / lo)};
    }
    }
    return {};
}

// (upper, lower) at one photon frequency.
inline std::pair<double, double> bulk_branches(BulkModel b, const BulkParams& p, double wk)
{
    const ModelPoint q = model_point(b, p, wk);
    const SquaredRoots s = b == BulkModel::MoC ? moc_squared(q.omega_photon, q.omega_matter, q.coupling)
                                               : spc_squared(q.omega_photon, q.omega_matter, q.coupling);
    return {std::sqrt(s.s_plus), std::sqrt(std::max(s.s_minus, 0.0))};
}

inline std::pair<DispersionBranch, DispersionBranch> bulk_dispersion(BulkModel b, const BulkParams& p,
                                                                     const std::vector<double>& k_grid)
{
    detail::require(p.omega_TO > 0.0 && p.G >= 0.0 && p.epsilon_inf >= 1.0, "invalid bulk parameters");
    DispersionBranch up, lo;
    up.model = lo.model = b;
    lo.upper = false;
    up.k = lo.k = k_grid;
    for (double k : k_grid) {
        detail::require(k >= 0.0, "wavevector must be non-negative");
        const auto [wp, wm] = bulk_branches(b, p, p.photon(k));
        up.omega.push_back(wp);
        lo.omega.push_back(wm);
    }
    return {up, lo};
}

inline std::vector<double> coupling_profile(BulkModel b, const BulkParams& p, const std::vector<double>& k_grid)
{
    std::vector<double> out;
    out.reserve(k_grid.size());
    for (double k : k_grid) out.push_back(model_point(b, p, p.photon(k)).coupling);
    return out;
}

// Solves w = w_cav / sqrt(eps(w)) for the MoC permittivity by bisection on the
// equivalent polynomial form, one root per side of the band.
inline double self_consistent_frequency(const PermittivityModel& m, double omega_cav, bool upper, double tol = 1e-14)
{
    m.validate();
    const double lo_edge = m.omega_LO();
    auto f = [&](double w) {
        // w^2 eps(w) - w_cav^2, multiplied by (Omega^2 - w^2) to clear the pole.
        const double den = m.Omega_mat * m.Omega_mat - w * w;
        return w * w * m.epsilon_inf * (den + 4.0 * m.G * m.G) - omega_cav * omega_cav * den;
    };
    double a, b;
    if (upper) {
        a = lo_edge;
        b = std::max(lo_edge, omega_cav) * 2.0 + 1.0;
    } else {
        a = 0.0;
        b = m.Omega_mat;
    }
    double fa = f(a);
    for (int it = 0; it < 400 && b - a > tol * b; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

} // namespace polariton::material
