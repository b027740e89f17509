#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "polariton/driven.hpp"
#include "polariton/error.hpp"
#include "polariton/models.hpp"
#include "polariton/units.hpp"

namespace polariton {

using CVec3 = Eigen::Vector3cd;

// Closed box with perfect mirrors, origin at the centre, lowest z-polarised mode.
struct BoxCavityScene {
    Vec3 L = Vec3(292.2, 292.2, 210.0); // nm
    double V_eff = 4.483e6;             // nm^3, independent input
    double omega_cav = 3.0;
    Vec3 r_mat = Vec3::Zero();
    Vec3 n_d = Vec3::UnitZ();
    OscillatorStrength f_mat;
    double omega_mat = 3.0;
    double core_radius = 0.1; // nm

    bool inside(const Vec3& r) const
    {
        return std::abs(r.x()) <= 0.5 * L.x() && std::abs(r.y()) <= 0.5 * L.y() && std::abs(r.z()) <= 0.5 * L.z();
    }

    void validate() const
    {
        detail::require(L.minCoeff() > 0.0, "box sides must be positive");
        detail::require(V_eff > 0.0, "V_eff must be positive");
        detail::require(omega_cav > 0.0 && omega_mat > 0.0, "frequencies must be positive");
        detail::require(std::abs(n_d.norm() - 1.0) <= 1e-12, "dipole orientation must be a unit vector");
        detail::require(inside(r_mat), "emitter must lie inside the box");
        detail::require(core_radius > 0.0, "core radius must be positive");
    }

    CoupledModel model(double g) const { return {{omega_cav, omega_mat, 0.0, 0.0}, ModelVariant::MoC, g}; }
};

struct FieldSample {
    Vec3 position = Vec3::Zero();
    CVec3 E_total = CVec3::Zero();
    CVec3 E_cav = CVec3::Zero();
    CVec3 E_mat = CVec3::Zero();
    bool excluded = false;
};

inline double mode_profile_box(const BoxCavityScene& scene, const Vec3& r)
{
    detail::require(scene.inside(r), "position outside the box");
    return std::cos(std::numbers::pi * r.x() / scene.L.x()) * std::cos(std::numbers::pi * r.y() / scene.L.y());
}

namespace detail {

// k_e (3 (n.r)r - n) / r^3 for a unit dipole (e nm) along n, displacement rel from the source.
inline Vec3 dipole_kernel(const Vec3& n, const Vec3& rel)
{
    const double r = rel.norm();
    const Vec3 rh = rel / r;
    return kUnits.coulomb_const * (3.0 * n.dot(rh) * rh - n) / (r * r * r);
}

struct BranchAmplitudes {
    double omega;
    cdouble x_cav;
    cdouble x_mat;
};

// Realified eigenvectors. x_mat is real and positive; the upper-mode cavity term peaks
// at |1|, and sqrt(w_c) |x_cav(w+)| = sqrt(w_m) x_mat(w-) fixes the lower mode.
inline BranchAmplitudes box_branch(const BoxCavityScene& s, double g, Branch b)
{
    const CoupledModel m = s.model(g);
    const HybridModes h = eigenfrequencies(m);
    require(h.lower_branch_real || b == Branch::Plus, "branch eigenfrequency is not real");
    const double wp = h.omega_plus.real();
    const double wm = h.omega_minus.real();

    if (g == 0.0) {
        // Uncoupled: the cavity-like branch carries no matter amplitude.
        const bool cav_is_plus = s.omega_cav >= s.omega_mat;
        const bool want_cav = (b == Branch::Plus) == cav_is_plus;
        const double w = b == Branch::Plus ? wp : wm;
        if (want_cav) return {w, cdouble(0.0, -1.0 / units::cavity_field_per_amplitude(w, s.V_eff)), 0.0};
        return {w, 0.0, 1.0};
    }

    const cdouble rp = eigenvector_ratio(m, h.omega_plus);
    const double e_plus = std::abs(rp) * units::cavity_field_per_amplitude(wp, s.V_eff);
    const double xm_plus = 1.0 / e_plus;
    if (b == Branch::Plus) return {wp, rp * xm_plus, xm_plus};
    const cdouble rm = eigenvector_ratio(m, h.omega_minus);
    const double xm_minus = std::sqrt(s.omega_cav / s.omega_mat) * std::abs(rp) * xm_plus;
    return {wm, rm * xm_minus, xm_minus};
}

inline FieldSample box_sample(const BoxCavityScene& s, const BranchAmplitudes& a, const Vec3& r)
{
    FieldSample out;
    out.position = r;
    const Vec3 rel = r - s.r_mat;
    if (rel.norm() <= s.core_radius) {
        out.excluded = true;
        return out;
    }
    const double xi = mode_profile_box(s, r);
    // E_cav = -dA/dt = i w A for exp(-i w t).
    const cdouble ec = cdouble(0.0, 1.0) * a.x_cav * xi * units::cavity_field_per_amplitude(a.omega, s.V_eff);
    out.E_cav = ec * CVec3::UnitZ();
    out.E_mat = (s.f_mat.effective_charge() * a.x_mat) * dipole_kernel(s.n_d, rel).cast<cdouble>();
    out.E_total = out.E_cav + out.E_mat;
    return out;
}

} // namespace detail

inline std::vector<FieldSample> hybrid_field_map_dielectric(const BoxCavityScene& scene, double g, Branch branch,
                                                            const std::vector<Vec3>& positions)
{
    scene.validate();
    detail::require_finite(g, "g");
    const auto amp = detail::box_branch(scene, g, branch);
    std::vector<FieldSample> out;
    out.reserve(positions.size());
    for (const Vec3& r : positions) out.push_back(detail::box_sample(scene, amp, r));
    return out;
}

// Branch amplitudes as used by the map, for diagnostics and normalisation checks.
inline std::pair<cdouble, cdouble> hybrid_amplitudes(const BoxCavityScene& scene, double g, Branch branch)
{
    scene.validate();
    const auto a = detail::box_branch(scene, g, branch);
    return {a.x_cav, a.x_mat};
}

struct ContributionFractions {
    double sigma_cav;
    double sigma_mat;
};

inline ContributionFractions fractions_of(const FieldSample& s)
{
    detail::require(!s.excluded, "position lies inside the dipole core");
    const double c = s.E_cav.squaredNorm();
    const double m = s.E_mat.squaredNorm();
    detail::require(c + m > 0.0, "both field contributions vanish at this position");
    const double sc = c / (c + m);
    return {sc, 1.0 - sc};
}

inline ContributionFractions contribution_fractions(const BoxCavityScene& scene, double g, Branch branch,
                                                    const Vec3& position)
{
    return fractions_of(hybrid_field_map_dielectric(scene, g, branch, {position}).front());
}

// Distance from the emitter along dir at which the two contributions carry equal weight.
inline double equal_weight_radius(const BoxCavityScene& scene, double g, Branch branch, const Vec3& dir,
                                  double r_lo = 0.2, double r_hi = 100.0)
{
    const Vec3 u = dir.normalized();
    auto excess = [&](double r) {
        const auto f = contribution_fractions(scene, g, branch, scene.r_mat + r * u);
        return f.sigma_cav - 0.5;
    };
    double flo = excess(r_lo), fhi = excess(r_hi);
    detail::require(flo * fhi < 0.0, "no equal-weight point in the bracket");
    for (int it = 0; it < 200 && r_hi - r_lo > 1e-12 * r_hi; ++it) {
        const double mid = 0.5 * (r_lo + r_hi);
        const double fm = excess(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            r_lo = mid;
            flo = fm;
        } else {
            r_hi = mid;
        }
    }
    return 0.5 * (r_lo + r_hi);
}

// Two static dipole patterns: d_cav at the sphere centre and d_mat at the emitter.
inline std::vector<FieldSample> quasistatic_field_map(const NanoparticleScene& scene, const ResponseAmplitudes& resp,
                                                      const std::vector<Vec3>& positions,
                                                      double core_radius = 0.1)
{
    detail::require(scene.R_cav > 0.0, "sphere radius must be positive");
    detail::require((scene.r_mat - scene.r_cav).norm() > scene.R_cav, "emitter must lie outside the sphere");
    std::vector<FieldSample> out;
    out.reserve(positions.size());
    for (const Vec3& r : positions) {
        FieldSample s;
        s.position = r;
        const Vec3 rc = r - scene.r_cav;
        const Vec3 rm = r - scene.r_mat;
        if (rc.norm() <= scene.R_cav || rm.norm() <= core_radius) {
            s.excluded = true;
            out.push_back(s);
            continue;
        }
        s.E_cav = resp.d_cav * detail::dipole_kernel(scene.n_dcav, rc).cast<cdouble>();
        s.E_mat = resp.d_mat * detail::dipole_kernel(scene.n_dmat, rm).cast<cdouble>();
        s.E_total = s.E_cav + s.E_mat;
        out.push_back(s);
    }
    return out;
}

} // namespace polariton
