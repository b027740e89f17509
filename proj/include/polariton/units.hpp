#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "polariton/error.hpp"

// Internal unit system: energies and frequencies in eV (hbar = 1), lengths in nm,
// charges in e, masses in proton masses. Oscillator strengths q^2/m are stored
// in e^2/m_p.
namespace polariton {

using Vec3 = Eigen::Vector3d;

struct UnitSystem {
    double hbar_c = 197.3269804;           // eV nm
    double coulomb_const = 1.43996448;     // e^2/(4 pi eps0), eV nm
    double proton_mass_energy = 9.38272088e8; // m_p c^2, eV
    double debye_in_e_nm = 0.020819434;    // e nm per Debye
    double light_speed = 1.0;
};

inline constexpr UnitSystem kUnits{};

struct OscillatorStrength {
    double value = 0.0; // e^2/m_p

    static OscillatorStrength from_charge(double q_in_e) { return {q_in_e * q_in_e}; }
    // q such that f = q^2/m_p, in units of e.
    double effective_charge() const { return std::sqrt(value); }
};

namespace units {

// (hbar c)^2 / (m_p c^2): converts f [e^2/m_p] times 1/omega^2 [eV^-2] into e^2 nm^2/eV.
inline double amplitude_scale()
{
    return kUnits.hbar_c * kUnits.hbar_c / kUnits.proton_mass_energy;
}

inline double debye_to_e_nm(double mu_debye) { return mu_debye * kUnits.debye_in_e_nm; }
inline double e_nm_to_debye(double mu_e_nm) { return mu_e_nm / kUnits.debye_in_e_nm; }

// f = 2 omega mu^2 / hbar.
inline OscillatorStrength dipole_moment_to_oscillator_strength(double mu_debye, double omega)
{
    detail::require_finite(mu_debye, "mu");
    detail::require_finite(omega, "omega");
    detail::require(mu_debye >= 0.0, "transition dipole must be non-negative");
    detail::require(omega > 0.0, "omega must be positive");
    const double mu = debye_to_e_nm(mu_debye);
    return {2.0 * omega * mu * mu / amplitude_scale()};
}

// mu = sqrt(hbar f / (2 omega)).
inline double oscillator_strength_to_dipole_moment(OscillatorStrength f, double omega)
{
    detail::require_finite(f.value, "f");
    detail::require_finite(omega, "omega");
    detail::require(f.value >= 0.0, "oscillator strength must be non-negative");
    detail::require(omega > 0.0, "omega must be positive");
    return e_nm_to_debye(std::sqrt(f.value * amplitude_scale() / (2.0 * omega)));
}

// g = 1/2 sqrt(f / (eps0 V)) * xi * cos(theta).
inline double coupling_from_mode_volume(OscillatorStrength f, double v_eff, double xi = 1.0,
                                        double cos_theta = 1.0)
{
    detail::require_finite(f.value, "f");
    detail::require_finite(v_eff, "V_eff");
    detail::require(f.value >= 0.0, "oscillator strength must be non-negative");
    detail::require(v_eff > 0.0, "mode volume must be positive");
    const double g2 = 4.0 * std::numbers::pi * kUnits.coulomb_const * f.value * amplitude_scale() / v_eff;
    return 0.5 * std::sqrt(g2) * xi * cos_theta;
}

// n_a . n_b - 3 (n_a . r)(n_b . r) for the unit separation vector r.
inline double angular_factor(const Vec3& n_a, const Vec3& n_b, const Vec3& r_hat)
{
    return n_a.dot(n_b) - 3.0 * n_a.dot(r_hat) * n_b.dot(r_hat);
}

// Quasistatic dipole-dipole coupling in the amplitude-coupled form; sign follows the angular factor.
inline double coupling_dipole_dipole(OscillatorStrength f_cav, OscillatorStrength f_mat, const Vec3& r_cav,
                                     const Vec3& r_mat, const Vec3& n_dcav, const Vec3& n_dmat,
                                     double omega_cav, double omega_mat)
{
    detail::require(omega_cav > 0.0 && omega_mat > 0.0, "frequencies must be positive");
    detail::require(f_cav.value >= 0.0 && f_mat.value >= 0.0, "oscillator strengths must be non-negative");
    detail::require(std::abs(n_dcav.norm() - 1.0) <= 1e-12 && std::abs(n_dmat.norm() - 1.0) <= 1e-12,
                    "dipole orientations must be unit vectors");
    const Vec3 rel = r_cav - r_mat;
    const double r = rel.norm();
    detail::require(r > 0.0, "coincident dipole positions");
    const double ang = angular_factor(n_dcav, n_dmat, rel / r);
    return 0.5 * std::sqrt(f_cav.value * f_mat.value) * kUnits.coulomb_const * amplitude_scale() * ang
           / (r * r * r * std::sqrt(omega_cav * omega_mat));
}

// f = 4 pi eps0 R^3 omega^2 for a small metallic sphere.
inline OscillatorStrength plasmon_oscillator_strength(double radius, double omega_cav)
{
    detail::require_finite(radius, "R");
    detail::require_finite(omega_cav, "omega_cav");
    detail::require(radius > 0.0, "radius must be positive");
    detail::require(omega_cav > 0.0, "omega_cav must be positive");
    return {radius * radius * radius * omega_cav * omega_cav / (kUnits.coulomb_const * amplitude_scale())};
}

// Static polarizability volume alpha/(4 pi eps0) in nm^3 of an oscillator with
// strength f and complex squared-frequency denominator den (eV^2).
template <class T>
T polarizability_volume(OscillatorStrength f, T den)
{
    return kUnits.coulomb_const * f.value * amplitude_scale() / den;
}

// Cavity field (V/nm) per unit oscillator amplitude for a mode of volume v_eff at frequency omega,
// with amplitudes normalised so that sqrt(f) x is a dipole moment in e nm.
inline double cavity_field_per_amplitude(double omega, double v_eff)
{
    return omega * std::sqrt(kUnits.proton_mass_energy) / kUnits.hbar_c
           * std::sqrt(4.0 * std::numbers::pi * kUnits.coulomb_const / v_eff);
}

} // namespace units
} // namespace polariton
