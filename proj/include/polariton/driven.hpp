#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "polariton/error.hpp"
#include "polariton/models.hpp"
#include "polariton/units.hpp"

// Driven steady state under exp(-i w t) illumination. Amplitudes x are normalised
// so that d = sqrt(f) x is a dipole moment in e nm when E_inc is in V/nm.
namespace polariton {

struct DriveSpec {
    double E_inc = 1.0; // V/nm
    double omega = 1.0; // eV
    double F_cav = 0.0;
    double F_mat = 0.0;

    static DriveSpec make(double E_inc, double omega, OscillatorStrength f_cav, OscillatorStrength f_mat)
    {
        detail::require_finite(E_inc, "E_inc");
        detail::require_finite(omega, "omega");
        detail::require(E_inc >= 0.0, "field amplitude must be non-negative");
        return {E_inc, omega, f_cav.effective_charge() * E_inc, f_mat.effective_charge() * E_inc};
    }
};

struct ResponseAmplitudes {
    cdouble x_cav;
    cdouble x_mat;
    cdouble d_cav; // e nm
    cdouble d_mat; // e nm
};

namespace detail {

inline ResponseAmplitudes solve_forced(const CoupledModel& m, OscillatorStrength f_cav, OscillatorStrength f_mat,
                                       const DriveSpec& drive)
{
    const Eigen::Matrix2cd M = pencil(m).at(drive.omega);
    const cdouble det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    const double scale = std::abs(M(0, 0) * M(1, 1)) + std::abs(M(0, 1) * M(1, 0));
    if (std::abs(det) <= 64.0 * std::numeric_limits<double>::epsilon() * scale)
        throw PoleError("lossless drive at an eigenfrequency");
    const double s = units::amplitude_scale();
    ResponseAmplitudes r;
    r.x_cav = s * (drive.F_cav * M(1, 1) - M(0, 1) * drive.F_mat) / det;
    r.x_mat = s * (M(0, 0) * drive.F_mat - M(1, 0) * drive.F_cav) / det;
    r.d_cav = f_cav.effective_charge() * r.x_cav;
    r.d_mat = f_mat.effective_charge() * r.x_mat;
    return r;
}

} // namespace detail

inline ResponseAmplitudes driven_spc(const CoupledModel& m, OscillatorStrength f_cav, OscillatorStrength f_mat,
                                     const DriveSpec& drive)
{
    detail::require(m.variant == ModelVariant::SpC, "driven_spc needs an SpC model");
    return detail::solve_forced(m, f_cav, f_mat, drive);
}

inline ResponseAmplitudes driven_mc(const CoupledModel& m, OscillatorStrength f_cav, OscillatorStrength f_mat,
                                    const DriveSpec& drive)
{
    detail::require(m.variant == ModelVariant::MoC, "driven_mc needs an MoC model");
    return detail::solve_forced(m, f_cav, f_mat, drive);
}

// sigma = omega^4 / (6 pi eps0^2 c^4) |d_cav n_cav + d_mat n_mat|^2 / E^2, in nm^2.
inline double scattering_cross_section(const ResponseAmplitudes& r, const Vec3& n_dcav, const Vec3& n_dmat,
                                       double E_inc, double omega)
{
    detail::require(omega > 0.0 && E_inc > 0.0, "omega and E_inc must be positive");
    const Eigen::Vector3cd d = r.d_cav * n_dcav.cast<cdouble>() + r.d_mat * n_dmat.cast<cdouble>();
    const double k = omega / kUnits.hbar_c;
    const double alpha2 = d.squaredNorm() * kUnits.coulomb_const * kUnits.coulomb_const / (E_inc * E_inc);
    return 8.0 * std::numbers::pi / 3.0 * k * k * k * k * alpha2;
}

// Sphere-plus-emitter geometry shared by the driven oracle and the quasistatic field map.
struct NanoparticleScene {
    double R_cav = 5.0;
    Vec3 r_cav = Vec3::Zero();
    Vec3 r_mat = Vec3(6.0, 0.0, 0.0);
    Vec3 n_dcav = Vec3::UnitX();
    Vec3 n_dmat = Vec3::UnitX();
    Vec3 e_inc = Vec3::UnitX();
    OscillatorStrength f_cav;
    OscillatorStrength f_mat;
    double omega_cav = 3.0;
    double omega_mat = 3.0;
    double kappa = 0.0;
    double gamma = 0.0;
    LossConvention loss = LossConvention::ComplexFrequency;

    double coupling() const
    {
        return units::coupling_dipole_dipole(f_cav, f_mat, r_cav, r_mat, n_dcav, n_dmat, omega_cav, omega_mat);
    }

    CoupledModel spc_model(double g) const
    {
        return {{omega_cav, omega_mat, kappa, gamma}, ModelVariant::SpC, g, loss};
    }
    CoupledModel spc_model() const { return spc_model(coupling()); }
};

// Two Lorentz polarizabilities coupled through their quasistatic dipole fields,
// solved directly for the dipole moments.
inline ResponseAmplitudes polarizability_oracle(const NanoparticleScene& s, double E_inc, double omega)
{
    auto lorentz_den = [&](double w0, double rate) {
        if (s.loss == LossConvention::ComplexFrequency) {
            const cdouble wr(w0, -0.5 * rate);
            return wr * wr - omega * omega;
        }
        return cdouble(w0 * w0 - omega * omega, -omega * rate);
    };
    const cdouble a_cav = units::polarizability_volume(s.f_cav, lorentz_den(s.omega_cav, s.kappa));
    const cdouble a_mat = units::polarizability_volume(s.f_mat, lorentz_den(s.omega_mat, s.gamma));

    // Field at r_cav from a unit dipole along n_dmat at r_mat, projected on n_dcav (nm^-3 per k_e).
    const Vec3 rel = s.r_cav - s.r_mat;
    const double r = rel.norm();
    detail::require(r > 0.0, "coincident dipoles");
    const Vec3 rh = rel / r;
    const Vec3 field_dir = 3.0 * s.n_dmat.dot(rh) * rh - s.n_dmat;
    const double t = s.n_dcav.dot(field_dir) / (r * r * r);

    const double ke = kUnits.coulomb_const;
    Eigen::Matrix2cd A;
    A << 1.0, -a_cav * t, -a_mat * t, 1.0;
    Eigen::Vector2cd b;
    b << a_cav * E_inc * s.n_dcav.dot(s.e_inc) / ke, a_mat * E_inc * s.n_dmat.dot(s.e_inc) / ke;
    const cdouble det = A.determinant();
    if (std::abs(det) == 0.0) throw PoleError("coupled polarizabilities are singular at this frequency");
    const Eigen::Vector2cd d = A.partialPivLu().solve(b);

    ResponseAmplitudes out;
    out.d_cav = d(0);
    out.d_mat = d(1);
    out.x_cav = s.f_cav.value > 0.0 ? d(0) / s.f_cav.effective_charge() : cdouble(0.0);
    out.x_mat = s.f_mat.value > 0.0 ? d(1) / s.f_mat.effective_charge() : cdouble(0.0);
    return out;
}

} // namespace polariton
