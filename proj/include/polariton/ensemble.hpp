#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "polariton/error.hpp"
#include "polariton/models.hpp"
#include "polariton/units.hpp"

// N aligned dipoles inside a planar Fabry-Perot cavity (mirrors normal to z).
namespace polariton::ensemble {

struct FabryPerotMode {
    int n = 1;
    Eigen::Vector2d k_par = Eigen::Vector2d::Zero(); // nm^-1
};

struct FabryPerotSpec {
    double L_cav = 206.6;          // nm
    double lateral_period = 100.0; // nm
    std::vector<FabryPerotMode> modes{FabryPerotMode{}};
    double epsilon_inf = 1.0;
    Vec3 polarization = Vec3::UnitX();

    void validate() const
    {
        detail::require(L_cav > 0.0 && lateral_period > 0.0, "cavity dimensions must be positive");
        detail::require(epsilon_inf >= 1.0, "epsilon_inf must be at least 1");
        for (const auto& m : modes) detail::require(m.n >= 1, "mode index n must be positive");
    }

    double omega(const FabryPerotMode& m) const
    {
        const double kz = m.n * std::numbers::pi / L_cav;
        return kUnits.hbar_c * std::sqrt(kz * kz + m.k_par.squaredNorm()) / std::sqrt(epsilon_inf);
    }

    cdouble xi(const FabryPerotMode& m, const Vec3& r) const
    {
        const double phase = m.k_par.x() * r.x() + m.k_par.y() * r.y();
        return std::sin(m.n * std::numbers::pi * r.z() / L_cav) * std::polar(1.0, phase);
    }

    // Integral of |xi|^2 over one lateral period.
    double v_eff() const { return lateral_period * lateral_period * L_cav / 2.0; }
};

struct DipoleLattice {
    std::vector<Vec3> positions;
    Vec3 orientation = Vec3::UnitX();
    OscillatorStrength f_dip;
    double omega_dip = 3.0;
    double a = 1.0; // nm

    // nx * ny * nz simple cubic block with its centre at `centre`.
    static DipoleLattice cubic(double a, int nx, int ny, int nz, const Vec3& centre, OscillatorStrength f,
                               double omega_dip, const Vec3& orientation = Vec3::UnitX())
    {
        detail::require(a > 0.0 && nx > 0 && ny > 0 && nz > 0, "invalid lattice dimensions");
        DipoleLattice lat;
        lat.a = a;
        lat.f_dip = f;
        lat.omega_dip = omega_dip;
        lat.orientation = orientation;
        const Vec3 half(0.5 * (nx - 1), 0.5 * (ny - 1), 0.5 * (nz - 1));
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j)
                for (int k = 0; k < nz; ++k) lat.positions.push_back(centre + a * (Vec3(i, j, k) - half));
        return lat;
    }

    // Uniform filling of one lateral period: nz layers at the midpoints of equal z slabs.
    static DipoleLattice fill_cavity(const FabryPerotSpec& fp, int n_lateral, int nz, OscillatorStrength f,
                                     double omega_dip, const Vec3& orientation = Vec3::UnitX())
    {
        detail::require(n_lateral > 0 && nz > 0, "invalid lattice dimensions");
        DipoleLattice lat;
        lat.a = fp.lateral_period / n_lateral;
        lat.f_dip = f;
        lat.omega_dip = omega_dip;
        lat.orientation = orientation;
        for (int i = 0; i < n_lateral; ++i)
            for (int j = 0; j < n_lateral; ++j)
                for (int k = 0; k < nz; ++k)
                    lat.positions.emplace_back(i * lat.a, j * lat.a, (k + 0.5) * fp.L_cav / nz);
        return lat;
    }

    void validate(const FabryPerotSpec& fp) const
    {
        detail::require(!positions.empty(), "lattice is empty");
        detail::require(std::abs(orientation.norm() - 1.0) <= 1e-12, "orientation must be a unit vector");
        detail::require(omega_dip > 0.0 && f_dip.value >= 0.0, "invalid dipole parameters");
        for (const auto& r : positions)
            detail::require(r.z() > 0.0 && r.z() < fp.L_cav, "dipole outside the cavity");
    }
};

// Single-dipole coupling at an antinode of a mode.
inline double g_max(const DipoleLattice& lat, const FabryPerotSpec& fp)
{
    return units::coupling_from_mode_volume(lat.f_dip, fp.v_eff(), 1.0, lat.orientation.dot(fp.polarization))
           / std::sqrt(fp.epsilon_inf);
}

struct FullSystemOptions {
    bool dipole_dipole = true;
    std::size_t max_dipoles = 500;
};

// M(w) = K + w C - w^2 on (x_dip_1..N, x_cav_1..M).
struct FullSystem {
    Eigen::MatrixXcd K;
    Eigen::MatrixXcd C;
    int n_dip = 0;
    int n_modes = 0;

    double hermiticity_defect() const
    {
        return std::max((K - K.adjoint()).cwiseAbs().maxCoeff(), (C - C.adjoint()).cwiseAbs().maxCoeff());
    }
};

inline FullSystem build_full_system(const DipoleLattice& lat, const FabryPerotSpec& fp,
                                    const FullSystemOptions& opt = {})
{
    fp.validate();
    lat.validate(fp);
    const int N = static_cast<int>(lat.positions.size());
    const int M = static_cast<int>(fp.modes.size());
    detail::require(static_cast<std::size_t>(N) <= opt.max_dipoles, "too many dipoles for the dense solver");
    FullSystem s;
    s.n_dip = N;
    s.n_modes = M;
    s.K = Eigen::MatrixXcd::Zero(N + M, N + M);
    s.C = Eigen::MatrixXcd::Zero(N + M, N + M);
    const double wd = lat.omega_dip;
    for (int i = 0; i < N; ++i) {
        s.K(i, i) = wd * wd;
        if (!opt.dipole_dipole) continue;
        for (int j = i + 1; j < N; ++j) {
            const double g = units::coupling_dipole_dipole(lat.f_dip, lat.f_dip, lat.positions[i], lat.positions[j],
                                                           lat.orientation, lat.orientation, wd, wd);
            s.K(i, j) = s.K(j, i) = 2.0 * wd * g;
        }
    }
    const double gm = g_max(lat, fp);
    for (int a = 0; a < M; ++a) {
        const double wc = fp.omega(fp.modes[a]);
        s.K(N + a, N + a) = wc * wc;
        for (int i = 0; i < N; ++i) {
            const cdouble gi = gm * fp.xi(fp.modes[a], lat.positions[i]);
            s.C(i, N + a) = cdouble(0.0, -2.0) * gi;
            s.C(N + a, i) = cdouble(0.0, 2.0) * std::conj(gi);
        }
    }
    return s;
}

struct FullEigen {
    Eigen::VectorXcd omega;       // positive-real-part roots, descending
    Eigen::MatrixXcd amplitudes;  // matching x vectors, unit norm, one per column
};

inline FullEigen solve_full_system(const FullSystem& s)
{
    const Eigen::Index n = s.K.rows();
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    A.topRightCorner(n, n).setIdentity();
    A.bottomLeftCorner(n, n) = s.K;
    A.bottomRightCorner(n, n) = s.C;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A);
    detail::require(es.info() == Eigen::Success, "full-system eigensolve failed");
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < 2 * n; ++k)
        if (es.eigenvalues()(k).real() > 0.0) keep.push_back(k);
    std::sort(keep.begin(), keep.end(), [&](Eigen::Index x, Eigen::Index y) {
        return es.eigenvalues()(x).real() > es.eigenvalues()(y).real();
    });
    FullEigen out;
    out.omega.resize(static_cast<Eigen::Index>(keep.size()));
    out.amplitudes.resize(n, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
        out.omega(c) = es.eigenvalues()(keep[c]);
        out.amplitudes.col(c) = es.eigenvectors().col(keep[c]).head(n).normalized();
    }
    return out;
}

struct CollectiveMode {
    double Omega_mat;
    double G;
    double N_eff;
    double g_shift;
    double g_max;
    double omega_cav;
    FabryPerotMode mode;
};

inline double effective_number(const DipoleLattice& lat, const FabryPerotSpec& fp, const FabryPerotMode& mode)
{
    double s = 0.0;
    for (const auto& r : lat.positions) s += std::norm(fp.xi(mode, r));
    return s;
}

// sum_i conj(xi_a(r_i)) xi_b(r_i): Kronecker structure of the mode couplings.
inline cdouble mode_overlap(const DipoleLattice& lat, const FabryPerotSpec& fp, const FabryPerotMode& a,
                            const FabryPerotMode& b)
{
    cdouble s = 0.0;
    for (const auto& r : lat.positions) s += std::conj(fp.xi(a, r)) * fp.xi(b, r);
    return s;
}

// |xi|^2-weighted average over sites j of sum_{i != j, r_ij < cutoff} g_ij exp(-i k.(r_i - r_j)).
inline double g_shift(const DipoleLattice& lat, const FabryPerotSpec& fp, const FabryPerotMode& mode, double cutoff)
{
    detail::require(cutoff > 0.0, "cutoff must be positive");
    const std::size_t N = lat.positions.size();
    const double wd = lat.omega_dip;
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        const double w = std::norm(fp.xi(mode, lat.positions[j]));
        if (w == 0.0) continue;
        cdouble S = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            if (i == j) continue;
            const Vec3 d = lat.positions[i] - lat.positions[j];
            if (d.norm() > cutoff) continue;
            const double g = units::coupling_dipole_dipole(lat.f_dip, lat.f_dip, lat.positions[i], lat.positions[j],
                                                           lat.orientation, lat.orientation, wd, wd);
            S += g * std::polar(1.0, -(mode.k_par.x() * d.x() + mode.k_par.y() * d.y()));
        }
        num += w * S.real();
        den += w;
    }
    detail::require(den > 0.0, "lattice does not overlap the mode");
    return num / den;
}

inline CollectiveMode collective_reduce(const DipoleLattice& lat, const FabryPerotSpec& fp, const FabryPerotMode& mode,
                                        double cutoff_in_a = 10.0, bool dipole_dipole = true)
{
    fp.validate();
    lat.validate(fp);
    CollectiveMode c;
    c.mode = mode;
    c.omega_cav = fp.omega(mode);
    c.N_eff = effective_number(lat, fp, mode);
    detail::require(c.N_eff > 0.0, "lattice does not overlap the mode");
    c.g_max = g_max(lat, fp);
    c.G = c.g_max * std::sqrt(c.N_eff);
    c.g_shift = dipole_dipole ? g_shift(lat, fp, mode, cutoff_in_a * lat.a) : 0.0;
    const double wd = lat.omega_dip;
    detail::require(c.g_shift > -0.5 * wd, "dipole-dipole shift drives the collective frequency imaginary");
    c.Omega_mat = std::sqrt(wd * wd + 2.0 * wd * c.g_shift);
    return c;
}

inline CoupledModel reduced_model(const CollectiveMode& c)
{
    return {{c.omega_cav, c.Omega_mat, 0.0, 0.0}, ModelVariant::MoC, c.G};
}

struct ReductionReport {
    CollectiveMode collective;
    double reduced_plus;
    double reduced_minus;
    double full_plus;
    double full_minus;
    double max_rel_deviation;
};

// Picks the two eigenvectors of the full system with the largest weight on the given mode.
inline ReductionReport full_vs_reduced_check(const DipoleLattice& lat, const FabryPerotSpec& fp, std::size_t mode_index,
                                             const FullSystemOptions& opt = {}, double cutoff_in_a = 10.0)
{
    detail::require(mode_index < fp.modes.size(), "mode index out of range");
    ReductionReport rep;
    rep.collective = collective_reduce(lat, fp, fp.modes[mode_index], cutoff_in_a, opt.dipole_dipole);
    const HybridModes h = eigenfrequencies(reduced_model(rep.collective));
    rep.reduced_plus = h.omega_plus.real();
    rep.reduced_minus = h.omega_minus.real();

    const FullSystem sys = build_full_system(lat, fp, opt);
    const FullEigen fe = solve_full_system(sys);
    const Eigen::Index row = sys.n_dip + static_cast<Eigen::Index>(mode_index);
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(fe.omega.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = static_cast<Eigen::Index>(k);
    detail::require(idx.size() >= 2, "full system has fewer than two positive roots");
    std::partial_sort(idx.begin(), idx.begin() + 2, idx.end(), [&](Eigen::Index x, Eigen::Index y) {
        return std::norm(fe.amplitudes(row, x)) > std::norm(fe.amplitudes(row, y));
    });
    const double a = fe.omega(idx[0]).real(), b = fe.omega(idx[1]).real();
    rep.full_plus = std::max(a, b);
    rep.full_minus = std::min(a, b);
    rep.max_rel_deviation = std::max(std::abs(rep.full_plus - rep.reduced_plus) / rep.reduced_plus,
                                     std::abs(rep.full_minus - rep.reduced_minus) / rep.reduced_minus);
    return rep;
}

// Relative change of g_shift when the cutoff radius is doubled.
inline double g_shift_cutoff_sensitivity(const DipoleLattice& lat, const FabryPerotSpec& fp,
                                         const FabryPerotMode& mode, double cutoff_in_a = 10.0)
{
    const double g1 = g_shift(lat, fp, mode, cutoff_in_a * lat.a);
    const double g2 = g_shift(lat, fp, mode, 2.0 * cutoff_in_a * lat.a);
    detail::require(g1 != 0.0, "g_shift vanishes at the base cutoff");
    return std::abs(g2 - g1) / std::abs(g1);
}

} // namespace polariton::ensemble
