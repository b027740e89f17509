#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "polariton/error.hpp"
#include "polariton/models.hpp"

// H = w_c (a^+ a + 1/2) + w_m (b^+ b + 1/2) + g (a + a^+)(b + b^+) + D (a + a^+)^2
namespace polariton::hopfield {

struct HopfieldParams {
    double omega_cav = 1.0;
    double omega_mat = 1.0;
    double g_qed = 0.0;
    double D = 0.0;
    bool rotating_wave = false; // drop a b, a^+ b^+ and a^2 terms

    double dressed_cavity_squared() const { return omega_cav * omega_cav + 4.0 * D * omega_cav; }

    bool stable() const
    {
        return dressed_cavity_squared() * omega_mat * omega_mat > 4.0 * g_qed * g_qed * omega_cav * omega_mat;
    }

    void validate() const
    {
        detail::require_finite(omega_cav, "omega_cav");
        detail::require_finite(omega_mat, "omega_mat");
        detail::require_finite(g_qed, "g_qed");
        detail::require_finite(D, "D");
        detail::require(omega_cav > 0.0 && omega_mat > 0.0, "frequencies must be positive");
        detail::require(D >= 0.0, "diamagnetic coefficient must be non-negative");
    }
};

// Quantum parameters reproducing a classical model: SpC <-> D = 0, MoC <-> D = g_MoC^2 / w_cav.
inline HopfieldParams equivalent_params(const CoupledModel& m)
{
    const double wc = m.pair.omega_cav, wm = m.pair.omega_mat;
    if (m.variant == ModelVariant::SpC) return {wc, wm, m.g, 0.0};
    if (m.variant == ModelVariant::MoC) return {wc, wm, m.g * std::sqrt(wm / wc), m.g * m.g / wc};
    throw DomainError("only SpC and MoC map onto the Hopfield Hamiltonian");
}

// Roots of (w^2 - w_c^2 - 4 D w_c)(w^2 - w_m^2) = 4 g^2 w_c w_m, as (w_plus, w_minus).
inline std::pair<double, double> quartic_eigen(const HopfieldParams& p)
{
    p.validate();
    const double a = p.dressed_cavity_squared();
    const double b = p.omega_mat * p.omega_mat;
    const double c = 4.0 * p.g_qed * p.g_qed * p.omega_cav * p.omega_mat;
    if (!p.stable())
        throw DomainError("unstable Hopfield parameters: lower branch is imaginary (w_minus^2 = "
                          + std::to_string((a * b - c) / (0.5 * (a + b + std::sqrt((a - b) * (a - b) + 4.0 * c))))
                          + ")");
    const double sp = 0.5 * (a + b + std::sqrt((a - b) * (a - b) + 4.0 * c));
    const double sm = (a * b - c) / sp;
    return {std::sqrt(sp), std::sqrt(sm)};
}

struct QuantumSpectrum {
    std::vector<double> excitation_energies; // E_k - E_0, ascending
    double ground_state_energy = 0.0;
    int n_max = 0;
};

enum class Frame {
    Position, // g (a + a^+)(b + b^+)
    Rotated,  // i g (a + a^+)(b - b^+)
};

namespace fock {

struct FockBlock {
    std::vector<std::pair<int, int>> states; // (n_a, n_b)
    std::vector<int> index;                  // flat (n_a, n_b) -> row, -1 if not in block
};

inline FockBlock parity_block(int n_max, int parity)
{
    FockBlock blk;
    const int dim = n_max + 1;
    blk.index.assign(dim * dim, -1);
    for (int na = 0; na <= n_max; ++na)
        for (int nb = 0; nb <= n_max; ++nb)
            if ((na + nb) % 2 == parity) {
                blk.index[na * dim + nb] = static_cast<int>(blk.states.size());
                blk.states.emplace_back(na, nb);
            }
    return blk;
}

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> assemble(const HopfieldParams& p, int n_max, int parity,
                                                               Frame frame)
{
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    (void)frame;
    const FockBlock blk = parity_block(n_max, parity);
    const int n = static_cast<int>(blk.states.size());
    const int dim = n_max + 1;
    Mat H = Mat::Zero(n, n);
    auto at = [&](int na, int nb) {
        if (na < 0 || nb < 0 || na > n_max || nb > n_max) return -1;
        return blk.index[na * dim + nb];
    };
    for (int r = 0; r < n; ++r) {
        const auto [na, nb] = blk.states[r];
        H(r, r) += p.omega_cav * (na + 0.5) + p.omega_mat * (nb + 0.5) + p.D * (2.0 * na + 1.0);
        if (const int c = at(na + 2, nb); c >= 0 && !p.rotating_wave) {
            const double v = p.D * std::sqrt((na + 1.0) * (na + 2.0));
            H(c, r) += v;
            H(r, c) += v;
        }
        // Raising a by one and b by +-1; the Hermitian partner fills the lower half.
        for (int db : {+1, -1}) {
            const int c = at(na + 1, nb + db);
            if (c < 0 || (p.rotating_wave && db > 0)) continue;
            const double ea = std::sqrt(na + 1.0);
            const double eb = db > 0 ? std::sqrt(nb + 1.0) : std::sqrt(static_cast<double>(nb));
            Scalar v;
            if constexpr (std::is_same_v<Scalar, double>) {
                v = p.g_qed * ea * eb;
            } else {
                // <.|(b - b^+)|.>: +sqrt(nb) when lowering, -sqrt(nb+1) when raising.
                const double sgn = db > 0 ? -1.0 : 1.0;
                v = Scalar(0.0, p.g_qed * ea * eb * sgn);
            }
            H(c, r) += v;
            if constexpr (std::is_same_v<Scalar, double>) {
                H(r, c) += v;
            } else {
                H(r, c) += std::conj(v);
            }
        }
    }
    return H;
}

inline Eigen::VectorXd block_eigenvalues(const HopfieldParams& p, int n_max, int parity, Frame frame)
{
    if (frame == Frame::Position) {
        const Eigen::MatrixXd H = assemble<double>(p, n_max, parity, frame);
        return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H, Eigen::EigenvaluesOnly).eigenvalues();
    }
    const Eigen::MatrixXcd H = assemble<std::complex<double>>(p, n_max, parity, frame);
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(H, Eigen::EigenvaluesOnly).eigenvalues();
}

} // namespace fock

// Full Hamiltonian matrix in the product Fock basis, index n_a (n_max + 1) + n_b.
inline Eigen::MatrixXcd fock_matrix(const HopfieldParams& p, int n_max, Frame frame = Frame::Position)
{
    const int dim = n_max + 1;
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim * dim, dim * dim);
    for (int parity = 0; parity < 2; ++parity) {
        const auto blk = fock::parity_block(n_max, parity);
        Eigen::MatrixXcd B;
        if (frame == Frame::Position)
            B = fock::assemble<double>(p, n_max, parity, frame).cast<std::complex<double>>();
        else
            B = fock::assemble<std::complex<double>>(p, n_max, parity, frame);
        for (std::size_t r = 0; r < blk.states.size(); ++r)
            for (std::size_t c = 0; c < blk.states.size(); ++c) {
                const int ir = blk.states[r].first * dim + blk.states[r].second;
                const int ic = blk.states[c].first * dim + blk.states[c].second;
                H(ir, ic) = B(r, c);
            }
    }
    return H;
}

// Lowest eigenvalues of both parity sectors, merged; even sector holds the ground state.
struct SectorSpectra {
    Eigen::VectorXd even;
    Eigen::VectorXd odd;
};

inline SectorSpectra sector_spectra(const HopfieldParams& p, int n_max, Frame frame = Frame::Position)
{
    p.validate();
    detail::require(n_max >= 2, "n_max must be at least 2");
    detail::require(n_max <= 63, "Fock truncation too large for dense diagonalization");
    return {fock::block_eigenvalues(p, n_max, 0, frame), fock::block_eigenvalues(p, n_max, 1, frame)};
}

inline QuantumSpectrum truncated_fock_spectrum(const HopfieldParams& p, int n_max, int n_levels,
                                               Frame frame = Frame::Position)
{
    const SectorSpectra s = sector_spectra(p, n_max, frame);
    std::vector<double> all(s.even.data(), s.even.data() + s.even.size());
    all.insert(all.end(), s.odd.data(), s.odd.data() + s.odd.size());
    std::sort(all.begin(), all.end());
    detail::require(n_levels >= 1 && n_levels < static_cast<int>(all.size()), "n_levels exceeds computed levels");
    QuantumSpectrum q;
    q.n_max = n_max;
    q.ground_state_energy = all.front();
    for (int k = 1; k <= n_levels; ++k) q.excitation_energies.push_back(all[k] - all.front());
    return q;
}

struct SingleExcitationGaps {
    double omega_plus;
    double omega_minus;
    double ground_state_energy;
};

// Identifies the two normal-mode quanta in the Fock spectrum. Single quanta live
// in the odd sector; the lowest odd level is w_minus, and the first odd level not
// accounted for by an odd multiple of w_minus is w_plus.
inline SingleExcitationGaps single_excitation_gaps(const HopfieldParams& p, int n_max, double rel_tol = 1e-6)
{
    const SectorSpectra s = sector_spectra(p, n_max);
    const double e0 = s.even(0);
    const double wm = s.odd(0) - e0;
    int next_multiple = 3;
    for (Eigen::Index k = 1; k < s.odd.size(); ++k) {
        const double e = s.odd(k) - e0;
        if (std::abs(e - next_multiple * wm) <= rel_tol * e) {
            next_multiple += 2;
            continue;
        }
        return {e, wm, e0};
    }
    throw DomainError("upper normal mode not found within the Fock truncation");
}

// Max |difference| of the lowest n_levels eigenvalues of the two frames.
inline double frame_equivalence_check(const HopfieldParams& p, int n_max, int n_levels = 5)
{
    const auto merged = [&](Frame f) {
        const SectorSpectra s = sector_spectra(p, n_max, f);
        std::vector<double> all(s.even.data(), s.even.data() + s.even.size());
        all.insert(all.end(), s.odd.data(), s.odd.data() + s.odd.size());
        std::sort(all.begin(), all.end());
        all.resize(static_cast<std::size_t>(n_levels));
        return all;
    };
    const auto a = merged(Frame::Position);
    const auto b = merged(Frame::Rotated);
    double d = 0.0;
    for (int k = 0; k < n_levels; ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

} // namespace polariton::hopfield
