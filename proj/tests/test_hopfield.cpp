#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "polariton/hopfield.hpp"
#include "polariton/models.hpp"

using namespace polariton;
using namespace polariton::hopfield;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("quartic with D = 0 equals the SpC closed form")
{
    for (double wc : {0.5, 1.0, 2.0})
        for (double g : {0.05, 0.2, 0.3}) {
            const HopfieldParams p{wc, 1.0, g, 0.0};
            if (!p.stable()) continue;
            const auto [wp, wm] = quartic_eigen(p);
            const auto h = eigenfrequencies(CoupledModel{{wc, 1.0}, ModelVariant::SpC, g});
            CHECK_THAT(wp, WithinRel(h.omega_plus.real(), 1e-12));
            CHECK_THAT(wm, WithinRel(h.omega_minus.real(), 1e-12));
        }
}

TEST_CASE("MoC correspondence through the diamagnetic term")
{
    for (double wc : {0.5, 1.0, 2.0})
        for (double g : {0.05, 0.2, 0.5}) {
            const CoupledModel m{{wc, 1.0}, ModelVariant::MoC, g};
            const auto p = equivalent_params(m);
            CHECK_THAT(p.D, WithinRel(p.g_qed * p.g_qed / p.omega_mat, 1e-14));
            const auto [wp, wm] = quartic_eigen(p);
            const auto h = eigenfrequencies(m);
            CHECK_THAT(wp, WithinRel(h.omega_plus.real(), 1e-12));
            CHECK_THAT(wm, WithinRel(h.omega_minus.real(), 1e-12));
        }
    const auto [wp, wm] = quartic_eigen({1.0, 1.0, 0.3, 0.09});
    CHECK_THAT(wp - wm, WithinRel(0.6, 1e-12));
}

TEST_CASE("decoupled quartic")
{
    const auto [wp, wm] = quartic_eigen({1.0, 1.1, 0.0, 0.2});
    CHECK_THAT(wp, WithinRel(std::sqrt(1.8), 1e-14));
    CHECK_THAT(wm, WithinRel(1.1, 1e-14));
}

TEST_CASE("unstable parameters are rejected")
{
    const HopfieldParams p{0.3, 1.0, 0.5, 0.0};
    CHECK_FALSE(p.stable());
    CHECK_THROWS_AS(quartic_eigen(p), DomainError);
    CHECK_THROWS_AS(quartic_eigen({1.0, 1.0, 0.1, -0.1}), DomainError);
}

TEST_CASE("uncoupled Fock ladder")
{
    const auto q = truncated_fock_spectrum({1.3, 0.7, 0.0, 0.0}, 6, 3);
    CHECK_THAT(q.ground_state_energy, WithinAbs(1.0, 1e-12));
    CHECK_THAT(q.excitation_energies[0], WithinAbs(0.7, 1e-12));
    CHECK_THAT(q.excitation_energies[1], WithinAbs(1.3, 1e-12));
    CHECK_THAT(q.excitation_energies[2], WithinAbs(1.4, 1e-12));
    CHECK_THROWS_AS(truncated_fock_spectrum({1, 1, 0, 0}, 2, 100), DomainError);
    CHECK_THROWS_AS(truncated_fock_spectrum({1, 1, 0, 0}, 1, 1), DomainError);
}

TEST_CASE("Fock gaps match the quartic at n_max = 40")
{
    const HopfieldParams p{1.0, 1.0, 0.1, 0.01};
    const auto [wp, wm] = quartic_eigen(p);
    const auto gaps = single_excitation_gaps(p, 40);
    CHECK_THAT(gaps.omega_plus, WithinAbs(wp, 1e-6));
    CHECK_THAT(gaps.omega_minus, WithinAbs(wm, 1e-6));
    CHECK_THAT(gaps.ground_state_energy, WithinAbs(0.5 * (wp + wm), 1e-6));
}

TEST_CASE("ground-state energy identity for random stable parameters")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uw(0.5, 2.0), ug(0.0, 0.3);
    for (int i = 0; i < 8; ++i) {
        const double g = ug(rng);
        const HopfieldParams p{uw(rng), 1.0, g, g * g};
        const auto [wp, wm] = quartic_eigen(p);
        const auto gaps = single_excitation_gaps(p, 30);
        CHECK_THAT(gaps.ground_state_energy, WithinAbs(0.5 * (wp + wm), 1e-6));
        // The coupled ground state is shifted from the bare zero-point energy.
        if (g > 0.05) CHECK(std::abs(gaps.ground_state_energy - 0.5 * (p.omega_cav + p.omega_mat)) > 1e-6);
    }
}

TEST_CASE("frame equivalence")
{
    CHECK(frame_equivalence_check({1.0, 1.0, 0.0, 0.0}, 10) == 0.0);
    CHECK(frame_equivalence_check({1.0, 1.0, 0.3, 0.09}, 40) <= 1e-9);
    CHECK(frame_equivalence_check({1.0, 1.0, 0.3, 0.0}, 40) <= 1e-9);
}

TEST_CASE("Fock matrices are Hermitian and the frames differ in structure")
{
    const HopfieldParams p{1.0, 1.2, 0.2, 0.04};
    const auto a = fock_matrix(p, 8, Frame::Position);
    const auto b = fock_matrix(p, 8, Frame::Rotated);
    CHECK((a - a.adjoint()).norm() < 1e-14);
    CHECK((b - b.adjoint()).norm() < 1e-14);
    CHECK(a.imag().norm() == 0.0);
    CHECK(b.imag().norm() > 0.1);
}

TEST_CASE("upper branch grows with D")
{
    double prev = 0.0;
    for (int i = 0; i <= 50; ++i) {
        const auto [wp, wm] = quartic_eigen({1.0, 1.0, 0.3, 0.02 * i});
        CHECK(wp >= prev);
        prev = wp;
        (void)wm;
    }
}

TEST_CASE("Fock convergence between n_max 30 and 40")
{
    for (double g : {0.1, 0.3, 0.5}) {
        const HopfieldParams p{1.0, 1.0, g, g * g};
        const auto a = single_excitation_gaps(p, 30);
        const auto b = single_excitation_gaps(p, 40);
        CHECK(std::abs(a.omega_plus - b.omega_plus) <= 1e-7);
        CHECK(std::abs(a.omega_minus - b.omega_minus) <= 1e-7);
    }
}

TEST_CASE("rotating-wave truncation reproduces the linearized model")
{
    HopfieldParams p{1.2, 1.0, 0.05, 0.0};
    p.rotating_wave = true;
    const auto q = truncated_fock_spectrum(p, 6, 2);
    auto [lp, lm] = linearized_eigenfrequencies(1.2, 1.0, 0.05);
    CHECK_THAT(q.excitation_energies[0], WithinAbs(lm, 1e-12));
    CHECK_THAT(q.excitation_energies[1], WithinAbs(lp, 1e-12));
    CHECK_THAT(q.ground_state_energy, WithinAbs(1.1, 1e-12));
}
