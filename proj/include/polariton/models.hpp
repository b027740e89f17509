#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "polariton/error.hpp"

namespace polariton {

using cdouble = std::complex<double>;

enum class ModelVariant {
    SpC,
    MoC,
    Linearized,
    AltCoulombDressedCavity,      // SpC form, cavity dressed to sqrt(w_cav^2 + 4 g^2)
    AltDipoleDressedMatter,       // SpC form, matter dressed to sqrt(w_mat^2 + 4 g^2)
    AltDipoleDipoleDressedCavity, // MoC form, cavity dressed to sqrt(w_cav^2 - 4 g'^2)
};

// How a decay rate enters the squared resonance of an oscillator.
enum class LossConvention {
    ComplexFrequency, // (w - i rate/2)^2
    ViscousDamping,   // w^2 - i w_drive rate
};

inline std::string to_string(ModelVariant v)
{
    switch (v) {
    case ModelVariant::SpC: return "SpC";
    case ModelVariant::MoC: return "MoC";
    case ModelVariant::Linearized: return "Linearized";
    case ModelVariant::AltCoulombDressedCavity: return "AltCoulombDressedCavity";
    case ModelVariant::AltDipoleDressedMatter: return "AltDipoleDressedMatter";
    case ModelVariant::AltDipoleDipoleDressedCavity: return "AltDipoleDipoleDressedCavity";
    }
    return "?";
}

struct OscillatorPair {
    double omega_cav = 1.0;
    double omega_mat = 1.0;
    double kappa = 0.0; // cavity decay rate
    double gamma = 0.0; // matter decay rate

    bool lossless() const { return kappa == 0.0 && gamma == 0.0; }

    void validate() const
    {
        detail::require_finite(omega_cav, "omega_cav");
        detail::require_finite(omega_mat, "omega_mat");
        detail::require_finite(kappa, "kappa");
        detail::require_finite(gamma, "gamma");
        detail::require(omega_cav > 0.0, "omega_cav must be positive");
        detail::require(omega_mat > 0.0, "omega_mat must be positive");
        detail::require(kappa >= 0.0 && gamma >= 0.0, "decay rates must be non-negative");
    }
};

// For A1, A2 and the dressed dipole-dipole variant, pair holds the dressed
// frequencies and g the transformed coupling.
struct CoupledModel {
    OscillatorPair pair;
    ModelVariant variant = ModelVariant::SpC;
    double g = 0.0;
    LossConvention loss = LossConvention::ComplexFrequency;
};

struct HybridModes {
    cdouble omega_plus;
    cdouble omega_minus;
    cdouble ratio_plus;  // x_cav / x_mat on the upper branch
    cdouble ratio_minus; // x_cav / x_mat on the lower branch
    bool lower_branch_real = true;

    double splitting() const { return omega_plus.real() - omega_minus.real(); }
};

enum class Branch { Plus, Minus };

// Frequency-domain pencil M(w) = K + w C - w^2 I acting on (x_cav, x_mat),
// for time dependence exp(-i w t).
struct Pencil2 {
    Eigen::Matrix2cd K;
    Eigen::Matrix2cd C;

    Eigen::Matrix2cd at(cdouble w) const
    {
        return K + w * C - w * w * Eigen::Matrix2cd::Identity();
    }
};

inline bool spring_form(ModelVariant v)
{
    return v == ModelVariant::SpC || v == ModelVariant::AltCoulombDressedCavity
           || v == ModelVariant::AltDipoleDressedMatter;
}

inline bool momentum_form(ModelVariant v)
{
    return v == ModelVariant::MoC || v == ModelVariant::AltDipoleDipoleDressedCavity;
}

namespace detail {

inline cdouble squared_resonance(double w0, double rate, LossConvention loss)
{
    if (loss == LossConvention::ComplexFrequency) {
        const cdouble w(w0, -0.5 * rate);
        return w * w;
    }
    return {w0 * w0, 0.0};
}

inline cdouble viscous_term(double rate, LossConvention loss)
{
    return loss == LossConvention::ViscousDamping ? cdouble(0.0, -rate) : cdouble(0.0, 0.0);
}

inline void sort_branches(cdouble& hi, cdouble& lo)
{
    const double scale = std::max({std::abs(hi), std::abs(lo), 1e-300});
    const bool swap_needed = (lo.real() > hi.real() + 1e-14 * scale)
                             || (std::abs(lo.real() - hi.real()) <= 1e-14 * scale && lo.imag() > hi.imag());
    if (swap_needed) std::swap(hi, lo);
}

} // namespace detail

inline Pencil2 pencil(const CoupledModel& m)
{
    detail::require(m.variant != ModelVariant::Linearized, "linearized model has no quadratic pencil");
    m.pair.validate();
    Pencil2 p;
    const auto& q = m.pair;
    p.K.setZero();
    p.C.setZero();
    p.K(0, 0) = detail::squared_resonance(q.omega_cav, q.kappa, m.loss);
    p.K(1, 1) = detail::squared_resonance(q.omega_mat, q.gamma, m.loss);
    p.C(0, 0) = detail::viscous_term(q.kappa, m.loss);
    p.C(1, 1) = detail::viscous_term(q.gamma, m.loss);
    if (spring_form(m.variant)) {
        // Coupling prefactor uses the real bare frequencies.
        const double k = 2.0 * m.g * std::sqrt(q.omega_cav * q.omega_mat);
        p.K(0, 1) = k;
        p.K(1, 0) = k;
    } else {
        p.C(0, 1) = cdouble(0.0, 2.0 * m.g);
        p.C(1, 0) = cdouble(0.0, -2.0 * m.g);
    }
    return p;
}

// All four roots of det M(w) = 0 via the companion linearisation
// w [x; y] = [[0, I], [K, C]] [x; y], y = w x.
inline std::array<cdouble, 4> pencil_roots(const Pencil2& p)
{
    Eigen::Matrix4cd A = Eigen::Matrix4cd::Zero();
    A.block<2, 2>(0, 2) = Eigen::Matrix2cd::Identity();
    A.block<2, 2>(2, 0) = p.K;
    A.block<2, 2>(2, 2) = p.C;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(A, false);
    std::array<cdouble, 4> out;
    for (int i = 0; i < 4; ++i) out[i] = es.eigenvalues()(i);
    return out;
}

inline cdouble ratio_from_pencil(const Pencil2& p, cdouble w)
{
    const Eigen::Matrix2cd M = p.at(w);
    // Use the row whose x_cav coefficient is larger.
    if (std::abs(M(0, 0)) >= std::abs(M(1, 0))) {
        if (std::abs(M(0, 0)) > 0.0) return -M(0, 1) / M(0, 0);
        return {std::numeric_limits<double>::infinity(), 0.0};
    }
    return -M(1, 1) / M(1, 0);
}

// Generic route: roots of the quadratic pencil, positive-real pair kept.
inline HybridModes eigenfrequencies_matrix(const CoupledModel& m)
{
    if (m.variant == ModelVariant::Linearized) {
        const auto& q = m.pair;
        const cdouble a(q.omega_cav, -0.5 * q.kappa), b(q.omega_mat, -0.5 * q.gamma);
        Eigen::Matrix2cd H;
        H << a, m.g, m.g, b;
        Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(H);
        HybridModes h;
        h.omega_plus = es.eigenvalues()(0);
        h.omega_minus = es.eigenvalues()(1);
        detail::sort_branches(h.omega_plus, h.omega_minus);
        auto ratio = [&](cdouble w) { return std::abs(a - w) > 0.0 ? -m.g / (a - w) : cdouble(std::numeric_limits<double>::infinity(), 0.0); };
        h.ratio_plus = ratio(h.omega_plus);
        h.ratio_minus = ratio(h.omega_minus);
        return h;
    }
    const Pencil2 p = pencil(m);
    auto roots = pencil_roots(p);
    std::sort(roots.begin(), roots.end(), [](cdouble x, cdouble y) {
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() < y.imag();
    });
    HybridModes h;
    h.omega_plus = roots[0];
    h.omega_minus = roots[1];
    detail::sort_branches(h.omega_plus, h.omega_minus);
    const double scale = std::abs(h.omega_plus);
    h.lower_branch_real = h.omega_minus.real() > 1e-12 * scale;
    h.ratio_plus = ratio_from_pencil(p, h.omega_plus);
    h.ratio_minus = ratio_from_pencil(p, h.omega_minus);
    return h;
}

// w_pm^2 = [S +- sqrt(S^2 - 4 P)] / 2 with the small root taken as P / s_plus.
struct SquaredRoots {
    double s_plus;
    double s_minus;
};

inline SquaredRoots squared_roots(double S, double disc, double P)
{
    const double sp = 0.5 * (S + std::sqrt(std::max(disc, 0.0)));
    return {sp, P / sp};
}

// Closed form for the spring-coupled pair.
inline SquaredRoots spc_squared(double wc, double wm, double g)
{
    const double d = wc * wc - wm * wm;
    return squared_roots(wc * wc + wm * wm, d * d + 16.0 * g * g * wc * wm, wc * wc * wm * wm - 4.0 * g * g * wc * wm);
}

// Closed form for the momentum-coupled pair.
inline SquaredRoots moc_squared(double wc, double wm, double g)
{
    const double S = wc * wc + wm * wm + 4.0 * g * g;
    return squared_roots(S, S * S - 4.0 * wc * wc * wm * wm, wc * wc * wm * wm);
}

inline std::pair<double, double> linearized_eigenfrequencies(double omega_cav, double omega_mat, cdouble g_lin)
{
    detail::require(omega_cav > 0.0 && omega_mat > 0.0, "frequencies must be positive");
    const double d = omega_cav - omega_mat;
    const double r = std::sqrt(d * d + 4.0 * std::norm(g_lin));
    return {0.5 * (omega_cav + omega_mat + r), 0.5 * (omega_cav + omega_mat - r)};
}

// g_lin = g_SpC = i g_MoC.
inline cdouble linearized_coupling(ModelVariant from, double g)
{
    return from == ModelVariant::MoC ? cdouble(0.0, g) : cdouble(g, 0.0);
}

inline bool spc_lower_branch_exists(double omega_cav, double omega_mat, double g)
{
    detail::require(omega_cav > 0.0 && omega_mat > 0.0, "frequencies must be positive");
    return omega_cav * omega_cav * omega_mat * omega_mat - 4.0 * g * g * omega_cav * omega_mat >= 0.0;
}

inline cdouble eigenvector_ratio(const CoupledModel& m, cdouble w)
{
    if (m.variant == ModelVariant::Linearized) {
        const cdouble a(m.pair.omega_cav, -0.5 * m.pair.kappa);
        if (a == w) throw PoleError("eigenvector ratio has a pole at the bare cavity frequency");
        return -m.g / (a - w);
    }
    const Pencil2 p = pencil(m);
    const Eigen::Matrix2cd M = p.at(w);
    if (M(0, 0) == cdouble(0.0, 0.0)) {
        if (M(0, 1) == cdouble(0.0, 0.0) && M(1, 0) != cdouble(0.0, 0.0)) return -M(1, 1) / M(1, 0);
        throw PoleError("eigenvector ratio has a pole at the bare cavity frequency");
    }
    return -M(0, 1) / M(0, 0);
}

// Closed forms on the lossless path, pencil roots otherwise.
inline HybridModes eigenfrequencies(const CoupledModel& m)
{
    m.pair.validate();
    detail::require_finite(m.g, "g");
    if (!m.pair.lossless()) return eigenfrequencies_matrix(m);

    const double wc = m.pair.omega_cav, wm = m.pair.omega_mat;
    HybridModes h;
    if (m.variant == ModelVariant::Linearized) {
        auto [p, q] = linearized_eigenfrequencies(wc, wm, m.g);
        h.omega_plus = p;
        h.omega_minus = q;
    } else {
        const SquaredRoots s = spring_form(m.variant) ? spc_squared(wc, wm, m.g) : moc_squared(wc, wm, m.g);
        h.omega_plus = std::sqrt(s.s_plus);
        if (s.s_minus >= 0.0) {
            h.omega_minus = std::sqrt(s.s_minus);
        } else {
            h.omega_minus = cdouble(0.0, std::sqrt(-s.s_minus));
            h.lower_branch_real = false;
        }
    }
    auto safe_ratio = [&](cdouble w) {
        try {
            return eigenvector_ratio(m, w);
        } catch (const PoleError&) {
            return cdouble(std::numeric_limits<double>::infinity(), 0.0);
        }
    };
    h.ratio_plus = safe_ratio(h.omega_plus);
    h.ratio_minus = safe_ratio(h.omega_minus);
    return h;
}

inline cdouble eigenvector_ratio(const CoupledModel& m, Branch b)
{
    const HybridModes h = eigenfrequencies(m);
    return eigenvector_ratio(m, b == Branch::Plus ? h.omega_plus : h.omega_minus);
}

// Spectrally equivalent dressed-frequency models.
inline CoupledModel alternative_model(const CoupledModel& base, ModelVariant target)
{
    const double wc = base.pair.omega_cav, wm = base.pair.omega_mat, g = base.g;
    CoupledModel out = base;
    out.variant = target;
    if (base.variant == ModelVariant::MoC && target == ModelVariant::AltCoulombDressedCavity) {
        const double wd = std::sqrt(wc * wc + 4.0 * g * g);
        out.pair.omega_cav = wd;
        out.g = -g * std::sqrt(wm / wd);
        return out;
    }
    if (base.variant == ModelVariant::MoC && target == ModelVariant::AltDipoleDressedMatter) {
        const double wd = std::sqrt(wm * wm + 4.0 * g * g);
        out.pair.omega_mat = wd;
        out.g = g * std::sqrt(wc / wd);
        return out;
    }
    if (base.variant == ModelVariant::SpC && target == ModelVariant::AltDipoleDipoleDressedCavity) {
        const double gp = g * std::sqrt(wc / wm);
        const double d2 = wc * wc - 4.0 * gp * gp;
        if (d2 <= 0.0) throw DomainError("dressed cavity frequency squared is non-positive");
        out.pair.omega_cav = std::sqrt(d2);
        out.g = gp;
        return out;
    }
    throw DomainError("no alternative mapping from " + to_string(base.variant) + " to " + to_string(target));
}

inline std::vector<CoupledModel> alternative_models(const CoupledModel& base)
{
    if (base.variant == ModelVariant::MoC)
        return {alternative_model(base, ModelVariant::AltCoulombDressedCavity),
                alternative_model(base, ModelVariant::AltDipoleDressedMatter)};
    if (base.variant == ModelVariant::SpC)
        return {alternative_model(base, ModelVariant::AltDipoleDipoleDressedCavity)};
    throw DomainError("alternative models exist only for SpC and MoC");
}

struct MinSplitting {
    double omega_min;
    double omega_cav_at_min;
};

inline double lossless_splitting(ModelVariant v, double wc, double wm, double g, bool* valid = nullptr)
{
    CoupledModel m{{wc, wm, 0.0, 0.0}, v, g};
    const HybridModes h = eigenfrequencies(m);
    if (valid) *valid = h.lower_branch_real;
    return h.splitting();
}

// Grid minimum of w+ - w- refined by golden section to tol * omega_mat.
inline MinSplitting min_splitting(ModelVariant v, double g, double omega_mat, const std::vector<double>& omega_cav_grid,
                                  double tol = 1e-6)
{
    detail::require(omega_mat > 0.0, "omega_mat must be positive");
    std::vector<double> vals(omega_cav_grid.size(), std::numeric_limits<double>::infinity());
    bool any = false;
    for (std::size_t i = 0; i < omega_cav_grid.size(); ++i) {
        bool ok = false;
        const double s = lossless_splitting(v, omega_cav_grid[i], omega_mat, g, &ok);
        if (ok) {
            vals[i] = s;
            any = true;
        }
    }
    if (!any) throw DomainError("no grid point has a real lower branch");
    const std::size_t i = std::min_element(vals.begin(), vals.end()) - vals.begin();
    double lo = omega_cav_grid[i > 0 && std::isfinite(vals[i - 1]) ? i - 1 : i];
    double hi = omega_cav_grid[i + 1 < vals.size() && std::isfinite(vals[i + 1]) ? i + 1 : i];
    auto f = [&](double wc) {
        bool ok = false;
        const double s = lossless_splitting(v, wc, omega_mat, g, &ok);
        return ok ? s : std::numeric_limits<double>::infinity();
    };
    const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > tol * omega_mat) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        }
    }
    const double xm = 0.5 * (lo + hi);
    double best_x = omega_cav_grid[i], best = vals[i];
    for (double x : {xm, x1, x2}) {
        const double fx = f(x);
        if (fx < best) {
            best = fx;
            best_x = x;
        }
    }
    return {best, best_x};
}

} // namespace polariton
