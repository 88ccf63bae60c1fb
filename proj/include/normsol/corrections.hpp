#pragma once

/// @file corrections.hpp
/// @brief Radial linearized problems around the ground state.
///
/// The correction W solves -ΔW + W - pU^{p-1}W = |y|²U on R^N. Only this
/// radial problem is needed: a potential with Hessian diag(a_i) produces a
/// correction whose pairing with U is 𝔪 ΔV(ξ₀), where 𝔪 = (1/2N) ∫ U W.
///
/// Two independent routes are provided for N = 1: a finite-difference band
/// solve (Richardson-extrapolated) and the factorization W = c(r) U'(r) with
/// c' = (1 / 2U'²) ∫_r^∞ s² (U²)'(s) ds.

#include "normsol/error.hpp"
#include "normsol/groundstate.hpp"
#include "normsol/numerics.hpp"
#include "normsol/radial_profile.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <optional>
#include <vector>

namespace normsol {

struct CorrectionProfile {
    ProblemParams params;
    RadialProfile profile; ///< W
    double m_frak = 0.0;
    std::optional<double> w_zero;
    double residual = 0.0; ///< max interior residual of the linearized ODE over max(1, max|W|)
};

struct LinearizedSolveConfig {
    int refine = 8;             ///< coarse solve uses step h / refine, fine solve h / (2 refine)
    double max_condition = 1e14;
};

namespace detail {

inline RadialProfile refine_profile(const RadialProfile& src, std::size_t factor)
{
    RadialProfile out;
    out.tail_rate = src.tail_rate;
    out.tail_power = src.tail_power;
    const std::size_t n = (src.size() - 1) * factor + 1;
    out.nodes = uniform_nodes(0.0, src.radius(), n);
    out.values.resize(n);
    out.dvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i % factor == 0) {
            out.values[i] = src.values[i / factor];
            out.dvalues[i] = src.dvalues[i / factor];
        } else {
            std::tie(out.values[i], out.dvalues[i]) = src.evaluate(out.nodes[i]);
        }
    }
    return out;
}

/// Second-order central differences for -W'' - (N-1)W'/r + (1 - pU^{p-1})W = f
/// with W'(0) = 0 (symmetric stencil) and W'(R) = -W(R) (ghost node).
inline Tridiagonal linearized_operator(const RadialProfile& u, const ProblemParams& prm)
{
    const std::size_t n = u.size();
    const double h = u.step(), h2 = h * h;
    const int dim = prm.dim;
    Tridiagonal a(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double potential = 1.0 - prm.p * std::pow(u.values[i], prm.p - 1.0);
        if (i == 0) {
            a.diag[0] = 2.0 * dim / h2 + potential;
            a.upper[0] = -2.0 * dim / h2;
        } else if (i + 1 == n) {
            const double r = u.nodes[i];
            a.lower[i - 1] = -2.0 / h2;
            a.diag[i] = 2.0 / h2 + 2.0 / h + (dim - 1) / r + potential;
        } else {
            const double r = u.nodes[i];
            const double adv = (dim - 1) / (2.0 * h * r);
            a.lower[i - 1] = -1.0 / h2 + adv;
            a.diag[i] = 2.0 / h2 + potential;
            a.upper[i] = -1.0 / h2 - adv;
        }
    }
    return a;
}

struct DiscreteSolve {
    std::vector<double> w;
    double residual;
};

inline DiscreteSolve solve_discrete(const RadialProfile& u, const RadialProfile& rhs, const ProblemParams& prm,
                                    double max_condition)
{
    const auto a = linearized_operator(u, prm);
    auto sol = a.solve(rhs.values, max_condition);
    auto applied = a.apply(sol.x);
    double res = 0.0;
    for (std::size_t i = 1; i + 1 < applied.size(); ++i)
        res = std::max(res, std::abs(applied[i] - rhs.values[i]));
    return {std::move(sol.x), res};
}

} // namespace detail

/// Max over interior nodes of the linearized ODE residual of W, using sixth-order
/// central differences of the samples for W''. Scaled by max(1, max|W|).
inline double linearized_residual(const GroundState& gs, const RadialProfile& w, const RadialProfile& rhs)
{
    const auto& u = gs.profile;
    const double h = w.step();
    const auto& v = w.values;
    double worst = 0.0;
    auto at = [&](std::ptrdiff_t i) { return v[static_cast<std::size_t>(i < 0 ? -i : i)]; };
    for (std::size_t k = 1; k + 3 < w.size(); ++k) {
        const auto i = static_cast<std::ptrdiff_t>(k);
        const double d2 = (2 * at(i - 3) - 27 * at(i - 2) + 270 * at(i - 1) - 490 * at(i) + 270 * at(i + 1) -
                           27 * at(i + 2) + 2 * at(i + 3)) /
                          (180 * h * h);
        const double r = w.nodes[k];
        const double res = -d2 - (gs.params.dim - 1) * w.dvalues[k] / r +
                           (1.0 - gs.params.p * std::pow(u.values[k], gs.params.p - 1.0)) * v[k] - rhs.values[k];
        worst = std::max(worst, std::abs(res));
    }
    return worst / std::max(1.0, max_abs(v));
}

/// Decaying radial solution of -W'' - (N-1)W'/r + W - pU^{p-1}W = rhs with
/// W'(0) = 0 and W'(R)/W(R) = -1, sampled on the ground-state grid.
/// Throws SingularOperator when the discrete operator is numerically singular.
inline RadialProfile solve_linearized_radial(const GroundState& gs, const RadialProfile& rhs,
                                             const LinearizedSolveConfig& cfg = {})
{
    require(rhs.size() == gs.profile.size() && rhs.radius() == gs.profile.radius(),
            "rhs must be sampled on the ground-state grid");
    require(cfg.refine >= 1, "refinement factor must be positive");
    const auto f1 = static_cast<std::size_t>(cfg.refine), f2 = 2 * f1;
    const auto coarse = detail::solve_discrete(detail::refine_profile(gs.profile, f1),
                                               detail::refine_profile(rhs, f1), gs.params, cfg.max_condition);
    const auto fine = detail::solve_discrete(detail::refine_profile(gs.profile, f2),
                                             detail::refine_profile(rhs, f2), gs.params, cfg.max_condition);
    RadialProfile w;
    w.nodes = gs.profile.nodes;
    w.values.resize(w.nodes.size());
    for (std::size_t i = 0; i < w.nodes.size(); ++i)
        w.values[i] = (4.0 * fine.w[i * f2] - coarse.w[i * f1]) / 3.0;
    w.dvalues = derivative_samples(w.values, w.step(), Parity::Even);
    w.tail_rate = -1.0;
    w.tail_power = 0.5 * (gs.params.dim - 1);
    return w;
}

/// |y|² U(y) on the ground-state grid.
inline RadialProfile quadratic_source(const GroundState& gs)
{
    RadialProfile src = gs.profile;
    for (std::size_t i = 0; i < src.size(); ++i) {
        const double r = src.nodes[i];
        src.values[i] = r * r * gs.profile.values[i];
        src.dvalues[i] = 2 * r * gs.profile.values[i] + r * r * gs.profile.dvalues[i];
    }
    return src;
}

/// 𝔪 = (1/2N) ∫_{R^N} U W.
inline double compute_m_frak(const GroundState& gs, const RadialProfile& w)
{
    return radial_inner_product(gs.profile, w, gs.params.dim) / (2.0 * gs.params.dim);
}

/// ∫_0^{r_max} f g dr on the shared grid (no angular factor).
inline double partial_integral(const RadialProfile& f, const RadialProfile& g, double r_max)
{
    const auto last = static_cast<std::size_t>(std::lround(r_max / f.step()));
    require(last < f.size() && last >= 2, "integration limit outside the grid");
    std::vector<double> integrand(last + 1);
    for (std::size_t i = 0; i <= last; ++i)
        integrand[i] = f.values[i] * g.values[i];
    return simpson(integrand, f.step());
}

/// Unique sign change of W, refined by bisection on the Hermite interpolant to 1e-10.
/// Throws ZeroCountMismatch unless the sampled W changes sign exactly once.
inline double w_zero_locate(const RadialProfile& w)
{
    const double floor = 1e-14 * max_abs(w.values);
    std::vector<std::size_t> changes;
    std::optional<std::size_t> last_significant;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (std::abs(w.values[i]) <= floor)
            continue;
        if (last_significant && std::signbit(w.values[*last_significant]) != std::signbit(w.values[i]))
            changes.push_back(*last_significant);
        last_significant = i;
    }
    if (changes.size() != 1)
        throw Error(ErrorKind::ZeroCountMismatch,
                    "expected exactly one sign change, found " + std::to_string(changes.size()));
    double lo = w.nodes[changes[0]], hi = w.nodes[changes[0] + 1];
    const bool lo_negative = std::signbit(w(lo));
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (std::signbit(w(mid)) == lo_negative ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Direct route: W for the source |y|²U, with 𝔪 and the residual.
inline CorrectionProfile solve_correction(const GroundState& gs, const LinearizedSolveConfig& cfg = {})
{
    CorrectionProfile out;
    out.params = gs.params;
    const auto src = quadratic_source(gs);
    out.profile = solve_linearized_radial(gs, src, cfg);
    out.m_frak = compute_m_frak(gs, out.profile);
    out.residual = linearized_residual(gs, out.profile, src);
    try {
        out.w_zero = w_zero_locate(out.profile);
    } catch (const Error&) {
        out.w_zero.reset();
    }
    return out;
}

/// Factorization W(r) = c(r) U'(r) of the one-dimensional correction. The
/// constant in c is fixed by W'(0) = 0, i.e. c(r) = -K/(2a² r) + ∫_0^r g with
/// a = U''(0), K = ∫_0^∞ s² (U²)' ds and g the regular part of c'.
class FactorizationOracle {
public:
    explicit FactorizationOracle(const GroundState& gs, double far_radius = 60.0)
        : soliton_(SolitonClosedForm::for_exponent(gs.params.p)), nodes_(gs.profile.nodes)
    {
        require(gs.params.dim == 1, "the factorization oracle is one-dimensional");
        const std::size_t n = nodes_.size();
        h_ = nodes_[1] - nodes_[0];
        // J(r) = ∫_r^∞ s² (U²)'(s) ds accumulated inward from far_radius
        inner_.assign(n, 0.0);
        double tail = 0.0;
        for (double a = nodes_.back(); a < far_radius; a += 1.0)
            tail += integrate_source(a, std::min(a + 1.0, far_radius));
        inner_[n - 1] = tail;
        for (std::size_t i = n - 1; i-- > 0;)
            inner_[i] = inner_[i + 1] + integrate_source(nodes_[i], nodes_[i + 1]);
        k_ = inner_[0];
        a_ = soliton_.second_derivative(0.0);

        regular_.assign(n, 0.0);
        for (std::size_t i = 1; i < n; ++i)
            regular_[i] = regular_[i - 1] + boost::math::quadrature::gauss<double, 10>::integrate(
                                                [this](double s) { return regular_part(s); }, nodes_[i - 1],
                                                nodes_[i]);
    }

    /// J(r) = ∫_r^∞ s² (U²)'(s) ds.
    double inner_integral(double r) const
    {
        const std::size_t i = cell_of(r);
        return inner_[i + 1] + integrate_source(r, nodes_[i + 1]);
    }

    double c_prime(double r) const
    {
        const double du = soliton_.derivative(r);
        return inner_integral(r) / (2.0 * du * du);
    }

    /// W(0) = ∫_0^∞ s² U U' ds / (-U''(0)).
    double w_at_origin() const { return -k_ / (2.0 * a_); }

    CorrectionProfile correction(const GroundState& gs) const
    {
        CorrectionProfile out;
        out.params = gs.params;
        RadialProfile& w = out.profile;
        w.nodes = nodes_;
        w.values.resize(nodes_.size());
        w.dvalues.resize(nodes_.size());
        w.values[0] = w_at_origin();
        w.dvalues[0] = 0.0;
        for (std::size_t i = 1; i < nodes_.size(); ++i) {
            const double r = nodes_[i];
            const double c = -k_ / (2.0 * a_ * a_ * r) + regular_[i];
            w.values[i] = c * soliton_.derivative(r);
            w.dvalues[i] = c_prime(r) * soliton_.derivative(r) + c * soliton_.second_derivative(r);
        }
        w.tail_rate = -1.0;
        w.tail_power = 0.0;
        out.m_frak = compute_m_frak(gs, w);
        out.residual = linearized_residual(gs, w, quadratic_source(gs));
        try {
            out.w_zero = w_zero_locate(w);
        } catch (const Error&) {
            out.w_zero.reset();
        }
        return out;
    }

private:
    double integrate_source(double a, double b) const
    {
        return boost::math::quadrature::gauss<double, 10>::integrate(
            [this](double s) { return 2.0 * s * s * soliton_.value(s) * soliton_.derivative(s); }, a, b);
    }

    double regular_part(double s) const { return c_prime(s) - k_ / (2.0 * a_ * a_ * s * s); }

    std::size_t cell_of(double r) const
    {
        auto i = static_cast<std::size_t>(r / h_);
        return std::min(i, nodes_.size() - 2);
    }

    SolitonClosedForm soliton_;
    std::vector<double> nodes_;
    double h_ = 0.0;
    std::vector<double> inner_;
    std::vector<double> regular_;
    double k_ = 0.0;
    double a_ = 0.0;
};

inline CorrectionProfile factorization_oracle_1d(const GroundState& gs)
{
    return FactorizationOracle(gs).correction(gs);
}

} // namespace normsol
