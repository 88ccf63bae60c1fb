#pragma once

/// @file asymptotics.hpp
/// @brief Leading-order predictions for concentrating normalized solutions and
/// their comparison against direct solves.

#include "normsol/boundary_layer.hpp"
#include "normsol/corrections.hpp"
#include "normsol/error.hpp"
#include "normsol/groundstate.hpp"
#include "normsol/nls_bvp.hpp"
#include "normsol/numerics.hpp"
#include "normsol/params.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace normsol {

enum class Setting { Interior, Boundary1DEndpoint, SchrodingerWholeSpace };

enum class CriticalSetting { Dirichlet, NeumannInterior, Schrodinger };

struct EpsilonLambda {
    double epsilon = 0.0;
    double lambda = 0.0;
};

/// Limit of Λ_ρ: 1/σ₀ for a boundary peak, 1/(2σ₀) otherwise.
inline double limiting_lambda_factor(double sigma0, Setting setting)
{
    return setting == Setting::Boundary1DEndpoint ? 1.0 / sigma0 : 0.5 / sigma0;
}

/// ε = (Λρ)^{(p-1)/((p-1)N - 4)} with Λ at its limit.
inline EpsilonLambda predict_epsilon_noncritical(const ProblemParams& prm, double sigma0, double rho, Setting setting)
{
    require(rho > 0.0 && sigma0 > 0.0, "rho and sigma0 must be positive");
    if (prm.regime == Regime::MassCritical)
        throw Error(ErrorKind::RegimeMismatch, "mass-critical exponent has no power-law prediction");
    const double exponent = (prm.p - 1.0) / ((prm.p - 1.0) * prm.dim - 4.0);
    const double eps = std::pow(limiting_lambda_factor(sigma0, setting) * rho, exponent);
    if (eps > 1.0)
        throw Error(ErrorKind::RegimeMismatch,
                    std::string("rho = ") + std::to_string(rho) + " is too " +
                        (prm.regime == Regime::Subcritical ? "small" : "large") + " for concentration (epsilon = " +
                        std::to_string(eps) + ")");
    return {eps, 1.0 / (eps * eps)};
}

struct CriticalInputs {
    double sigma0 = 0.0;
    double m_frak = 0.0;      ///< Schrödinger only
    double laplacian_v = 0.0; ///< ΔV at the concentration point, Schrödinger only
};

/// Two-term mass prediction in the mass-critical case: 2σ₀ - 2Θ_ε on (-1, 1)
/// (N = 1, p = 5) or 2σ₀ - 2ε⁴ 𝔪 ΔV(ξ₀) on the whole space.
inline double predict_mass_expansion_critical(CriticalSetting setting, double epsilon, const CriticalInputs& in)
{
    require(epsilon > 0.0, "epsilon must be positive");
    switch (setting) {
    case CriticalSetting::Dirichlet:
        return 2.0 * in.sigma0 - 2.0 * theta_quadrature(epsilon, BoundaryCondition::Dirichlet);
    case CriticalSetting::NeumannInterior:
        return 2.0 * in.sigma0 - 2.0 * theta_quadrature(epsilon, BoundaryCondition::Neumann);
    case CriticalSetting::Schrodinger:
        return 2.0 * in.sigma0 - 2.0 * std::pow(epsilon, 4) * in.m_frak * in.laplacian_v;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

/// ε⁴ = |ρ - 2σ₀| / (2 |𝔪 ΔV(ξ₀)|), the inverse of the two-term mass
/// expansion. Λ_ρ = ε⁴/|ρ - 2σ₀| then tends to 1/(2|𝔪 ΔV(ξ₀)|).
inline EpsilonLambda predict_lambda_critical_schrodinger(double rho, double sigma0, double m_frak, double laplacian_v)
{
    const double drive = m_frak * laplacian_v;
    require(drive != 0.0, "m_frak * laplacian(V) must be nonzero");
    const double gap = 2.0 * sigma0 - rho;
    if (gap == 0.0)
        return {0.0, std::numeric_limits<double>::infinity()};
    if ((gap > 0.0) != (drive > 0.0))
        throw Error(ErrorKind::WrongSide, "rho lies on the side of 2 sigma0 excluded by the sign of m_frak * laplacian(V)");
    const double eps = std::pow(std::abs(gap) / (2.0 * std::abs(drive)), 0.25);
    return {eps, 1.0 / (eps * eps)};
}

enum class RateLaw { Power, Exponential };

/// Abscissa of the log-log fit: log ε, or -2/ε + log(1/ε) for the boundary-layer law.
inline double rate_abscissa(double epsilon, RateLaw law)
{
    return law == RateLaw::Power ? std::log(epsilon) : -2.0 / epsilon - std::log(epsilon);
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (!(std::abs(det) > 0.0))
        throw Error(ErrorKind::DegenerateFit, "abscissae coincide");
    return {(n * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det};
}

namespace detail {

inline void check_fit_pairs(const std::vector<std::pair<double, double>>& pairs)
{
    if (pairs.size() < 3)
        throw Error(ErrorKind::DegenerateFit, "need at least three (epsilon, deviation) pairs");
    auto sorted = pairs;
    std::sort(sorted.begin(), sorted.end());
    int direction = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (!(sorted[i].first > 0.0) || !(sorted[i].second > 0.0))
            throw Error(ErrorKind::DegenerateFit, "epsilons and deviations must be positive");
        if (i == 0)
            continue;
        const double d = sorted[i].second - sorted[i - 1].second;
        const int s = d > 0 ? 1 : (d < 0 ? -1 : 0);
        if (s == 0 || (direction != 0 && s != direction))
            throw Error(ErrorKind::DegenerateFit, "deviations are not monotone in epsilon");
        direction = s;
    }
}

} // namespace detail

/// Least-squares slope of log(deviation) against rate_abscissa(ε).
inline LineFit fit_rate(const std::vector<std::pair<double, double>>& pairs, RateLaw law = RateLaw::Power)
{
    detail::check_fit_pairs(pairs);
    std::vector<double> x, y;
    for (const auto& [eps, dev] : pairs) {
        x.push_back(rate_abscissa(eps, law));
        y.push_back(std::log(dev));
    }
    return least_squares(x, y);
}

inline double fit_convergence_order(const std::vector<std::pair<double, double>>& pairs, RateLaw law = RateLaw::Power)
{
    return fit_rate(pairs, law).slope;
}

/// Leading prefactor C from deviation ≈ C g(ε) (1 + D ε^k), where g is ε^order
/// (power law) or ε^{-1} e^{-2/ε} (exponential law), by a line fit of
/// deviation / g(ε) against ε^k.
inline double fit_leading_prefactor(const std::vector<std::pair<double, double>>& pairs, RateLaw law, double order,
                                    double k)
{
    detail::check_fit_pairs(pairs);
    std::vector<double> x, y;
    for (const auto& [eps, dev] : pairs) {
        const double g = law == RateLaw::Power ? std::pow(eps, order) : std::exp(-2.0 / eps) / eps;
        x.push_back(std::pow(eps, k));
        y.push_back(dev / g);
    }
    return least_squares(x, y).intercept;
}

/// L² norm over y of the residual of Z = U - a ε⁴ W in
///   -Z'' + (1 + ε² V(εy + ε²τ)) Z = Z^p,  V(x) = a x²,
/// for N = 1. U'' and W'' are eliminated through their equations, so no
/// numerical second derivative enters.
inline double correction_ansatz_residual(const GroundState& gs, const CorrectionProfile& w, double epsilon, double tau,
                                         double a = 1.0)
{
    require(gs.params.dim == 1, "ansatz residual is implemented for N = 1");
    const double p = gs.params.p;
    const double e4 = std::pow(epsilon, 4) * a;
    const auto& nodes = w.profile.nodes;
    const std::size_t n = nodes.size();
    const double h = w.profile.step();
    std::vector<double> sq(2 * n - 1);
    for (std::size_t k = 0; k < sq.size(); ++k) {
        const double y = (static_cast<double>(k) - static_cast<double>(n - 1)) * h;
        const std::size_t i = k < n - 1 ? n - 1 - k : k - (n - 1);
        const double U = gs.profile.values[i], W = w.profile.values[i];
        const double Z = U - e4 * W;
        const double xs = epsilon * y + epsilon * epsilon * tau;
        // -Z'' = U^p - U - aε⁴(y²U - W + pU^{p-1}W)
        const double nonlinear = std::pow(U, p) - detail::signed_pow(Z, p) - p * e4 * std::pow(U, p - 1) * W;
        const double potential = epsilon * epsilon * a * xs * xs * Z - e4 * y * y * U;
        const double r = nonlinear + potential;
        sq[k] = r * r;
    }
    return std::sqrt(simpson(sq, h));
}

struct VerifyTolerances {
    double exponential = 0.25; ///< relative, boundary-layer quantities
    double power = 0.10;       ///< relative, ε⁴ laws
    double order_band = 0.3;   ///< absolute, fitted orders
    double lambda = 1e-3;      ///< relative, noncritical λ
};

struct SweepRow {
    double epsilon = 0.0;
    double observed = 0.0;
    double predicted = 0.0;
};

struct AsymptoticReport {
    std::string theorem_id;
    std::map<std::string, double> predicted;
    std::map<std::string, double> observed;
    double fitted_order = std::numeric_limits<double>::quiet_NaN();
    bool pass = false;
    std::string notes;
    std::vector<SweepRow> sweep;
    std::optional<ErrorKind> error; ///< set when a sub-computation failed
};

inline bool within(double observed, double predicted, double tol) { return std::abs(observed / predicted - 1.0) <= tol; }

namespace detail {

inline AsymptoticReport report_noncritical(const VerifyTolerances& tol, const NlsConfig& cfg)
{
    AsymptoticReport rep;
    rep.theorem_id = "main2";
    const auto prm = make_params(1, 3.0);
    const double sigma0 = 0.5 * soliton_mass_1d(prm.p);
    const auto spec = DomainSpec::real_line({1.0});
    rep.pass = true;
    for (double rho : {10.0, 20.0, 50.0}) {
        const auto pred = predict_epsilon_noncritical(prm, sigma0, rho, Setting::SchrodingerWholeSpace);
        const auto sol = solve_normalized(spec, prm, rho, cfg);
        rep.sweep.push_back({pred.epsilon, sol.lambda, pred.lambda});
        if (rho == 50.0) {
            rep.predicted["lambda"] = pred.lambda;
            rep.observed["lambda"] = sol.lambda;
            rep.observed["lambda_relative_error"] = sol.lambda / pred.lambda - 1.0;
            rep.pass = within(sol.lambda, pred.lambda, tol.lambda);
        }
    }
    rep.notes = "V = x^2, p = 3, N = 1; lambda from the direct normalized solve against the limiting-Lambda prediction";
    return rep;
}

inline AsymptoticReport report_boundary_critical(BoundaryCondition bc, const VerifyTolerances& tol,
                                                 const NlsConfig& cfg)
{
    AsymptoticReport rep;
    rep.theorem_id = bc == BoundaryCondition::Dirichlet ? "main2critico_dirichlet" : "main2critico_neumann";
    const auto prm = make_params(1, 5.0);
    const double critical = soliton_mass_1d(prm.p);
    const auto spec = DomainSpec::interval(-1.0, 1.0, bc);
    const std::vector<double> eps{0.3, 0.25, 0.2, 0.15};
    const auto branch = trace_branch(spec, prm, eps, cfg);
    const double sign = bc == BoundaryCondition::Dirichlet ? 1.0 : -1.0;
    std::vector<std::pair<double, double>> pairs;
    bool one_sided = true;
    for (const auto& b : branch) {
        const double gap = sign * (critical - b.mass);
        const double pred = sign * 2.0 * theta_quadrature(b.epsilon, bc);
        one_sided = one_sided && gap > 0.0;
        rep.sweep.push_back({b.epsilon, gap, pred});
        pairs.emplace_back(b.epsilon, gap);
    }
    const auto& last = rep.sweep.back();
    rep.predicted["gap_at_min_epsilon"] = last.predicted;
    rep.observed["gap_at_min_epsilon"] = last.observed;
    rep.observed["gap_ratio"] = last.observed / last.predicted;
    rep.predicted["exponential_order"] = 1.0;
    rep.predicted["gap_constant"] = 2.0 * kThetaLeadingConstant;
    rep.predicted["gap_constant_stated"] = 2.0 * kThetaStatedConstant;
    rep.observed["two_sigma0"] = critical;
    try {
        rep.fitted_order = fit_convergence_order(pairs, RateLaw::Exponential);
        rep.observed["gap_constant"] = fit_leading_prefactor(pairs, RateLaw::Exponential, 0.0, 1.0);
    } catch (const Error& e) {
        rep.notes = e.what();
        rep.error = e.kind();
        return rep;
    }
    rep.observed["one_sided"] = one_sided ? 1.0 : 0.0;
    rep.pass = one_sided && within(last.observed, last.predicted, tol.exponential) &&
               std::abs(rep.fitted_order - 1.0) <= tol.order_band;
    rep.notes = std::string("p = 5 on (-1, 1); gap = ") + (sign > 0 ? "2 sigma0 - mass" : "mass - 2 sigma0") +
                " against 2|Theta_eps|; gap_constant from a C(1 + D eps) fit of gap eps e^{2/eps}";
    return rep;
}

inline AsymptoticReport report_schrodinger_critical(const VerifyTolerances& tol, const NlsConfig& cfg)
{
    AsymptoticReport rep;
    rep.theorem_id = "main3crit";
    const auto prm = make_params(1, 5.0);
    const auto gs = solve_ground_state(prm);
    const auto corr = solve_correction(gs);
    const double critical = soliton_mass_1d(prm.p);
    const auto spec = DomainSpec::real_line({1.0});
    const CriticalInputs in{0.5 * critical, corr.m_frak, spec.laplacian_at_origin()};
    const auto branch = trace_branch(spec, prm, {0.35, 0.3, 0.25, 0.2}, cfg);
    std::vector<std::pair<double, double>> pairs;
    for (const auto& b : branch) {
        const double pred = critical - predict_mass_expansion_critical(CriticalSetting::Schrodinger, b.epsilon, in);
        rep.sweep.push_back({b.epsilon, critical - b.mass, pred});
        pairs.emplace_back(b.epsilon, critical - b.mass);
    }
    const double expected = 2.0 * corr.m_frak * in.laplacian_v;
    rep.predicted["prefactor"] = expected;
    rep.predicted["order"] = 4.0;
    rep.observed["m_frak"] = corr.m_frak;
    try {
        rep.fitted_order = fit_convergence_order(pairs, RateLaw::Power);
        rep.observed["prefactor"] = fit_leading_prefactor(pairs, RateLaw::Power, 4.0, 4.0);
    } catch (const Error& e) {
        rep.notes = e.what();
        rep.error = e.kind();
        return rep;
    }
    const auto& last = rep.sweep.back();
    rep.observed["ratio_at_min_epsilon"] = last.observed / last.predicted;
    rep.pass = std::abs(rep.fitted_order - 4.0) <= tol.order_band &&
               within(rep.observed["prefactor"], expected, tol.power);
    rep.notes = "V = x^2, p = 5, N = 1; deficit 2 sigma0 - mass; prefactor from an A + B eps^4 fit of deficit / eps^4";
    return rep;
}

} // namespace detail

/// Run the comparison named by `theorem_id`: "main2", "main2critico_dirichlet",
/// "main2critico_neumann" or "main3crit".
inline AsymptoticReport verify_report(const std::string& theorem_id, const VerifyTolerances& tol = {},
                                      const NlsConfig& cfg = {})
{
    if (theorem_id != "main2" && theorem_id != "main2critico_dirichlet" && theorem_id != "main2critico_neumann" &&
        theorem_id != "main3crit")
        throw Error(ErrorKind::UnknownTheorem, "no comparison named '" + theorem_id + "'");
    try {
        if (theorem_id == "main2")
            return detail::report_noncritical(tol, cfg);
        if (theorem_id == "main3crit")
            return detail::report_schrodinger_critical(tol, cfg);
        return detail::report_boundary_critical(
            theorem_id == "main2critico_dirichlet" ? BoundaryCondition::Dirichlet : BoundaryCondition::Neumann, tol, cfg);
    } catch (const Error& e) {
        AsymptoticReport rep;
        rep.theorem_id = theorem_id;
        rep.notes = e.what();
        rep.error = e.kind();
        return rep;
    }
}

} // namespace normsol
