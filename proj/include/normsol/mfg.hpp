#pragma once

/// @file mfg.hpp
/// @brief Hopf-Cole correspondence between normalized solutions and ergodic
/// mean-field-game equilibria with quadratic Hamiltonian:
///   -ν u'' + ½ u'² = λ + V - α m^q,   -ν m'' - (m u')' = 0,   ∫ m = 1.
///
/// For ν ≠ √2/2 the NLS profile is stretched to z = √2 ν x, which turns
/// -v'' into -2ν² w''. The MFG mass is then ρ̃ = √2 ν ρ and α = ρ̃^q.

#include "normsol/error.hpp"
#include "normsol/nls_bvp.hpp"
#include "normsol/numerics.hpp"

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace normsol {

inline constexpr double kDefaultViscosity = 0.70710678118654752; // √2/2

struct MfgTriple {
    DomainSpec domain; ///< in NLS coordinates x
    std::vector<double> nodes; ///< z = √2 ν x
    std::vector<double> u_values;
    std::vector<double> m_values;
    double lambda = 0.0;
    double alpha = 0.0;
    double q = 0.0;
    double nu = kDefaultViscosity;
    double residual_hjb = 0.0;
    double residual_kolmogorov = 0.0;
    double mass_defect = 0.0;

    double stretch() const { return std::sqrt(2.0) * nu; }
    double step() const { return nodes[1] - nodes[0]; }
};

struct MfgResiduals {
    double hjb = 0.0;
    double kolmogorov = 0.0;
};

/// Max-norm finite-difference residuals of both equations. Interval ends use
/// zero-flux ghost nodes; truncated real-line ends are skipped.
inline MfgResiduals mfg_residuals(const MfgTriple& t, const DomainSpec& spec)
{
    const std::size_t n = t.nodes.size();
    require(n >= 3 && t.u_values.size() == n && t.m_values.size() == n, "triple grid mismatch");
    const double h = t.step(), s = t.stretch();
    const auto& u = t.u_values;
    const auto& m = t.m_values;
    const bool ghosts = spec.kind == DomainSpec::Kind::Interval && spec.bc == BoundaryCondition::Neumann;
    const bool skip_ends = !ghosts;
    MfgResiduals r;
    for (std::size_t i = skip_ends ? 1 : 0; i < (skip_ends ? n - 1 : n); ++i) {
        const double ul = i > 0 ? u[i - 1] : u[1], ur = i + 1 < n ? u[i + 1] : u[n - 2];
        const double ml = i > 0 ? m[i - 1] : m[1], mr = i + 1 < n ? m[i + 1] : m[n - 2];
        const double V = spec.potential_at(t.nodes[i] / s);
        const double grad = (ur - ul) / (2.0 * h);
        const double hjb = -t.nu * (ul - 2.0 * u[i] + ur) / (h * h) + 0.5 * grad * grad - t.lambda - V +
                           t.alpha * std::pow(m[i], t.q);
        const double flux_r = 0.5 * (m[i] + mr) * (ur - u[i]);
        const double flux_l = 0.5 * (ml + m[i]) * (u[i] - ul);
        const double kol = -t.nu * (ml - 2.0 * m[i] + mr) / (h * h) - (flux_r - flux_l) / (h * h);
        r.hjb = std::max(r.hjb, std::abs(hjb));
        r.kolmogorov = std::max(r.kolmogorov, std::abs(kol));
    }
    return r;
}

/// u = -2ν ln v (min u = 0), m = v²/ρ̃, α = ρ̃^q on the stretched grid.
inline MfgTriple to_mfg(const NormalizedSolution& sol, double q, double nu = kDefaultViscosity)
{
    require(q > 0.0 && nu > 0.0, "q and nu must be positive");
    require(std::abs(2.0 * q + 1.0 - sol.params.p) <= 1e-12, "q must equal (p - 1)/2");
    MfgTriple t;
    t.domain = sol.domain;
    t.q = q;
    t.nu = nu;
    t.lambda = sol.lambda;
    const double s = t.stretch();
    const std::size_t n = sol.nodes.size();
    t.nodes.resize(n);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        t.nodes[i] = s * sol.nodes[i];
        if (!(sol.v_values[i] > 0.0))
            throw Error(ErrorKind::NonPositive, "Hopf-Cole needs v > 0 at every node");
        sq[i] = sol.v_values[i] * sol.v_values[i];
    }
    const double rho = simpson(sq, t.step());
    t.alpha = std::pow(rho, q);
    t.m_values.resize(n);
    t.u_values.resize(n);
    double umin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        t.m_values[i] = sq[i] / rho;
        t.u_values[i] = -2.0 * nu * std::log(sol.v_values[i]);
        umin = std::min(umin, t.u_values[i]);
    }
    for (auto& x : t.u_values)
        x -= umin;
    t.mass_defect = simpson(t.m_values, t.step()) - 1.0;
    const auto r = mfg_residuals(t, t.domain);
    t.residual_hjb = r.hjb;
    t.residual_kolmogorov = r.kolmogorov;
    return t;
}

/// v = (α^{1/q} m)^{1/2} back on the NLS grid, ρ = α^{1/q} / √2ν.
inline NormalizedSolution from_mfg(const MfgTriple& t)
{
    require(t.q > 0.0 && t.alpha > 0.0 && t.nu > 0.0, "alpha, q and nu must be positive");
    for (double m : t.m_values)
        if (!(m > 0.0))
            throw Error(ErrorKind::NonPositiveDensity, "density must be positive");
    const double s = t.stretch();
    const double rho_mfg = std::pow(t.alpha, 1.0 / t.q);
    NormalizedSolution sol;
    sol.domain = t.domain;
    sol.params = make_params(1, 2.0 * t.q + 1.0);
    sol.lambda = t.lambda;
    sol.epsilon = 1.0 / std::sqrt(t.lambda);
    const std::size_t n = t.nodes.size();
    sol.nodes.resize(n);
    sol.v_values.resize(n);
    sol.u_values.resize(n);
    const double scale = std::pow(sol.epsilon, 2.0 / (sol.params.p - 1.0));
    for (std::size_t i = 0; i < n; ++i) {
        sol.nodes[i] = t.nodes[i] / s;
        sol.v_values[i] = std::sqrt(rho_mfg * t.m_values[i]);
        sol.u_values[i] = scale * sol.v_values[i];
    }
    sol.mass = mass_of(sol);
    const auto peak = std::max_element(sol.v_values.begin(), sol.v_values.end());
    sol.concentration_point = sol.nodes[static_cast<std::size_t>(peak - sol.v_values.begin())];
    return sol;
}

} // namespace normsol
