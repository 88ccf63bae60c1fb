#pragma once

/// @file nls_bvp.hpp
/// @brief Direct finite-difference solver for the one-dimensional scaled problem
///   -ε² u'' + (ε² V(x) + 1) u = u^p,   ρ = ε^{-4/(p-1)} ∫ u²,
/// on an interval with Dirichlet/Neumann ends or on the real line.

#include "normsol/error.hpp"
#include "normsol/groundstate.hpp"
#include "normsol/numerics.hpp"
#include "normsol/params.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace normsol {

struct DomainSpec {
    enum class Kind { Interval, RealLine };

    Kind kind = Kind::Interval;
    double a = -1.0;
    double b = 1.0;
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
    /// V(x) = Σ potential[k] x^{2(k+1)}; only used on the real line.
    std::vector<double> potential;

    static DomainSpec interval(double a, double b, BoundaryCondition bc) { return {Kind::Interval, a, b, bc, {}}; }

    static DomainSpec real_line(std::vector<double> potential = {})
    {
        return {Kind::RealLine, 0.0, 0.0, BoundaryCondition::Decay, std::move(potential)};
    }

    bool flat_potential() const
    {
        return std::all_of(potential.begin(), potential.end(), [](double c) { return c == 0.0; });
    }

    double potential_at(double x) const
    {
        const double x2 = x * x;
        double v = 0.0, xp = x2;
        for (double c : potential) {
            v += c * xp;
            xp *= x2;
        }
        return v;
    }

    /// V''(0), which is ΔV at the concentration point in one dimension.
    double laplacian_at_origin() const { return potential.empty() ? 0.0 : 2.0 * potential.front(); }

    double center() const { return kind == Kind::Interval ? 0.5 * (a + b) : 0.0; }

    void validate() const
    {
        if (kind == Kind::Interval) {
            require(a < b, "interval needs a < b");
            require(bc != BoundaryCondition::Decay, "interval needs a Dirichlet or Neumann condition");
            require(potential.empty(), "potentials are only supported on the real line");
        } else {
            require(bc == BoundaryCondition::Decay, "the real line takes no boundary condition");
            if (!flat_potential()) {
                auto last = std::find_if(potential.rbegin(), potential.rend(), [](double c) { return c != 0.0; });
                require(*last > 0.0, "potential must be confining (positive leading coefficient)");
            }
        }
    }
};

struct NlsConfig {
    double points_per_epsilon = 800.0; ///< grid nodes per unit ε
    std::size_t min_nodes = 2001;
    std::size_t nodes = 0;               ///< fixed node count on intervals, 0 = automatic
    double realline_halfwidth = 24.0;    ///< truncation |x| <= halfwidth·ε
    double newton_tol = 1e-11;
    int max_iterations = 200;
    int max_backtracks = 40;
    double max_condition = 1e16;
    double mass_tol = 1e-9;              ///< relative, for solve_normalized
    double epsilon_start = 0.4;
    double epsilon_ratio = 0.9;
    double epsilon_min = 0.02;
    bool endpoint = false;               ///< concentrate at the right end (Neumann only)
};

struct NormalizedSolution {
    DomainSpec domain;
    ProblemParams params;
    double lambda = 0.0;
    double epsilon = 0.0;
    std::vector<double> nodes;
    std::vector<double> v_values;
    std::vector<double> u_values;
    double mass = 0.0;
    double residual_inf = 0.0; ///< max-norm residual of the scaled discrete equation
    double concentration_point = 0.0;
    int newton_iterations = 0;

    double step() const { return nodes[1] - nodes[0]; }
};

struct AnsatzInterior {
    double xi = 0.0;
};
struct AnsatzEndpoint {};
struct CustomGuess {
    std::vector<double> u;
};
using InitialGuess = std::variant<AnsatzInterior, AnsatzEndpoint, CustomGuess>;

struct BranchPoint {
    double epsilon = 0.0;
    double mass = 0.0;
    double residual = 0.0;
};

/// 2σ₀ = ∫ U² for the one-dimensional soliton.
inline double soliton_mass_1d(double p)
{
    const auto s = SolitonClosedForm::for_exponent(p);
    const double k = s.power;
    return s.amplitude * s.amplitude / s.rate * std::sqrt(std::numbers::pi) * std::tgamma(k) / std::tgamma(k + 0.5);
}

namespace detail {

inline void check_nls_args(const DomainSpec& spec, const ProblemParams& prm, double epsilon)
{
    spec.validate();
    require(prm.dim == 1, "the direct solver is one-dimensional");
    require(epsilon > 0.0 && epsilon <= 0.5, "epsilon must lie in (0, 0.5]");
}

inline std::size_t odd_count(double n)
{
    auto c = static_cast<std::size_t>(std::ceil(n));
    return c % 2 == 0 ? c + 1 : c;
}

inline std::vector<double> make_grid(const DomainSpec& spec, double epsilon, const NlsConfig& cfg)
{
    if (spec.kind == DomainSpec::Kind::RealLine) {
        const double half = cfg.realline_halfwidth * epsilon;
        return uniform_nodes(-half, half, 2 * static_cast<std::size_t>(std::ceil(cfg.points_per_epsilon *
                                                                                  cfg.realline_halfwidth)) +
                                              1);
    }
    std::size_t n = cfg.nodes;
    if (n == 0)
        n = std::max(cfg.min_nodes, odd_count(cfg.points_per_epsilon * (spec.b - spec.a) / epsilon));
    require(n >= 5, "grid needs at least five nodes");
    return uniform_nodes(spec.a, spec.b, n);
}

/// Decay rate of the linearized equation at x, in x units.
inline double decay_rate(const DomainSpec& spec, double epsilon, double x)
{
    return std::sqrt(1.0 + epsilon * epsilon * spec.potential_at(x)) / epsilon;
}

struct System {
    std::vector<double> residual;
    Tridiagonal jacobian;
};

inline System assemble(const DomainSpec& spec, const ProblemParams& prm, double epsilon,
                       std::span<const double> nodes, std::span<const double> u, bool with_jacobian)
{
    const std::size_t n = u.size();
    const double h = nodes[1] - nodes[0];
    const double k = epsilon * epsilon / (h * h);
    System sys{std::vector<double>(n), Tridiagonal(with_jacobian ? n : 0)};
    auto reaction = [&](std::size_t i) { return 1.0 + epsilon * epsilon * spec.potential_at(nodes[i]); };
    auto row = [&](std::size_t i, double left, double right, double dl, double dr) {
        const double c = reaction(i);
        sys.residual[i] = -k * (left - 2.0 * u[i] + right) + c * u[i] - signed_pow(u[i], prm.p);
        if (with_jacobian) {
            sys.jacobian.diag[i] = 2.0 * k + c - prm.p * std::pow(std::abs(u[i]), prm.p - 1.0) + dl + dr;
            if (i > 0)
                sys.jacobian.lower[i - 1] = -k;
            if (i + 1 < n)
                sys.jacobian.upper[i] = -k;
        }
    };
    for (std::size_t i = 1; i + 1 < n; ++i)
        row(i, u[i - 1], u[i + 1], 0.0, 0.0);

    switch (spec.bc) {
    case BoundaryCondition::Dirichlet:
        sys.residual[0] = u[0];
        sys.residual[n - 1] = u[n - 1];
        if (with_jacobian) {
            sys.jacobian.diag[0] = sys.jacobian.diag[n - 1] = 1.0;
            sys.jacobian.upper[0] = sys.jacobian.lower[n - 2] = 0.0;
        }
        break;
    case BoundaryCondition::Neumann:
        // ghost nodes u[-1] = u[1], u[n] = u[n-2]
        row(0, u[1], u[1], 0.0, 0.0);
        row(n - 1, u[n - 2], u[n - 2], 0.0, 0.0);
        if (with_jacobian) {
            sys.jacobian.upper[0] = -2.0 * k;
            sys.jacobian.lower[n - 2] = -2.0 * k;
        }
        break;
    case BoundaryCondition::Decay: {
        // ghost nodes from u' = ±κ u at the truncation points
        const double kl = decay_rate(spec, epsilon, nodes[0]), kr = decay_rate(spec, epsilon, nodes[n - 1]);
        row(0, u[1] - 2.0 * h * kl * u[0], u[1], 2.0 * k * h * kl, 0.0);
        row(n - 1, u[n - 2], u[n - 2] - 2.0 * h * kr * u[n - 1], 0.0, 2.0 * k * h * kr);
        if (with_jacobian) {
            sys.jacobian.upper[0] = -2.0 * k;
            sys.jacobian.lower[n - 2] = -2.0 * k;
        }
        break;
    }
    }
    return sys;
}

/// Residual level reachable in floating point: the stencil amplifies rounding by ~4ε²/h².
inline double residual_floor(double epsilon, double h, double scale)
{
    return 64.0 * std::numeric_limits<double>::epsilon() * (4.0 * epsilon * epsilon / (h * h) + 1.0) * scale;
}

inline std::vector<double> ansatz(const ProblemParams& prm, std::span<const double> nodes, double xi, double epsilon)
{
    const auto s = SolitonClosedForm::for_exponent(prm.p);
    std::vector<double> u(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        u[i] = s.value((nodes[i] - xi) / epsilon);
    return u;
}

/// Profile at ε_new from one at ε_old by stretching about `center` in y = (x - center)/ε.
inline std::vector<double> rescale_profile(std::span<const double> old_nodes, std::span<const double> old_u,
                                           double old_eps, double center, std::span<const double> new_nodes,
                                           double new_eps)
{
    const double h = old_nodes[1] - old_nodes[0];
    const std::size_t n = old_nodes.size();
    std::vector<double> out(new_nodes.size());
    for (std::size_t i = 0; i < new_nodes.size(); ++i) {
        const double x = center + (new_nodes[i] - center) * old_eps / new_eps;
        if (x <= old_nodes.front()) {
            out[i] = old_u.front();
        } else if (x >= old_nodes.back()) {
            out[i] = old_u.back();
        } else {
            const double t = (x - old_nodes.front()) / h;
            const auto j = std::min(static_cast<std::size_t>(t), n - 2);
            const double w = t - static_cast<double>(j);
            out[i] = (1.0 - w) * old_u[j] + w * old_u[j + 1];
        }
    }
    return out;
}

struct NewtonResult {
    std::vector<double> u;
    double residual = 0.0;
    int iterations = 0;
};

inline NewtonResult newton(const DomainSpec& spec, const ProblemParams& prm, double epsilon,
                           std::span<const double> nodes, std::vector<double> u, const NlsConfig& cfg)
{
    const double h = nodes[1] - nodes[0];
    auto sys = assemble(spec, prm, epsilon, nodes, u, true);
    double norm = max_abs(sys.residual);
    for (int it = 0; it < cfg.max_iterations; ++it) {
        const double tol = std::max(cfg.newton_tol, residual_floor(epsilon, h, std::max(1.0, max_abs(u))));
        // a warm start can sit below the rounding floor while still off by O(Δε);
        // one full step removes that before the residual test is trusted
        if (norm <= tol && it > 0)
            return {std::move(u), norm, it};
        auto step = sys.jacobian.solve(sys.residual, cfg.max_condition).x;
        double t = 1.0;
        std::vector<double> trial(u.size());
        bool accepted = false;
        for (int bt = 0; bt <= cfg.max_backtracks; ++bt, t *= 0.5) {
            for (std::size_t i = 0; i < u.size(); ++i)
                trial[i] = u[i] - t * step[i];
            const double trial_norm = max_abs(assemble(spec, prm, epsilon, nodes, trial, false).residual);
            if (trial_norm < (1.0 - 1e-4 * t) * norm || trial_norm <= tol) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // a full step that is already at rounding level cannot decrease the residual further
            if (max_abs(step) <= 1e-13 * std::max(1.0, max_abs(u)))
                return {std::move(u), norm, it};
            throw Error(ErrorKind::NewtonDiverged, "line search exhausted at residual " + std::to_string(norm));
        }
        u.swap(trial);
        sys = assemble(spec, prm, epsilon, nodes, u, true);
        norm = max_abs(sys.residual);
    }
    throw Error(ErrorKind::NewtonDiverged,
                "no convergence in " + std::to_string(cfg.max_iterations) + " iterations, residual " +
                    std::to_string(norm));
}

inline void check_shape(std::span<const double> u, BoundaryCondition bc)
{
    const std::size_t n = u.size();
    const std::size_t first = bc == BoundaryCondition::Dirichlet ? 1 : 0;
    for (std::size_t i = first; i + first < n; ++i)
        if (!(u[i] > 0.0))
            throw Error(ErrorKind::NonPositive, "solution is not positive at node " + std::to_string(i));
    int changes = 0;
    int last_sign = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d = u[i + 1] - u[i];
        // ignore increments at rounding level in the flat far field
        if (std::abs(d) <= 1e-13 * u[i + 1] + 1e-300)
            continue;
        const int s = d > 0 ? 1 : -1;
        if (last_sign != 0 && s != last_sign)
            ++changes;
        last_sign = s;
    }
    if (changes > 1)
        throw Error(ErrorKind::NonPositive, "solution has more than one peak");
}

inline NormalizedSolution finish(const DomainSpec& spec, const ProblemParams& prm, double epsilon,
                                 std::vector<double> nodes, NewtonResult res)
{
    NormalizedSolution sol;
    sol.domain = spec;
    sol.params = prm;
    sol.epsilon = epsilon;
    sol.lambda = 1.0 / (epsilon * epsilon);
    sol.nodes = std::move(nodes);
    sol.u_values = std::move(res.u);
    sol.residual_inf = res.residual;
    sol.newton_iterations = res.iterations;
    const double scale = std::pow(epsilon, -2.0 / (prm.p - 1.0));
    sol.v_values.resize(sol.u_values.size());
    for (std::size_t i = 0; i < sol.u_values.size(); ++i)
        sol.v_values[i] = scale * sol.u_values[i];
    const auto peak = std::max_element(sol.u_values.begin(), sol.u_values.end());
    sol.concentration_point = sol.nodes[static_cast<std::size_t>(peak - sol.u_values.begin())];
    return sol;
}

} // namespace detail

/// Discrete residual of the scaled equation with boundary rows.
inline std::vector<double> assemble_residual(const DomainSpec& spec, const ProblemParams& prm, double epsilon,
                                             std::span<const double> nodes, std::span<const double> u)
{
    require(nodes.size() == u.size() && nodes.size() >= 3, "grid and values must match");
    return detail::assemble(spec, prm, epsilon, nodes, u, false).residual;
}

/// ε^{-4/(p-1)} ∫ u² by Simpson's rule (equal to ∫ v²).
inline double mass_of(const NormalizedSolution& sol)
{
    std::vector<double> sq(sol.u_values.size());
    for (std::size_t i = 0; i < sq.size(); ++i)
        sq[i] = sol.u_values[i] * sol.u_values[i];
    return std::pow(sol.epsilon, -4.0 / (sol.params.p - 1.0)) * simpson(sq, sol.step());
}

/// Solve on an explicit grid from a given starting profile.
inline NormalizedSolution solve_on_grid(const DomainSpec& spec, const ProblemParams& prm, double epsilon,
                                        std::vector<double> nodes, std::vector<double> guess, const NlsConfig& cfg)
{
    detail::check_nls_args(spec, prm, epsilon);
    require(guess.size() == nodes.size(), "initial guess does not match the grid");
    auto res = detail::newton(spec, prm, epsilon, nodes, std::move(guess), cfg);
    detail::check_shape(res.u, spec.bc);
    auto sol = detail::finish(spec, prm, epsilon, std::move(nodes), std::move(res));
    sol.mass = mass_of(sol);
    return sol;
}

/// Endpoint-concentrated Neumann solution: an interior bump at x = b on the
/// reflected interval (a, 2b - a), restricted back to (a, b).
inline NormalizedSolution solve_endpoint(const DomainSpec& spec, const ProblemParams& prm, double epsilon,
                                         const NlsConfig& cfg)
{
    detail::check_nls_args(spec, prm, epsilon);
    require(spec.kind == DomainSpec::Kind::Interval && spec.bc == BoundaryCondition::Neumann,
            "endpoint concentration needs a Neumann interval");
    const auto half = detail::make_grid(spec, epsilon, cfg);
    const std::size_t n = half.size();
    const DomainSpec doubled = DomainSpec::interval(spec.a, 2.0 * spec.b - spec.a, BoundaryCondition::Neumann);
    auto nodes = uniform_nodes(doubled.a, doubled.b, 2 * n - 1);
    auto guess = detail::ansatz(prm, nodes, spec.b, epsilon);
    auto res = detail::newton(doubled, prm, epsilon, nodes, std::move(guess), cfg);
    detail::check_shape(res.u, BoundaryCondition::Neumann);
    // the bump can drift by rounding along the near-kernel of translations, so
    // symmetrize about b and polish on the original interval
    std::vector<double> restricted(n);
    for (std::size_t i = 0; i < n; ++i)
        restricted[i] = 0.5 * (res.u[i] + res.u[2 * n - 2 - i]);
    res = detail::newton(spec, prm, epsilon, half, std::move(restricted), cfg);
    detail::check_shape(res.u, BoundaryCondition::Neumann);
    auto sol = detail::finish(spec, prm, epsilon, half, std::move(res));
    sol.mass = mass_of(sol);
    return sol;
}

inline NormalizedSolution solve_fixed_epsilon(const DomainSpec& spec, const ProblemParams& prm, double epsilon,
                                              const InitialGuess& init, const NlsConfig& cfg = {})
{
    detail::check_nls_args(spec, prm, epsilon);
    if (std::holds_alternative<AnsatzEndpoint>(init))
        return solve_endpoint(spec, prm, epsilon, cfg);
    auto nodes = detail::make_grid(spec, epsilon, cfg);
    std::vector<double> guess;
    if (const auto* a = std::get_if<AnsatzInterior>(&init)) {
        if (spec.kind == DomainSpec::Kind::Interval)
            require(a->xi > spec.a && a->xi < spec.b, "ansatz center must lie inside the interval");
        guess = detail::ansatz(prm, nodes, a->xi, epsilon);
    } else {
        guess = std::get<CustomGuess>(init).u;
    }
    return solve_on_grid(spec, prm, epsilon, std::move(nodes), std::move(guess), cfg);
}

/// Continuation along a strictly decreasing ε list with warm starts.
inline std::vector<BranchPoint> trace_branch(const DomainSpec& spec, const ProblemParams& prm,
                                             const std::vector<double>& epsilons, const NlsConfig& cfg = {},
                                             const std::function<void(const NormalizedSolution&)>& visit = {})
{
    require(!epsilons.empty(), "epsilon list is empty");
    for (std::size_t i = 1; i < epsilons.size(); ++i)
        require(epsilons[i] < epsilons[i - 1], "epsilon list must be strictly decreasing");
    std::vector<BranchPoint> out;
    std::optional<NormalizedSolution> prev;
    const double center = cfg.endpoint ? spec.b : spec.center();
    for (double eps : epsilons) {
        try {
            NormalizedSolution sol;
            if (cfg.endpoint) {
                sol = solve_endpoint(spec, prm, eps, cfg);
            } else if (!prev) {
                sol = solve_fixed_epsilon(spec, prm, eps, AnsatzInterior{center}, cfg);
            } else {
                auto nodes = detail::make_grid(spec, eps, cfg);
                auto guess = detail::rescale_profile(prev->nodes, prev->u_values, prev->epsilon, center, nodes, eps);
                sol = solve_on_grid(spec, prm, eps, std::move(nodes), std::move(guess), cfg);
            }
            out.push_back({eps, sol.mass, sol.residual_inf});
            if (visit)
                visit(sol);
            prev = std::move(sol);
        } catch (const Error& e) {
            throw Error(e.kind(), e.detail() + " (epsilon = " + std::to_string(eps) + ")");
        }
    }
    return out;
}

namespace detail {

/// Exact solution U(x/ε) scaled by ε^{-2/(p-1)} on the truncated line with V ≡ 0.
inline NormalizedSolution scaling_solution(const DomainSpec& spec, const ProblemParams& prm, double epsilon,
                                           const NlsConfig& cfg)
{
    auto nodes = make_grid(spec, epsilon, cfg);
    NewtonResult res{ansatz(prm, nodes, 0.0, epsilon), 0.0, 0};
    res.residual = max_abs(assemble_residual(spec, prm, epsilon, nodes, res.u));
    auto sol = finish(spec, prm, epsilon, std::move(nodes), std::move(res));
    sol.mass = mass_of(sol);
    return sol;
}

inline void check_critical_side(const DomainSpec& spec, const NlsConfig& cfg, double rho, double critical)
{
    auto forbid = [&](bool bad, const char* rule) {
        if (bad)
            throw Error(ErrorKind::NoSolutionInRegime,
                        "rho = " + std::to_string(rho) + " but the concentrating branch needs " + rule +
                            " 2 sigma0 = " + std::to_string(critical));
    };
    if (spec.kind == DomainSpec::Kind::Interval) {
        if (cfg.endpoint)
            return;
        if (spec.bc == BoundaryCondition::Dirichlet)
            forbid(rho >= critical, "rho <");
        else
            forbid(rho <= critical, "rho >");
        return;
    }
    // the one-dimensional correction constant is positive, so the side follows V''(0)
    const double lap = spec.laplacian_at_origin();
    if (lap > 0.0)
        forbid(rho >= critical, "rho <");
    else if (lap < 0.0)
        forbid(rho <= critical, "rho >");
}

} // namespace detail

/// Normalized solution with ∫ v² = ρ on the concentrating branch.
inline NormalizedSolution solve_normalized(const DomainSpec& spec, const ProblemParams& prm, double rho,
                                           const NlsConfig& cfg = {})
{
    spec.validate();
    require(prm.dim == 1, "the direct solver is one-dimensional");
    require(std::isfinite(rho) && rho > 0.0, "rho must be positive");
    const double critical = soliton_mass_1d(prm.p);

    if (spec.kind == DomainSpec::Kind::RealLine && spec.flat_potential()) {
        if (prm.regime == Regime::MassCritical) {
            if (std::abs(rho - critical) > 1e-9 * critical)
                throw Error(ErrorKind::NoSolutionInRegime,
                            "with V = 0 the mass-critical problem only admits rho = 2 sigma0 = " +
                                std::to_string(critical));
            return detail::scaling_solution(spec, prm, 1.0 / std::sqrt(2.0), cfg);
        }
        const double lambda = std::pow(rho / critical, 1.0 / prm.scaling_mass_exponent());
        auto sol = detail::scaling_solution(spec, prm, 1.0 / std::sqrt(lambda), cfg);
        sol.lambda = lambda;
        return sol;
    }

    if (prm.regime == Regime::MassCritical)
        detail::check_critical_side(spec, cfg, rho, critical);

    const double center = cfg.endpoint ? spec.b : spec.center();
    auto solve_at = [&](double eps, const std::vector<double>* nodes, const NormalizedSolution* warm) {
        if (cfg.endpoint)
            return solve_endpoint(spec, prm, eps, cfg);
        std::vector<double> grid = nodes ? *nodes : detail::make_grid(spec, eps, cfg);
        std::vector<double> guess = warm ? detail::rescale_profile(warm->nodes, warm->u_values, warm->epsilon, center,
                                                                   grid, eps)
                                         : detail::ansatz(prm, grid, center, eps);
        return solve_on_grid(spec, prm, eps, std::move(grid), std::move(guess), cfg);
    };

    // trace downward until the mass crosses rho
    double eps_hi = cfg.epsilon_start;
    NormalizedSolution hi = solve_at(eps_hi, nullptr, nullptr);
    const double sign_hi = hi.mass - rho;
    if (sign_hi == 0.0)
        return hi;
    double eps_lo = eps_hi;
    NormalizedSolution lo = hi;
    for (;;) {
        eps_lo = eps_hi * cfg.epsilon_ratio;
        if (eps_lo < cfg.epsilon_min)
            throw Error(ErrorKind::BracketFailed, "mass did not reach rho = " + std::to_string(rho) +
                                                      " before epsilon = " + std::to_string(cfg.epsilon_min) +
                                                      " (last mass " + std::to_string(hi.mass) + ")");
        lo = solve_at(eps_lo, nullptr, &hi);
        if ((lo.mass - rho) * sign_hi <= 0.0)
            break;
        hi = std::move(lo);
        eps_hi = eps_lo;
    }

    // root-find on log ε with the grid of the finer end held fixed
    NlsConfig fixed = cfg;
    const std::vector<double> grid = lo.nodes;
    if (spec.kind == DomainSpec::Kind::Interval && !cfg.endpoint) {
        hi = solve_at(eps_hi, &grid, &lo);
        fixed.nodes = grid.size();
    }
    NormalizedSolution warm = lo;
    auto mass_gap = [&](double t) {
        const double eps = std::exp(t);
        NormalizedSolution s = cfg.endpoint ? solve_endpoint(spec, prm, eps, fixed)
                                            : solve_at(eps, spec.kind == DomainSpec::Kind::Interval ? &grid : nullptr,
                                                       &warm);
        const double gap = s.mass - rho;
        warm = std::move(s);
        return gap;
    };
    const double t = find_root(mass_gap, std::log(eps_lo), std::log(eps_hi), lo.mass - rho, hi.mass - rho, 1e-13);
    mass_gap(t);
    if (std::abs(warm.mass - rho) > cfg.mass_tol * std::max(1.0, rho))
        {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3e", warm.mass - rho);
        throw Error(ErrorKind::NoConvergence, std::string("mass mismatch ") + buf + " after root-find");
    }
    return warm;
}

} // namespace normsol
