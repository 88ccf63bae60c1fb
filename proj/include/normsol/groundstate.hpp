#pragma once

/// @file groundstate.hpp
/// @brief Radial ground state of -ΔU + U = U^p, its mass and decay constants,
/// and the exact pure-scaling family on the whole space.
///
/// For N = 1 the profile is the closed-form soliton
/// U(x) = ((p+1)/2)^{1/(p-1)} sech^{2/(p-1)}((p-1)x/2). For N >= 2 it is found
/// by shooting on U(0) with bisection, then polished by matching an outward
/// trajectory from r = 0 against an inward one started on the decaying
/// Bessel tail, which keeps the far field accurate out to the truncation radius.

#include "normsol/error.hpp"
#include "normsol/numerics.hpp"
#include "normsol/params.hpp"
#include "normsol/radial_profile.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace normsol {

struct GroundStateConfig {
    double radius = 40.0;       ///< truncation radius R
    double step = 1.0 / 200.0;  ///< uniform grid spacing
    int substeps = 8;           ///< RK4 steps per grid cell when shooting
    double bracket_tol = 1e-13; ///< bisection stops when the U(0) bracket is this narrow
    int max_doublings = 60;
    int max_bisections = 400;
    double match_radius = 3.0; ///< junction of the outward and inward trajectories
    double tail_fit_radius = 6.0;
};

/// U(x) = A sech^k(b x) with k = 2/(p-1), b = (p-1)/2, A = ((p+1)/2)^{1/(p-1)}.
struct SolitonClosedForm {
    double amplitude;
    double power;
    double rate;

    static SolitonClosedForm for_exponent(double p)
    {
        return {std::pow(0.5 * (p + 1.0), 1.0 / (p - 1.0)), 2.0 / (p - 1.0), 0.5 * (p - 1.0)};
    }

    static double sech(double z)
    {
        const double e = std::exp(-std::abs(z));
        return 2.0 * e / (1.0 + e * e);
    }

    double value(double x) const { return amplitude * std::pow(sech(rate * x), power); }

    double derivative(double x) const
    {
        const double s = sech(rate * x);
        return -amplitude * power * rate * std::pow(s, power) * std::tanh(rate * x);
    }

    double second_derivative(double x) const
    {
        const double s = sech(rate * x), t = std::tanh(rate * x);
        return amplitude * power * rate * rate * std::pow(s, power) * (power * t * t - s * s);
    }
};

struct GroundState {
    ProblemParams params;
    RadialProfile profile;
    double sigma0 = 0.0; ///< half the L² mass: ∫ U² = 2σ₀
    double frak_c = 0.0; ///< lim r^{(N-1)/2} e^r U(r)
    double ode_residual = 0.0;
    bool closed_form = false;

    double mass() const noexcept { return 2.0 * sigma0; }
};

struct DecayEstimate {
    double value = 0.0;
    double relative_spread = 0.0;
    bool plateau = true; ///< false when the spread exceeds 1e-3 (warning, not an error)
};

/// Max over interior nodes of |-U'' - (N-1)U'/r + U - U^p|, with U'' from
/// sixth-order differences of the derivative samples.
inline double ground_state_residual(const RadialProfile& profile, const ProblemParams& params)
{
    const auto d2 = derivative_samples(profile.dvalues, profile.step(), Parity::Odd);
    double worst = 0.0;
    for (std::size_t i = 1; i + 3 < profile.size(); ++i) {
        const double r = profile.nodes[i], u = profile.values[i];
        const double res = -d2[i] - (params.dim - 1) * profile.dvalues[i] / r + u - std::pow(u, params.p);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

namespace detail {

inline double signed_pow(double u, double p) { return std::copysign(std::pow(std::abs(u), p), u); }

/// Right-hand side of U'' = -(N-1)U'/r + U - U^p with the regular limit at r = 0.
inline std::array<double, 2> radial_rhs(const ProblemParams& prm, double r, double u, double du)
{
    const double source = u - signed_pow(u, prm.p);
    if (r == 0.0)
        return {du, source / prm.dim};
    return {du, -(prm.dim - 1) * du / r + source};
}

inline std::array<double, 2> rk4_step(const ProblemParams& prm, double r, std::array<double, 2> y, double h)
{
    auto f = [&](double rr, std::array<double, 2> s) { return radial_rhs(prm, rr, s[0], s[1]); };
    const auto k1 = f(r, y);
    const auto k2 = f(r + 0.5 * h, {y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
    const auto k3 = f(r + 0.5 * h, {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
    const auto k4 = f(r + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
    return {y[0] + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
            y[1] + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
}

/// (U, U') at r = h from the regular expansion U = a + b r² + d r⁴ about the
/// origin; RK4 loses accuracy on the first step across the 1/r singularity.
inline std::array<double, 2> series_start(const ProblemParams& prm, double a, double h)
{
    const double b = (a - signed_pow(a, prm.p)) / (2.0 * prm.dim);
    const double d = (1.0 - prm.p * std::pow(a, prm.p - 1.0)) * b / (4.0 * (prm.dim + 2));
    return {a + b * h * h + d * h * h * h * h, 2 * b * h + 4 * d * h * h * h};
}

enum class ShotOutcome { CrossedZero, TurnedUpward, Undecided };

/// Advances the state from r to r + h in RK4 substeps, refined near the
/// origin where the (N-1)/r term makes the local error large.
inline std::array<double, 2> advance(const ProblemParams& prm, const GroundStateConfig& cfg, double r,
                                     std::array<double, 2> y, double h)
{
    const int n = cfg.substeps * (r < 0.25 ? 64 : 1);
    const double hs = h / n;
    for (int s = 0; s < n; ++s) {
        const double rs = r + s * hs;
        y = rs == 0.0 ? series_start(prm, y[0], hs) : rk4_step(prm, rs, y, hs);
    }
    return y;
}

inline ShotOutcome classify_shot(const ProblemParams& prm, const GroundStateConfig& cfg, double u0)
{
    std::array<double, 2> y{u0, 0.0};
    for (double r = 0.0; r < cfg.radius; r += cfg.step) {
        y = advance(prm, cfg, r, y, cfg.step);
        if (y[0] < 0.0)
            return ShotOutcome::CrossedZero;
        if (y[1] > 0.0)
            return ShotOutcome::TurnedUpward;
    }
    return ShotOutcome::Undecided;
}

/// States at grid nodes 0..last_node integrating outward from U(0) = u0.
inline std::vector<std::array<double, 2>> integrate_outward(const ProblemParams& prm, const GroundStateConfig& cfg,
                                                            double u0, std::size_t last_node)
{
    std::vector<std::array<double, 2>> out{{u0, 0.0}};
    std::array<double, 2> y{u0, 0.0};
    for (std::size_t node = 1; node <= last_node; ++node) {
        y = advance(prm, cfg, static_cast<double>(node - 1) * cfg.step, y, cfg.step);
        out.push_back(y);
    }
    return out;
}

/// Decaying solution of the linear far-field equation, T(r) = r^{-ν} K_ν(r)
/// with ν = (N-2)/2, and its derivative -r^{-ν} K_{ν+1}(r). K_{-ν} = K_ν.
inline std::array<double, 2> bessel_tail(int dim, double r)
{
    const double nu = 0.5 * (dim - 2);
    const double scale = std::pow(r, -nu);
    return {scale * std::cyl_bessel_k(std::abs(nu), r), -scale * std::cyl_bessel_k(nu + 1.0, r)};
}

/// States at nodes first_node..last integrating inward from the tail amplitude c.
inline std::vector<std::array<double, 2>> integrate_inward(const ProblemParams& prm, const GroundStateConfig& cfg,
                                                           double c, std::size_t first_node, std::size_t count)
{
    const double hs = cfg.step / cfg.substeps;
    const std::size_t last = count - 1;
    const auto t = bessel_tail(prm.dim, static_cast<double>(last) * cfg.step);
    std::vector<std::array<double, 2>> out(count - first_node);
    std::array<double, 2> y{c * t[0], c * t[1]};
    out.back() = y;
    for (std::size_t node = last; node > first_node; --node) {
        for (int s = 0; s < cfg.substeps; ++s) {
            const double r = (static_cast<double>(node) - static_cast<double>(s) / cfg.substeps) * cfg.step;
            y = rk4_step(prm, r, y, -hs);
        }
        out[node - 1 - first_node] = y;
    }
    return out;
}

inline GroundState closed_form_ground_state(const ProblemParams& prm, const GroundStateConfig& cfg,
                                            std::size_t count)
{
    const auto sol = SolitonClosedForm::for_exponent(prm.p);
    GroundState gs;
    gs.params = prm;
    gs.closed_form = true;
    gs.profile.nodes = uniform_nodes(0.0, cfg.radius, count);
    for (double x : gs.profile.nodes) {
        gs.profile.values.push_back(sol.value(x));
        gs.profile.dvalues.push_back(sol.derivative(x));
    }
    gs.profile.dvalues[0] = 0.0;
    return gs;
}

/// Residual of the sampled closed form, with U'' evaluated analytically.
inline double closed_form_residual(const RadialProfile& profile, const ProblemParams& prm)
{
    const auto sol = SolitonClosedForm::for_exponent(prm.p);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < profile.size(); ++i) {
        const double u = profile.values[i];
        worst = std::max(worst, std::abs(-sol.second_derivative(profile.nodes[i]) + u - std::pow(u, prm.p)));
    }
    return worst;
}

inline GroundState shooting_ground_state(const ProblemParams& prm, const GroundStateConfig& cfg, std::size_t count)
{
    // bracket U(0) in (1, A): A doubled until the trajectory crosses zero
    double lo = 1.0, hi = 2.0;
    int doublings = 0;
    while (classify_shot(prm, cfg, hi) != ShotOutcome::CrossedZero) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > cfg.max_doublings)
            throw Error(ErrorKind::NoConvergence, "could not bracket U(0) for the ground state");
    }
    int iterations = 0;
    while (hi - lo > cfg.bracket_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const auto outcome = classify_shot(prm, cfg, mid);
        (outcome == ShotOutcome::CrossedZero ? hi : lo) = mid;
        if (++iterations > cfg.max_bisections)
            throw Error(ErrorKind::NoConvergence, "ground-state bisection exceeded its iteration budget");
    }

    const auto match = static_cast<std::size_t>(std::lround(cfg.match_radius / cfg.step));
    const auto fit = static_cast<std::size_t>(std::lround(cfg.tail_fit_radius / cfg.step));
    require(match >= 1 && fit > match && fit + 1 < count, "grid too short for ground-state matching");

    const auto guess = integrate_outward(prm, cfg, lo, fit);
    const double c0 = guess[fit][0] / bessel_tail(prm.dim, static_cast<double>(fit) * cfg.step)[0];

    // Newton on (U(0), tail amplitude) for continuity of (U, U') at the junction
    auto mismatch = [&](double a, double c) {
        const auto out = integrate_outward(prm, cfg, a, match);
        const auto in = integrate_inward(prm, cfg, c, match, count);
        return std::array<double, 2>{out[match][0] - in[0][0], out[match][1] - in[0][1]};
    };
    double a = lo, c = c0;
    bool converged = false;
    for (int it = 0; it < 30; ++it) {
        const auto f = mismatch(a, c);
        if (std::max(std::abs(f[0]), std::abs(f[1])) < 1e-13) {
            converged = true;
            break;
        }
        const double da = 1e-7 * a, dc = 1e-7 * c;
        const auto fa = mismatch(a + da, c);
        const auto fc = mismatch(a, c + dc);
        const double j00 = (fa[0] - f[0]) / da, j10 = (fa[1] - f[1]) / da;
        const double j01 = (fc[0] - f[0]) / dc, j11 = (fc[1] - f[1]) / dc;
        const double det = j00 * j11 - j01 * j10;
        if (det == 0.0 || !std::isfinite(det))
            break;
        const double step_a = (f[0] * j11 - f[1] * j01) / det;
        const double step_c = (j00 * f[1] - j10 * f[0]) / det;
        a -= step_a;
        c -= step_c;
        if (std::abs(step_a) < 1e-16 * a && std::abs(step_c) < 1e-15 * std::abs(c)) {
            const auto g = mismatch(a, c);
            converged = std::max(std::abs(g[0]), std::abs(g[1])) < 1e-12;
            break;
        }
    }
    if (!converged)
        throw Error(ErrorKind::NoConvergence, "ground-state matching did not converge");

    const auto out = integrate_outward(prm, cfg, a, match);
    const auto in = integrate_inward(prm, cfg, c, match, count);
    GroundState gs;
    gs.params = prm;
    gs.profile.nodes = uniform_nodes(0.0, cfg.radius, count);
    gs.profile.values.resize(count);
    gs.profile.dvalues.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto& s = i <= match ? out[i] : in[i - match];
        gs.profile.values[i] = s[0];
        gs.profile.dvalues[i] = s[1];
    }
    return gs;
}

} // namespace detail

/// Plateau of r^{(N-1)/2} e^r U(r) over the outer third of the grid.
inline DecayEstimate decay_constant(const GroundState& gs)
{
    const auto& prof = gs.profile;
    const double R = prof.radius();
    const double start = 2.0 * R / 3.0;
    std::vector<double> samples;
    for (std::size_t i = 0; i < prof.size(); ++i)
        if (prof.nodes[i] >= start)
            samples.push_back(std::pow(prof.nodes[i], 0.5 * (gs.params.dim - 1)) * std::exp(prof.nodes[i]) *
                              prof.values[i]);
    if (start < 10.0 || samples.size() < 8)
        throw Error(ErrorKind::TailNotResolved,
                    "grid radius " + std::to_string(R) + " too short to resolve the exponential tail");
    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    DecayEstimate est;
    est.value = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
    est.relative_spread = (*mx - *mn) / std::abs(est.value);
    est.plateau = est.relative_spread <= 1e-3;
    return est;
}

/// σ₀ with 2σ₀ = ∫_{R^N} U².
inline double mass_sigma0(const GroundState& gs) { return 0.5 * radial_l2_squared(gs.profile, gs.params.dim); }

/// Ground state of -ΔU + U = U^p. Throws NoConvergence if shooting fails or
/// the interior ODE residual exceeds `accuracy`.
inline GroundState solve_ground_state(const ProblemParams& params, double accuracy = 1e-8,
                                      const GroundStateConfig& cfg = {})
{
    require(cfg.radius > 0 && cfg.step > 0, "invalid ground-state grid");
    const auto count = static_cast<std::size_t>(std::lround(cfg.radius / cfg.step)) + 1;
    require(count >= 8, "ground-state grid needs at least eight nodes");
    GroundStateConfig grid = cfg;
    grid.step = cfg.radius / static_cast<double>(count - 1);

    GroundState gs = params.dim == 1 ? detail::closed_form_ground_state(params, grid, count)
                                     : detail::shooting_ground_state(params, grid, count);
    gs.profile.tail_rate = -1.0;
    gs.profile.tail_power = 0.5 * (params.dim - 1);
    gs.ode_residual = gs.closed_form ? detail::closed_form_residual(gs.profile, params)
                                     : ground_state_residual(gs.profile, params);
    if (!(gs.ode_residual <= accuracy))
        throw Error(ErrorKind::NoConvergence,
                    "ground-state ODE residual " + std::to_string(gs.ode_residual) + " above tolerance");
    gs.sigma0 = mass_sigma0(gs);
    // short grids leave 𝔠 unresolved; the constant is then reported as NaN
    try {
        gs.frak_c = decay_constant(gs).value;
    } catch (const Error&) {
        gs.frak_c = std::nan("");
    }
    return gs;
}

/// v(x) = λ^{1/(p-1)} U(λ^{1/2} x) together with its exact mass.
struct ScaledSolution {
    RadialProfile profile;
    double mass = 0.0;
};

inline double scaling_mass(const GroundState& gs, double lambda)
{
    return std::pow(lambda, gs.params.scaling_mass_exponent()) * gs.mass();
}

inline ScaledSolution scale_solution(const GroundState& gs, double lambda)
{
    require(lambda > 0.0, "lambda must be positive");
    const double amp = std::pow(lambda, 1.0 / (gs.params.p - 1.0));
    const double k = std::sqrt(lambda);
    ScaledSolution out;
    out.profile = gs.profile;
    for (std::size_t i = 0; i < out.profile.size(); ++i) {
        out.profile.nodes[i] = gs.profile.nodes[i] / k;
        out.profile.values[i] = amp * gs.profile.values[i];
        out.profile.dvalues[i] = amp * k * gs.profile.dvalues[i];
    }
    out.profile.tail_rate = gs.profile.tail_rate * k;
    out.mass = scaling_mass(gs, lambda);
    return out;
}

/// λ solving ρ = λ^{2/(p-1) - N/2} 2σ₀. In the mass-critical regime every λ
/// solves it when ρ = 2σ₀ (returned as std::nullopt) and none otherwise.
inline std::optional<double> solve_pure_scaling(const GroundState& gs, double rho, double tol = 1e-9)
{
    require(rho > 0.0, "rho must be positive");
    if (gs.params.regime == Regime::MassCritical) {
        if (std::abs(rho - gs.mass()) <= tol * gs.mass())
            return std::nullopt;
        throw Error(ErrorKind::MassCriticalInfeasible,
                    "mass-critical exponent admits only rho = 2 sigma0 = " + std::to_string(gs.mass()));
    }
    return std::pow(rho / gs.mass(), 1.0 / gs.params.scaling_mass_exponent());
}

} // namespace normsol
