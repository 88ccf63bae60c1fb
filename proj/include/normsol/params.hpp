#pragma once

#include "normsol/error.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

namespace normsol {

enum class Regime { Subcritical, MassCritical, Supercritical };

constexpr std::string_view to_string(Regime r) noexcept
{
    switch (r) {
    case Regime::Subcritical: return "subcritical";
    case Regime::MassCritical: return "mass_critical";
    case Regime::Supercritical: return "supercritical";
    }
    return "unknown";
}

enum class BoundaryCondition { Dirichlet, Neumann, Decay };

constexpr std::string_view to_string(BoundaryCondition bc) noexcept
{
    switch (bc) {
    case BoundaryCondition::Dirichlet: return "dirichlet";
    case BoundaryCondition::Neumann: return "neumann";
    case BoundaryCondition::Decay: return "none";
    }
    return "unknown";
}

/// Absolute tolerance for deciding p == 1 + 4/N.
inline constexpr double kMassCriticalTolerance = 1e-12;

/// Dimension and exponent of -ΔU + U = U^p, classified against the
/// mass-critical exponent 1 + 4/N.
struct ProblemParams {
    int dim = 1;
    double p = 3.0;
    Regime regime = Regime::Subcritical;

    double mass_critical_exponent() const noexcept { return 1.0 + 4.0 / dim; }

    /// Exponent e in ρ(λ) = λ^e · 2σ₀ for the pure-scaling family.
    double scaling_mass_exponent() const noexcept { return 2.0 / (p - 1.0) - 0.5 * dim; }
};

inline ProblemParams make_params(int dim, double p)
{
    require(dim >= 1, "dimension must be >= 1");
    require(std::isfinite(p) && p > 1.0, "exponent p must exceed 1");
    if (dim >= 3) {
        const double sobolev = (dim + 2.0) / (dim - 2.0);
        require(p < sobolev, "p must be below the Sobolev exponent (N+2)/(N-2) = " + std::to_string(sobolev));
    }
    ProblemParams params{dim, p, Regime::Subcritical};
    const double pc = params.mass_critical_exponent();
    if (std::abs(p - pc) <= kMassCriticalTolerance)
        params.regime = Regime::MassCritical;
    else if (p > pc)
        params.regime = Regime::Supercritical;
    return params;
}

/// Surface measure of the unit sphere S^{N-1}; equals 2 for N = 1.
inline double unit_sphere_area(int dim)
{
    return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

} // namespace normsol
