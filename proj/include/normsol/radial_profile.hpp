#pragma once

#include "normsol/error.hpp"
#include "normsol/numerics.hpp"
#include "normsol/params.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace normsol {

/// Sampled radial function f(r) on [0, R] with derivative samples and an
/// exponential tail model f(r) = f(R) (R/r)^{tail_power} e^{tail_rate (r - R)}
/// used beyond the last node.
struct RadialProfile {
    std::vector<double> nodes;
    std::vector<double> values;
    std::vector<double> dvalues;
    double tail_rate = -1.0;
    double tail_power = 0.0;

    std::size_t size() const noexcept { return nodes.size(); }
    double radius() const noexcept { return nodes.back(); }
    double step() const noexcept { return nodes[1] - nodes[0]; }

    /// Cubic Hermite interpolation inside the grid, tail model outside.
    double operator()(double r) const { return evaluate(r).first; }
    double derivative(double r) const { return evaluate(r).second; }

    std::pair<double, double> evaluate(double r) const
    {
        r = std::abs(r);
        const double R = radius();
        if (r >= R) {
            const double f = values.back() * std::pow(R / r, tail_power) * std::exp(tail_rate * (r - R));
            return {f, f * (tail_rate - tail_power / r)};
        }
        auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
        std::size_t i = static_cast<std::size_t>(std::distance(nodes.begin(), it)) - 1;
        i = std::min(i, size() - 2);
        const double h = nodes[i + 1] - nodes[i];
        const double t = (r - nodes[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
        const double f = h00 * values[i] + h10 * h * dvalues[i] + h01 * values[i + 1] + h11 * h * dvalues[i + 1];
        const double d00 = (6 * t2 - 6 * t) / h, d10 = 3 * t2 - 4 * t + 1;
        const double d01 = (-6 * t2 + 6 * t) / h, d11 = 3 * t2 - 2 * t;
        const double df = d00 * values[i] + d10 * dvalues[i] + d01 * values[i + 1] + d11 * dvalues[i + 1];
        return {f, df};
    }

    void validate() const
    {
        require(nodes.size() >= 3, "radial profile needs at least three nodes");
        require(values.size() == nodes.size() && dvalues.size() == nodes.size(), "radial profile size mismatch");
        require(nodes.front() == 0.0, "radial profile must start at r = 0");
        for (std::size_t i = 1; i < nodes.size(); ++i)
            require(nodes[i] > nodes[i - 1], "radial nodes must be strictly increasing");
    }
};

/// ∫_{R^N} f g dx for radial f, g sampled on the same uniform grid, Simpson
/// on [0, R] plus the analytic integral of the product tail model.
inline double radial_inner_product(const RadialProfile& f, const RadialProfile& g, int dim)
{
    require(f.size() == g.size(), "profiles must share a grid");
    std::vector<double> integrand(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        integrand[i] = f.values[i] * g.values[i] * std::pow(f.nodes[i], dim - 1);
    const double rate = f.tail_rate + g.tail_rate;
    // the model tail of f g r^{N-1} is exponential once tail powers cancel r^{N-1}
    const double tail = -integrand.back() / rate;
    return unit_sphere_area(dim) * (simpson(integrand, f.step()) + tail);
}

inline double radial_l2_squared(const RadialProfile& f, int dim) { return radial_inner_product(f, f, dim); }

enum class Parity { Even, Odd };

/// Derivative samples from values with sixth-order central differences. The
/// samples are extended across r = 0 with the given parity; the last three
/// nodes fall back to second-order differences.
inline std::vector<double> derivative_samples(std::span<const double> values, double h, Parity parity)
{
    const std::size_t n = values.size();
    require(n >= 7, "need at least seven samples");
    const double sign = parity == Parity::Even ? 1.0 : -1.0;
    auto at = [&](std::ptrdiff_t i) {
        return i < 0 ? sign * values[static_cast<std::size_t>(-i)] : values[static_cast<std::size_t>(i)];
    };
    std::vector<double> d(n);
    for (std::size_t k = 0; k + 3 < n; ++k) {
        const auto i = static_cast<std::ptrdiff_t>(k);
        d[k] = (-at(i - 3) + 9 * at(i - 2) - 45 * at(i - 1) + 45 * at(i + 1) - 9 * at(i + 2) + at(i + 3)) / (60 * h);
    }
    for (std::size_t k = n - 3; k + 1 < n; ++k)
        d[k] = (values[k + 1] - values[k - 1]) / (2 * h);
    d[n - 1] = (3 * values[n - 1] - 4 * values[n - 2] + values[n - 3]) / (2 * h);
    if (parity == Parity::Even)
        d[0] = 0.0;
    return d;
}

} // namespace normsol
