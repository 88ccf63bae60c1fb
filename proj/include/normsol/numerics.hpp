#pragma once

// Small numerical kernels shared by the solvers: composite quadrature on
// uniform grids, a pivoted tridiagonal solve with condition estimate, and a
// bracketed scalar root finder.

#include "normsol/error.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

namespace normsol {

/// Uniformly spaced nodes a, a+h, ..., b with `count` points.
inline std::vector<double> uniform_nodes(double a, double b, std::size_t count)
{
    require(count >= 2, "uniform_nodes needs at least two points");
    std::vector<double> x(count);
    const double h = (b - a) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i)
        x[i] = a + h * static_cast<double>(i);
    x.back() = b;
    return x;
}

/// Composite Simpson rule on uniformly spaced samples. An even sample count is
/// closed with Simpson's 3/8 rule on the last three intervals.
inline double simpson(std::span<const double> f, double h)
{
    const std::size_t n = f.size();
    require(n >= 3, "simpson needs at least three samples");
    auto simpson_odd = [&](std::size_t count) {
        double s = f[0] + f[count - 1];
        for (std::size_t i = 1; i + 1 < count; ++i)
            s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
        return s * h / 3.0;
    };
    if (n % 2 == 1)
        return simpson_odd(n);
    if (n == 4)
        return 3.0 * h / 8.0 * (f[0] + 3.0 * f[1] + 3.0 * f[2] + f[3]);
    const std::size_t m = n - 3;
    return simpson_odd(m) + 3.0 * h / 8.0 * (f[m - 1] + 3.0 * f[m] + 3.0 * f[m + 1] + f[m + 2]);
}

inline double trapezoid(std::span<const double> f, double h)
{
    require(f.size() >= 2, "trapezoid needs at least two samples");
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i)
        s += f[i];
    return s * h;
}

/// Result of a tridiagonal factor-and-solve.
struct TridiagonalSolution {
    std::vector<double> x;
    double rcond = 0.0; ///< reciprocal 1-norm condition estimate
};

/// Tridiagonal matrix stored by diagonals: lower[i] = A(i+1, i), upper[i] = A(i, i+1).
struct Tridiagonal {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    explicit Tridiagonal(std::size_t n = 0) : lower(n ? n - 1 : 0), diag(n), upper(n ? n - 1 : 0) {}

    std::size_t size() const noexcept { return diag.size(); }

    std::vector<double> apply(std::span<const double> v) const
    {
        const std::size_t n = size();
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = diag[i] * v[i];
            if (i > 0)
                s += lower[i - 1] * v[i - 1];
            if (i + 1 < n)
                s += upper[i] * v[i + 1];
            out[i] = s;
        }
        return out;
    }

    double norm1() const
    {
        const std::size_t n = size();
        double best = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double col = std::abs(diag[j]);
            if (j > 0)
                col += std::abs(upper[j - 1]);
            if (j + 1 < n)
                col += std::abs(lower[j]);
            best = std::max(best, col);
        }
        return best;
    }

    /// LU with partial pivoting (LAPACK gttrf/gttrs) plus a gtcon condition
    /// estimate. Throws SingularOperator when 1/rcond exceeds `max_condition`.
    TridiagonalSolution solve(std::span<const double> rhs, double max_condition = 1e14) const
    {
        const auto n = static_cast<lapack_int>(size());
        require(rhs.size() == size(), "tridiagonal rhs size mismatch");
        std::vector<double> dl = lower, d = diag, du = upper, du2(std::max<lapack_int>(n - 2, 1));
        std::vector<lapack_int> ipiv(n);
        lapack_int info = LAPACKE_dgttrf(n, dl.data(), d.data(), du.data(), du2.data(), ipiv.data());
        if (info > 0)
            throw Error(ErrorKind::SingularOperator, "exactly singular pivot in tridiagonal factorization");
        double rcond = 0.0;
        LAPACKE_dgtcon('1', n, dl.data(), d.data(), du.data(), du2.data(), ipiv.data(), norm1(), &rcond);
        if (!(rcond * max_condition >= 1.0))
            throw Error(ErrorKind::SingularOperator,
                        "condition estimate " + std::to_string(1.0 / rcond) + " exceeds limit");
        TridiagonalSolution out{std::vector<double>(rhs.begin(), rhs.end()), rcond};
        LAPACKE_dgttrs(LAPACK_COL_MAJOR, 'N', n, 1, dl.data(), d.data(), du.data(), du2.data(), ipiv.data(),
                       out.x.data(), n);
        return out;
    }
};

/// Root of f on [a, b] (f(a), f(b) of opposite sign) via TOMS 748.
inline double find_root(const std::function<double(double)>& f, double a, double b, double fa, double fb,
                        double xtol, std::uintmax_t max_iter = 100)
{
    if (fa == 0.0)
        return a;
    if (fb == 0.0)
        return b;
    if (std::signbit(fa) == std::signbit(fb))
        throw Error(ErrorKind::BracketFailed, "root not bracketed");
    auto stop = [xtol](double lo, double hi) { return std::abs(hi - lo) <= xtol; };
    std::uintmax_t iterations = max_iter;
    auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, stop, iterations);
    return 0.5 * (lo + hi);
}

inline double max_abs(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

} // namespace normsol
