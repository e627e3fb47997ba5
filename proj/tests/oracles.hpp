//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file oracles.hpp
//! Independent reference computations used by the unit tests.
//!
//! Nothing here calls into the library under test except for value types.
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle
{
//---------------------------------------------------------------------------//
//! Naive window scan: Z_d = #{n : bits n..n+d are 1, 0 x (d-1), 1}.
inline std::map<int, std::uint64_t>
scan_strings(std::vector<std::uint8_t> const& bits)
{
    std::map<int, std::uint64_t> z;
    for (std::size_t n = 0; n < bits.size(); ++n)
    {
        if (!bits[n])
            continue;
        for (std::size_t m = n + 1; m < bits.size(); ++m)
        {
            if (bits[m])
            {
                ++z[static_cast<int>(m - n)];
                break;
            }
        }
    }
    return z;
}

//! P(Y_n = 1) written out from the model definitions.
inline double bern_p(double a, double b, std::uint64_t n)
{
    return a / (a + b + double(n) - 1);
}
inline double bern1_p(double a, double b, std::uint64_t n)
{
    return n == 1 ? 1.0 : std::min(1.0, a / (a + b + double(n) - 2));
}

inline double poisson_pmf(double mean, std::uint64_t j)
{
    if (mean == 0)
        return j == 0 ? 1.0 : 0.0;
    return std::exp(double(j) * std::log(mean) - mean - std::lgamma(j + 1.0));
}

//! Beta(alpha, beta) density at x, given also 1 - x to full precision.
inline double beta_pdf(double alpha, double beta, double x, double one_minus_x)
{
    return std::exp((alpha - 1) * std::log(x)
                    + (beta - 1) * std::log(one_minus_x)
                    + std::lgamma(alpha + beta) - std::lgamma(alpha)
                    - std::lgamma(beta));
}

//! E[f(X)] for X ~ Beta(alpha, beta) by tanh-sinh quadrature, which copes
//! with integrable endpoint singularities on its own. The two-argument form
//! supplies the distance to the nearer endpoint, so 1 - x keeps its
//! precision next to x = 1.
inline double beta_expectation(double alpha, double beta,
                               std::function<double(double)> const& f)
{
    boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate(
        [&](double x, double xc) {
            double one_minus_x = x > 0.5 ? xc : 1 - x;
            return beta_pdf(alpha, beta, x, one_minus_x) * f(x);
        },
        0.0, 1.0);
}

//! Integral of f over [lo, hi] by adaptive Gauss-Kronrod.
inline double integrate(std::function<double(double)> const& f, double lo,
                        double hi)
{
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, lo, hi, 15, 1e-14);
}

//---------------------------------------------------------------------------//
/*!
 * Bern1(a, b) moments of Z_1 by direct summation over independent indicators.
 *
 * X_n = Y_n Y_{n+1}; Var(sum X_n) = sum Var X_n + 2 sum Cov(X_n, X_{n+1}),
 * since X_n and X_m are independent for |n - m| > 1. The series is summed
 * up to \c terms with the O(1/n^2) remainder estimated by an integral.
 */
struct SeriesMoments
{
    double mean;
    double variance;
};

inline SeriesMoments bern1_z1_series(double a, double b,
                                     std::uint64_t terms = 4'000'000)
{
    auto p = [&](std::uint64_t n) { return bern1_p(a, b, n); };
    long double mean = 0, var = 0;
    for (std::uint64_t n = 1; n <= terms; ++n)
    {
        long double q = p(n) * p(n + 1);
        mean += q;
        var += q - q * q;
        var += 2.0L * p(n) * p(n + 1) * p(n + 2) * (1 - p(n + 1));
    }
    // Tails: p_n p_{n+1} ~ a^2 / n^2 summed beyond `terms` is about a^2/terms
    // for the mean; the covariance tail is O(1/terms^2).
    double c = a + b - 2;
    long double tail = a * a / (c + double(terms) + 1);
    mean += tail;
    var += tail;
    return {double(mean), double(var)};
}

//---------------------------------------------------------------------------//
/*!
 * Points of the Beta-family process as record values.
 *
 * Draw iid V_j with density a (1 - v)^(a-1) (Beta(1, a)); the successive
 * record values above x0 form a Poisson process with intensity a / (1 - x).
 */
inline std::vector<double> record_points(double a, double x0, double upper,
                                         std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> out;
    double record = x0;
    // Literal scan of the iid sequence; expected draws grow like
    // 1 / (1 - upper)^a, so keep upper moderate.
    while (true)
    {
        double v = 1 - std::pow(unif(rng), 1 / a);
        if (v <= record)
            continue;
        if (v >= upper)
            break;
        out.push_back(v);
        record = v;
    }
    return out;
}

}  // namespace oracle
