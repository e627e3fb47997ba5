//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file quadrature.cpp
//---------------------------------------------------------------------------//
#include "bstrings/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

namespace bstrings
{
namespace
{
//---------------------------------------------------------------------------//
struct Rule
{
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Roots of P_n by Newton iteration on the three-term recurrence.
Rule make_rule(int n)
{
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i)
    {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int iter = 0; iter < 100; ++iter)
        {
            double p0 = 1;
            double p1 = x;
            for (int k = 2; k <= n; ++k)
            {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        double w = 2 / ((1 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

std::array<Rule, gauss_legendre_max_level + 1> const& rules()
{
    static auto const cache = [] {
        std::array<Rule, gauss_legendre_max_level + 1> result;
        for (int level = 0; level <= gauss_legendre_max_level; ++level)
            result[level] = make_rule(64 << level);
        return result;
    }();
    return cache;
}

double apply(GaussLegendreRule rule, std::function<double(double)> const& f,
             double lo, double hi)
{
    double half = (hi - lo) / 2;
    double mid = (hi + lo) / 2;
    double sum = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

}  // namespace

//---------------------------------------------------------------------------//
GaussLegendreRule gauss_legendre(int level)
{
    if (level < 0 || level > gauss_legendre_max_level)
        throw std::out_of_range("Gauss-Legendre level out of range");
    auto const& r = rules()[level];
    return {r.nodes, r.weights};
}

//---------------------------------------------------------------------------//
QuadratureResult integrate(std::function<double(double)> const& f, double lo,
                           double hi, double tol)
{
    if (lo == hi)
        return {0, 0, 0};
    double prev = apply(gauss_legendre(0), f, lo, hi);
    for (int level = 1; level <= gauss_legendre_max_level; ++level)
    {
        double next = apply(gauss_legendre(level), f, lo, hi);
        double err = std::abs(next - prev);
        if (!std::isfinite(next))
            break;
        if (err <= tol * std::max(1.0, std::abs(next)))
            return {next, err, 64 << level};
        prev = next;
    }
    throw ConvergenceError("Gauss-Legendre node doubling did not converge on ["
                           + std::to_string(lo) + ", " + std::to_string(hi)
                           + "]");
}

//---------------------------------------------------------------------------//
QuadratureResult integrate_beta(double alpha, double beta,
                                std::function<double(double)> const& f,
                                double tol)
{
    if (!(alpha > 0) || !(beta > 0))
        throw std::invalid_argument("Beta parameters must be positive");

    double const log_b = std::log(boost::math::beta(alpha, beta));
    auto density = [=](double x) {
        return std::exp((alpha - 1) * std::log(x)
                        + (beta - 1) * std::log1p(-x) - log_b);
    };

    QuadratureResult lower;
    if (alpha < 1)
    {
        // x = t^(1/alpha): x^(alpha-1) dx = dt / alpha
        lower = integrate(
            [&](double t) {
                double x = std::pow(t, 1 / alpha);
                return std::exp((beta - 1) * std::log1p(-x) - log_b) / alpha
                       * f(x);
            },
            0.0, std::pow(0.5, alpha), tol);
    }
    else
    {
        lower = integrate([&](double x) { return density(x) * f(x); }, 0.0,
                          0.5, tol);
    }

    QuadratureResult upper;
    if (beta < 1)
    {
        // 1 - x = s^(1/beta): (1-x)^(beta-1) dx = -ds / beta
        upper = integrate(
            [&](double s) {
                double y = std::pow(s, 1 / beta);
                double x = 1 - y;
                return std::exp((alpha - 1) * std::log(x) - log_b) / beta
                       * f(x);
            },
            0.0, std::pow(0.5, beta), tol);
    }
    else
    {
        upper = integrate([&](double x) { return density(x) * f(x); }, 0.5,
                          1.0, tol);
    }

    return {lower.value + upper.value, lower.error + upper.error,
            std::max(lower.nodes, upper.nodes)};
}

//---------------------------------------------------------------------------//
}  // namespace bstrings
