//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bstrings/quadrature.hpp
//! Gauss-Legendre quadrature with node doubling.
//---------------------------------------------------------------------------//
#pragma once

#include <functional>
#include <span>
#include <stdexcept>

namespace bstrings
{
//---------------------------------------------------------------------------//
//! Raised when successive node counts disagree beyond tolerance.
class ConvergenceError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Nodes and weights on [-1, 1].
struct GaussLegendreRule
{
    std::span<double const> nodes;
    std::span<double const> weights;
};

//! Cached rule with n = 64 * 2^level nodes, level in [0, max_level].
GaussLegendreRule gauss_legendre(int level);

inline constexpr int gauss_legendre_max_level = 4;

struct QuadratureResult
{
    double value = 0;
    double error = 0;  //!< |I_2n - I_n| at acceptance
    int nodes = 0;
};

/*!
 * Integrate f over [lo, hi] with 64, 128, ... nodes.
 *
 * Accepts when two successive values agree to tol * max(1, |I|); throws
 * ConvergenceError after 1024 nodes.
 */
QuadratureResult integrate(std::function<double(double)> const& f, double lo,
                           double hi, double tol = 1e-9);

/*!
 * E[f(X)] for X ~ Beta(alpha, beta).
 *
 * The range is split at 1/2. On a half where the density is unbounded
 * (alpha < 1 near 0, beta < 1 near 1) the substitution x = t^(1/alpha)
 * (resp. 1 - x = s^(1/beta)) absorbs the singular factor.
 */
QuadratureResult integrate_beta(double alpha, double beta,
                                std::function<double(double)> const& f,
                                double tol = 1e-9);

//---------------------------------------------------------------------------//
}  // namespace bstrings
