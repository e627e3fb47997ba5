//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bstrings/stats.hpp
//! Goodness-of-fit, homogeneity, and moment tests for Monte Carlo output.
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace bstrings
{
//---------------------------------------------------------------------------//
//! Significance level for a single statistical check.
inline constexpr double default_alpha = 1e-3;
//! Default z-score bound for moment and proportion checks.
inline constexpr double default_z_max = 4.0;
//! Minimum expected count per bin after pooling.
inline constexpr double min_expected_per_bin = 5.0;
//! Smallest sample accepted by the tests below.
inline constexpr std::size_t min_sample_size = 1000;

//---------------------------------------------------------------------------//
// SPECIAL FUNCTIONS
//---------------------------------------------------------------------------//
// Series for x < s + 1, Lentz continued fraction otherwise; relative
// accuracy about 1e-10 or better.
double regularized_gamma_p(double s, double x);
double regularized_gamma_q(double s, double x);

double chi2_cdf(double x, double dof);
//! Upper tail Q(dof / 2, x / 2).
double chi2_sf(double x, double dof);

//---------------------------------------------------------------------------//
// CHI-SQUARE TESTS
//---------------------------------------------------------------------------//
struct Bin
{
    std::string label;
    double observed = 0;
    double expected = 0;
    //! Second sample's count for homogeneity tests; NaN otherwise.
    double observed_other = NAN;
};

struct GofResult
{
    double statistic = 0;
    int dof = 0;
    double p_value = 1;
    std::vector<Bin> bins;
    double alpha = default_alpha;
    std::size_t sample_size = 0;
    bool pass = true;
};

/*!
 * Pearson goodness of fit for nonnegative integer samples against a pmf.
 *
 * Cells are 0, 1, ..., max(sample) - 1 and a tail cell ">= max(sample)"
 * carrying the rest of the probability. Adjacent cells are then merged left
 * to right until each expected count is at least 5; a short remainder joins
 * the last bin.
 */
GofResult chi2_gof(std::span<std::uint64_t const> samples,
                   std::function<double(std::uint64_t)> const& pmf,
                   double alpha = default_alpha);

//! Goodness of fit for category counts against probabilities (same order).
GofResult chi2_gof_categorical(std::span<std::uint64_t const> observed,
                               std::span<double const> probabilities,
                               std::vector<std::string> labels = {},
                               double alpha = default_alpha);

//! Chi-square homogeneity test of two integer samples on pooled cells.
GofResult two_sample_counts(std::span<std::uint64_t const> samples_a,
                            std::span<std::uint64_t const> samples_b,
                            double alpha = default_alpha);

//! Homogeneity test of two category-count vectors (same order).
GofResult two_sample_categorical(std::span<std::uint64_t const> observed_a,
                                 std::span<std::uint64_t const> observed_b,
                                 std::vector<std::string> labels = {},
                                 double alpha = default_alpha);

//---------------------------------------------------------------------------//
// MOMENT TESTS
//---------------------------------------------------------------------------//
struct MomentTest
{
    std::size_t sample_size = 0;
    double empirical_mean = 0;
    double empirical_var = 0;
    double theoretical_mean = 0;
    double theoretical_var = 0;
    double z_mean = 0;
    double z_var = 0;
    double z_max = default_z_max;
    bool pass = true;
};

/*!
 * z-scores of the sample mean (CLT with the theoretical variance) and the
 * sample variance (normal approximation with the empirical fourth central
 * moment). Passes iff both |z| <= z_max.
 */
MomentTest moment_test(std::span<double const> samples,
                       double theoretical_mean, double theoretical_var,
                       double z_max = default_z_max);
MomentTest moment_test(std::span<std::uint64_t const> samples,
                       double theoretical_mean, double theoretical_var,
                       double z_max = default_z_max);

/*!
 * Overdispersion Var - mean of a sample with a delta-method standard error.
 *
 * The influence of observation x is (x - m)^2 - s^2 - (x - m).
 */
struct DispersionTest
{
    std::size_t sample_size = 0;
    double empirical = 0;
    double theoretical = 0;
    double std_error = 0;
    double z_theory = 0;  //!< (empirical - theoretical) / std_error
    double z_zero = 0;  //!< empirical / std_error
    double z_max = default_z_max;
    bool pass = true;  //!< |z_theory| <= z_max
};

DispersionTest dispersion_test(std::span<std::uint64_t const> samples,
                               double theoretical,
                               double z_max = default_z_max);

struct ProportionTest
{
    std::size_t successes = 0;
    std::size_t trials = 0;
    double empirical = 0;
    double theoretical = 0;
    double z = 0;
    double z_max = default_z_max;
    bool pass = true;
};

//! Binomial proportion against p with sigma = sqrt(p (1 - p) / n).
ProportionTest proportion_test(std::size_t successes, std::size_t trials,
                               double p, double z_max = default_z_max);

//---------------------------------------------------------------------------//
// DISTANCES
//---------------------------------------------------------------------------//
//! Half the L1 distance; the shorter vector is padded with zeros.
double tv_distance(std::span<double const> p, std::span<double const> q);

//! Relative frequencies of 0..max(sample).
std::vector<double> empirical_pmf(std::span<std::uint64_t const> samples);

//---------------------------------------------------------------------------//
}  // namespace bstrings
