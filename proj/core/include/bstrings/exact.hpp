//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bstrings/exact.hpp
//! Closed-form and numerically exact reference quantities.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mixing.hpp"
#include "sequences.hpp"

namespace bstrings
{
using Rational = boost::multiprecision::cpp_rational;

//---------------------------------------------------------------------------//
// BETA FUNCTION
//---------------------------------------------------------------------------//
//! ln B(alpha, beta) = ln Gamma(alpha) + ln Gamma(beta) - ln Gamma(alpha+beta)
double log_beta_fn(double alpha, double beta);
double beta_fn(double alpha, double beta);

//---------------------------------------------------------------------------//
// CYLINDER PROBABILITIES
//---------------------------------------------------------------------------//
/*!
 * The event that the gaps between successive ones, counting the initial
 * segment, are exactly k_0, k_1, ..., k_n.
 *
 * Equivalently Y_t = 1 for t in {K_0, ..., K_n} and Y_t = 0 for every other
 * t <= K_n, where K_r are the partial sums of the gaps.
 */
class CylinderPattern
{
  public:
    explicit CylinderPattern(std::vector<std::uint64_t> gaps);

    std::span<std::uint64_t const> gaps() const { return gaps_; }
    std::span<std::uint64_t const> partial_sums() const { return sums_; }
    //! Number of marks after the initial one (the "n" of k_0..k_n).
    std::size_t order() const { return gaps_.size() - 1; }
    //! K_n, the length of prefix the pattern determines.
    std::uint64_t length() const { return sums_.back(); }

  private:
    std::vector<std::uint64_t> gaps_;
    std::vector<std::uint64_t> sums_;
};

//! Product of independent Bern(a, b) marginals over positions 1..K_n.
double cylinder_prob_product(double a, double b,
                             CylinderPattern const& pattern);

//! Beta-integral closed form; requires b > 0.
double cylinder_prob_integral(double a, double b,
                              CylinderPattern const& pattern);

//! Product of Bern1(a, b) marginals; requires k_0 = 1.
double cylinder_prob_bern1(double a, double b, CylinderPattern const& pattern);

//---------------------------------------------------------------------------//
// BERN1 DECOMPOSITION
//---------------------------------------------------------------------------//
/*!
 * p_n: probability that the second one of Bern1(a, b) sits at position n.
 *
 * p_2 = a/(a+b); p_n = a/(a+b+n-2) * prod_{r=0}^{n-3} (b+r)/(a+b+r).
 */
double second_success_pmf(double a, double b, std::uint64_t n);

//! Moments of Z_1 for Bern1(a, b) from the Y_2 + Y_2 Y_3 + Z_1^+ split.
struct Z1Moments
{
    double mean = 0;
    double second_moment = 0;
    double variance = 0;
    double overdispersion = 0;  //!< Var - mean
};

Z1Moments bern1_z1_moments(double a, double b);

//! a^2 (a+1) (b-1) / ((a+b)^2 (a+b+1)); negative iff b < 1.
double overdispersion_z1(double a, double b);

//---------------------------------------------------------------------------//
// MIXTURES OF INDEPENDENT POISSON FACTORS
//---------------------------------------------------------------------------//
//! Conditional Poisson mean a (1 - x0^k) / k of Z_k given X_0 = x0.
double conditional_intensity(double a, int k, double x0);

/*!
 * Mixing law of X_0 for a sequence model.
 *
 * Bern(a, b): Beta(b, a), or a point mass at zero when b = 0.
 * Bern1(a, b): Beta(b - 1, a + 1) for b > 1, a point mass at zero when
 * b = 1; throws for b < 1 where no Poisson mixture exists.
 */
MixingLaw mixing_law_for(SequenceModel model, double a, double b);

/*!
 * P(Z_k = j) when, given X_0 = x0, Z_k ~ Po(a (1 - x0^k) / k).
 *
 * Integrated over the mixing law by Gauss-Legendre quadrature (see
 * integrate_beta); a point mass reduces to a plain Poisson pmf. Throws
 * ConvergenceError if node doubling disagrees beyond 1e-9.
 */
double mixture_pmf(double a, MixingLaw const& mixing, int k, std::uint64_t j);

struct Moments
{
    double mean = 0;
    double variance = 0;
};

//! Mean and variance of Z_k from the Beta moments of X_0.
Moments mixture_moments(double a, MixingLaw const& mixing, int k);

//---------------------------------------------------------------------------//
// DEPENDENT SEQUENCES
//---------------------------------------------------------------------------//
//! Marginals and joint of (Y_1, Y_2) when the initial mark has pmf
//! k x^(k-1) (1-x)^2.
struct PlusProbs
{
    double y1 = 0;  //!< P+(Y_1 = 1)
    double y2 = 0;  //!< P+(Y_2 = 1)
    double joint = 0;  //!< P+(Y_1 = 1, Y_2 = 1)
    double product = 0;  //!< y1 * y2
    double gap = 0;  //!< joint - product
};

PlusProbs plus_model_probs(double a, double b);

struct Fraction
{
    std::int64_t num = 0;
    std::int64_t den = 1;

    double value() const
    {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    friend bool operator==(Fraction const&, Fraction const&) = default;
};

//! Constants of the model with the first two points and marks exchanged.
struct SwappedProbs
{
    Fraction y2;  //!< P'(Y_2 = 1)
    Fraction y2_y3;  //!< P'(Y_2 = 1, Y_3 = 1)
    Fraction not_y2_y3;  //!< P'(Y_2 = 0, Y_3 = 1)
    Fraction y3;  //!< P'(Y_3 = 1)
    Fraction product;  //!< P'(Y_2 = 1) P'(Y_3 = 1)
};

SwappedProbs swapped_model_probs();

//---------------------------------------------------------------------------//
// ENUMERATION ORACLE
//---------------------------------------------------------------------------//
inline constexpr int max_enumeration_horizon = 24;

/*!
 * Exact law of the windowed count vector over all 2^m bit strings.
 *
 * \c support[i] has probability \c probabilities[i]; entries are sorted by
 * (counts, overflow).
 */
template<class P>
struct BasicExactDistribution
{
    int horizon = 0;
    int dmax = 0;
    std::vector<CountVector> support;
    std::vector<P> probabilities;

    //! Marginal pmf of Z_k (index j = count value).
    std::vector<P> marginal(int k) const;
    P total() const;
};

using ExactDistribution = BasicExactDistribution<double>;
using RationalDistribution = BasicExactDistribution<Rational>;

ExactDistribution enumerate_truncated(double a, double b, SequenceModel model,
                                      int m, int dmax);
//! Same enumeration in exact rational arithmetic.
RationalDistribution enumerate_truncated(Rational const& a, Rational const& b,
                                         SequenceModel model, int m, int dmax);

//---------------------------------------------------------------------------//
// TRUNCATION
//---------------------------------------------------------------------------//
/*!
 * Bound on the expected number of d-strings (d <= dmax) not completed
 * within a length-N prefix:
 *   sum_{d<=dmax} sum_{n>N-d} p_n p_{n+d},  p_n = a / (a + b + n - 1).
 * Evaluated exactly by telescoping. For Bern1 the tail marginals are those
 * of Bern(a, b - 1).
 */
double truncation_bias_bound(double a, double b, int dmax, std::uint64_t n);
double truncation_bias_bound(SequenceModel model, double a, double b,
                             int dmax, std::uint64_t n);

//! Smallest N > dmax whose bound is at most \c target.
std::uint64_t horizon_for_bias(SequenceModel model, double a, double b,
                               int dmax, double target);

//---------------------------------------------------------------------------//
}  // namespace bstrings
