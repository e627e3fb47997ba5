//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bstrings/cmpp.hpp
//! Conditional marked Poisson process models M(g, r, lambda, q).
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mixing.hpp"
#include "random.hpp"
#include "sequences.hpp"

namespace bstrings
{
//---------------------------------------------------------------------------//
enum class CmppTag
{
    beta_bern,  //!< yields Bern(a, b)
    beta_bern1,  //!< yields Bern1(a, b), b >= 1
    plus,  //!< beta_bern with initial mark pmf k x^(k-1) (1-x)^2
    swapped,  //!< beta_bern(1, 0) with (X_1, L_1) and (X_2, L_2) exchanged
    custom,
};

std::string_view to_string(CmppTag tag);

//! Law of X_0 (g).
struct InitialLaw
{
    std::function<double(RandomStream&)> sample;
    //! Density on (0, 1); may be empty for a point mass.
    std::function<double(double)> density;
    //! Support points used when checking the finiteness condition.
    std::vector<double> check_points;
};

//! A mark law x -> pmf on {1, 2, ...} (r or q).
struct MarkLaw
{
    std::function<double(double x, std::uint64_t k)> pmf;
    std::function<std::uint64_t(double x, RandomStream&)> sample;
};

/*!
 * Conditional intensity lambda_{x0}(x) of the point process given X_0 = x0.
 *
 * Points are generated by inverting the cumulative intensity
 * Lambda_{x0}(x) = int_{x0}^x lambda_{x0}(u) du when \c inverse_cumulative is
 * set. Otherwise \c sampler must return the ascending points below an upper
 * limit.
 */
struct IntensityLaw
{
    std::function<double(double x0, double x)> intensity;
    std::function<double(double x0, double x)> cumulative;
    std::function<double(double x0, double gamma)> inverse_cumulative;
    std::function<std::vector<double>(double x0, double upper, RandomStream&)>
        sampler;
};

/*!
 * A CMPP model: X_0 ~ g; given X_0 = x0 a Poisson process with intensity
 * lambda_{x0}; L_0 ~ r(X_0, .); L_i ~ q(X_i, .) for i >= 1.
 *
 * The named constructors build the Beta family with a / (1 - x) intensity
 * on (x0, 1) and geometric marks q(x, k) = x^(k-1) (1 - x).
 */
struct CmppSpec
{
    CmppTag tag = CmppTag::custom;
    double a = 0;
    double b = 0;
    std::string id;
    InitialLaw initial;
    MarkLaw initial_mark;
    IntensityLaw intensity;
    MarkLaw mark;
};

//! Bern(a, b): g = Beta(b, a) (point mass at 0 when b = 0), r = q geometric.
CmppSpec beta_bern_spec(double a, double b);
//! Bern1(a, b): g = Beta(b - 1, a + 1) (point mass at 0 when b = 1), L_0 = 1.
CmppSpec beta_bern1_spec(double a, double b);
//! First dependent sequence: beta_bern with r(x, k) = k x^(k-1) (1-x)^2.
CmppSpec plus_spec(double a, double b);
//! Second dependent sequence (a = 1, (X_0, L_0) = (0, 1), first two swapped).
CmppSpec swapped_spec();

/*!
 * Check the model against dmax.
 *
 * Mark pmfs must sum to one within 1e-12 on a grid; the intensity must be
 * nonnegative; and int lambda_w(x) q(x, k) dx must be finite for k <= dmax
 * and w on a grid (checked by quadrature). Throws std::invalid_argument.
 */
void validate(CmppSpec const& spec, int dmax);

//---------------------------------------------------------------------------//
// MARK SAMPLERS
//---------------------------------------------------------------------------//
//! Geometric on {1, 2, ...} with success probability 1 - x, x in (0, 1).
std::uint64_t sample_mark_q(double x, RandomStream& stream);

//! pmf k x^(k-1) (1-x)^2 as G_1 + G_2 - 1, x in (0, 1).
std::uint64_t sample_mark_rplus(double x, RandomStream& stream);

//---------------------------------------------------------------------------//
// REALIZATIONS
//---------------------------------------------------------------------------//
/*!
 * Ascending points of the process given X_0 = x0 that fall below 1 - eps.
 *
 * X_i = Lambda^{-1}(Gamma_i) for unit-rate arrivals Gamma_1 < Gamma_2 < ...
 * For the Beta family X_i = 1 - (1 - x0) exp(-Gamma_i / a).
 */
std::vector<double>
sample_points(CmppSpec const& spec, double x0, double epsilon,
              RandomStream& stream);

//! Unit-rate arrival times matching the points of the last call (tests).
struct PointsWithArrivals
{
    std::vector<double> points;
    std::vector<double> arrivals;
};
PointsWithArrivals sample_points_with_arrivals(CmppSpec const& spec, double x0,
                                               double epsilon,
                                               RandomStream& stream);

/*!
 * One draw of the model.
 *
 * \c marks[0] is L_0; \c marks[i] is the mark of \c points[i - 1].
 * \c partial_sums[r] = L_0 + ... + L_r. Points are strictly ascending except
 * for the swapped model, whose first two points are exchanged.
 */
struct PointRealization
{
    std::string spec_id;
    double x0 = 0;
    std::vector<double> points;
    std::vector<std::uint64_t> marks;
    std::vector<std::uint64_t> partial_sums;
    double epsilon = 0;
};

/*!
 * Truncation of the infinite process.
 *
 * Generation stops at the first point at or above 1 - epsilon once the
 * partial sums reach \c cover (so a length-cover prefix is fully
 * determined).
 */
struct RealizeOptions
{
    double epsilon = 1e-3 / CountVector::default_dmax;
    std::uint64_t cover = 0;
};

//! epsilon = tol / (a dmax): expected lost marks of order <= dmax is <= tol.
double epsilon_for(double a, int dmax, double tol = 1e-3);

PointRealization
realize(CmppSpec const& spec, RealizeOptions const& opts, RandomStream& stream);

//! Throws std::logic_error if the ordering/partial-sum invariants fail.
void check_invariants(PointRealization const& real, bool allow_first_swap);

//! Y_m = 1 iff m is a partial sum; flags \c truncated when marks run out.
BitPrefix assemble_bits(PointRealization const& real, std::size_t n);

//! Z_k = #{i >= 1 : L_i = k}; L_0 is excluded.
CountVector counts_from_marks(PointRealization const& real, int dmax);

//---------------------------------------------------------------------------//
// MIXTURE SAMPLERS
//---------------------------------------------------------------------------//
struct MixtureSpec
{
    double a = 1;
    MixingLaw mixing = MixingLaw::point_mass_at_zero();

    //! a (1 - x0^k) / k
    double intensity_of(int k, double x0) const;
};

/*!
 * X_0 from the mixing law, then independent Z_k ~ Po(a (1 - X_0^k) / k) for
 * k <= dmax. The overflow bucket is not sampled and stays zero.
 */
CountVector sample_mixture_counts(MixtureSpec const& mix, int dmax,
                                  RandomStream& stream);

/*!
 * Bern1(a, b) counts through the second-one decomposition.
 *
 * Draws the position n of the second one with probability p_n, then returns
 * Z(a, b + n - 1) + W_{n-1}, where Z(a, b + n - 1) is a Poisson mixture over
 * Beta(b + n - 2, a + 1) (a point mass at zero when b + n - 2 = 0). Valid for
 * every b >= 0, including b < 1.
 */
CountVector sample_bern1_counts_recurrence(double a, double b, int dmax,
                                           RandomStream& stream);

//---------------------------------------------------------------------------//
}  // namespace bstrings
