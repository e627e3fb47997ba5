//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bstrings/sequences.hpp
//! Direct Bernoulli-sequence generators, d-string counting, Feller draws.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "random.hpp"

namespace bstrings
{
//---------------------------------------------------------------------------//
//! Which law generated a bit prefix.
enum class SequenceModel
{
    bern,  //!< independent, P(Y_n = 1) = a / (a + b + n - 1)
    bern1,  //!< Y_1 = 1, P(Y_n = 1) = a / (a + b + n - 2) for n >= 2
    cmpp_derived,  //!< assembled from a marked point realization
    raw,  //!< anything else
};

std::string_view to_string(SequenceModel m);

//---------------------------------------------------------------------------//
//! Reject a <= 0 or b < 0 (or NaN) with std::invalid_argument.
void check_bern_params(double a, double b);

//---------------------------------------------------------------------------//
/*!
 * Marginal success probability P(Y_n = 1) for n >= 1.
 *
 * Only the independent models (bern, bern1) have closed-form marginals.
 */
double success_probability(SequenceModel model, double a, double b,
                           std::uint64_t n);

//---------------------------------------------------------------------------//
/*!
 * A finite realized prefix Y_1..Y_N of a Bernoulli sequence.
 *
 * \c bits[0] holds Y_1. For assembled prefixes, \c truncated is set when the
 * realization did not carry enough marks to determine every bit; the
 * undetermined tail is left as zeros and must not be trusted.
 */
struct BitPrefix
{
    std::vector<std::uint8_t> bits;
    SequenceModel model = SequenceModel::raw;
    double a = 0;
    double b = 0;
    std::string spec_id;
    bool truncated = false;

    std::size_t size() const { return bits.size(); }
};

//! Throw std::logic_error if a non-0/1 bit is present or a bern1 prefix
//! does not start with a 1.
void check_invariants(BitPrefix const& prefix);

//---------------------------------------------------------------------------//
/*!
 * Counts Z_1..Z_dmax of d-strings plus an overflow bucket for d > dmax.
 *
 * Stored densely; \c dmax is small in practice (default 16).
 */
class CountVector
{
  public:
    static constexpr int default_dmax = 16;

    explicit CountVector(int dmax = default_dmax);

    int dmax() const { return static_cast<int>(counts_.size()); }

    //! Z_d for 1 <= d <= dmax.
    std::uint64_t operator[](int d) const;
    std::uint64_t overflow() const { return overflow_; }

    //! Sum of all buckets, i.e. the number of gaps recorded.
    std::uint64_t total() const;

    std::span<std::uint64_t const> counts() const { return counts_; }

    //! Record \c n gaps of length \c d (d > dmax goes to overflow).
    void add(std::uint64_t d, std::uint64_t n = 1);

    friend bool operator==(CountVector const&, CountVector const&) = default;

  private:
    std::vector<std::uint64_t> counts_;
    std::uint64_t overflow_ = 0;
};

//! Return \c z with the n-th coordinate incremented (the unit vector W_n).
CountVector add_unit(CountVector z, std::uint64_t n);

//---------------------------------------------------------------------------//
// GENERATORS
//---------------------------------------------------------------------------//

// Bits drawn one by one with their exact marginals; a probability-one bit
// is emitted without consuming a variate.
BitPrefix gen_bern(double a, double b, std::size_t n, RandomStream& stream);
BitPrefix gen_bern1(double a, double b, std::size_t n, RandomStream& stream);

//---------------------------------------------------------------------------//
/*!
 * Positions of the ones of a Bern / Bern1 sequence up to \c horizon.
 *
 * Distributionally identical to the ones of gen_bern / gen_bern1 with
 * n = horizon, but costs O(number of ones) instead of O(horizon): after a
 * short dense head, the waiting time to the next one is drawn by inverting
 * its survival function
 *   P(no one in (m, M]) = prod_{j=m+1}^{M} (1 - a / (c + j)),
 * which is a ratio of gamma functions. Horizons of 10^12 are routine.
 */
std::vector<std::uint64_t>
sample_success_times(SequenceModel model, double a, double b,
                     std::uint64_t horizon, RandomStream& stream);

/*!
 * First success strictly after position \c m (m >= 1) of an independent
 * sequence with P(Y_j = 1) = a / (c + j), or nullopt if none occurs in
 * (m, horizon]. Requires c + m + 1 - a > 0.
 */
std::optional<std::uint64_t>
next_success(double a, double c, std::uint64_t m, std::uint64_t horizon,
             RandomStream& stream);

//---------------------------------------------------------------------------//
// COUNTING
//---------------------------------------------------------------------------//

/*!
 * Windowed d-string counts of a prefix.
 *
 * Z_d counts indices n with bits n..n+d equal to 1, 0 x (d-1), 1 where the
 * whole window lies in the prefix. Leading zeros contribute nothing.
 */
CountVector count_strings(std::span<std::uint8_t const> bits, int dmax);
CountVector count_strings(BitPrefix const& prefix, int dmax);

//! Same counts from ascending positions of the ones.
CountVector count_gaps(std::span<std::uint64_t const> success_times, int dmax);

//---------------------------------------------------------------------------//
// FELLER PERMUTATIONS
//---------------------------------------------------------------------------//
/*!
 * A uniform permutation with its Feller cycle-completion indicators.
 *
 * \c perm[i - 1] = pi(i) with values in 1..n. \c indicators[k - 1] is one iff
 * the k-th draw closed a cycle. \c cycle_counts[k - 1] is the number of
 * k-cycles.
 */
struct PermDraw
{
    std::size_t n = 0;
    std::vector<std::uint32_t> perm;
    std::vector<std::uint8_t> indicators;
    std::vector<std::uint64_t> cycle_counts;
};

PermDraw feller_draw(std::size_t n, RandomStream& stream);

//! Cycle census of a permutation given as perm[i-1] = pi(i).
std::vector<std::uint64_t> cycle_census(std::span<std::uint32_t const> perm);

/*!
 * Cycle counts C_1..C_n from the Feller indicators.
 *
 * C_1 = I_1 + sum_i I_i I_{i+1}; for k >= 2 the first term is the run of
 * k - 1 leading zeros closed by I_k and the sum counts 1, 0 x (k-1), 1
 * windows. Equivalently the string counts of (1, I_1, ..., I_n).
 */
std::vector<std::uint64_t>
indicators_to_counts(std::span<std::uint8_t const> indicators);

//---------------------------------------------------------------------------//
}  // namespace bstrings
