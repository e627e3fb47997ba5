//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bstrings/random.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bstrings
{
//---------------------------------------------------------------------------//
/*!
 * Mix a 64-bit value (splitmix64 finalizer).
 *
 * Used to derive child seeds; it is a bijection on 64-bit words.
 */
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

//---------------------------------------------------------------------------//
/*!
 * Seed of the child stream for replicate \c index under \c master_seed.
 *
 * The child seed is mix64(mix64(master_seed) + index): the index-th output
 * of a splitmix64 counter started at the mixed master seed. Unlike an XOR
 * of two mixed values it is not symmetric in its arguments, so distinct
 * (seed, index) pairs do not collide in any structured way.
 */
constexpr std::uint64_t child_seed(std::uint64_t master_seed,
                                   std::uint64_t index) noexcept
{
    return mix64(mix64(master_seed) + index);
}

//---------------------------------------------------------------------------//
/*!
 * A reproducible random stream owned by a single replicate.
 *
 * Wraps a 64-bit Mersenne twister. Every variate used by the samplers goes
 * through one of the members below so that a (seed, replicate) pair fully
 * determines the output.
 */
class RandomStream
{
  public:
    using engine_type = std::mt19937_64;

    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    //! Child stream for replicate \c index of a run seeded with \c master.
    static RandomStream child(std::uint64_t master, std::uint64_t index)
    {
        return RandomStream(child_seed(master, index));
    }

    //! Uniform on the open interval (0, 1), 53 bits of resolution.
    double uniform()
    {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    //! Bernoulli trial with success probability \c p (p >= 1 always succeeds).
    bool bernoulli(double p)
    {
        if (p >= 1.0)
            return true;
        if (p <= 0.0)
            return false;
        return this->uniform() < p;
    }

    //! Unit-rate exponential.
    double exponential() { return -std::log(this->uniform()); }

    //! Uniform integer in [0, n).
    std::uint64_t index(std::uint64_t n)
    {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

    //! Poisson with the given mean; a nonpositive mean yields zero.
    std::uint64_t poisson(double mean)
    {
        if (!(mean > 0.0))
            return 0;
        return std::poisson_distribution<std::uint64_t>(mean)(engine_);
    }

    //! Gamma(shape, 1).
    double gamma(double shape)
    {
        return std::gamma_distribution<double>(shape, 1.0)(engine_);
    }

    //! Beta(alpha, beta) via the ratio of gamma variates.
    double beta(double alpha, double beta)
    {
        double x = this->gamma(alpha);
        double y = this->gamma(beta);
        double s = x + y;
        if (s == 0.0)
            return alpha >= beta ? 1.0 : 0.0;
        return x / s;
    }

    engine_type& engine() { return engine_; }

  private:
    engine_type engine_;
};

//---------------------------------------------------------------------------//
}  // namespace bstrings
