//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file sequences.cpp
//---------------------------------------------------------------------------//
#include "bstrings/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace bstrings
{
namespace
{
//---------------------------------------------------------------------------//
// Positions below this are sampled bit by bit before skip sampling starts;
// it also keeps the gamma ratios away from their poles.
constexpr std::uint64_t dense_head = 32;

// log( Gamma(z) / Gamma(z + delta) ), z > 0
double log_gamma_delta_ratio(double z, double delta)
{
    double r = boost::math::tgamma_delta_ratio(z, delta);
    if (r > 1e-300 && std::isfinite(r))
        return std::log(r);
    return boost::math::lgamma(z) - boost::math::lgamma(z + delta);
}

}  // namespace

//---------------------------------------------------------------------------//
std::string_view to_string(SequenceModel m)
{
    switch (m)
    {
        case SequenceModel::bern:
            return "bern";
        case SequenceModel::bern1:
            return "bern1";
        case SequenceModel::cmpp_derived:
            return "cmpp";
        case SequenceModel::raw:
            return "raw";
    }
    return "raw";
}

//---------------------------------------------------------------------------//
void check_bern_params(double a, double b)
{
    if (!(a > 0) || !std::isfinite(a))
        throw std::invalid_argument("parameter a must be positive and finite");
    if (!(b >= 0) || !std::isfinite(b))
        throw std::invalid_argument(
            "parameter b must be nonnegative and finite");
}

//---------------------------------------------------------------------------//
double success_probability(SequenceModel model, double a, double b,
                           std::uint64_t n)
{
    if (n == 0)
        throw std::invalid_argument("sequence positions start at 1");
    auto nd = static_cast<double>(n);
    switch (model)
    {
        case SequenceModel::bern:
            return std::min(1.0, a / (a + b + nd - 1));
        case SequenceModel::bern1:
            return n == 1 ? 1.0 : std::min(1.0, a / (a + b + nd - 2));
        default:
            throw std::invalid_argument(
                "marginals exist only for the bern and bern1 models");
    }
}

//---------------------------------------------------------------------------//
void check_invariants(BitPrefix const& prefix)
{
    for (auto bit : prefix.bits)
    {
        if (bit > 1)
            throw std::logic_error("bit prefix holds a value other than 0/1");
    }
    if (prefix.model == SequenceModel::bern1 && !prefix.bits.empty()
        && prefix.bits.front() != 1)
    {
        throw std::logic_error("bern1 prefix must start with a one");
    }
}

//---------------------------------------------------------------------------//
// COUNT VECTOR
//---------------------------------------------------------------------------//
CountVector::CountVector(int dmax)
{
    if (dmax < 1)
        throw std::invalid_argument("dmax must be at least 1");
    counts_.assign(static_cast<std::size_t>(dmax), 0);
}

std::uint64_t CountVector::operator[](int d) const
{
    if (d < 1 || d > this->dmax())
        throw std::out_of_range("string order outside 1..dmax");
    return counts_[static_cast<std::size_t>(d - 1)];
}

std::uint64_t CountVector::total() const
{
    return std::accumulate(counts_.begin(), counts_.end(), overflow_);
}

void CountVector::add(std::uint64_t d, std::uint64_t n)
{
    if (d == 0)
        throw std::invalid_argument("string order must be at least 1");
    if (d > counts_.size())
        overflow_ += n;
    else
        counts_[d - 1] += n;
}

CountVector add_unit(CountVector z, std::uint64_t n)
{
    z.add(n);
    return z;
}

//---------------------------------------------------------------------------//
// GENERATORS
//---------------------------------------------------------------------------//
namespace
{
BitPrefix gen_independent(SequenceModel model, double a, double b,
                          std::size_t n, RandomStream& stream)
{
    check_bern_params(a, b);
    if (n == 0)
        throw std::invalid_argument("prefix length must be at least 1");

    BitPrefix result;
    result.model = model;
    result.a = a;
    result.b = b;
    result.bits.resize(n);
    for (std::size_t k = 1; k <= n; ++k)
    {
        result.bits[k - 1]
            = stream.bernoulli(success_probability(model, a, b, k)) ? 1 : 0;
    }
    return result;
}
}  // namespace

BitPrefix gen_bern(double a, double b, std::size_t n, RandomStream& stream)
{
    return gen_independent(SequenceModel::bern, a, b, n, stream);
}

BitPrefix gen_bern1(double a, double b, std::size_t n, RandomStream& stream)
{
    return gen_independent(SequenceModel::bern1, a, b, n, stream);
}

//---------------------------------------------------------------------------//
std::optional<std::uint64_t>
next_success(double a, double c, std::uint64_t m, std::uint64_t horizon,
             RandomStream& stream)
{
    if (m >= horizon)
        return std::nullopt;
    if (!(c + static_cast<double>(m) + 1 - a > 0))
        throw std::invalid_argument("skip sampling needs c + m + 1 > a");

    // h(M) = log Gamma(c+M+1-a)/Gamma(c+M+1); the survival from m to M is
    // exp(h(M) - h(m)) and h is strictly decreasing.
    auto h = [a, c](std::uint64_t pos) {
        return log_gamma_delta_ratio(c + static_cast<double>(pos) + 1 - a, a);
    };
    double const target = h(m) + std::log(stream.uniform());
    auto hit = [&](std::uint64_t pos) { return h(pos) < target; };

    if (!hit(horizon))
        return std::nullopt;

    // Smallest M in (m, horizon] with hit(M). Start from the power-law
    // approximation h(M) ~ -a log(c + M + 1 - a/2), then gallop and bisect.
    std::uint64_t lo = m;
    std::uint64_t hi = horizon;
    double guess = std::exp(-target / a) - (c + 1 - a / 2);
    if (std::isfinite(guess) && guess > static_cast<double>(lo + 1)
        && guess < static_cast<double>(hi))
    {
        auto start = static_cast<std::uint64_t>(guess);
        std::uint64_t step = 1;
        if (hit(start))
        {
            hi = start;
            while (hi - lo > 1)
            {
                std::uint64_t cand = hi - lo > step ? hi - step : lo + 1;
                if (!hit(cand))
                {
                    lo = cand;
                    break;
                }
                hi = cand;
                step *= 2;
            }
        }
        else
        {
            lo = start;
            while (hi - lo > 1)
            {
                std::uint64_t cand = hi - lo > step ? lo + step : hi - 1;
                if (hit(cand))
                {
                    hi = cand;
                    break;
                }
                lo = cand;
                step *= 2;
            }
        }
    }
    while (hi - lo > 1)
    {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (hit(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

//---------------------------------------------------------------------------//
std::vector<std::uint64_t>
sample_success_times(SequenceModel model, double a, double b,
                     std::uint64_t horizon, RandomStream& stream)
{
    check_bern_params(a, b);
    if (model != SequenceModel::bern && model != SequenceModel::bern1)
        throw std::invalid_argument("success times need the bern or bern1 "
                                    "model");
    if (horizon == 0)
        throw std::invalid_argument("horizon must be at least 1");

    std::vector<std::uint64_t> times;
    std::uint64_t head = std::min(horizon, dense_head);
    for (std::uint64_t j = 1; j <= head; ++j)
    {
        if (stream.bernoulli(success_probability(model, a, b, j)))
            times.push_back(j);
    }

    // P(Y_j = 1) = a / (c + j) beyond the head
    double c = model == SequenceModel::bern ? a + b - 1 : a + b - 2;
    std::uint64_t m = head;
    while (auto t = next_success(a, c, m, horizon, stream))
    {
        times.push_back(*t);
        m = *t;
    }
    return times;
}

//---------------------------------------------------------------------------//
// COUNTING
//---------------------------------------------------------------------------//
CountVector count_strings(std::span<std::uint8_t const> bits, int dmax)
{
    CountVector result(dmax);
    std::optional<std::size_t> last;
    for (std::size_t i = 0; i < bits.size(); ++i)
    {
        if (!bits[i])
            continue;
        if (last)
            result.add(i - *last);
        last = i;
    }
    return result;
}

CountVector count_strings(BitPrefix const& prefix, int dmax)
{
    return count_strings(std::span<std::uint8_t const>(prefix.bits), dmax);
}

CountVector count_gaps(std::span<std::uint64_t const> success_times, int dmax)
{
    CountVector result(dmax);
    for (std::size_t i = 1; i < success_times.size(); ++i)
    {
        if (success_times[i] <= success_times[i - 1])
            throw std::invalid_argument("success times must be ascending");
        result.add(success_times[i] - success_times[i - 1]);
    }
    return result;
}

//---------------------------------------------------------------------------//
// FELLER PERMUTATIONS
//---------------------------------------------------------------------------//
PermDraw feller_draw(std::size_t n, RandomStream& stream)
{
    if (n == 0)
        throw std::invalid_argument("permutation size must be at least 1");

    PermDraw draw;
    draw.n = n;
    draw.perm.assign(n, 0);
    draw.indicators.assign(n, 0);

    // Elements not yet chosen as an image; swap-remove keeps draws O(1).
    std::vector<std::uint32_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::uint32_t{1});
    std::vector<std::size_t> where(n + 1);
    for (std::size_t i = 0; i < n; ++i)
        where[pool[i]] = i;

    std::vector<bool> assigned(n + 1, false);
    std::uint32_t start = 1;
    std::uint32_t current = 1;
    std::uint32_t smallest_open = 1;
    for (std::size_t k = 0; k < n; ++k)
    {
        auto idx = static_cast<std::size_t>(stream.index(pool.size()));
        std::uint32_t image = pool[idx];
        pool[idx] = pool.back();
        where[pool[idx]] = idx;
        pool.pop_back();

        draw.perm[current - 1] = image;
        assigned[current] = true;
        if (image == start)
        {
            draw.indicators[k] = 1;
            while (smallest_open <= n && assigned[smallest_open])
                ++smallest_open;
            start = current = smallest_open;
        }
        else
        {
            current = image;
        }
    }
    draw.cycle_counts = cycle_census(draw.perm);
    return draw;
}

std::vector<std::uint64_t> cycle_census(std::span<std::uint32_t const> perm)
{
    std::size_t n = perm.size();
    std::vector<std::uint64_t> counts(n, 0);
    std::vector<bool> seen(n + 1, false);
    for (auto v : perm)
    {
        if (v < 1 || v > n || seen[v])
            throw std::invalid_argument("not a permutation of 1..n");
        seen[v] = true;
    }
    seen.assign(n + 1, false);
    for (std::uint32_t i = 1; i <= n; ++i)
    {
        if (seen[i])
            continue;
        std::size_t len = 0;
        for (std::uint32_t j = i; !seen[j]; j = perm[j - 1])
        {
            seen[j] = true;
            ++len;
        }
        ++counts[len - 1];
    }
    return counts;
}

std::vector<std::uint64_t>
indicators_to_counts(std::span<std::uint8_t const> indicators)
{
    if (indicators.empty())
        throw std::invalid_argument("indicator list is empty");
    if (indicators.back() != 1)
        throw std::invalid_argument(
            "indicator list must end in 1 (the last draw closes a cycle)");

    std::size_t n = indicators.size();
    std::vector<std::uint64_t> counts(n, 0);
    std::size_t last = 0;  // virtual cycle boundary before draw 1
    for (std::size_t i = 1; i <= n; ++i)
    {
        if (indicators[i - 1] > 1)
            throw std::invalid_argument("indicators must be 0 or 1");
        if (indicators[i - 1])
        {
            ++counts[i - last - 1];
            last = i;
        }
    }
    return counts;
}

//---------------------------------------------------------------------------//
}  // namespace bstrings
