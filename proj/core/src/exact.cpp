//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file exact.cpp
//---------------------------------------------------------------------------//
#include "bstrings/exact.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "bstrings/quadrature.hpp"

namespace bstrings
{
//---------------------------------------------------------------------------//
// BETA FUNCTION
//---------------------------------------------------------------------------//
double log_beta_fn(double alpha, double beta)
{
    if (!(alpha > 0) || !(beta > 0))
        throw std::invalid_argument("Beta function arguments must be positive");
    return std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta);
}

double beta_fn(double alpha, double beta)
{
    return std::exp(log_beta_fn(alpha, beta));
}

//---------------------------------------------------------------------------//
// CYLINDER PROBABILITIES
//---------------------------------------------------------------------------//
CylinderPattern::CylinderPattern(std::vector<std::uint64_t> gaps)
    : gaps_(std::move(gaps))
{
    if (gaps_.empty())
        throw std::invalid_argument("cylinder pattern needs at least k_0");
    sums_.reserve(gaps_.size());
    std::uint64_t total = 0;
    for (auto k : gaps_)
    {
        if (k < 1)
            throw std::invalid_argument("cylinder gaps must be positive");
        total += k;
        sums_.push_back(total);
    }
}

namespace
{
// Sum of log marginals along the pattern; -inf when some factor vanishes.
double log_cylinder(SequenceModel model, double a, double b,
                    CylinderPattern const& pattern)
{
    auto sums = pattern.partial_sums();
    double log_p = 0;
    std::size_t next = 0;
    for (std::uint64_t t = 1; t <= pattern.length(); ++t)
    {
        double p = success_probability(model, a, b, t);
        double factor = 1 - p;
        if (t == sums[next])
        {
            factor = p;
            ++next;
        }
        if (factor <= 0)
            return -INFINITY;
        log_p += std::log(factor);
    }
    return log_p;
}
}  // namespace

double cylinder_prob_product(double a, double b,
                             CylinderPattern const& pattern)
{
    check_bern_params(a, b);
    return std::exp(log_cylinder(SequenceModel::bern, a, b, pattern));
}

double cylinder_prob_integral(double a, double b,
                              CylinderPattern const& pattern)
{
    check_bern_params(a, b);
    if (!(b > 0))
        throw std::invalid_argument(
            "the Beta-integral form needs b > 0; use the product form");
    auto sums = pattern.partial_sums();
    auto n = pattern.order();
    double kn = static_cast<double>(pattern.length());
    double log_p = log_beta_fn(b + kn - 1, a + 1) - log_beta_fn(b, a)
                   + static_cast<double>(n) * std::log(a);
    for (std::size_t s = 0; s < n; ++s)
        log_p -= std::log(b + static_cast<double>(sums[s]) - 1);
    return std::exp(log_p);
}

double cylinder_prob_bern1(double a, double b, CylinderPattern const& pattern)
{
    check_bern_params(a, b);
    if (pattern.gaps().front() != 1)
        throw std::invalid_argument("Bern1 cylinders start with k_0 = 1");
    return std::exp(log_cylinder(SequenceModel::bern1, a, b, pattern));
}

//---------------------------------------------------------------------------//
// BERN1 DECOMPOSITION
//---------------------------------------------------------------------------//
double second_success_pmf(double a, double b, std::uint64_t n)
{
    check_bern_params(a, b);
    if (n < 2)
        throw std::invalid_argument("the second one sits at n >= 2");
    if (n == 2)
        return a / (a + b);
    if (b == 0)
        return 0;
    // prod_{r=0}^{n-3} (b+r)/(a+b+r) = [G(b+n-2)/G(a+b+n-2)] / [G(b)/G(a+b)]
    double nd = static_cast<double>(n);
    double survival = boost::math::tgamma_delta_ratio(b + nd - 2, a)
                      / boost::math::tgamma_delta_ratio(b, a);
    return a / (a + b + nd - 2) * survival;
}

Z1Moments bern1_z1_moments(double a, double b)
{
    check_bern_params(a, b);
    Z1Moments m;
    m.mean = a * (a + 1) / (a + b);
    m.second_moment = m.mean
                      + a * a * (a + 1) * (a + 2) / ((a + b) * (a + b + 1));
    m.variance = m.second_moment - m.mean * m.mean;
    m.overdispersion = m.variance - m.mean;
    return m;
}

double overdispersion_z1(double a, double b)
{
    check_bern_params(a, b);
    return a * a * (a + 1) * (b - 1) / ((a + b) * (a + b) * (a + b + 1));
}

//---------------------------------------------------------------------------//
// MIXTURES
//---------------------------------------------------------------------------//
double conditional_intensity(double a, int k, double x0)
{
    if (k < 1)
        throw std::invalid_argument("string order must be at least 1");
    return a * (1 - std::pow(x0, k)) / k;
}

MixingLaw mixing_law_for(SequenceModel model, double a, double b)
{
    check_bern_params(a, b);
    switch (model)
    {
        case SequenceModel::bern:
            return b > 0 ? MixingLaw::beta(b, a)
                         : MixingLaw::point_mass_at_zero();
        case SequenceModel::bern1:
            if (b > 1)
                return MixingLaw::beta(b - 1, a + 1);
            if (b == 1)
                return MixingLaw::point_mass_at_zero();
            throw std::invalid_argument(
                "Bern1(a, b) with b < 1 has no Poisson-mixture law");
        default:
            throw std::invalid_argument("no mixing law for this model");
    }
}

namespace
{
double poisson_pmf(double mean, std::uint64_t j)
{
    if (mean <= 0)
        return j == 0 ? 1.0 : 0.0;
    double jd = static_cast<double>(j);
    return std::exp(jd * std::log(mean) - mean - std::lgamma(jd + 1));
}
}  // namespace

double mixture_pmf(double a, MixingLaw const& mixing, int k, std::uint64_t j)
{
    if (!(a > 0))
        throw std::invalid_argument("parameter a must be positive");
    if (k < 1)
        throw std::invalid_argument("string order must be at least 1");
    if (mixing.is_point_mass())
        return poisson_pmf(conditional_intensity(a, k, mixing.location()), j);
    auto result = integrate_beta(mixing.alpha(), mixing.beta(), [&](double x) {
        return poisson_pmf(conditional_intensity(a, k, x), j);
    });
    return result.value;
}

Moments mixture_moments(double a, MixingLaw const& mixing, int k)
{
    if (!(a > 0))
        throw std::invalid_argument("parameter a must be positive");
    if (k < 1)
        throw std::invalid_argument("string order must be at least 1");
    double ex = mixing.moment(k);
    double ex2 = mixing.moment(2 * k);
    double scale = a / k;
    Moments m;
    m.mean = scale * (1 - ex);
    m.variance = m.mean + scale * scale * (ex2 - ex * ex);
    return m;
}

//---------------------------------------------------------------------------//
// DEPENDENT SEQUENCES
//---------------------------------------------------------------------------//
PlusProbs plus_model_probs(double a, double b)
{
    if (!(a > 0) || !(b > 0))
        throw std::invalid_argument("the plus model needs a > 0 and b > 0");
    double s = a + b;
    PlusProbs p;
    p.y1 = a * (a + 1) / (s * (s + 1));
    p.y2 = (a * a * (a + 2) + 2 * b * a * (a + 1)) / (s * (s + 1) * (s + 2));
    p.joint = a * a * (a + 2) / (s * (s + 1) * (s + 2));
    p.product = p.y1 * p.y2;
    p.gap = p.joint - p.product;
    return p;
}

SwappedProbs swapped_model_probs()
{
    SwappedProbs p;
    p.y2 = {1, 4};
    p.y2_y3 = {1, 6};
    p.not_y2_y3 = {5, 36};
    p.y3 = {11, 36};  // 1/6 + 5/36
    p.product = {11, 144};
    return p;
}

//---------------------------------------------------------------------------//
// ENUMERATION ORACLE
//---------------------------------------------------------------------------//
template<class P>
std::vector<P> BasicExactDistribution<P>::marginal(int k) const
{
    if (k < 1 || k > dmax)
        throw std::out_of_range("string order outside 1..dmax");
    std::vector<P> pmf;
    for (std::size_t i = 0; i < support.size(); ++i)
    {
        auto j = static_cast<std::size_t>(support[i][k]);
        if (pmf.size() <= j)
            pmf.resize(j + 1, P(0));
        pmf[j] += probabilities[i];
    }
    return pmf;
}

template<class P>
P BasicExactDistribution<P>::total() const
{
    P sum(0);
    for (auto const& p : probabilities)
        sum += p;
    return sum;
}

template struct BasicExactDistribution<double>;
template struct BasicExactDistribution<Rational>;

namespace
{
void check_enumeration(SequenceModel model, int m, int dmax)
{
    if (model != SequenceModel::bern && model != SequenceModel::bern1)
        throw std::invalid_argument("enumeration needs the bern or bern1 model");
    if (m < 1)
        throw std::invalid_argument("enumeration horizon must be at least 1");
    if (m > max_enumeration_horizon)
        throw std::invalid_argument("enumeration horizon exceeds 2^24 budget");
    if (dmax < 1)
        throw std::invalid_argument("dmax must be at least 1");
}

// Depth-first walk over all 2^m strings; prefix probabilities are shared
// between siblings and zero-probability branches are skipped.
template<class P>
BasicExactDistribution<P>
enumerate_all(std::vector<P> const& p_one, int dmax)
{
    int const m = static_cast<int>(p_one.size());
    std::vector<P> p_zero;
    p_zero.reserve(p_one.size());
    for (auto const& p : p_one)
        p_zero.push_back(P(1) - p);

    std::map<std::vector<std::uint64_t>, P> acc;
    std::vector<std::uint64_t> key(static_cast<std::size_t>(dmax) + 1, 0);
    auto bucket = [dmax](int d) {
        return static_cast<std::size_t>(d <= dmax ? d - 1 : dmax);
    };

    auto walk = [&](auto& self, int pos, int last_one, P const& prob) -> void {
        if (pos == m)
        {
            auto [it, inserted] = acc.try_emplace(key, prob);
            if (!inserted)
                it->second += prob;
            return;
        }
        if (p_zero[pos] != P(0))
            self(self, pos + 1, last_one, P(prob * p_zero[pos]));
        if (p_one[pos] != P(0))
        {
            if (last_one > 0)
                ++key[bucket(pos + 1 - last_one)];
            self(self, pos + 1, pos + 1, P(prob * p_one[pos]));
            if (last_one > 0)
                --key[bucket(pos + 1 - last_one)];
        }
    };
    walk(walk, 0, 0, P(1));

    BasicExactDistribution<P> dist;
    dist.horizon = m;
    dist.dmax = dmax;
    for (auto const& [k, prob] : acc)
    {
        CountVector z(dmax);
        for (int d = 1; d <= dmax; ++d)
            z.add(static_cast<std::uint64_t>(d), k[static_cast<std::size_t>(d - 1)]);
        z.add(static_cast<std::uint64_t>(dmax) + 1, k.back());
        dist.support.push_back(std::move(z));
        dist.probabilities.push_back(prob);
    }
    return dist;
}
}  // namespace

ExactDistribution enumerate_truncated(double a, double b, SequenceModel model,
                                      int m, int dmax)
{
    check_bern_params(a, b);
    check_enumeration(model, m, dmax);
    std::vector<double> p_one;
    for (int t = 1; t <= m; ++t)
        p_one.push_back(success_probability(model, a, b, t));
    return enumerate_all(p_one, dmax);
}

RationalDistribution enumerate_truncated(Rational const& a, Rational const& b,
                                         SequenceModel model, int m, int dmax)
{
    if (a <= 0 || b < 0)
        throw std::invalid_argument("need a > 0 and b >= 0");
    check_enumeration(model, m, dmax);
    std::vector<Rational> p_one;
    for (int t = 1; t <= m; ++t)
    {
        if (model == SequenceModel::bern1 && t == 1)
            p_one.emplace_back(1);
        else
        {
            int shift = model == SequenceModel::bern ? t - 1 : t - 2;
            p_one.push_back(a / (a + b + shift));
        }
    }
    return enumerate_all(p_one, dmax);
}

//---------------------------------------------------------------------------//
// TRUNCATION
//---------------------------------------------------------------------------//
namespace
{
// sum_{d<=dmax} (a^2/d) sum_{n=N-d+1}^{N} 1/(c+n)
double telescoped_bound(double a, double c, int dmax, std::uint64_t n)
{
    if (dmax < 1)
        throw std::invalid_argument("dmax must be at least 1");
    if (n <= static_cast<std::uint64_t>(dmax))
        throw std::invalid_argument("bias bound needs N > dmax");
    double nd = static_cast<double>(n);
    if (!(c + nd - dmax + 1 > 0))
        throw std::invalid_argument("horizon too short for this model");
    double total = 0;
    for (int d = 1; d <= dmax; ++d)
    {
        double inner = 0;
        for (int i = 0; i < d; ++i)
            inner += 1 / (c + nd - i);
        total += a * a / d * inner;
    }
    return total;
}
}  // namespace

double truncation_bias_bound(double a, double b, int dmax, std::uint64_t n)
{
    check_bern_params(a, b);
    return telescoped_bound(a, a + b - 1, dmax, n);
}

double truncation_bias_bound(SequenceModel model, double a, double b,
                             int dmax, std::uint64_t n)
{
    check_bern_params(a, b);
    switch (model)
    {
        case SequenceModel::bern:
            return telescoped_bound(a, a + b - 1, dmax, n);
        case SequenceModel::bern1:
            return telescoped_bound(a, a + b - 2, dmax, n);
        default:
            throw std::invalid_argument("bias bound needs bern or bern1");
    }
}

std::uint64_t horizon_for_bias(SequenceModel model, double a, double b,
                               int dmax, double target)
{
    if (!(target > 0))
        throw std::invalid_argument("target bias must be positive");
    auto ok = [&](std::uint64_t n) {
        return truncation_bias_bound(model, a, b, dmax, n) <= target;
    };
    std::uint64_t lo = static_cast<std::uint64_t>(dmax) + 1;
    if (ok(lo))
        return lo;
    std::uint64_t hi = lo * 2;
    while (!ok(hi))
    {
        lo = hi;
        hi *= 2;
    }
    while (hi - lo > 1)
    {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (ok(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

//---------------------------------------------------------------------------//
}  // namespace bstrings
