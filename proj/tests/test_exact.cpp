//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#include <cmath>
#include <map>

#include <doctest.h>

#include "bstrings/exact.hpp"
#include "bstrings/quadrature.hpp"
#include "oracles.hpp"

using namespace bstrings;
using doctest::Approx;

namespace
{
//! Probability of a gap pattern as the plain product of marginals.
double pattern_product(std::vector<std::uint64_t> const& gaps,
                       std::function<double(std::uint64_t)> const& p)
{
    std::uint64_t end = 0;
    std::vector<bool> one;
    for (auto g : gaps)
    {
        end += g;
        one.resize(end, false);
        one[end - 1] = true;
    }
    long double prob = 1;
    for (std::uint64_t n = 1; n <= end; ++n)
        prob *= one[n - 1] ? p(n) : 1 - p(n);
    return static_cast<double>(prob);
}

double rel_diff(double x, double y)
{
    return std::abs(x - y) / std::max(std::abs(x), std::abs(y));
}
}  // namespace

//---------------------------------------------------------------------------//
TEST_CASE("beta function")
{
    CHECK(beta_fn(1, 1) == Approx(1.0).epsilon(1e-14));
    CHECK(beta_fn(2, 2) == Approx(1.0 / 6).epsilon(1e-14));
    CHECK(beta_fn(0.7, 2.5) / beta_fn(0.7, 1.5)
          == Approx(1.5 / 2.2).epsilon(1e-13));
    CHECK(beta_fn(0.7, 2.5) == Approx(std::beta(0.7, 2.5)).epsilon(1e-13));
    CHECK(log_beta_fn(300, 400) == Approx(std::lgamma(300.0) + std::lgamma(400.0)
                                          - std::lgamma(700.0))
                                       .epsilon(1e-13));
    CHECK_THROWS_AS(beta_fn(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(beta_fn(1, -2), std::invalid_argument);
}

TEST_CASE("cylinder pattern bookkeeping")
{
    CylinderPattern p({2, 1, 3});
    CHECK(p.order() == 2);
    CHECK(p.length() == 6);
    CHECK(std::vector<std::uint64_t>(p.partial_sums().begin(),
                                     p.partial_sums().end())
          == std::vector<std::uint64_t>{2, 3, 6});
    CHECK_THROWS_AS(CylinderPattern({1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(CylinderPattern({}), std::invalid_argument);
}

TEST_CASE("cylinder probabilities: hand values")
{
    CHECK(cylinder_prob_product(2, 3, CylinderPattern({1}))
          == Approx(0.4).epsilon(1e-14));
    CHECK(cylinder_prob_product(1, 1, CylinderPattern({1, 1}))
          == Approx(1.0 / 6).epsilon(1e-14));
    CHECK(cylinder_prob_integral(1, 1, CylinderPattern({1, 1}))
          == Approx(1.0 / 6).epsilon(1e-14));
    CHECK(cylinder_prob_integral(1.5, 0.7, CylinderPattern({1}))
          == Approx(1.5 / 2.2).epsilon(1e-13));
    CHECK_THROWS_AS(cylinder_prob_integral(1, 0, CylinderPattern({1})),
                    std::invalid_argument);

    CHECK(cylinder_prob_bern1(0.8, 1.9, CylinderPattern({1})) == 1.0);
    CHECK(cylinder_prob_bern1(1, 2, CylinderPattern({1, 1}))
          == Approx(1.0 / 3).epsilon(1e-14));
    CHECK(cylinder_prob_bern1(1, 2, CylinderPattern({1, 2}))
          == Approx(1.0 / 6).epsilon(1e-14));
    CHECK_THROWS_AS(cylinder_prob_bern1(1, 2, CylinderPattern({2, 1})),
                    std::invalid_argument);
}

TEST_CASE("cylinder product and integral forms agree")
{
    RandomStream s(2718);
    for (int trial = 0; trial < 200; ++trial)
    {
        double a = 0.05 + 5 * s.uniform();
        double b = 0.05 + 5 * s.uniform();
        std::vector<std::uint64_t> gaps(1 + s.index(8));
        for (auto& g : gaps)
            g = 1 + s.index(40);
        CylinderPattern pat(gaps);
        double prod = cylinder_prob_product(a, b, pat);
        double integ = cylinder_prob_integral(a, b, pat);
        CAPTURE(a);
        CAPTURE(b);
        CHECK(rel_diff(prod, integ) < 1e-10);
        double naive = pattern_product(
            gaps, [&](std::uint64_t n) { return oracle::bern_p(a, b, n); });
        CHECK(rel_diff(prod, naive) < 1e-10);
        if (gaps[0] == 1)
        {
            double b1 = pattern_product(gaps, [&](std::uint64_t n) {
                return oracle::bern1_p(a, b, n);
            });
            CHECK(rel_diff(cylinder_prob_bern1(a, b, pat), b1) < 1e-10);
        }
    }
}

TEST_CASE("cylinder integral form tends to the b = 0 product form")
{
    CylinderPattern pat({1, 2, 1, 4});
    double at_zero = cylinder_prob_product(1.3, 0, pat);
    CHECK(rel_diff(cylinder_prob_integral(1.3, 1e-9, pat), at_zero) < 1e-7);
}

//---------------------------------------------------------------------------//
TEST_CASE("second-success pmf")
{
    CHECK(second_success_pmf(2.5, 0, 2) == 1.0);
    CHECK(second_success_pmf(2.5, 0, 3) == 0.0);
    CHECK(second_success_pmf(1, 1, 3) == Approx(1.0 / 6).epsilon(1e-14));
    CHECK(second_success_pmf(1, 2, 2) == Approx(1.0 / 3).epsilon(1e-14));
    CHECK_THROWS_AS(second_success_pmf(1, 1, 1), std::invalid_argument);

    // Direct product formula as the oracle.
    for (auto [a, b] : {std::pair{0.4, 0.3}, {1.0, 2.0}, {3.5, 0.9}})
    {
        long double prod = 1;
        for (std::uint64_t n = 2; n <= 60; ++n)
        {
            if (n >= 3)
                prod *= (b + n - 3) / (a + b + n - 3);
            double expect = static_cast<double>(a / (a + b + n - 2) * prod);
            CHECK(second_success_pmf(a, b, n)
                  == Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("second-success pmf normalization for a=1, b=2")
{
    // Here p_n = 2/(n(n+1)), so the tail beyond N is exactly 2/(N+1).
    std::uint64_t const cutoff = 1'000'000;
    long double partial = 0;
    for (std::uint64_t n = 2; n <= cutoff; ++n)
        partial += second_success_pmf(1, 2, n);
    double tail = 2.0 / (cutoff + 1);
    CHECK(std::abs(double(partial) + tail - 1) < 1e-12);
    CHECK(1 - double(partial) == Approx(tail).epsilon(1e-6));
}

//---------------------------------------------------------------------------//
TEST_CASE("Z1 overdispersion closed form")
{
    CHECK(overdispersion_z1(2.3, 1) == 0.0);
    CHECK(overdispersion_z1(1, 2) == Approx(1.0 / 18).epsilon(1e-14));
    CHECK(overdispersion_z1(1, 0.5) == Approx(-1 / 5.625).epsilon(1e-14));
    for (double a : {0.2, 1.0, 4.0})
    {
        CHECK(overdispersion_z1(a, 0.5) < 0);
        CHECK(overdispersion_z1(a, 2) > 0);
    }
}

TEST_CASE("Z1 moments match a series over independent indicators")
{
    for (auto [a, b] : {std::pair{1.0, 0.5}, {1.0, 2.0}, {2.0, 3.0},
                        {0.6, 1.4}, {3.0, 0.2}})
    {
        CAPTURE(a);
        CAPTURE(b);
        auto m = bern1_z1_moments(a, b);
        auto series = oracle::bern1_z1_series(a, b);
        CHECK(m.mean == Approx(a * (a + 1) / (a + b)).epsilon(1e-13));
        CHECK(m.mean == Approx(series.mean).epsilon(1e-9));
        CHECK(m.variance == Approx(series.variance).epsilon(1e-6));
        CHECK(m.second_moment - m.mean * m.mean
              == Approx(m.variance).epsilon(1e-13));
        CHECK(m.overdispersion
              == Approx(overdispersion_z1(a, b)).epsilon(1e-12));
    }
}

//---------------------------------------------------------------------------//
TEST_CASE("mixing laws of the sequence models")
{
    CHECK(mixing_law_for(SequenceModel::bern, 1, 0).is_point_mass());
    auto bern = mixing_law_for(SequenceModel::bern, 2, 3);
    CHECK(bern.alpha() == 3);
    CHECK(bern.beta() == 2);
    CHECK(mixing_law_for(SequenceModel::bern1, 2, 1).is_point_mass());
    auto b1 = mixing_law_for(SequenceModel::bern1, 2, 3);
    CHECK(b1.alpha() == 2);
    CHECK(b1.beta() == 3);
    CHECK_THROWS_AS(mixing_law_for(SequenceModel::bern1, 1, 0.5),
                    std::invalid_argument);
}

TEST_CASE("conditional intensity is the thinned mark integral")
{
    for (double x0 : {0.0, 0.3, 0.9})
    {
        for (int k : {1, 2, 5})
        {
            double a = 1.7;
            double integral = oracle::integrate(
                [&](double x) {
                    return a / (1 - x) * std::pow(x, k - 1) * (1 - x);
                },
                x0, 1.0);
            CHECK(conditional_intensity(a, k, x0)
                  == Approx(integral).epsilon(1e-12));
        }
    }
    CHECK(conditional_intensity(2, 3, 0) == Approx(2.0 / 3));
    CHECK(conditional_intensity(2, 3, 1) == 0.0);
}

TEST_CASE("mixture pmf closed forms")
{
    auto point = MixingLaw::point_mass_at_zero();
    CHECK(mixture_pmf(1, point, 2, 0)
          == Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK(mixture_pmf(1, MixingLaw::beta(1, 1), 1, 0)
          == Approx(1 - std::exp(-1.0)).epsilon(1e-10));
    CHECK(std::abs(mixture_pmf(1, MixingLaw::beta(1, 1), 1, 0)
                   - (1 - std::exp(-1.0)))
          < 1e-9);
    CHECK(mixture_pmf(3, MixingLaw::point_mass(1.0), 2, 0) == 1.0);
    CHECK(mixture_pmf(3, MixingLaw::point_mass(1.0), 2, 1) == 0.0);

    double total = 0;
    for (std::uint64_t j = 0; j <= 50; ++j)
        total += mixture_pmf(2, MixingLaw::beta(3, 2), 1, j);
    CHECK(std::abs(total - 1) < 1e-10);
}

TEST_CASE("mixture pmf against tanh-sinh quadrature")
{
    struct Case
    {
        double a, alpha, beta;
        int k;
    };
    for (auto c : {Case{1, 1, 1, 1}, Case{2, 3, 2, 1}, Case{0.7, 0.3, 2.0, 2},
                   Case{1.5, 2.0, 0.4, 3}, Case{3, 0.5, 0.5, 1},
                   Case{1, 5, 1, 4}})
    {
        auto mix = MixingLaw::beta(c.alpha, c.beta);
        for (std::uint64_t j = 0; j <= 6; ++j)
        {
            double ref = oracle::beta_expectation(
                c.alpha, c.beta, [&](double x) {
                    return oracle::poisson_pmf(
                        c.a * (1 - std::pow(x, c.k)) / c.k, j);
                });
            CAPTURE(c.alpha);
            CAPTURE(c.beta);
            CAPTURE(j);
            CHECK(mixture_pmf(c.a, mix, c.k, j) == Approx(ref).epsilon(1e-8));
        }
    }
}

TEST_CASE("mixture moments")
{
    auto point = MixingLaw::point_mass_at_zero();
    auto m = mixture_moments(3, point, 2);
    CHECK(m.mean == Approx(1.5));
    CHECK(m.variance == Approx(1.5));
    CHECK(mixture_moments(1, MixingLaw::beta(1, 1), 1).mean == Approx(0.5));

    for (auto mix : {MixingLaw::beta(1, 1), MixingLaw::beta(0.4, 2.2),
                     MixingLaw::beta(3, 0.6)})
    {
        for (int k = 1; k <= 4; ++k)
        {
            double a = 1.8;
            double s0 = 0, s1 = 0, s2 = 0;
            for (std::uint64_t j = 0; j <= 60; ++j)
            {
                double p = mixture_pmf(a, mix, k, j);
                s0 += p;
                s1 += p * j;
                s2 += p * double(j) * j;
            }
            auto mm = mixture_moments(a, mix, k);
            CHECK(std::abs(s0 - 1) < 1e-10);
            CHECK(std::abs(s1 - mm.mean) < 1e-8);
            CHECK(std::abs(s2 - s1 * s1 - mm.variance) < 1e-8);
            CHECK(mm.variance >= mm.mean);
        }
    }
}

//---------------------------------------------------------------------------//
TEST_CASE("plus model probabilities")
{
    auto p = plus_model_probs(1, 1);
    CHECK(p.y1 == Approx(1.0 / 3).epsilon(1e-14));
    CHECK(p.joint == Approx(1.0 / 8).epsilon(1e-14));
    CHECK(p.y2 == Approx(7.0 / 24).epsilon(1e-14));
    CHECK(p.product == Approx(p.y1 * p.y2));
    CHECK(p.gap == Approx(p.joint - p.product));
    CHECK_THROWS_AS(plus_model_probs(1, 0), std::invalid_argument);

    // Condition on X0 = x: L0 has pmf k x^(k-1)(1-x)^2 and the first point
    // X1 has density a (1-u)^(a-1) / (1-x)^a on (x, 1), so
    // E[1 - X1 | x] = a (1 - x) / (a + 1).
    for (auto [a, b] : {std::pair{1.0, 1.0}, {2.0, 3.0}, {0.5, 0.7}})
    {
        auto q = plus_model_probs(a, b);
        double y1 = oracle::beta_expectation(
            b, a, [](double x) { return (1 - x) * (1 - x); });
        double joint = oracle::beta_expectation(b, a, [&](double x) {
            return (1 - x) * (1 - x) * a * (1 - x) / (a + 1);
        });
        double two = oracle::beta_expectation(
            b, a, [](double x) { return 2 * x * (1 - x) * (1 - x); });
        CHECK(q.y1 == Approx(y1).epsilon(1e-10));
        CHECK(q.joint == Approx(joint).epsilon(1e-10));
        CHECK(q.y2 == Approx(two + joint).epsilon(1e-10));
        CHECK(q.gap != 0);
    }
}

TEST_CASE("swapped model constants")
{
    auto p = swapped_model_probs();
    CHECK(p.y2 == Fraction{1, 4});
    CHECK(p.y2_y3 == Fraction{1, 6});
    CHECK(p.not_y2_y3 == Fraction{5, 36});
    CHECK(p.y3 == Fraction{11, 36});
    CHECK(p.product == Fraction{11, 144});

    // With v_i = 1 - X_i for the first two points of the unit-rate process
    // from 0, (v1, v2) has density 1/v1 on 0 < v2 < v1 < 1. After the swap
    // the second bit is the mark of X2 and the third needs L(X2) = 2 or
    // L(X2) = L(X1) = 1.
    auto expect = [](std::function<double(double, double)> f) {
        return oracle::integrate(
            [&](double v1) {
                return oracle::integrate(
                           [&](double v2) { return f(v1, v2); }, 0.0, v1)
                       / v1;
            },
            0.0, 1.0);
    };
    double y2 = expect([](double, double v2) { return v2; });
    double y23 = expect([](double v1, double v2) { return v1 * v2; });
    double not23 = expect([](double, double v2) { return (1 - v2) * v2; });
    CHECK(p.y2.value() == Approx(y2).epsilon(1e-12));
    CHECK(p.y2_y3.value() == Approx(y23).epsilon(1e-12));
    CHECK(p.not_y2_y3.value() == Approx(not23).epsilon(1e-12));
    CHECK(p.y3.value() == Approx(y23 + not23).epsilon(1e-12));
    CHECK(p.product.value() == Approx(y2 * (y23 + not23)).epsilon(1e-12));
}

//---------------------------------------------------------------------------//
TEST_CASE("enumeration oracle: small horizons")
{
    auto one = enumerate_truncated(1.0, 1.0, SequenceModel::bern, 1, 3);
    REQUIRE(one.support.size() == 1);
    CHECK(one.support[0].total() == 0);
    CHECK(one.probabilities[0] == Approx(1.0));

    auto two = enumerate_truncated(1.0, 1.0, SequenceModel::bern, 2, 3);
    auto z1 = two.marginal(1);
    REQUIRE(z1.size() >= 2);
    CHECK(z1[1] == Approx(1.0 / 6).epsilon(1e-14));

    CHECK_THROWS_AS(enumerate_truncated(1.0, 1.0, SequenceModel::bern,
                                        max_enumeration_horizon + 1, 3),
                    std::invalid_argument);
}

TEST_CASE("enumeration oracle: rational arithmetic is exact")
{
    Rational a(2), b(1);
    auto exact = enumerate_truncated(a, b, SequenceModel::bern, 10, 4);
    CHECK(exact.total() == Rational(1));
    auto z1 = exact.marginal(1);
    Rational mean(0);
    for (std::size_t j = 0; j < z1.size(); ++j)
        mean += z1[j] * j;
    // E[Z1] over the window is sum_{n<m} P(Y_n=1) P(Y_{n+1}=1).
    Rational expect(0);
    for (int n = 1; n < 10; ++n)
        expect += (a / (a + b + n - 1)) * (a / (a + b + n));
    CHECK(mean == expect);

    auto approx = enumerate_truncated(2.0, 1.0, SequenceModel::bern, 10, 4);
    REQUIRE(approx.support == exact.support);
    for (std::size_t i = 0; i < approx.support.size(); ++i)
    {
        CHECK(approx.probabilities[i]
              == Approx(exact.probabilities[i].convert_to<double>())
                     .epsilon(1e-12));
    }
    CHECK(std::abs(approx.total() - 1) < 1e-12);
}

TEST_CASE("enumeration oracle matches brute force over bit strings")
{
    for (auto model : {SequenceModel::bern, SequenceModel::bern1})
    {
        int const m = 9, dmax = 3;
        double const a = 1.4, b = 0.6;
        auto dist = enumerate_truncated(a, b, model, m, dmax);
        std::map<std::vector<std::uint64_t>, double> brute;
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask)
        {
            std::vector<std::uint8_t> bits(m);
            double p = 1;
            for (int i = 0; i < m; ++i)
            {
                bits[i] = (mask >> i) & 1;
                double q = model == SequenceModel::bern
                               ? oracle::bern_p(a, b, i + 1)
                               : oracle::bern1_p(a, b, i + 1);
                p *= bits[i] ? q : 1 - q;
            }
            if (p == 0)
                continue;
            auto z = oracle::scan_strings(bits);
            std::vector<std::uint64_t> key(dmax + 1, 0);
            for (auto [d, c] : z)
                key[d <= dmax ? d - 1 : dmax] += c;
            brute[key] += p;
        }
        std::map<std::vector<std::uint64_t>, double> got;
        for (std::size_t i = 0; i < dist.support.size(); ++i)
        {
            auto const& s = dist.support[i];
            std::vector<std::uint64_t> key(s.counts().begin(),
                                           s.counts().end());
            key.push_back(s.overflow());
            got[key] += dist.probabilities[i];
        }
        REQUIRE(got.size() == brute.size());
        for (auto const& [key, p] : brute)
            CHECK(got[key] == Approx(p).epsilon(1e-12));
    }
}

//---------------------------------------------------------------------------//
TEST_CASE("truncation bias bound")
{
    // a = 1, b = 0, dmax = 1 telescopes to exactly 1/N.
    for (std::uint64_t n : {2ull, 10ull, 1000ull})
        CHECK(truncation_bias_bound(1, 0, 1, n) == Approx(1.0 / n));

    double prev = INFINITY;
    for (std::uint64_t n = 6; n < 5000; n += 97)
    {
        double v = truncation_bias_bound(1.5, 0.5, 5, n);
        CHECK(v < prev);
        prev = v;
    }

    // Direct double sum with a telescoped remainder.
    for (auto [a, b] : {std::pair{1.0, 0.0}, {2.0, 3.0}, {0.5, 0.25}})
    {
        int const dmax = 4;
        std::uint64_t const n = 50;
        long double direct = 0;
        std::uint64_t const stop = 200'000;
        for (int d = 1; d <= dmax; ++d)
        {
            for (std::uint64_t k = n - d + 1; k <= stop; ++k)
                direct += a * a / ((a + b + k - 1) * (a + b + k + d - 1));
            direct += a * a / (a + b + stop);  // about sum_{k>stop} a^2/k^2
        }
        CHECK(truncation_bias_bound(a, b, dmax, n)
              == Approx(double(direct)).epsilon(1e-4));
    }

    // Bern1 tail marginals are those of Bern(a, b - 1).
    CHECK(truncation_bias_bound(SequenceModel::bern1, 1, 2, 3, 40)
          == Approx(truncation_bias_bound(1, 1, 3, 40)));
}

TEST_CASE("horizon for a bias target is the smallest sufficient one")
{
    for (auto model : {SequenceModel::bern, SequenceModel::bern1})
    {
        for (double target : {1e-1, 1e-2, 1e-4})
        {
            int const dmax = 5;
            auto n = horizon_for_bias(model, 1, 2, dmax, target);
            CHECK(n > std::uint64_t(dmax));
            CHECK(truncation_bias_bound(model, 1, 2, dmax, n) <= target);
            if (n > std::uint64_t(dmax) + 1)
                CHECK(truncation_bias_bound(model, 1, 2, dmax, n - 1)
                      > target);
        }
    }
    CHECK(horizon_for_bias(SequenceModel::bern, 1, 0, 5, 1e-2) == 502);
}

//---------------------------------------------------------------------------//
TEST_CASE("gauss-legendre quadrature")
{
    auto r = integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
    CHECK(r.value == Approx(std::exp(1.0) - 1).epsilon(1e-14));
    auto s = integrate_beta(0.5, 0.5, [](double) { return 1.0; });
    CHECK(s.value == Approx(1.0).epsilon(1e-10));
    auto t = integrate_beta(0.3, 0.2, [](double x) { return x; });
    CHECK(t.value == Approx(0.3 / 0.5).epsilon(1e-9));
}
