//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file stats.cpp
//---------------------------------------------------------------------------//
#include "bstrings/stats.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace bstrings
{
namespace
{
//---------------------------------------------------------------------------//
constexpr double gamma_eps = 1e-15;
constexpr int gamma_max_iter = 100000;

double log_prefactor(double s, double x)
{
    return -x + s * std::log(x) - std::lgamma(s);
}

double gamma_p_series(double s, double x)
{
    double term = 1 / s;
    double sum = term;
    for (int n = 1; n < gamma_max_iter; ++n)
    {
        term *= x / (s + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * gamma_eps)
            break;
    }
    return sum * std::exp(log_prefactor(s, x));
}

// Modified Lentz evaluation of the continued fraction for Q(s, x).
double gamma_q_fraction(double s, double x)
{
    constexpr double tiny = std::numeric_limits<double>::min() / gamma_eps;
    double b = x + 1 - s;
    double c = 1 / tiny;
    double d = 1 / b;
    double h = d;
    for (int i = 1; i < gamma_max_iter; ++i)
    {
        double an = -i * (i - s);
        b += 2;
        d = an * d + b;
        if (std::abs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1) < gamma_eps)
            break;
    }
    return std::exp(log_prefactor(s, x)) * h;
}

void check_gamma_args(double s, double x)
{
    if (!(s > 0) || !(x >= 0))
        throw std::invalid_argument("incomplete gamma needs s > 0, x >= 0");
}

//---------------------------------------------------------------------------//
struct Cell
{
    std::string label;
    double observed = 0;
    double other = 0;
    double prob = 0;  // one-sample: cell probability
};

// Merge adjacent cells until weight(cell) >= min_expected_per_bin; a short
// remainder joins the previous bin.
template<class Weight>
std::vector<Cell> pool(std::vector<Cell> const& cells, Weight weight)
{
    std::vector<Cell> bins;
    Cell acc;
    bool open = false;
    auto merge = [](Cell& into, Cell const& c) {
        if (into.label.empty())
            into.label = c.label;
        else
        {
            auto dash = into.label.find("..");
            auto first = dash == std::string::npos ? into.label
                                                   : into.label.substr(0, dash);
            into.label = first + ".." + c.label;
        }
        into.observed += c.observed;
        into.other += c.other;
        into.prob += c.prob;
    };
    for (auto const& c : cells)
    {
        merge(acc, c);
        open = true;
        if (weight(acc) >= min_expected_per_bin)
        {
            bins.push_back(acc);
            acc = Cell{};
            open = false;
        }
    }
    if (open)
    {
        if (bins.empty())
            bins.push_back(acc);
        else
            merge(bins.back(), acc);
    }
    return bins;
}

GofResult finish(GofResult r)
{
    r.p_value = r.dof > 0 ? chi2_sf(r.statistic, r.dof) : 1.0;
    r.pass = r.p_value > r.alpha;
    return r;
}

void check_size(std::size_t n)
{
    if (n < min_sample_size)
        throw std::invalid_argument("statistical tests need at least 1000 "
                                    "samples");
}

GofResult gof_from_cells(std::vector<Cell> const& cells, std::size_t n,
                         double alpha)
{
    double nd = static_cast<double>(n);
    auto bins = pool(cells, [nd](Cell const& c) { return c.prob * nd; });
    if (bins.size() < 2)
        throw std::invalid_argument("fewer than 2 bins after pooling");

    GofResult r;
    r.alpha = alpha;
    r.sample_size = n;
    for (auto const& b : bins)
    {
        double e = b.prob * nd;
        if (e > 0)
            r.statistic += (b.observed - e) * (b.observed - e) / e;
        else if (b.observed > 0)
            r.statistic = INFINITY;
        r.bins.push_back({b.label, b.observed, e, NAN});
    }
    r.dof = static_cast<int>(bins.size()) - 1;
    return finish(std::move(r));
}

GofResult homogeneity_from_cells(std::vector<Cell> const& cells,
                                 double n_a, double n_b, double alpha)
{
    double total = n_a + n_b;
    auto bins = pool(cells, [&](Cell const& c) {
        double combined = c.observed + c.other;
        return std::min(combined * n_a, combined * n_b) / total;
    });
    if (bins.size() < 2)
        throw std::invalid_argument("fewer than 2 bins after pooling");

    GofResult r;
    r.alpha = alpha;
    r.sample_size = static_cast<std::size_t>(total);
    for (auto const& b : bins)
    {
        double combined = b.observed + b.other;
        double ea = combined * n_a / total;
        double eb = combined * n_b / total;
        if (ea > 0)
            r.statistic += (b.observed - ea) * (b.observed - ea) / ea;
        if (eb > 0)
            r.statistic += (b.other - eb) * (b.other - eb) / eb;
        r.bins.push_back({b.label, b.observed, ea, b.other});
    }
    r.dof = static_cast<int>(bins.size()) - 1;
    return finish(std::move(r));
}

std::vector<double> histogram(std::span<std::uint64_t const> samples,
                              std::size_t size)
{
    std::vector<double> h(size, 0.0);
    for (auto x : samples)
        h[static_cast<std::size_t>(x)] += 1;
    return h;
}

}  // namespace

//---------------------------------------------------------------------------//
double regularized_gamma_p(double s, double x)
{
    check_gamma_args(s, x);
    if (x == 0)
        return 0;
    if (x < s + 1)
        return gamma_p_series(s, x);
    return 1 - gamma_q_fraction(s, x);
}

double regularized_gamma_q(double s, double x)
{
    check_gamma_args(s, x);
    if (x == 0)
        return 1;
    if (x < s + 1)
        return 1 - gamma_p_series(s, x);
    return gamma_q_fraction(s, x);
}

double chi2_cdf(double x, double dof)
{
    return regularized_gamma_p(dof / 2, std::max(0.0, x) / 2);
}

double chi2_sf(double x, double dof)
{
    if (std::isinf(x))
        return 0;
    return regularized_gamma_q(dof / 2, std::max(0.0, x) / 2);
}

//---------------------------------------------------------------------------//
GofResult chi2_gof(std::span<std::uint64_t const> samples,
                   std::function<double(std::uint64_t)> const& pmf,
                   double alpha)
{
    check_size(samples.size());
    std::uint64_t top = *std::max_element(samples.begin(), samples.end());
    auto counts = histogram(samples, static_cast<std::size_t>(top) + 1);

    std::vector<Cell> cells;
    double head = 0;
    for (std::uint64_t j = 0; j < top; ++j)
    {
        double p = pmf(j);
        head += p;
        cells.push_back({std::to_string(j), counts[j], 0, p});
    }
    cells.push_back({">=" + std::to_string(top), counts[top], 0,
                     std::max(0.0, 1 - head)});
    return gof_from_cells(cells, samples.size(), alpha);
}

GofResult chi2_gof_categorical(std::span<std::uint64_t const> observed,
                               std::span<double const> probabilities,
                               std::vector<std::string> labels, double alpha)
{
    if (observed.size() != probabilities.size())
        throw std::invalid_argument("observed and probability sizes differ");
    std::uint64_t n = 0;
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < observed.size(); ++i)
    {
        n += observed[i];
        cells.push_back({i < labels.size() ? labels[i] : std::to_string(i),
                         static_cast<double>(observed[i]), 0,
                         probabilities[i]});
    }
    check_size(n);
    return gof_from_cells(cells, n, alpha);
}

GofResult two_sample_counts(std::span<std::uint64_t const> samples_a,
                            std::span<std::uint64_t const> samples_b,
                            double alpha)
{
    check_size(samples_a.size());
    check_size(samples_b.size());
    std::uint64_t top = std::max(
        *std::max_element(samples_a.begin(), samples_a.end()),
        *std::max_element(samples_b.begin(), samples_b.end()));
    auto size = static_cast<std::size_t>(top) + 1;
    auto ha = histogram(samples_a, size);
    auto hb = histogram(samples_b, size);
    std::vector<Cell> cells;
    for (std::size_t j = 0; j < size; ++j)
        cells.push_back({std::to_string(j), ha[j], hb[j], 0});
    return homogeneity_from_cells(cells,
                                  static_cast<double>(samples_a.size()),
                                  static_cast<double>(samples_b.size()),
                                  alpha);
}

GofResult two_sample_categorical(std::span<std::uint64_t const> observed_a,
                                 std::span<std::uint64_t const> observed_b,
                                 std::vector<std::string> labels, double alpha)
{
    if (observed_a.size() != observed_b.size())
        throw std::invalid_argument("category vectors differ in size");
    double na = 0;
    double nb = 0;
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < observed_a.size(); ++i)
    {
        auto oa = static_cast<double>(observed_a[i]);
        auto ob = static_cast<double>(observed_b[i]);
        na += oa;
        nb += ob;
        cells.push_back(
            {i < labels.size() ? labels[i] : std::to_string(i), oa, ob, 0});
    }
    check_size(static_cast<std::size_t>(na));
    check_size(static_cast<std::size_t>(nb));
    return homogeneity_from_cells(cells, na, nb, alpha);
}

//---------------------------------------------------------------------------//
MomentTest moment_test(std::span<double const> samples,
                       double theoretical_mean, double theoretical_var,
                       double z_max)
{
    check_size(samples.size());
    if (!(theoretical_var >= 0))
        throw std::invalid_argument("theoretical variance must be >= 0");
    auto n = static_cast<double>(samples.size());

    double mean = 0;
    for (double x : samples)
        mean += x;
    mean /= n;
    double m2 = 0;
    double m4 = 0;
    for (double x : samples)
    {
        double d = (x - mean) * (x - mean);
        m2 += d;
        m4 += d * d;
    }
    double var = m2 / (n - 1);
    m4 /= n;

    MomentTest t;
    t.sample_size = samples.size();
    t.empirical_mean = mean;
    t.empirical_var = var;
    t.theoretical_mean = theoretical_mean;
    t.theoretical_var = theoretical_var;
    t.z_max = z_max;

    if (theoretical_var == 0)
    {
        if (m2 > 0)
            throw std::invalid_argument(
                "zero theoretical variance but the sample is not constant");
        t.z_mean = mean == theoretical_mean ? 0 : INFINITY;
        t.z_var = 0;
    }
    else
    {
        t.z_mean = (mean - theoretical_mean) / std::sqrt(theoretical_var / n);
        double var_se = std::sqrt(std::max(0.0, m4 - var * var) / n);
        if (var_se > 0)
            t.z_var = (var - theoretical_var) / var_se;
        else
            t.z_var = var == theoretical_var ? 0 : INFINITY;
    }
    t.pass = std::abs(t.z_mean) <= z_max && std::abs(t.z_var) <= z_max;
    return t;
}

MomentTest moment_test(std::span<std::uint64_t const> samples,
                       double theoretical_mean, double theoretical_var,
                       double z_max)
{
    std::vector<double> values(samples.begin(), samples.end());
    return moment_test(std::span<double const>(values), theoretical_mean,
                       theoretical_var, z_max);
}

//---------------------------------------------------------------------------//
DispersionTest dispersion_test(std::span<std::uint64_t const> samples,
                               double theoretical, double z_max)
{
    check_size(samples.size());
    auto n = static_cast<double>(samples.size());
    double mean = 0;
    for (auto x : samples)
        mean += static_cast<double>(x);
    mean /= n;
    double m2 = 0;
    for (auto x : samples)
    {
        double d = static_cast<double>(x) - mean;
        m2 += d * d;
    }
    double var = m2 / (n - 1);

    double psi_sq = 0;
    for (auto x : samples)
    {
        double d = static_cast<double>(x) - mean;
        double psi = d * d - var - d;
        psi_sq += psi * psi;
    }

    DispersionTest t;
    t.sample_size = samples.size();
    t.empirical = var - mean;
    t.theoretical = theoretical;
    t.std_error = std::sqrt(psi_sq / (n - 1) / n);
    t.z_max = z_max;
    if (t.std_error > 0)
    {
        t.z_theory = (t.empirical - theoretical) / t.std_error;
        t.z_zero = t.empirical / t.std_error;
    }
    else
    {
        t.z_theory = t.empirical == theoretical ? 0 : INFINITY;
        t.z_zero = t.empirical == 0 ? 0 : INFINITY;
    }
    t.pass = std::abs(t.z_theory) <= z_max;
    return t;
}

//---------------------------------------------------------------------------//
ProportionTest proportion_test(std::size_t successes, std::size_t trials,
                               double p, double z_max)
{
    check_size(trials);
    if (successes > trials)
        throw std::invalid_argument("more successes than trials");
    if (!(p >= 0 && p <= 1))
        throw std::invalid_argument("probability outside [0, 1]");
    ProportionTest t;
    t.successes = successes;
    t.trials = trials;
    t.empirical = static_cast<double>(successes) / static_cast<double>(trials);
    t.theoretical = p;
    t.z_max = z_max;
    double sigma = std::sqrt(p * (1 - p) / static_cast<double>(trials));
    if (sigma > 0)
        t.z = (t.empirical - p) / sigma;
    else
        t.z = t.empirical == p ? 0 : INFINITY;
    t.pass = std::abs(t.z) <= z_max;
    return t;
}

//---------------------------------------------------------------------------//
double tv_distance(std::span<double const> p, std::span<double const> q)
{
    std::size_t n = std::max(p.size(), q.size());
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        double pi = i < p.size() ? p[i] : 0.0;
        double qi = i < q.size() ? q[i] : 0.0;
        sum += std::abs(pi - qi);
    }
    return std::min(1.0, sum / 2);
}

std::vector<double> empirical_pmf(std::span<std::uint64_t const> samples)
{
    if (samples.empty())
        return {};
    std::uint64_t top = *std::max_element(samples.begin(), samples.end());
    auto h = histogram(samples, static_cast<std::size_t>(top) + 1);
    for (auto& v : h)
        v /= static_cast<double>(samples.size());
    return h;
}

//---------------------------------------------------------------------------//
}  // namespace bstrings
