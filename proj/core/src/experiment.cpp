//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file experiment.cpp
//---------------------------------------------------------------------------//
#include "bstrings/experiment.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>

#include "bstrings/cmpp.hpp"
#include "bstrings/exact.hpp"
#include "bstrings/parallel.hpp"
#include "bstrings/random.hpp"
#include "bstrings/sequences.hpp"
#include "bstrings/stats.hpp"

#ifndef BSTRINGS_VERSION
#    define BSTRINGS_VERSION "0.0.0"
#endif

namespace bstrings
{
namespace
{
//---------------------------------------------------------------------------//
constexpr std::array<std::pair<Experiment, std::string_view>, 10> names{{
    {Experiment::bern_counts, "bern-counts"},
    {Experiment::bern1_counts, "bern1-counts"},
    {Experiment::bern1_recurrence, "bern1-recurrence"},
    {Experiment::cmpp_equivalence, "cmpp-equivalence"},
    {Experiment::plus_dependence, "plus-dependence"},
    {Experiment::swapped_dependence, "swapped-dependence"},
    {Experiment::feller_cycles, "feller-cycles"},
    {Experiment::feller_uniformity, "feller-uniformity"},
    {Experiment::enumeration_oracle, "enumeration-oracle"},
    {Experiment::mixture_tables, "mixture-tables"},
}};

constexpr std::array<Experiment, 10> experiment_list{
    Experiment::bern_counts,        Experiment::bern1_counts,
    Experiment::bern1_recurrence,   Experiment::cmpp_equivalence,
    Experiment::plus_dependence,    Experiment::swapped_dependence,
    Experiment::feller_cycles,      Experiment::feller_uniformity,
    Experiment::enumeration_oracle, Experiment::mixture_tables,
};

// Substream labels; each sampler in an experiment draws from its own family
// of replicate streams.
enum Substream : std::uint64_t
{
    primary = 1,
    secondary = 2,
};

constexpr std::uint64_t retry_salt = 0x5eed5eed5eed5eedULL;

//! Replicate stream r of a substream.
RandomStream replicate_stream(std::uint64_t seed, Substream s, std::uint64_t r)
{
    return RandomStream(child_seed(child_seed(seed, s), r));
}

struct Defaults
{
    double a;
    double b;
    std::uint64_t n;  // 0: chosen from the bias target
    int dmax;
    double bias_target;
};

Defaults defaults_for(Experiment e)
{
    switch (e)
    {
        case Experiment::bern_counts:
            return {1, 0, 0, 5, 1e-2};
        case Experiment::bern1_counts:
            return {1, 2, 0, 4, 1e-4};
        case Experiment::bern1_recurrence:
            return {1, 0.5, 0, 4, 1e-4};
        case Experiment::cmpp_equivalence:
            return {1, 2, 6, 4, 1e-2};
        case Experiment::plus_dependence:
            return {1, 1, 2, 4, 1e-2};
        case Experiment::swapped_dependence:
            return {1, 0, 3, 4, 1e-2};
        case Experiment::feller_cycles:
            return {1, 0, 200, 5, 1e-2};
        case Experiment::feller_uniformity:
            return {1, 0, 4, 5, 1e-2};
        case Experiment::enumeration_oracle:
            return {2, 1, 12, 4, 1e-2};
        case Experiment::mixture_tables:
            return {1, 1, 0, 5, 1e-2};
    }
    return {1, 0, 0, 5, 1e-2};
}

void require(bool ok, std::string const& message)
{
    if (!ok)
        throw ConfigError(message);
}

//---------------------------------------------------------------------------//
// TEST RECORD HELPERS
//---------------------------------------------------------------------------//
double normal_two_sided(double z)
{
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

struct Outcome
{
    std::vector<Reference> references;
    std::vector<Summary> summaries;
    std::vector<TestRecord> tests;

    void reference(std::string name, double value, std::string provenance)
    {
        references.push_back({std::move(name), value, std::move(provenance)});
    }
    void summary(std::string name, double value)
    {
        summaries.push_back({std::move(name), value});
    }

    void gof(std::string name, GofResult const& g, std::string provenance)
    {
        TestRecord t;
        t.name = std::move(name);
        t.kind = "chi2";
        t.statistic = g.statistic;
        t.p_value = g.p_value;
        t.pass = g.pass;
        t.provenance = std::move(provenance);
        tests.push_back(std::move(t));
        summaries.push_back({tests.back().name + " dof", double(g.dof)});
    }

    void two_sample(std::string name, GofResult const& g,
                    std::string provenance)
    {
        this->gof(std::move(name), g, std::move(provenance));
        tests.back().kind = "two-sample";
    }

    void moments(std::string const& name, MomentTest const& m,
                 std::string const& provenance)
    {
        TestRecord mean;
        mean.name = name + " mean";
        mean.kind = "moment";
        mean.theoretical = m.theoretical_mean;
        mean.empirical = m.empirical_mean;
        mean.statistic = m.z_mean;
        mean.p_value = normal_two_sided(m.z_mean);
        mean.pass = std::abs(m.z_mean) <= m.z_max;
        mean.provenance = provenance;
        TestRecord var = mean;
        var.name = name + " variance";
        var.theoretical = m.theoretical_var;
        var.empirical = m.empirical_var;
        var.statistic = m.z_var;
        var.p_value = normal_two_sided(m.z_var);
        var.pass = std::abs(m.z_var) <= m.z_max;
        tests.push_back(std::move(mean));
        tests.push_back(std::move(var));
    }

    void proportion(std::string name, ProportionTest const& p,
                    std::string provenance)
    {
        TestRecord t;
        t.name = std::move(name);
        t.kind = "proportion";
        t.theoretical = p.theoretical;
        t.empirical = p.empirical;
        t.statistic = p.z;
        t.p_value = normal_two_sided(p.z);
        t.pass = p.pass;
        t.provenance = std::move(provenance);
        tests.push_back(std::move(t));
    }

    //! A check that must hold exactly or to a stated tolerance.
    void identity(std::string name, double theoretical, double empirical,
                  bool pass, std::string provenance)
    {
        TestRecord t;
        t.name = std::move(name);
        t.kind = "identity";
        t.theoretical = theoretical;
        t.empirical = empirical;
        t.statistic = std::abs(empirical - theoretical);
        t.pass = pass;
        t.provenance = std::move(provenance);
        tests.push_back(std::move(t));
    }
};

//! Column k (1-based) of a batch of count vectors.
std::vector<std::uint64_t>
column(std::vector<CountVector> const& counts, int k)
{
    std::vector<std::uint64_t> out(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        out[i] = counts[i][k];
    return out;
}

double sample_mean(std::span<std::uint64_t const> xs)
{
    long double s = 0;
    for (auto x : xs)
        s += x;
    return static_cast<double>(s / xs.size());
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string mixture_provenance(double a, MixingLaw const& mix, int k)
{
    return "Z_" + std::to_string(k) + " ~ Poisson(a(1-X0^" + std::to_string(k)
           + ")/" + std::to_string(k) + "), a=" + fmt(a) + ", X0 ~ "
           + mix.describe();
}

//! Sparse windowed counts of an independent model at horizon n.
std::vector<CountVector>
sequence_counts(SequenceModel model, ResolvedConfig const& c,
                std::uint64_t seed, Substream s, unsigned threads)
{
    return parallel_map<CountVector>(
        c.replicates, threads, [&](std::uint64_t r) {
            auto stream = replicate_stream(seed, s, r);
            auto times = sample_success_times(model, c.a, c.b, c.n, stream);
            return count_gaps(times, c.dmax);
        });
}

std::vector<CountVector> mixture_counts(MixtureSpec const& mix,
                                        ResolvedConfig const& c,
                                        std::uint64_t seed, Substream s,
                                        unsigned threads)
{
    return parallel_map<CountVector>(
        c.replicates, threads, [&](std::uint64_t r) {
            auto stream = replicate_stream(seed, s, r);
            return sample_mixture_counts(mix, c.dmax, stream);
        });
}

//! Add a dependence check that passes when |z| >= z_max, if it has power.
void rejection_test(Outcome& out, std::string name, double empirical,
                    double null_value, double alternative, std::size_t trials,
                    double z_max, std::string provenance)
{
    double se = std::sqrt(null_value * (1 - null_value) / trials);
    double z = (empirical - null_value) / se;
    if (std::abs(alternative - null_value) / se < 2 * z_max)
    {
        // Too little power at this sample size to demand a rejection.
        out.summary(name + " z", z);
        return;
    }
    TestRecord t;
    t.name = std::move(name);
    t.kind = "rejection";
    t.theoretical = null_value;
    t.empirical = empirical;
    t.statistic = z;
    t.p_value = normal_two_sided(z);
    t.pass = std::abs(z) >= z_max
             && std::signbit(empirical - null_value)
                    == std::signbit(alternative - null_value);
    t.provenance = std::move(provenance);
    out.tests.push_back(std::move(t));
}

//---------------------------------------------------------------------------//
// EXPERIMENTS
//---------------------------------------------------------------------------//
Outcome bern_counts(ResolvedConfig const& c, std::uint64_t seed, unsigned th)
{
    Outcome out;
    auto counts = sequence_counts(SequenceModel::bern, c, seed, primary, th);
    auto mix = mixing_law_for(SequenceModel::bern, c.a, c.b);
    out.summary("horizon", double(c.n));
    out.summary("truncation bias bound",
                truncation_bias_bound(c.a, c.b, c.dmax, c.n));

    int kmax = std::min(5, c.dmax);
    for (int k = 1; k <= kmax; ++k)
    {
        auto m = mixture_moments(c.a, mix, k);
        auto prov = mixture_provenance(c.a, mix, k);
        std::string z = "Z" + std::to_string(k);
        out.reference("E[" + z + "]", m.mean, prov);
        out.reference("Var[" + z + "]", m.variance, prov);
        auto col = column(counts, k);
        out.moments(z, moment_test(col, m.mean, m.variance, c.z_max), prov);
    }
    auto z1 = column(counts, 1);
    out.gof("Z1 distribution",
            chi2_gof(
                z1, [&](std::uint64_t j) { return mixture_pmf(c.a, mix, 1, j); },
                c.alpha),
            mixture_provenance(c.a, mix, 1));
    return out;
}

Outcome bern1_counts(ResolvedConfig const& c, std::uint64_t seed, unsigned th)
{
    Outcome out;
    auto counts = sequence_counts(SequenceModel::bern1, c, seed, primary, th);
    auto z1 = column(counts, 1);
    out.summary("horizon", double(c.n));
    out.summary("truncation bias bound",
                truncation_bias_bound(SequenceModel::bern1, c.a, c.b, c.dmax,
                                      c.n));

    auto exact = bern1_z1_moments(c.a, c.b);
    std::string const disp_prov = "Var(Z1)-E(Z1) = a^2(a+1)(b-1)/((a+b)^2(a+b+1))";
    double theory = overdispersion_z1(c.a, c.b);
    out.reference("overdispersion Z1", theory, disp_prov);
    out.reference("E[Z1]", exact.mean, "E[Z1] = a(a+1)/(a+b)");
    out.reference("Var[Z1]", exact.variance,
                  "E[Z1^2] = E[Z1] + a^2(a+1)(a+2)/((a+b)(a+b+1))");

    out.moments("Z1", moment_test(z1, exact.mean, exact.variance, c.z_max),
                "sums of products of independent marginals");

    auto d = dispersion_test(z1, theory, c.z_max);
    TestRecord t;
    t.name = "Z1 overdispersion";
    t.kind = "dispersion";
    t.theoretical = theory;
    t.empirical = d.empirical;
    t.statistic = d.z_theory;
    t.p_value = normal_two_sided(d.z_theory);
    t.pass = d.pass;
    t.provenance = disp_prov;
    out.tests.push_back(t);
    out.summary("Z1 overdispersion std error", d.std_error);

    // Demand a significant sign only when the sample has the power for it.
    if (std::abs(theory) >= 2 * c.z_max * d.std_error)
    {
        TestRecord sign = t;
        sign.name = "Z1 overdispersion sign";
        sign.kind = "rejection";
        sign.theoretical = 0.0;
        sign.statistic = d.z_zero;
        sign.p_value = normal_two_sided(d.z_zero);
        sign.pass = std::abs(d.z_zero) >= c.z_max
                    && std::signbit(d.empirical) == std::signbit(theory);
        sign.provenance = "sign of " + disp_prov;
        out.tests.push_back(std::move(sign));
    }
    else
    {
        out.summary("Z1 overdispersion z vs zero", d.z_zero);
    }

    if (c.b >= 1)
    {
        auto mix = mixing_law_for(SequenceModel::bern1, c.a, c.b);
        for (int k = 2; k <= std::min(4, c.dmax); ++k)
        {
            auto m = mixture_moments(c.a, mix, k);
            auto prov = mixture_provenance(c.a, mix, k);
            std::string z = "Z" + std::to_string(k);
            out.reference("E[" + z + "]", m.mean, prov);
            out.moments(z,
                        moment_test(column(counts, k), m.mean, m.variance,
                                    c.z_max),
                        prov);
        }
    }
    return out;
}

Outcome bern1_recurrence(ResolvedConfig const& c, std::uint64_t seed,
                         unsigned th)
{
    Outcome out;
    auto recur = parallel_map<CountVector>(
        c.replicates, th, [&](std::uint64_t r) {
            auto stream = replicate_stream(seed, primary, r);
            return sample_bern1_counts_recurrence(c.a, c.b, c.dmax, stream);
        });
    auto direct
        = sequence_counts(SequenceModel::bern1, c, seed, secondary, th);
    out.summary("horizon", double(c.n));
    out.reference("E[Z1]", bern1_z1_moments(c.a, c.b).mean,
                  "E[Z1] = a(a+1)/(a+b)");

    for (int k = 1; k <= std::min(2, c.dmax); ++k)
    {
        auto x = column(recur, k);
        auto y = column(direct, k);
        std::string z = "Z" + std::to_string(k);
        out.summary(z + " mean (recurrence)", sample_mean(x));
        out.summary(z + " mean (direct)", sample_mean(y));
        out.two_sample(z + " recurrence vs direct",
                       two_sample_counts(x, y, c.alpha),
                       "second-one decomposition over p_n");
    }
    return out;
}

//! Bits of a length-n prefix packed with Y_1 as the most significant bit.
std::uint64_t pack_bits(BitPrefix const& bits)
{
    std::uint64_t v = 0;
    for (auto b : bits.bits)
        v = (v << 1) | b;
    return v;
}

Outcome cmpp_equivalence(ResolvedConfig const& c, std::uint64_t seed,
                         unsigned th)
{
    Outcome out;
    auto spec = beta_bern_spec(c.a, c.b);
    validate(spec, c.dmax);
    RealizeOptions opts{epsilon_for(c.a, c.dmax, c.mark_loss_tol), c.n};
    out.summary("epsilon", opts.epsilon);

    struct Draw
    {
        std::uint64_t cylinder = 0;
        CountVector counts;
    };
    auto draws = parallel_map<Draw>(c.replicates, th, [&](std::uint64_t r) {
        auto stream = replicate_stream(seed, primary, r);
        auto real = realize(spec, opts, stream);
        return Draw{pack_bits(assemble_bits(real, c.n)),
                    counts_from_marks(real, c.dmax)};
    });

    std::size_t cells = std::size_t{1} << c.n;
    std::vector<std::uint64_t> observed(cells, 0);
    std::vector<double> probs(cells);
    std::vector<std::string> labels(cells);
    for (auto const& d : draws)
        ++observed[d.cylinder];
    for (std::size_t v = 0; v < cells; ++v)
    {
        double p = 1;
        for (std::uint64_t i = 1; i <= c.n; ++i)
        {
            bool one = (v >> (c.n - i)) & 1u;
            double s = success_probability(SequenceModel::bern, c.a, c.b, i);
            p *= one ? s : 1 - s;
            labels[v] += one ? '1' : '0';
        }
        probs[v] = p;
    }
    out.gof("prefix cylinders", chi2_gof_categorical(observed, probs, labels,
                                                     c.alpha),
            "product of a/(a+b+i-1) marginals");

    std::vector<CountVector> marks(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i)
        marks[i] = draws[i].counts;
    MixtureSpec mix{c.a, mixing_law_for(SequenceModel::bern, c.a, c.b)};
    auto poisson = mixture_counts(mix, c, seed, secondary, th);
    for (int k = 1; k <= std::min(2, c.dmax); ++k)
    {
        std::string z = "Z" + std::to_string(k);
        out.two_sample(z + " marks vs Poisson mixture",
                       two_sample_counts(column(marks, k), column(poisson, k),
                                         c.alpha),
                       mixture_provenance(c.a, mix.mixing, k));
    }
    return out;
}

Outcome plus_dependence(ResolvedConfig const& c, std::uint64_t seed,
                        unsigned th)
{
    Outcome out;
    auto plus = plus_spec(c.a, c.b);
    auto base = beta_bern_spec(c.a, c.b);
    validate(plus, c.dmax);
    RealizeOptions opts{epsilon_for(c.a, c.dmax, c.mark_loss_tol), 2};

    struct Draw
    {
        std::uint8_t y1 = 0;
        std::uint8_t y2 = 0;
        CountVector counts;
    };
    auto draws = parallel_map<Draw>(c.replicates, th, [&](std::uint64_t r) {
        auto stream = replicate_stream(seed, primary, r);
        auto real = realize(plus, opts, stream);
        auto bits = assemble_bits(real, 2);
        return Draw{bits.bits[0], bits.bits[1],
                    counts_from_marks(real, c.dmax)};
    });
    auto base_counts = parallel_map<CountVector>(
        c.replicates, th, [&](std::uint64_t r) {
            auto stream = replicate_stream(seed, secondary, r);
            return counts_from_marks(realize(base, opts, stream), c.dmax);
        });

    std::size_t n1 = 0, n2 = 0, n12 = 0;
    std::vector<CountVector> counts(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i)
    {
        n1 += draws[i].y1;
        n2 += draws[i].y2;
        n12 += draws[i].y1 & draws[i].y2;
        counts[i] = draws[i].counts;
    }
    std::size_t n = draws.size();
    auto probs = plus_model_probs(c.a, c.b);
    std::string const prov
        = "initial mark G1+G2-1 with G_i geometric(1-X0), X0 ~ beta(b,a)";
    out.reference("P(Y1=1)", probs.y1, prov);
    out.reference("P(Y2=1)", probs.y2, prov);
    out.reference("P(Y1=1,Y2=1)", probs.joint, prov);
    out.reference("P(Y1=1)P(Y2=1)", probs.product, prov);
    out.proportion("P(Y1=1)", proportion_test(n1, n, probs.y1, c.z_max), prov);
    out.proportion("P(Y2=1)", proportion_test(n2, n, probs.y2, c.z_max), prov);
    out.proportion("P(Y1=1,Y2=1)",
                   proportion_test(n12, n, probs.joint, c.z_max), prov);
    rejection_test(out, "independence of Y1,Y2 rejected", double(n12) / n,
                   probs.product, probs.joint, n, c.z_max, prov);

    for (int k = 1; k <= std::min(2, c.dmax); ++k)
    {
        std::string z = "Z" + std::to_string(k);
        out.two_sample(z + " plus vs beta-bern",
                       two_sample_counts(column(counts, k),
                                         column(base_counts, k), c.alpha),
                       "count law does not depend on the initial mark law");
    }
    return out;
}

Outcome swapped_dependence(ResolvedConfig const& c, std::uint64_t seed,
                           unsigned th)
{
    Outcome out;
    auto spec = swapped_spec();
    validate(spec, c.dmax);
    RealizeOptions opts{epsilon_for(1.0, c.dmax, c.mark_loss_tol), 3};

    auto draws = parallel_map<std::uint8_t>(
        c.replicates, th, [&](std::uint64_t r) {
            auto stream = replicate_stream(seed, primary, r);
            auto bits = assemble_bits(realize(spec, opts, stream), 3);
            return static_cast<std::uint8_t>((bits.bits[1] << 1)
                                             | bits.bits[2]);
        });
    std::size_t n2 = 0, n3 = 0, n23 = 0;
    for (auto d : draws)
    {
        n2 += (d >> 1) & 1;
        n3 += d & 1;
        n23 += d == 3;
    }
    std::size_t n = draws.size();
    auto p = swapped_model_probs();
    std::string const prov
        = "beta-bern(1,0) with the first two marked points exchanged";
    out.reference("P(Y2=1)", p.y2.value(), prov);
    out.reference("P(Y3=1)", p.y3.value(), prov);
    out.reference("P(Y2=1,Y3=1)", p.y2_y3.value(), prov);
    out.reference("P(Y2=1)P(Y3=1)", p.product.value(), prov);
    out.proportion("P(Y2=1)", proportion_test(n2, n, p.y2.value(), c.z_max),
                   prov);
    out.proportion("P(Y3=1)", proportion_test(n3, n, p.y3.value(), c.z_max),
                   prov);
    out.proportion("P(Y2=1,Y3=1)",
                   proportion_test(n23, n, p.y2_y3.value(), c.z_max), prov);
    rejection_test(out, "independence of Y2,Y3 rejected", double(n23) / n,
                   p.product.value(), p.y2_y3.value(), n, c.z_max, prov);
    return out;
}

Outcome feller_cycles(ResolvedConfig const& c, std::uint64_t seed,
                      unsigned th)
{
    Outcome out;
    std::size_t n = c.n;
    int kmax = static_cast<int>(std::min<std::uint64_t>(5, n / 2));

    struct Draw
    {
        std::vector<std::uint64_t> cycles;  // C_1..C_kmax
        std::uint8_t tail = 0;  // indicators of the last kmax draws, bit k-1
        bool consistent = true;
    };
    auto draws = parallel_map<Draw>(c.replicates, th, [&](std::uint64_t r) {
        auto stream = replicate_stream(seed, primary, r);
        auto d = feller_draw(n, stream);
        Draw out;
        out.cycles.assign(d.cycle_counts.begin(),
                          d.cycle_counts.begin() + kmax);
        for (int k = 1; k <= kmax; ++k)
            out.tail |= d.indicators[n - k] << (k - 1);
        out.consistent = indicators_to_counts(d.indicators) == d.cycle_counts;
        return out;
    });

    std::string const prov = "E[C_k] = Var[C_k] = 1/k for 2k <= n";
    for (int k = 1; k <= kmax; ++k)
    {
        std::vector<std::uint64_t> col(draws.size());
        for (std::size_t i = 0; i < draws.size(); ++i)
            col[i] = draws[i].cycles[k - 1];
        std::string name = "C" + std::to_string(k);
        out.reference("E[" + name + "]", 1.0 / k, prov);
        out.moments(name, moment_test(col, 1.0 / k, 1.0 / k, c.z_max), prov);
    }
    // The draw that is k-th from last closes a cycle with probability 1/k.
    for (int k = 2; k <= kmax; ++k)
    {
        std::size_t hits = 0;
        for (auto const& d : draws)
            hits += (d.tail >> (k - 1)) & 1;
        out.proportion("closing indicator " + std::to_string(k) + " from end",
                       proportion_test(hits, draws.size(), 1.0 / k, c.z_max),
                       "uniform choice among k remaining images");
    }
    std::size_t mismatches = std::count_if(
        draws.begin(), draws.end(), [](Draw const& d) { return !d.consistent; });
    out.identity("cycle counts from indicators", 0, double(mismatches),
                 mismatches == 0,
                 "cycle lengths are gaps between closing draws");
    return out;
}

//! Lexicographic rank of a permutation of 1..n.
std::uint64_t lehmer_rank(std::span<std::uint32_t const> perm)
{
    std::uint64_t rank = 0;
    std::size_t n = perm.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        std::uint64_t smaller = 0;
        for (std::size_t j = i + 1; j < n; ++j)
            smaller += perm[j] < perm[i];
        rank = rank * (n - i) + smaller;
    }
    return rank;
}

Outcome feller_uniformity(ResolvedConfig const& c, std::uint64_t seed,
                          unsigned th)
{
    Outcome out;
    std::size_t n = c.n;
    std::uint64_t cells = 1;
    for (std::size_t i = 2; i <= n; ++i)
        cells *= i;
    auto ranks = parallel_map<std::uint64_t>(
        c.replicates, th, [&](std::uint64_t r) {
            auto stream = replicate_stream(seed, primary, r);
            return lehmer_rank(feller_draw(n, stream).perm);
        });
    std::vector<std::uint64_t> observed(cells, 0);
    for (auto r : ranks)
        ++observed[r];
    std::vector<double> probs(cells, 1.0 / double(cells));
    out.reference("P(permutation)", 1.0 / double(cells), "1/n!");
    out.gof("permutation frequencies",
            chi2_gof_categorical(observed, probs, {}, c.alpha), "1/n!");
    return out;
}

Outcome enumeration_oracle(ResolvedConfig const& c, std::uint64_t seed,
                           unsigned th)
{
    Outcome out;
    int m = static_cast<int>(c.n);
    auto exact
        = enumerate_truncated(c.a, c.b, SequenceModel::bern, m, c.dmax);
    auto draws = parallel_map<CountVector>(
        c.replicates, th, [&](std::uint64_t r) {
            auto stream = replicate_stream(seed, primary, r);
            return count_strings(gen_bern(c.a, c.b, m, stream), c.dmax);
        });

    auto pmf = exact.marginal(1);
    auto z1 = column(draws, 1);
    auto emp = empirical_pmf(z1);
    double tv = tv_distance(pmf, emp);
    std::string const prov = "enumeration of all 2^m prefixes";
    for (std::size_t j = 0; j < pmf.size(); ++j)
        out.reference("P(Z1=" + std::to_string(j) + ")", pmf[j], prov);
    out.identity("Z1 total variation", 0, tv, tv < 0.005, prov);
    out.tests.back().kind = "tv";
    out.gof("Z1 distribution",
            chi2_gof(
                z1,
                [&](std::uint64_t j) {
                    return j < pmf.size() ? pmf[j] : 0.0;
                },
                c.alpha),
            prov);

    // Joint law over the whole count-vector support.
    using Key = std::pair<std::vector<std::uint64_t>, std::uint64_t>;
    std::map<Key, std::size_t> index;
    for (std::size_t i = 0; i < exact.support.size(); ++i)
    {
        auto const& s = exact.support[i];
        index[{{s.counts().begin(), s.counts().end()}, s.overflow()}] = i;
    }
    std::vector<std::uint64_t> observed(exact.support.size(), 0);
    for (auto const& d : draws)
    {
        auto it = index.find({{d.counts().begin(), d.counts().end()},
                              d.overflow()});
        if (it == index.end())
            throw std::logic_error("sampled count vector outside support");
        ++observed[it->second];
    }
    out.summary("support size", double(exact.support.size()));
    out.gof("count vector distribution",
            chi2_gof_categorical(observed, exact.probabilities, {}, c.alpha),
            prov);
    return out;
}

Outcome mixture_tables(ResolvedConfig const& c, std::uint64_t seed,
                       unsigned th)
{
    Outcome out;
    auto mixing = mixing_law_for(SequenceModel::bern, c.a, c.b);
    MixtureSpec mix{c.a, mixing};

    constexpr std::uint64_t max_terms = 2000;
    for (int k = 1; k <= c.dmax; ++k)
    {
        auto prov = mixture_provenance(c.a, mixing, k);
        std::string z = "Z" + std::to_string(k);
        double total = 0, first = 0, second = 0;
        for (std::uint64_t j = 0; j < max_terms; ++j)
        {
            double p = mixture_pmf(c.a, mixing, k, j);
            total += p;
            first += p * j;
            second += p * double(j) * j;
            if (j < 6)
                out.summary("P(" + z + "=" + std::to_string(j) + ")", p);
            if (1 - total < 1e-13 && j > 0 && p < 1e-16)
                break;
        }
        auto m = mixture_moments(c.a, mixing, k);
        double var = second - first * first;
        out.reference("E[" + z + "]", m.mean, prov);
        out.reference("Var[" + z + "]", m.variance, prov);
        out.identity(z + " pmf normalization", 1, total,
                     std::abs(total - 1) <= 1e-10, prov);
        out.identity(z + " pmf mean", m.mean, first,
                     std::abs(first - m.mean) <= 1e-8 * std::max(1.0, m.mean),
                     prov);
        out.identity(z + " pmf variance", m.variance, var,
                     std::abs(var - m.variance)
                         <= 1e-8 * std::max(1.0, m.variance),
                     prov);
    }

    auto counts = mixture_counts(mix, c, seed, primary, th);
    for (int k = 1; k <= std::min(3, c.dmax); ++k)
    {
        std::string z = "Z" + std::to_string(k);
        out.gof(z + " sampled distribution",
                chi2_gof(
                    column(counts, k),
                    [&](std::uint64_t j) {
                        return mixture_pmf(c.a, mixing, k, j);
                    },
                    c.alpha),
                mixture_provenance(c.a, mixing, k));
    }
    return out;
}

Outcome dispatch(Experiment e, ResolvedConfig const& c, std::uint64_t seed,
                 unsigned th)
{
    switch (e)
    {
        case Experiment::bern_counts:
            return bern_counts(c, seed, th);
        case Experiment::bern1_counts:
            return bern1_counts(c, seed, th);
        case Experiment::bern1_recurrence:
            return bern1_recurrence(c, seed, th);
        case Experiment::cmpp_equivalence:
            return cmpp_equivalence(c, seed, th);
        case Experiment::plus_dependence:
            return plus_dependence(c, seed, th);
        case Experiment::swapped_dependence:
            return swapped_dependence(c, seed, th);
        case Experiment::feller_cycles:
            return feller_cycles(c, seed, th);
        case Experiment::feller_uniformity:
            return feller_uniformity(c, seed, th);
        case Experiment::enumeration_oracle:
            return enumeration_oracle(c, seed, th);
        case Experiment::mixture_tables:
            return mixture_tables(c, seed, th);
    }
    throw ConfigError("unknown experiment");
}

}  // namespace

//---------------------------------------------------------------------------//
std::string_view to_string(Experiment e)
{
    for (auto const& [k, v] : names)
    {
        if (k == e)
            return v;
    }
    return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name)
{
    for (auto const& [k, v] : names)
    {
        if (v == name)
            return k;
    }
    return std::nullopt;
}

std::span<Experiment const> all_experiments()
{
    return experiment_list;
}

//---------------------------------------------------------------------------//
ResolvedConfig resolve(ExperimentConfig const& config)
{
    auto e = config.experiment;
    auto d = defaults_for(e);
    ResolvedConfig c;
    c.experiment = std::string(to_string(e));
    c.a = config.a.value_or(d.a);
    c.b = config.b.value_or(d.b);
    c.dmax = config.dmax.value_or(d.dmax);
    c.replicates = config.replicates.value_or(100000);
    c.seed = config.seed;
    c.mark_loss_tol = config.mark_loss_tol.value_or(1e-3);
    c.bias_target = config.bias_target.value_or(d.bias_target);
    c.alpha = config.alpha;
    c.z_max = config.z_max;

    require(std::isfinite(c.a) && c.a > 0, "a must be positive and finite");
    require(std::isfinite(c.b) && c.b >= 0,
            "b must be nonnegative and finite");
    require(c.dmax >= 1 && c.dmax <= 64, "dmax must be in [1, 64]");
    require(c.replicates >= min_sample_size,
            "replicates must be at least " + std::to_string(min_sample_size));
    require(c.mark_loss_tol > 0 && c.mark_loss_tol < 1,
            "mark loss tolerance must be in (0, 1)");
    require(c.bias_target > 0, "bias target must be positive");
    require(c.alpha > 0 && c.alpha < 1, "alpha must be in (0, 1)");
    require(c.z_max > 0, "z_max must be positive");

    auto n_or = [&](std::uint64_t fallback) {
        return config.n.value_or(fallback);
    };
    switch (e)
    {
        case Experiment::bern_counts:
        case Experiment::bern1_counts:
        case Experiment::bern1_recurrence: {
            auto model = e == Experiment::bern_counts ? SequenceModel::bern
                                                      : SequenceModel::bern1;
            c.n = config.n ? *config.n
                           : horizon_for_bias(model, c.a, c.b, c.dmax,
                                              c.bias_target);
            require(c.n > static_cast<std::uint64_t>(c.dmax),
                    "n must exceed dmax");
            if (e == Experiment::bern1_recurrence)
                require(c.dmax >= 2, "bern1-recurrence needs dmax >= 2");
            break;
        }
        case Experiment::cmpp_equivalence:
            c.n = n_or(d.n);
            require(c.n >= 1 && c.n <= 16,
                    "cmpp-equivalence prefix length must be in [1, 16]");
            break;
        case Experiment::plus_dependence:
            c.n = 2;
            require(c.b > 0, "plus-dependence needs b > 0");
            break;
        case Experiment::swapped_dependence:
            // The swapped model is defined for a = 1, b = 0 only.
            require(!config.a || *config.a == 1,
                    "swapped-dependence is defined for a = 1 only");
            require(!config.b || *config.b == 0,
                    "swapped-dependence is defined for b = 0 only");
            c.a = 1;
            c.b = 0;
            c.n = 3;
            break;
        case Experiment::feller_cycles:
            c.n = n_or(d.n);
            require(c.n >= 2 && c.n <= 100000000,
                    "feller-cycles needs 2 <= n <= 1e8");
            break;
        case Experiment::feller_uniformity:
            c.n = n_or(d.n);
            require(c.n >= 2 && c.n <= 8, "feller-uniformity needs 2 <= n <= 8");
            break;
        case Experiment::enumeration_oracle:
            c.n = n_or(d.n);
            require(c.n >= 2
                        && c.n <= static_cast<std::uint64_t>(
                               max_enumeration_horizon),
                    "enumeration-oracle needs 2 <= n <= "
                        + std::to_string(max_enumeration_horizon));
            break;
        case Experiment::mixture_tables:
            c.n = 0;
            break;
    }
    return c;
}

//---------------------------------------------------------------------------//
ExperimentReport run(ExperimentConfig const& config)
{
    auto resolved = resolve(config);
    auto start = std::chrono::steady_clock::now();

    ExperimentReport report;
    report.version = BSTRINGS_VERSION;
    report.config = resolved;

    std::uint64_t seed = resolved.seed;
    int max_attempts = config.retry ? 2 : 1;
    for (int attempt = 1; attempt <= max_attempts; ++attempt)
    {
        auto outcome = dispatch(config.experiment, resolved, seed,
                                config.threads);
        report.effective_seed = seed;
        report.attempts = attempt;
        report.references = std::move(outcome.references);
        report.summaries = std::move(outcome.summaries);
        report.tests = std::move(outcome.tests);
        if (report.passed())
            break;
        seed = mix64(resolved.seed ^ retry_salt);
    }

    report.wall_clock_seconds = std::chrono::duration<double>(
                                    std::chrono::steady_clock::now() - start)
                                    .count();
    if (!config.output.empty())
        write_report(report, config.output, config.format);
    return report;
}

//---------------------------------------------------------------------------//
}  // namespace bstrings
