//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file cmpp.cpp
//---------------------------------------------------------------------------//
#include "bstrings/cmpp.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "bstrings/exact.hpp"
#include "bstrings/quadrature.hpp"

namespace bstrings
{
namespace
{
//---------------------------------------------------------------------------//
constexpr std::uint64_t max_mark = std::uint64_t{1} << 62;

std::uint64_t geometric(double x, RandomStream& stream)
{
    if (x <= 0)
        return 1;
    double tail = std::floor(std::log(stream.uniform()) / std::log(x));
    if (!(tail < static_cast<double>(max_mark)))
        return max_mark;
    return 1 + static_cast<std::uint64_t>(tail);
}

double geometric_pmf(double x, std::uint64_t k)
{
    if (k == 0)
        return 0;
    return std::pow(x, static_cast<double>(k - 1)) * (1 - x);
}

void check_open_unit(double x)
{
    if (!(x > 0 && x < 1))
        throw std::invalid_argument("mark parameter x must lie in (0, 1)");
}

InitialLaw initial_from(MixingLaw law)
{
    InitialLaw g;
    g.sample = [law](RandomStream& s) { return law.sample(s); };
    if (law.is_point_mass())
    {
        g.check_points = {law.location()};
    }
    else
    {
        double alpha = law.alpha();
        double beta = law.beta();
        double log_b = log_beta_fn(alpha, beta);
        g.density = [=](double x) {
            return std::exp((alpha - 1) * std::log(x)
                            + (beta - 1) * std::log1p(-x) - log_b);
        };
        for (int i = 0; i < 10; ++i)
            g.check_points.push_back(0.05 + 0.1 * i);
    }
    return g;
}

MarkLaw geometric_marks()
{
    // x = 0 occurs only through a point-mass X_0 and gives L = 1.
    return {geometric_pmf, geometric};
}

MarkLaw unit_marks()
{
    return {[](double, std::uint64_t k) { return k == 1 ? 1.0 : 0.0; },
            [](double, RandomStream&) { return std::uint64_t{1}; }};
}

MarkLaw plus_marks()
{
    return {[](double x, std::uint64_t k) {
                if (k == 0)
                    return 0.0;
                double kd = static_cast<double>(k);
                return kd * std::pow(x, kd - 1) * (1 - x) * (1 - x);
            },
            [](double x, RandomStream& s) {
                std::uint64_t g1 = geometric(x, s);
                std::uint64_t g2 = geometric(x, s);
                return std::min(max_mark, g1 + g2 - 1);
            }};
}

// a / (1 - x) on (x0, 1); Lambda(x) = a log((1 - x0) / (1 - x)).
IntensityLaw failure_rate_intensity(double a)
{
    IntensityLaw l;
    l.intensity = [a](double x0, double x) {
        return (x > x0 && x < 1) ? a / (1 - x) : 0.0;
    };
    l.cumulative = [a](double x0, double x) {
        if (x <= x0)
            return 0.0;
        return a * (std::log1p(-x0) - std::log1p(-x));
    };
    l.inverse_cumulative = [a](double x0, double gamma) {
        return 1 - (1 - x0) * std::exp(-gamma / a);
    };
    return l;
}

std::string make_id(char const* name, double a, double b)
{
    std::ostringstream os;
    os << name << "(" << a << "," << b << ")";
    return os.str();
}

CmppSpec beta_family(CmppTag tag, char const* name, double a, double b,
                     MixingLaw g, MarkLaw r)
{
    CmppSpec spec;
    spec.tag = tag;
    spec.a = a;
    spec.b = b;
    spec.id = make_id(name, a, b);
    spec.initial = initial_from(g);
    spec.initial_mark = std::move(r);
    spec.intensity = failure_rate_intensity(a);
    spec.mark = geometric_marks();
    return spec;
}

// Neumaier-compensated sum of pmf(x, k) over k = 1.. until terms vanish.
double pmf_mass(MarkLaw const& law, double x)
{
    double sum = 0;
    double comp = 0;
    for (std::uint64_t k = 1; k <= 200000; ++k)
    {
        double term = law.pmf(x, k);
        double t = sum + term;
        if (std::abs(sum) >= std::abs(term))
            comp += (sum - t) + term;
        else
            comp += (term - t) + sum;
        sum = t;
        if (k > 64 && term < 1e-18 * sum)
            break;
    }
    return sum + comp;
}

}  // namespace

//---------------------------------------------------------------------------//
std::string_view to_string(CmppTag tag)
{
    switch (tag)
    {
        case CmppTag::beta_bern:
            return "beta-bern";
        case CmppTag::beta_bern1:
            return "beta-bern1";
        case CmppTag::plus:
            return "plus";
        case CmppTag::swapped:
            return "swapped";
        case CmppTag::custom:
            return "custom";
    }
    return "custom";
}

//---------------------------------------------------------------------------//
CmppSpec beta_bern_spec(double a, double b)
{
    check_bern_params(a, b);
    return beta_family(CmppTag::beta_bern, "beta-bern", a, b,
                       mixing_law_for(SequenceModel::bern, a, b),
                       geometric_marks());
}

CmppSpec beta_bern1_spec(double a, double b)
{
    check_bern_params(a, b);
    if (b < 1)
        throw std::invalid_argument(
            "Bern1(a, b) has a marked Poisson representation only for b >= 1");
    return beta_family(CmppTag::beta_bern1, "beta-bern1", a, b,
                       mixing_law_for(SequenceModel::bern1, a, b),
                       unit_marks());
}

CmppSpec plus_spec(double a, double b)
{
    check_bern_params(a, b);
    if (!(b > 0))
        throw std::invalid_argument("the plus model needs b > 0");
    return beta_family(CmppTag::plus, "plus", a, b, MixingLaw::beta(b, a),
                       plus_marks());
}

CmppSpec swapped_spec()
{
    return beta_family(CmppTag::swapped, "swapped", 1, 0,
                       MixingLaw::point_mass_at_zero(), unit_marks());
}

//---------------------------------------------------------------------------//
void validate(CmppSpec const& spec, int dmax)
{
    if (dmax < 1)
        throw std::invalid_argument("dmax must be at least 1");
    if (!spec.initial.sample)
        throw std::invalid_argument(spec.id + ": missing initial sampler");
    if (!spec.initial_mark.pmf || !spec.initial_mark.sample || !spec.mark.pmf
        || !spec.mark.sample)
    {
        throw std::invalid_argument(spec.id + ": missing mark law");
    }
    if (!spec.intensity.intensity)
        throw std::invalid_argument(spec.id + ": missing intensity");
    if (!spec.intensity.inverse_cumulative && !spec.intensity.sampler)
    {
        throw std::invalid_argument(
            spec.id + ": intensity has no closed-form inverse; supply a "
                      "point sampler");
    }

    for (int i = 0; i < 10; ++i)
    {
        double x = 0.05 + 0.1 * i;
        for (auto const* law : {&spec.initial_mark, &spec.mark})
        {
            double mass = pmf_mass(*law, x);
            if (std::abs(mass - 1) > 1e-12)
            {
                std::ostringstream os;
                os << spec.id << ": mark pmf sums to " << mass << " at x = "
                   << x;
                throw std::invalid_argument(os.str());
            }
        }
    }

    for (double w : spec.initial.check_points)
    {
        for (int i = 0; i < 20; ++i)
        {
            double x = w + (1 - w) * (i + 0.5) / 20;
            if (!(spec.intensity.intensity(w, x) >= 0))
                throw std::invalid_argument(spec.id
                                            + ": negative intensity");
        }
        for (int k = 1; k <= dmax; ++k)
        {
            auto uk = static_cast<std::uint64_t>(k);
            double mean = 0;
            try
            {
                mean = integrate(
                           [&](double x) {
                               return spec.intensity.intensity(w, x)
                                      * spec.mark.pmf(x, uk);
                           },
                           w, 1.0)
                           .value;
            }
            catch (ConvergenceError const&)
            {
                mean = INFINITY;
            }
            if (!std::isfinite(mean))
            {
                std::ostringstream os;
                os << spec.id << ": count Z_" << k
                   << " has infinite mean given X_0 = " << w;
                throw std::invalid_argument(os.str());
            }
        }
    }
}

//---------------------------------------------------------------------------//
std::uint64_t sample_mark_q(double x, RandomStream& stream)
{
    check_open_unit(x);
    return geometric(x, stream);
}

std::uint64_t sample_mark_rplus(double x, RandomStream& stream)
{
    check_open_unit(x);
    return plus_marks().sample(x, stream);
}

//---------------------------------------------------------------------------//
PointsWithArrivals sample_points_with_arrivals(CmppSpec const& spec, double x0,
                                               double epsilon,
                                               RandomStream& stream)
{
    if (!(epsilon > 0) || !(epsilon < 1 - x0))
        throw std::invalid_argument("need 0 < epsilon < 1 - x0");
    PointsWithArrivals result;
    double const upper = 1 - epsilon;
    if (!spec.intensity.inverse_cumulative)
    {
        if (!spec.intensity.sampler)
            throw std::invalid_argument(spec.id + ": no point sampler");
        result.points = spec.intensity.sampler(x0, upper, stream);
        return result;
    }
    double gamma = 0;
    while (true)
    {
        gamma += stream.exponential();
        double x = spec.intensity.inverse_cumulative(x0, gamma);
        if (!(x < upper))
            break;
        result.points.push_back(x);
        result.arrivals.push_back(gamma);
    }
    return result;
}

std::vector<double>
sample_points(CmppSpec const& spec, double x0, double epsilon,
              RandomStream& stream)
{
    return sample_points_with_arrivals(spec, x0, epsilon, stream).points;
}

//---------------------------------------------------------------------------//
double epsilon_for(double a, int dmax, double tol)
{
    if (!(a > 0) || dmax < 1 || !(tol > 0))
        throw std::invalid_argument("need a > 0, dmax >= 1, tol > 0");
    return std::min(0.5, tol / (a * dmax));
}

PointRealization
realize(CmppSpec const& spec, RealizeOptions const& opts, RandomStream& stream)
{
    if (!(opts.epsilon > 0 && opts.epsilon < 1))
        throw std::invalid_argument("truncation epsilon must lie in (0, 1)");

    PointRealization real;
    real.spec_id = spec.id;
    real.epsilon = opts.epsilon;
    real.x0 = spec.initial.sample(stream);
    real.marks.push_back(spec.initial_mark.sample(real.x0, stream));
    real.partial_sums.push_back(real.marks.back());

    std::size_t const min_points = spec.tag == CmppTag::swapped ? 2 : 0;
    double const upper = 1 - opts.epsilon;
    auto satisfied = [&] {
        return real.partial_sums.back() >= opts.cover
               && real.points.size() >= min_points;
    };

    auto push = [&](double x) {
        real.points.push_back(x);
        real.marks.push_back(spec.mark.sample(x, stream));
        real.partial_sums.push_back(
            std::min(max_mark, real.partial_sums.back() + real.marks.back()));
    };

    if (spec.intensity.inverse_cumulative)
    {
        double gamma = 0;
        while (true)
        {
            gamma += stream.exponential();
            double x = spec.intensity.inverse_cumulative(real.x0, gamma);
            if (!(x < 1) || (x >= upper && satisfied()))
                break;
            push(x);
        }
    }
    else
    {
        if (!spec.intensity.sampler)
            throw std::invalid_argument(spec.id + ": no point sampler");
        if (real.x0 < upper)
        {
            for (double x : spec.intensity.sampler(real.x0, upper, stream))
                push(x);
        }
    }

    if (spec.tag == CmppTag::swapped)
    {
        if (real.points.size() < 2)
            throw std::runtime_error(
                "swapped model realization has fewer than two points");
        std::swap(real.points[0], real.points[1]);
        std::swap(real.marks[1], real.marks[2]);
        real.partial_sums[1] = real.partial_sums[0] + real.marks[1];
    }
    return real;
}

//---------------------------------------------------------------------------//
void check_invariants(PointRealization const& real, bool allow_first_swap)
{
    if (real.marks.size() != real.points.size() + 1
        || real.partial_sums.size() != real.marks.size())
    {
        throw std::logic_error("realization arrays have inconsistent sizes");
    }
    for (std::size_t i = 0; i < real.points.size(); ++i)
    {
        double x = real.points[i];
        if (!(x > real.x0 && x < 1))
            throw std::logic_error("point outside (x0, 1)");
        if (i == 0)
            continue;
        bool swapped_pair = allow_first_swap && i == 1;
        if (!swapped_pair && !(x > real.points[i - 1]))
            throw std::logic_error("points are not strictly ascending");
    }
    if (allow_first_swap && real.points.size() > 2
        && !(real.points[2] > real.points[0]))
    {
        throw std::logic_error("points are not strictly ascending");
    }
    for (std::size_t r = 0; r < real.marks.size(); ++r)
    {
        if (real.marks[r] < 1)
            throw std::logic_error("marks must be positive");
        std::uint64_t expect = r == 0 ? real.marks[0]
                                      : real.partial_sums[r - 1]
                                            + real.marks[r];
        if (real.partial_sums[r] != std::min(max_mark, expect))
            throw std::logic_error("partial sums do not accumulate marks");
    }
}

//---------------------------------------------------------------------------//
BitPrefix assemble_bits(PointRealization const& real, std::size_t n)
{
    BitPrefix prefix;
    prefix.model = SequenceModel::cmpp_derived;
    prefix.spec_id = real.spec_id;
    prefix.bits.assign(n, 0);
    for (auto s : real.partial_sums)
    {
        if (s > n)
            break;
        prefix.bits[s - 1] = 1;
    }
    prefix.truncated = real.partial_sums.empty()
                       || real.partial_sums.back() < n;
    return prefix;
}

CountVector counts_from_marks(PointRealization const& real, int dmax)
{
    CountVector z(dmax);
    for (std::size_t i = 1; i < real.marks.size(); ++i)
        z.add(real.marks[i]);
    return z;
}

//---------------------------------------------------------------------------//
double MixtureSpec::intensity_of(int k, double x0) const
{
    return conditional_intensity(a, k, x0);
}

CountVector sample_mixture_counts(MixtureSpec const& mix, int dmax,
                                  RandomStream& stream)
{
    if (!(mix.a > 0))
        throw std::invalid_argument("parameter a must be positive");
    CountVector z(dmax);
    double x0 = mix.mixing.sample(stream);
    for (int k = 1; k <= dmax; ++k)
        z.add(static_cast<std::uint64_t>(k),
              stream.poisson(mix.intensity_of(k, x0)));
    return z;
}

//---------------------------------------------------------------------------//
namespace
{
// Position of the second one of Bern1(a, b): inversion against p_n for a
// short head, then skip sampling of the same law's tail.
std::uint64_t sample_second_success(double a, double b, RandomStream& stream)
{
    constexpr std::uint64_t head = 64;
    double u = stream.uniform();
    double cumulative = 0;
    for (std::uint64_t n = 2; n <= head; ++n)
    {
        cumulative += second_success_pmf(a, b, n);
        if (u < cumulative)
            return n;
    }
    if (b == 0)
        return 2;  // p_2 = 1; guards against rounding in the loop above
    auto next = next_success(a, a + b - 2, head, max_mark, stream);
    return next ? *next : max_mark;
}
}  // namespace

CountVector sample_bern1_counts_recurrence(double a, double b, int dmax,
                                           RandomStream& stream)
{
    check_bern_params(a, b);
    std::uint64_t n = sample_second_success(a, b, stream);
    double alpha = b + static_cast<double>(n) - 2;
    MixtureSpec rest{a, alpha > 0 ? MixingLaw::beta(alpha, a + 1)
                                  : MixingLaw::point_mass_at_zero()};
    CountVector z = sample_mixture_counts(rest, dmax, stream);
    return add_unit(std::move(z), n - 1);
}

//---------------------------------------------------------------------------//
}  // namespace bstrings
