//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file mixing.cpp
//---------------------------------------------------------------------------//
#include "bstrings/mixing.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bstrings
{
//---------------------------------------------------------------------------//
MixingLaw MixingLaw::beta(double alpha, double beta)
{
    if (!(alpha > 0) || !(beta > 0) || !std::isfinite(alpha)
        || !std::isfinite(beta))
    {
        throw std::invalid_argument(
            "Beta mixing parameters must be positive; declare a point mass "
            "for degenerate limits");
    }
    MixingLaw m;
    m.point_mass_ = false;
    m.alpha_ = alpha;
    m.beta_ = beta;
    return m;
}

MixingLaw MixingLaw::point_mass(double x)
{
    if (!(x >= 0 && x <= 1))
        throw std::invalid_argument("point mass must lie in [0, 1]");
    MixingLaw m;
    m.point_mass_ = true;
    m.location_ = x;
    return m;
}

double MixingLaw::moment(int k) const
{
    if (k < 0)
        throw std::invalid_argument("moment order must be nonnegative");
    if (point_mass_)
        return k == 0 ? 1.0 : std::pow(location_, k);
    double result = 1;
    for (int j = 0; j < k; ++j)
        result *= (alpha_ + j) / (alpha_ + beta_ + j);
    return result;
}

double MixingLaw::sample(RandomStream& stream) const
{
    if (point_mass_)
        return location_;
    return stream.beta(alpha_, beta_);
}

std::string MixingLaw::describe() const
{
    std::ostringstream os;
    if (point_mass_)
        os << "point(" << location_ << ")";
    else
        os << "beta(" << alpha_ << "," << beta_ << ")";
    return os.str();
}

//---------------------------------------------------------------------------//
}  // namespace bstrings
