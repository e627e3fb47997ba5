//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bstrings/mixing.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <string>

#include "random.hpp"

namespace bstrings
{
//---------------------------------------------------------------------------//
/*!
 * Law of the initial value X_0 on [0, 1]: Beta(alpha, beta) or a point mass.
 *
 * The b -> 0 (Bern) and b -> 1 (Bern1) limits put all mass at zero; they are
 * declared explicitly with point_mass_at_zero() rather than encoded as a Beta
 * law with a zero parameter.
 */
class MixingLaw
{
  public:
    //! Beta(alpha, beta); both parameters must be positive.
    static MixingLaw beta(double alpha, double beta);
    static MixingLaw point_mass_at_zero() { return point_mass(0.0); }
    //! Degenerate law at x in [0, 1].
    static MixingLaw point_mass(double x);

    bool is_point_mass() const { return point_mass_; }
    double location() const { return location_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

    //! E[X^k] for integer k >= 0.
    double moment(int k) const;

    double sample(RandomStream& stream) const;

    //! "beta(2,1)" or "point(0)".
    std::string describe() const;

  private:
    MixingLaw() = default;

    bool point_mass_ = true;
    double location_ = 0;
    double alpha_ = 0;
    double beta_ = 0;
};

//---------------------------------------------------------------------------//
}  // namespace bstrings
