// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace polar_derham
{

/// Raised when a structural precondition of a construction fails
/// (smoothness, size floors, inconsistent dimensions).
class ConstructionError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Raised when a point is too close to the polar curve for a
/// Jacobian-weighted pushforward.
class SingularityError : public std::domain_error
{
public:
  SingularityError(const std::string& msg, double floor)
      : std::domain_error(msg), _floor(floor)
  {
  }
  double floor() const { return _floor; }

private:
  double _floor;
};

} // namespace polar_derham
