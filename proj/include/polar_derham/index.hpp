// Copyright (c) 2026 The polar-derham authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace polar_derham
{

/// Map any integer onto the 1-based cyclic range 1..n, so that n+1 == 1
/// and 0 == n.
constexpr int wrap(int i, int n)
{
  int m = (i - 1) % n;
  if (m < 0)
    m += n;
  return m + 1;
}

} // namespace polar_derham
