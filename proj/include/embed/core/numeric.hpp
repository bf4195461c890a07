// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace embed::core {

/// Pairwise (cascade) summation. Result depends only on the input order,
/// never on thread count; error grows as O(log n).
double pairwise_sum(std::span<const double> values);

/// Shortest decimal string that parses back to exactly `value`.
/// Requires a finite value.
std::string shortest_repr(double value);

}  // namespace embed::core
