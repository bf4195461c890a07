// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace embed::verification {

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_error = 0.0;
  double tolerance = 0.0;
};

/// Loss checks against closed forms, naive loops and central finite
/// differences.
std::vector<CheckResult> run_infonce_suite(std::uint64_t seed = 7);

/// Retrieval metric checks against brute-force oracles.
std::vector<CheckResult> run_metrics_suite(std::uint64_t seed = 7);

}  // namespace embed::verification
