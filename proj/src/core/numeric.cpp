// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/core/numeric.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "embed/core/errors.hpp"

namespace embed::core {

namespace {
constexpr std::size_t kPairwiseBlock = 8;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= kPairwiseBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

std::string shortest_repr(double value) {
  if (!std::isfinite(value)) throw DataError("cannot encode non-finite number");
  if (value == 0.0) return std::signbit(value) ? "-0.0" : "0";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw std::runtime_error("to_chars failed");
  return std::string(buf, end);
}

}  // namespace embed::core
