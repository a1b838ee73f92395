// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#include "detsamp/rng.hpp"

#include <random>

namespace detsamp {

std::uint64_t RngStream::uniform_index(std::uint64_t n) noexcept {
  std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
  return dist(*this);
}

double RngStream::normal() noexcept {
  std::normal_distribution<double> dist;
  return dist(*this);
}

}  // namespace detsamp
