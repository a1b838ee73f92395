// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace detsamp {

/// Ordered fermion positions (0-based site indices). Sampler outputs keep the
/// draw order; callers needing set semantics use sorted_config().
using SampleConfig = std::vector<std::size_t>;

/// Up and down configurations; cross-species overlap (double occupancy) is
/// allowed.
struct SpinfulConfig {
  SampleConfig up;
  SampleConfig dn;

  friend bool operator==(const SpinfulConfig&, const SpinfulConfig&) = default;
};

[[nodiscard]] inline SampleConfig sorted_config(SampleConfig config) {
  std::sort(config.begin(), config.end());
  return config;
}

/// True if every position is below `sites` and no position repeats.
[[nodiscard]] inline bool is_exclusive(const SampleConfig& config, std::size_t sites) {
  std::vector<bool> seen(sites, false);
  for (const auto x : config) {
    if (x >= sites || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

}  // namespace detsamp
