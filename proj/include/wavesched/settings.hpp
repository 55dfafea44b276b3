// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "wavesched/engine.hpp"

namespace wavesched {

/// Everything needed to build a SimConfig, as read from a `key = value` config file.
///
/// Keys: base_power_w, sample_interval_s, big.<field>, little.<field> (fields: name,
/// cores, freq_ghz, speed_wu_per_s, active_power_w, idle_power_w, simd_power_factor),
/// speed_ratio, policy, threads, migration_overhead_s, workload, mean_wu, sigma, seed,
/// filter_fraction, filter_split, vector_fraction, vector_speedup, frames, grid, simd,
/// oversub_penalty.
struct Settings {
  Cluster big;
  Cluster little;
  double base_power_w = 1.0;
  double sample_interval_s = 0.250;
  PolicySpec policy;
  WorkloadSpec workload;
  int frames = 50;
  GridDims dims;
  bool simd = false;
  double oversub_penalty = 0.0;

  Settings();

  Platform platform() const;
  /// Generates (or loads) the workload and validates the result.
  SimConfig to_sim_config() const;
  double speed_ratio() const { return big.type.speed_wu_per_s / little.type.speed_wu_per_s; }

  friend bool operator==(const Settings&, const Settings&) = default;
};

/// Sets one key. Throws ConfigError naming the key (and `line` when > 0).
void set_setting(Settings& s, std::string_view key, std::string_view value, int line = 0);

/// Applies every `key = value` line of `in` on top of `s`. `#` starts a comment.
void apply_settings(Settings& s, std::istream& in);
Settings load_settings(const std::filesystem::path& path);

/// Writes every key; apply_settings on the output reproduces `s` exactly.
std::string serialize(const Settings& s);

/// Parses "RxC".
GridDims parse_grid(std::string_view text);
bool parse_on_off(std::string_view text, std::string_view key);

}  // namespace wavesched
