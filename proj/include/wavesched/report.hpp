// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace wavesched {

/// Metrics derived from one simulated run.
struct SimReport {
  int frames = 0;
  double wall_time_s = 0.0;
  double fps = 0.0;
  /// Exact integral of instantaneous power over the run.
  double energy_j = 0.0;
  double epf_j = 0.0;
  /// energy_j / wall_time_s, so epf_j * fps == avg_power_w.
  double avg_power_w = 0.0;
  /// Power sampled at the midpoints of consecutive sample intervals.
  std::vector<double> power_samples;
  /// mean(power_samples) * wall_time_s, the sampling-meter estimate of energy.
  double sampled_energy_j = 0.0;
  int migrations = 0;
  /// Fraction of the run each core spent executing work.
  std::vector<double> utilization;
  /// Seconds each core spent executing work.
  std::vector<double> busy_s;
  /// Energy drawn by each core (idle and active), excluding the base power.
  std::vector<double> core_energy_j;
};

}  // namespace wavesched
