// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "wavesched/analysis.hpp"
#include "wavesched/settings.hpp"
#include "wavesched/targets.hpp"

namespace wavesched {

struct CalibrationResult {
  /// The input settings with every fitted parameter replaced.
  Settings settings;
  double mean_wu = 0.0;
  double speed_ratio = 0.0;
  /// Left unchanged when the targets hold no SIMD FPS measurement.
  double vector_speedup = 0.0;
  double base_power_w = 0.0;
  double big_active_power_w = 0.0;
  double little_active_power_w = 0.0;
  double simd_power_factor = 0.0;
  /// Every target re-simulated with the fitted settings.
  std::vector<Deviation> residuals;
};

/// Fits the workload scale, the big:LITTLE speed ratio, the SIMD speed-up and the power
/// parameters of `base` to `targets`:
///  - mean_wu so that FPS(big-os, 1) matches exactly (FPS is inversely proportional to it);
///  - speed ratio = FPS(static, 4) / FPS(little, 4), both being four threads on one cluster
///    (FPS(big-os, 4) stands in for the static value when absent);
///  - vector_speedup from FPS(affinity, 1, simd) / FPS(big-os, 1);
///  - base power and the active power of each core type by relative least squares over the
///    non-SIMD EPF targets, idle powers held at their configured values;
///  - one simd_power_factor shared by both core types, fitted to the SIMD / non-SIMD EPF
///    ratio of each pair of measurements (to the SIMD EPF alone when unpaired).
/// Throws ConfigError listing the missing targets when the set is under-determined.
CalibrationResult calibrate(const Settings& base, const TargetTable& targets);

/// Simulates big-os, static and affinity (with and without SIMD) at 1..8 threads plus every
/// key in `targets`, and compares them with `targets`.
PaperComparison paper_repro(const Settings& settings, const TargetTable& targets);

}  // namespace wavesched
