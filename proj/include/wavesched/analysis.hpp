// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wavesched/engine.hpp"
#include "wavesched/report.hpp"
#include "wavesched/targets.hpp"

namespace wavesched {

/// Integrates power exactly over the core-state intervals of `trace`. Throws
/// ConsistencyError for a truncated trace (missing FrameComplete events).
SimReport compute_metrics(const EventTrace& trace, const Platform& platform);

/// Completion time of every task, per frame, indexed by task_index().
std::vector<std::vector<double>> completion_times(const EventTrace& trace);

/// Makespan of one frame with unit-free uniform CTU cost `t_ctu`, no filter work, identical
/// cores and at least as many threads as rows. Rows start min(cols, 3) CTUs apart.
double analytic_wavefront_makespan(GridDims dims, double t_ctu);

struct ReferenceResult {
  double makespan_s = 0.0;
  /// Per frame, indexed by task_index().
  std::vector<std::vector<double>> completion_s;
  EventTrace trace;
};

/// Time-stepped re-implementation of simulate() used as a validation oracle. The step is
/// (min task cost / max core speed) / 1000, shortened to land on completions. Limited to
/// 5000 tasks in total; throws SimulationError on step underflow.
ReferenceResult reference_simulate(const SimConfig& config);

/// 100 * (value - baseline) / baseline.
double percent_delta(double value, double baseline);

/// One thread-count row of the FPS or EPF comparison table.
struct PolicyTableRow {
  int threads = 0;
  double big_os = 0.0;
  double stat = 0.0;
  double stat_vs_big_os = 0.0;
  double affinity = 0.0;
  double affinity_vs_big_os = 0.0;
  double affinity_vs_static = 0.0;
  double affinity_simd = 0.0;
  double affinity_simd_vs_static = 0.0;
  double affinity_simd_vs_affinity = 0.0;
};

struct Deviation {
  Target target;
  double simulated = 0.0;
  /// percent_delta(simulated, target.value)
  double delta_pct = 0.0;
};

struct PaperComparison {
  std::vector<PolicyTableRow> fps;
  std::vector<PolicyTableRow> epf;
  std::vector<Deviation> deviations;
};

/// Average power of the cores of the cluster `policy` runs on (the LITTLE cluster for
/// LittleOnly, the big one otherwise).
double cluster_power(const SimReport& report, const Platform& platform, PolicyKind policy);

/// Builds the FPS/EPF tables with "% vs" columns for every thread count present in
/// `reports`, and the deviation of each report from `targets`. Throws ConfigError listing
/// every missing key.
PaperComparison compare_to_paper(const std::map<SweepKey, SimReport>& reports,
                                 const TargetTable& targets, const Platform& platform);

}  // namespace wavesched
