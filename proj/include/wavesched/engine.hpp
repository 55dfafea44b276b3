// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wavesched/platform.hpp"
#include "wavesched/policies.hpp"
#include "wavesched/report.hpp"
#include "wavesched/workload.hpp"
#include "wavesched/wpp_graph.hpp"

namespace wavesched {

struct SimConfig {
  Platform platform = Platform::exynos5422();
  PolicySpec policy;
  /// One cost matrix per frame; at least `frames` entries.
  std::vector<CostModel> workload;
  int frames = 1;
  GridDims dims;
  bool simd = false;
  /// Fraction of a core's throughput lost while more than one thread runs on it.
  double oversub_penalty = 0.0;

  void validate() const;
};

enum class EventKind {
  CtuStart,
  CtuComplete,
  RowComplete,
  BarrierReached,
  Migration,
  FrameComplete,
  ThreadIdle,
  ThreadResume,
};

const char* to_string(EventKind kind);

struct SimEvent {
  double time_s = 0.0;
  EventKind kind = EventKind::CtuStart;
  int frame = 0;
  int thread = -1;
  /// Core the event happened on; the destination for migrations. ThreadResume marks a
  /// thread bound to `core` (including the bindings at frame start); ThreadIdle with core -1
  /// marks a thread that gave up its core to wait for another.
  int core = -1;
  std::optional<TaskId> task;
  /// Migrations: source core (-1 when the thread was waiting unbound).
  int from_core = -1;
  /// Migrations during reconstruction: LITTLE rank of the migrating row.
  int rank = 0;
  /// Migrations: idle big cores observed by the check that triggered the move.
  int idle_big = 0;
};

struct EventTrace {
  std::vector<SimEvent> events;
  int frames = 0;
  int cores = 0;
  int threads = 0;
  bool simd = false;
  GridDims dims;
};

struct SimResult {
  EventTrace trace;
  SimReport report;
};

/// Runs every frame of `config` to completion. Deterministic for a fixed config.
/// Throws SimulationError if the schedule deadlocks.
SimResult simulate(const SimConfig& config);

struct SweepKey {
  PolicyKind policy = PolicyKind::CriticalityAware;
  int threads = 1;
  bool simd = false;

  friend auto operator<=>(const SweepKey&, const SweepKey&) = default;
};

struct SweepCell {
  SweepKey key;
  std::optional<SimReport> report;
  /// Set when the cell failed; the sweep carries on with the others.
  std::string error;
};

/// Simulates each key on top of `base`, concurrently. Duplicate keys are run once; the result
/// is sorted by key.
std::vector<SweepCell> run_cells(const SimConfig& base, std::vector<SweepKey> keys);

/// Simulates the Cartesian product of the given lists on top of `base`. Cells are
/// independent and may run concurrently; the result is sorted by key.
std::vector<SweepCell> run_sweep(const SimConfig& base, std::span<const int> thread_counts,
                                 std::span<const PolicyKind> policies,
                                 std::span<const bool> simd);

}  // namespace wavesched
