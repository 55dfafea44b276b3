// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wavesched/wpp_graph.hpp"

namespace wavesched {

/// How the filter work of a frame is divided among the three filter passes.
struct FilterSplit {
  double h = 0.3;
  double v = 0.3;
  double sao = 0.4;

  friend bool operator==(const FilterSplit&, const FilterSplit&) = default;
};

/// Parameters shared by every frame's cost matrix.
struct KernelParams {
  /// Fraction of the total frame work spent in the filter passes, in [0, 1).
  double filter_fraction = 0.15;
  FilterSplit filter_split;
  /// Fraction of each kernel that benefits from SIMD, in [0, 1].
  double vector_fraction = 0.58;
  /// Speed-up of the vectorizable fraction when SIMD is enabled, >= 1.
  double vector_speedup = 1.4913;

  void validate() const;
  friend bool operator==(const KernelParams&, const KernelParams&) = default;
};

/// Per-CTU work amounts of one frame, in abstract work units (wu).
///
/// Filter work of a CTU is proportional to its reconstruction work, so the filter passes
/// account for exactly `filter_fraction` of the frame total.
class CostModel {
 public:
  CostModel(GridDims dims, std::vector<double> recon, KernelParams params = {});

  GridDims dims() const { return dims_; }
  const KernelParams& params() const { return params_; }
  const std::vector<double>& recon() const { return recon_; }

  double recon_cost(CtuCoord c) const { return recon_[c.row * dims_.cols + c.col]; }
  /// Raw work of a task (no SIMD).
  double task_cost(const TaskId& task) const;
  /// Work of a task with SIMD applied when `simd` is set.
  double effective_task_cost(const TaskId& task, bool simd) const;
  double total_work() const;

  friend bool operator==(const CostModel&, const CostModel&) = default;

 private:
  GridDims dims_;
  std::vector<double> recon_;
  KernelParams params_;
};

enum class WorkloadKind { Uniform, Lognormal, Trace };

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::Lognormal;
  double mean_wu = 100.0;
  double sigma = 0.4;
  std::uint64_t seed = 1;
  std::filesystem::path path;
  KernelParams params;

  void validate() const;
  friend bool operator==(const WorkloadSpec&, const WorkloadSpec&) = default;
};

/// One cost matrix per frame. Lognormal entries have mean `mean_wu` and log-std `sigma`
/// and are a deterministic function of the seed.
std::vector<CostModel> generate(const WorkloadSpec& spec, GridDims dims, int frames);

/// Reads a `frame,row,col,work_units` trace. Grid size is inferred from the file and must
/// be identical for every frame.
std::vector<CostModel> load_trace(const std::filesystem::path& path, KernelParams params = {});
std::vector<CostModel> parse_trace(std::istream& in, KernelParams params = {});

void write_trace(std::ostream& out, std::span<const CostModel> frames);

/// cost * ((1 - v) + v / S) when SIMD is on, otherwise cost.
double effective_cost(double cost, bool simd_on, double vector_fraction, double vector_speedup);

}  // namespace wavesched
