// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace wavesched {

/// Extent of the CTU grid of one frame.
struct GridDims {
  int rows = 17;
  int cols = 30;

  /// 1920x1080 tiled by 64x64 CTUs.
  static constexpr GridDims hd1080() { return {17, 30}; }

  int ctu_count() const { return rows * cols; }
  void validate() const;

  friend bool operator==(const GridDims&, const GridDims&) = default;
};

/// Row-major CTU position, (0,0) is the top-left CTU.
struct CtuCoord {
  int row = 0;
  int col = 0;

  bool within(GridDims dims) const {
    return row >= 0 && col >= 0 && row < dims.rows && col < dims.cols;
  }

  friend auto operator<=>(const CtuCoord&, const CtuCoord&) = default;
};

enum class Phase : std::uint8_t { Recon = 0, HFilter = 1, VFilter = 2, Sao = 3 };

inline constexpr int kPhaseCount = 4;

const char* to_string(Phase phase);

/// One schedulable unit: a single CTU in one processing phase of one frame.
/// Ordering is phase-major, then row, then column (the filter dispatch order).
struct TaskId {
  Phase phase = Phase::Recon;
  CtuCoord coord;
  int frame = 0;

  friend bool operator==(const TaskId&, const TaskId&) = default;
  friend std::strong_ordering operator<=>(const TaskId& a, const TaskId& b) {
    if (auto c = a.frame <=> b.frame; c != 0) return c;
    if (auto c = a.phase <=> b.phase; c != 0) return c;
    return a.coord <=> b.coord;
  }
};

std::string to_string(const TaskId& task);

/// Dense index of a task inside its frame, in [0, 4 * rows * cols).
inline int task_index(const TaskId& task, GridDims dims) {
  return static_cast<int>(task.phase) * dims.ctu_count() + task.coord.row * dims.cols +
         task.coord.col;
}

/// Reconstruction predecessors of `coord`: the left neighbour first, then the upper
/// dependency (i-1, min(j+2, cols-1)). Throws DomainError when `coord` is outside `dims`.
std::vector<CtuCoord> recon_deps(CtuCoord coord, GridDims dims);

/// Predecessors of a filter task, excluding the frame barrier. Throws DomainError for
/// Recon tasks.
std::vector<TaskId> filter_deps(const TaskId& task, GridDims dims);

/// Set of completed tasks of a single frame.
class TaskSet {
 public:
  TaskSet(GridDims dims, int frame = 0);

  GridDims dims() const { return dims_; }
  int frame() const { return frame_; }

  bool contains(const TaskId& task) const;
  void insert(const TaskId& task);
  int size() const { return count_; }
  int recon_done() const { return recon_count_; }
  bool recon_complete() const { return recon_count_ == dims_.ctu_count(); }

 private:
  GridDims dims_;
  int frame_;
  std::vector<std::uint8_t> bits_;
  int count_ = 0;
  int recon_count_ = 0;
};

/// The reconstruction barrier of one frame. Every filter task of the frame waits on it.
struct FrameBarrier {
  int frame = 0;
  bool satisfied_by(const TaskSet& done) const {
    return done.frame() == frame && done.recon_complete();
  }
};

FrameBarrier frame_barrier(int frame);

/// True when every predecessor of `task` (including the barrier for filter tasks) is in
/// `done`.
bool is_ready(const TaskId& task, const TaskSet& done);

/// All not-yet-completed tasks whose predecessors are complete, in dispatch order.
/// Throws ConsistencyError if `done` contains a task whose predecessors are missing.
std::vector<TaskId> ready_tasks(const TaskSet& done);

/// Highest row-0 column that must be reconstructed before Recon(row, 0) may start,
/// following the dependency chain transitively (min(2*row, cols-1)).
int required_upper_column(int row, GridDims dims);

/// Size of the largest set of mutually independent Recon tasks.
int wavefront_width(GridDims dims);

/// Predecessor/successor lists for every task of a frame, built once per grid size.
class FrameGraph {
 public:
  explicit FrameGraph(GridDims dims);

  GridDims dims() const { return dims_; }
  int task_count() const { return static_cast<int>(tasks_.size()); }
  const TaskId& task(int index) const { return tasks_[index]; }
  /// Predecessors by dense index; filter tasks do not list the barrier here.
  const std::vector<int>& preds(int index) const { return preds_[index]; }
  const std::vector<int>& succs(int index) const { return succs_[index]; }

 private:
  GridDims dims_;
  std::vector<TaskId> tasks_;
  std::vector<std::vector<int>> preds_;
  std::vector<std::vector<int>> succs_;
};

}  // namespace wavesched
