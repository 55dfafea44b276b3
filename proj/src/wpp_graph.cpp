// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#include "wavesched/wpp_graph.hpp"

#include <algorithm>

#include "wavesched/errors.hpp"

namespace wavesched {

void GridDims::validate() const {
  if (rows < 1 || cols < 1)
    throw DomainError("grid must have at least one row and one column, got " +
                      std::to_string(rows) + "x" + std::to_string(cols));
}

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::Recon: return "recon";
    case Phase::HFilter: return "hfilter";
    case Phase::VFilter: return "vfilter";
    case Phase::Sao: return "sao";
  }
  return "?";
}

std::string to_string(const TaskId& task) {
  return std::string(to_string(task.phase)) + "(" + std::to_string(task.coord.row) + "," +
         std::to_string(task.coord.col) + ")@" + std::to_string(task.frame);
}

namespace {

void check_coord(CtuCoord coord, GridDims dims) {
  if (!coord.within(dims))
    throw DomainError("CTU (" + std::to_string(coord.row) + "," + std::to_string(coord.col) +
                      ") outside " + std::to_string(dims.rows) + "x" +
                      std::to_string(dims.cols) + " grid");
}

Phase upstream_phase(Phase phase) {
  return phase == Phase::VFilter ? Phase::HFilter : Phase::VFilter;
}

}  // namespace

std::vector<CtuCoord> recon_deps(CtuCoord coord, GridDims dims) {
  check_coord(coord, dims);
  std::vector<CtuCoord> deps;
  if (coord.col > 0) deps.push_back({coord.row, coord.col - 1});
  if (coord.row > 0) deps.push_back({coord.row - 1, std::min(coord.col + 2, dims.cols - 1)});
  return deps;
}

std::vector<TaskId> filter_deps(const TaskId& task, GridDims dims) {
  if (task.phase == Phase::Recon)
    throw DomainError("filter_deps called on a reconstruction task; use recon_deps");
  check_coord(task.coord, dims);

  const auto [i, j] = task.coord;
  std::vector<TaskId> deps;
  if (j > 0) deps.push_back({task.phase, {i, j - 1}, task.frame});
  if (task.phase == Phase::HFilter) return deps;

  // Own CTU plus the right and lower neighbours, clamped to the grid.
  const Phase up = upstream_phase(task.phase);
  const CtuCoord candidates[] = {
      {i, j}, {i, std::min(j + 1, dims.cols - 1)}, {std::min(i + 1, dims.rows - 1), j}};
  std::vector<CtuCoord> seen;
  for (const CtuCoord c : candidates) {
    if (std::find(seen.begin(), seen.end(), c) != seen.end()) continue;
    seen.push_back(c);
    deps.push_back({up, c, task.frame});
  }
  return deps;
}

TaskSet::TaskSet(GridDims dims, int frame)
    : dims_(dims), frame_(frame), bits_(static_cast<size_t>(kPhaseCount * dims.ctu_count()), 0) {
  dims.validate();
}

bool TaskSet::contains(const TaskId& task) const {
  if (task.frame != frame_ || !task.coord.within(dims_)) return false;
  return bits_[task_index(task, dims_)] != 0;
}

void TaskSet::insert(const TaskId& task) {
  if (task.frame != frame_) throw DomainError("task " + to_string(task) + " is from another frame");
  check_coord(task.coord, dims_);
  auto& bit = bits_[task_index(task, dims_)];
  if (bit) return;
  bit = 1;
  ++count_;
  if (task.phase == Phase::Recon) ++recon_count_;
}

FrameBarrier frame_barrier(int frame) {
  if (frame < 0) throw DomainError("negative frame index");
  return FrameBarrier{frame};
}

bool is_ready(const TaskId& task, const TaskSet& done) {
  const GridDims dims = done.dims();
  if (task.phase == Phase::Recon) {
    for (const CtuCoord c : recon_deps(task.coord, dims))
      if (!done.contains({Phase::Recon, c, task.frame})) return false;
    return true;
  }
  if (!frame_barrier(task.frame).satisfied_by(done)) return false;
  for (const TaskId& dep : filter_deps(task, dims))
    if (!done.contains(dep)) return false;
  return true;
}

std::vector<TaskId> ready_tasks(const TaskSet& done) {
  const GridDims dims = done.dims();
  std::vector<TaskId> ready;
  for (int p = 0; p < kPhaseCount; ++p) {
    for (int i = 0; i < dims.rows; ++i) {
      for (int j = 0; j < dims.cols; ++j) {
        const TaskId task{static_cast<Phase>(p), {i, j}, done.frame()};
        const bool ok = is_ready(task, done);
        if (done.contains(task)) {
          if (!ok)
            throw ConsistencyError("completed task " + to_string(task) +
                                   " has an incomplete predecessor");
          continue;
        }
        if (ok) ready.push_back(task);
      }
    }
  }
  return ready;
}

int required_upper_column(int row, GridDims dims) {
  check_coord({row, 0}, dims);
  // Walk the upper-dependency chain from (row, 0) up to row 0.
  int col = 0;
  for (int i = row; i > 0; --i) col = std::min(col + 2, dims.cols - 1);
  return col;
}

int wavefront_width(GridDims dims) {
  dims.validate();
  // (i,j) precedes (i+k, j') iff j' >= j - 2k, so independent CTUs in consecutive rows
  // must be at least three columns apart.
  return std::min(dims.rows, (dims.cols + 2) / 3);
}

FrameGraph::FrameGraph(GridDims dims) : dims_(dims) {
  dims.validate();
  const int n = kPhaseCount * dims.ctu_count();
  tasks_.resize(n);
  preds_.resize(n);
  succs_.resize(n);
  for (int p = 0; p < kPhaseCount; ++p) {
    for (int i = 0; i < dims.rows; ++i) {
      for (int j = 0; j < dims.cols; ++j) {
        const TaskId task{static_cast<Phase>(p), {i, j}, 0};
        const int idx = task_index(task, dims);
        tasks_[idx] = task;
        if (task.phase == Phase::Recon) {
          for (const CtuCoord c : recon_deps(task.coord, dims))
            preds_[idx].push_back(task_index({Phase::Recon, c, 0}, dims));
        } else {
          for (const TaskId& d : filter_deps(task, dims)) preds_[idx].push_back(task_index(d, dims));
        }
        for (int pred : preds_[idx]) succs_[pred].push_back(idx);
      }
    }
  }
}

}  // namespace wavesched
