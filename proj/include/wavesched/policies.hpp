// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <deque>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wavesched/platform.hpp"
#include "wavesched/wpp_graph.hpp"

namespace wavesched {

enum class PolicyKind {
  /// All threads on the big cluster, round-robin; oversubscribed cores are fair-shared.
  BigOnlyOs,
  /// All threads on the LITTLE cluster, round-robin.
  LittleOnly,
  /// One thread per big core, then one per LITTLE core, never moved.
  StaticPinned,
  /// StaticPinned start plus guarded migrations that keep the top in-flight rows on big
  /// cores.
  CriticalityAware,
};

/// CLI names: big-os, little, static, affinity.
const char* to_string(PolicyKind kind);
PolicyKind parse_policy(std::string_view name);

struct PolicySpec {
  PolicyKind kind = PolicyKind::CriticalityAware;
  int threads = 8;
  /// Delay between a thread changing cores and its next CTU start.
  double migration_overhead_s = 100e-6;

  void validate() const;
  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

struct Action {
  enum class Kind {
    None,
    /// Move `thread` to `core`. `rank`/`idle_big` record the guard inputs.
    MigrateSelf,
    /// Bind an unbound (waiting) thread to `core`.
    BindTo,
    /// Leave the current core and wait for a LITTLE core to free up.
    Vacate,
    /// Start row `row` on the current binding.
    TakeRow,
    /// No row left; stay where bound.
    Idle,
  };

  Kind kind = Kind::None;
  int thread = -1;
  int core = -1;
  int row = -1;
  int rank = 0;
  int idle_big = 0;

  friend bool operator==(const Action&, const Action&) = default;
};

const char* to_string(Action::Kind kind);

/// Thread-to-core binding and row ownership of one frame. Mutated only through apply().
class SchedState {
 public:
  SchedState(PolicySpec spec, Platform platform, GridDims dims);

  const PolicySpec& spec() const { return spec_; }
  const Platform& platform() const { return platform_; }
  GridDims dims() const { return dims_; }
  int thread_count() const { return static_cast<int>(core_.size()); }

  /// -1 when the thread is waiting for a core.
  int core_of(int thread) const { return core_[thread]; }
  /// -1 when the thread holds no reconstruction row.
  int row_of(int thread) const { return row_[thread]; }
  bool on_big(int thread) const { return core_[thread] >= 0 && platform_.is_big(core_[thread]); }
  bool on_little(int thread) const {
    return core_[thread] >= 0 && !platform_.is_big(core_[thread]);
  }

  int next_row() const { return next_row_; }
  bool rows_remain() const { return next_row_ < dims_.rows; }
  bool filter_stage() const { return filter_stage_; }
  const std::deque<int>& waiting() const { return waiting_; }

  /// Threads currently bound to `core`.
  int bound_count(int core) const { return bound_[core]; }
  /// Big cores with no bound thread, ascending.
  std::vector<int> idle_big_cores() const;
  /// LITTLE cores with no bound thread, ascending.
  std::vector<int> free_little_cores() const;
  /// 1-based rank of the thread's row among rows held by LITTLE-bound threads (smallest row
  /// index first). 0 if the thread is not on LITTLE or holds no row.
  int little_rank(int thread) const;
  bool any_little_row_holder() const;

  /// Applies `action` and any consequence it triggers (a waiting thread claiming the
  /// LITTLE core just vacated). Returns the consequential actions, already applied.
  std::vector<Action> apply(const Action& action);

  /// Binds waiting threads and switches to the filter stage; returns the bindings made.
  std::vector<Action> enter_filter_stage();

 private:
  void bind(int thread, int core);
  void unbind(int thread);
  std::vector<Action> claim_vacancy(int core);

  PolicySpec spec_;
  Platform platform_;
  GridDims dims_;
  std::vector<int> core_;
  std::vector<int> row_;
  std::vector<int> bound_;
  std::deque<int> waiting_;
  int next_row_ = 0;
  bool filter_stage_ = false;
};

/// Frame-start binding and the first min(threads, rows) rows, lowest rows on big cores.
/// Throws DomainError when the thread count exceeds what the policy can place.
SchedState initial_assignment(const PolicySpec& spec, const Platform& platform, GridDims dims);

/// Migration check performed by a thread after finishing a (non-final) CTU of its row.
std::vector<Action> on_recon_ctu_complete(const SchedState& state, int thread, CtuCoord coord);

/// Decision for a thread that just finished the last CTU of its row.
std::vector<Action> on_row_complete(const SchedState& state, int thread);

/// Enters the filter stage. For a full machine (one thread per core) asserts that every
/// core is bound exactly once; throws ConsistencyError otherwise.
std::vector<Action> filter_stage_start(SchedState& state);

/// Migration check performed by a LITTLE-bound thread after finishing a filter CTU.
std::vector<Action> on_filter_ctu_complete(const SchedState& state, int thread);

/// Pairs available threads with ready filter tasks. `ready` must be in dispatch order;
/// threads on the least-loaded cores go first, big before LITTLE, then by core and thread
/// id. `running_per_core` counts threads currently executing on each core.
std::vector<std::pair<int, TaskId>> dispatch_filter(const SchedState& state,
                                                    std::span<const TaskId> ready,
                                                    std::span<const int> running_per_core,
                                                    std::span<const int> available_threads);

}  // namespace wavesched
