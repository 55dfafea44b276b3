// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#include "wavesched/engine.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <limits>
#include <set>
#include <thread>
#include <tuple>

#include "wavesched/analysis.hpp"
#include "wavesched/errors.hpp"

namespace wavesched {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::CtuStart: return "ctu_start";
    case EventKind::CtuComplete: return "ctu_complete";
    case EventKind::RowComplete: return "row_complete";
    case EventKind::BarrierReached: return "barrier";
    case EventKind::Migration: return "migration";
    case EventKind::FrameComplete: return "frame_complete";
    case EventKind::ThreadIdle: return "thread_idle";
    case EventKind::ThreadResume: return "thread_resume";
  }
  return "?";
}

void SimConfig::validate() const {
  platform.validate();
  policy.validate();
  dims.validate();
  if (frames < 1) throw ConfigError("frames", 0, "must be >= 1");
  if (static_cast<int>(workload.size()) < frames)
    throw ConfigError("frames", 0, "workload covers " + std::to_string(workload.size()) +
                                       " frames, " + std::to_string(frames) + " requested");
  for (const auto& cm : workload)
    if (cm.dims() != dims) throw ConfigError("grid", 0, "dimension mismatch between workload and grid");
  if (!(oversub_penalty >= 0.0 && oversub_penalty < 1.0))
    throw ConfigError("oversub_penalty", 0, "must be in [0, 1)");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Runner {
  int task = -1;
  double remaining = 0.0;
  double ready_at = 0.0;
  int next_col = 0;
};

class FrameRun {
 public:
  FrameRun(const SimConfig& cfg, const FrameGraph& graph, int frame, double t0,
           std::vector<SimEvent>& out)
      : cfg_(cfg),
        graph_(graph),
        costs_(cfg.workload[frame]),
        frame_(frame),
        now_(t0),
        out_(out),
        state_(initial_assignment(cfg.policy, cfg.platform, cfg.dims)),
        runners_(cfg.policy.threads),
        running_(cfg.platform.core_count(), 0),
        done_(graph.task_count(), 0),
        pending_preds_(graph.task_count(), 0) {
    for (int i = 0; i < graph.task_count(); ++i)
      pending_preds_[i] = static_cast<int>(graph.preds(i).size());
    recon_total_ = cfg.dims.ctu_count();
    filter_total_ = graph.task_count() - recon_total_;
  }

  double run() {
    for (int t = 0; t < state_.thread_count(); ++t)
      if (state_.core_of(t) >= 0) emit(EventKind::ThreadResume, t, state_.core_of(t));
    while (!frame_done_) {
      start_work();
      const double t_next = next_event_time();
      if (t_next == kInf) {
        if (frame_done_) break;
        report_deadlock();
      }
      advance(t_next);
    }
    return now_;
  }

 private:
  double rate(int core) const {
    const int n = running_[core];
    double share = effective_speed(cfg_.platform.core_type(core), n);
    if (n > 1) share *= 1.0 - cfg_.oversub_penalty;
    return share;
  }

  void emit(EventKind kind, int thread, int core, std::optional<TaskId> task = std::nullopt) {
    SimEvent e;
    e.time_s = now_;
    e.kind = kind;
    e.frame = frame_;
    e.thread = thread;
    e.core = core;
    e.task = task;
    out_.push_back(e);
  }

  bool recon_ready(int row, int col) const {
    for (int p : graph_.preds(row * cfg_.dims.cols + col))
      if (!done_[p]) return false;
    return true;
  }

  void start(int thread, int task_index) {
    Runner& r = runners_[thread];
    const TaskId id = graph_.task(task_index);
    r.task = task_index;
    r.remaining = costs_.effective_task_cost(id, cfg_.simd);
    const int core = state_.core_of(thread);
    ++running_[core];
    emit(EventKind::CtuStart, thread, core, TaskId{id.phase, id.coord, frame_});
  }

  void start_work() {
    if (!filter_stage_) {
      for (int t = 0; t < state_.thread_count(); ++t) {
        Runner& r = runners_[t];
        const int row = state_.row_of(t);
        if (r.task >= 0 || row < 0 || state_.core_of(t) < 0 || now_ < r.ready_at) continue;
        if (r.next_col >= cfg_.dims.cols || !recon_ready(row, r.next_col)) continue;
        start(t, row * cfg_.dims.cols + r.next_col);
      }
      return;
    }
    if (filter_ready_.empty()) return;
    std::vector<int> avail;
    for (int t = 0; t < state_.thread_count(); ++t)
      if (runners_[t].task < 0 && state_.core_of(t) >= 0 && now_ >= runners_[t].ready_at)
        avail.push_back(t);
    if (avail.empty()) return;
    std::vector<TaskId> ready;
    for (int idx : filter_ready_) ready.push_back(graph_.task(idx));
    for (const auto& [t, task] : dispatch_filter(state_, ready, running_, avail)) {
      const int idx = task_index(task, cfg_.dims);
      filter_ready_.erase(idx);
      start(t, idx);
    }
  }

  double next_event_time() const {
    double t = kInf;
    for (int th = 0; th < state_.thread_count(); ++th) {
      const Runner& r = runners_[th];
      if (r.task >= 0)
        t = std::min(t, now_ + r.remaining / rate(state_.core_of(th)));
      else if (r.ready_at > now_ && state_.core_of(th) >= 0)
        t = std::min(t, r.ready_at);
    }
    return t;
  }

  void advance(double t_next) {
    const double dt = t_next - now_;
    const double tol = 1e-12 * std::max(1.0, std::abs(t_next));
    std::vector<int> finished;
    std::vector<double> rates(state_.thread_count(), 0.0);
    for (int th = 0; th < state_.thread_count(); ++th)
      if (runners_[th].task >= 0) rates[th] = rate(state_.core_of(th));
    for (int th = 0; th < state_.thread_count(); ++th) {
      Runner& r = runners_[th];
      if (r.task < 0) continue;
      if (now_ + r.remaining / rates[th] <= t_next + tol) {
        r.remaining = 0.0;
        finished.push_back(th);
      } else {
        r.remaining -= rates[th] * dt;
      }
    }
    now_ = t_next;

    std::sort(finished.begin(), finished.end(), [&](int a, int b) {
      const TaskId& ta = graph_.task(runners_[a].task);
      const TaskId& tb = graph_.task(runners_[b].task);
      return std::make_tuple(ta.coord.row, ta.coord.col, ta.phase, state_.core_of(a)) <
             std::make_tuple(tb.coord.row, tb.coord.col, tb.phase, state_.core_of(b));
    });
    for (int th : finished) complete(th);
  }

  void complete(int thread) {
    Runner& r = runners_[thread];
    const int idx = r.task;
    const TaskId id{graph_.task(idx).phase, graph_.task(idx).coord, frame_};
    const int core = state_.core_of(thread);
    emit(EventKind::CtuComplete, thread, core, id);
    --running_[core];
    r.task = -1;
    done_[idx] = 1;

    if (id.phase == Phase::Recon) {
      ++recon_done_;
      r.next_col = id.coord.col + 1;
      if (id.coord.col == cfg_.dims.cols - 1) {
        emit(EventKind::RowComplete, thread, core, id);
        apply_all(on_row_complete(state_, thread));
      } else {
        apply_all(on_recon_ctu_complete(state_, thread, id.coord));
      }
      if (recon_done_ == recon_total_) enter_filter_stage();
      return;
    }

    ++filter_done_;
    for (int s : graph_.succs(idx))
      if (--pending_preds_[s] == 0) filter_ready_.insert(s);
    apply_all(on_filter_ctu_complete(state_, thread));
    if (filter_done_ == filter_total_) {
      emit(EventKind::FrameComplete, -1, -1);
      frame_done_ = true;
    }
  }

  void enter_filter_stage() {
    emit(EventKind::BarrierReached, -1, -1);
    filter_stage_ = true;
    for (const Action& a : filter_stage_start(state_)) log_action(a, -1);
    for (int i = recon_total_; i < graph_.task_count(); ++i)
      if (pending_preds_[i] == 0) filter_ready_.insert(i);
  }

  void apply_all(const std::vector<Action>& actions) {
    for (const Action& a : actions) {
      const int from = state_.core_of(a.thread);
      const auto derived = state_.apply(a);
      log_action(a, from);
      for (const Action& d : derived) log_action(d, -1);
    }
  }

  void log_action(const Action& a, int from) {
    Runner& r = runners_[a.thread];
    switch (a.kind) {
      case Action::Kind::MigrateSelf:
      case Action::Kind::BindTo: {
        SimEvent e;
        e.time_s = now_;
        e.kind = EventKind::Migration;
        e.frame = frame_;
        e.thread = a.thread;
        e.core = a.core;
        e.from_core = from;
        e.rank = a.rank;
        e.idle_big = a.idle_big;
        out_.push_back(e);
        if (from < 0) emit(EventKind::ThreadResume, a.thread, a.core);
        r.ready_at = now_ + cfg_.policy.migration_overhead_s;
        break;
      }
      case Action::Kind::TakeRow:
        r.next_col = 0;
        break;
      case Action::Kind::Idle:
        emit(EventKind::ThreadIdle, a.thread, state_.core_of(a.thread));
        break;
      case Action::Kind::Vacate:
        // Core -1: the thread no longer holds a core.
        emit(EventKind::ThreadIdle, a.thread, -1);
        break;
      case Action::Kind::None:
        break;
    }
  }

  [[noreturn]] void report_deadlock() const {
    std::vector<std::string> blocked;
    for (int i = 0; i < graph_.task_count(); ++i) {
      if (done_[i]) continue;
      const TaskId& t = graph_.task(i);
      blocked.push_back(to_string(TaskId{t.phase, t.coord, frame_}));
    }
    std::string what = "deadlock in frame " + std::to_string(frame_) + " at t=" +
                       std::to_string(now_) + ": " + std::to_string(blocked.size()) +
                       " unfinished tasks";
    for (size_t k = 0; k < std::min<size_t>(blocked.size(), 8); ++k) what += " " + blocked[k];
    throw SimulationError(what, std::move(blocked));
  }

  const SimConfig& cfg_;
  const FrameGraph& graph_;
  const CostModel& costs_;
  int frame_;
  double now_;
  std::vector<SimEvent>& out_;
  SchedState state_;
  std::vector<Runner> runners_;
  std::vector<int> running_;
  std::vector<char> done_;
  std::vector<int> pending_preds_;
  std::set<int> filter_ready_;
  int recon_total_ = 0;
  int filter_total_ = 0;
  int recon_done_ = 0;
  int filter_done_ = 0;
  bool filter_stage_ = false;
  bool frame_done_ = false;
};

}  // namespace

SimResult simulate(const SimConfig& config) {
  config.validate();
  const FrameGraph graph(config.dims);
  SimResult result;
  EventTrace& trace = result.trace;
  trace.frames = config.frames;
  trace.cores = config.platform.core_count();
  trace.threads = config.policy.threads;
  trace.simd = config.simd;
  trace.dims = config.dims;

  double t = 0.0;
  for (int f = 0; f < config.frames; ++f) t = FrameRun(config, graph, f, t, trace.events).run();
  result.report = compute_metrics(trace, config.platform);
  return result;
}

std::vector<SweepCell> run_cells(const SimConfig& base, std::vector<SweepKey> keys) {
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<SweepCell> cells;
  for (const SweepKey& k : keys) cells.push_back({k, std::nullopt, {}});

  auto run_cell = [&base](SweepCell& cell) {
    try {
      SimConfig cfg = base;
      cfg.policy.kind = cell.key.policy;
      cfg.policy.threads = cell.key.threads;
      cfg.simd = cell.key.simd;
      cell.report = simulate(cfg).report;
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  };

  const size_t workers =
      std::clamp<size_t>(std::thread::hardware_concurrency(), 1, std::max<size_t>(1, cells.size()));
  std::atomic<size_t> next{0};
  std::vector<std::future<void>> pool;
  for (size_t w = 0; w < workers; ++w) {
    pool.push_back(std::async(std::launch::async, [&] {
      for (size_t i = next++; i < cells.size(); i = next++) run_cell(cells[i]);
    }));
  }
  for (auto& f : pool) f.get();
  return cells;
}

std::vector<SweepCell> run_sweep(const SimConfig& base, std::span<const int> thread_counts,
                                 std::span<const PolicyKind> policies,
                                 std::span<const bool> simd) {
  if (thread_counts.empty() || policies.empty() || simd.empty())
    throw ConfigError("sweep", 0, "thread, policy and simd lists must be non-empty");
  std::vector<SweepKey> keys;
  for (PolicyKind p : policies)
    for (int n : thread_counts)
      for (bool s : simd) keys.push_back({p, n, s});
  return run_cells(base, std::move(keys));
}

}  // namespace wavesched
