// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#include "wavesched/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "wavesched/errors.hpp"

namespace wavesched {

SimReport compute_metrics(const EventTrace& trace, const Platform& platform) {
  if (trace.cores != platform.core_count())
    throw ConsistencyError("trace has " + std::to_string(trace.cores) + " cores, platform " +
                           std::to_string(platform.core_count()));
  int frames_done = 0;
  double makespan = 0.0;
  for (const SimEvent& e : trace.events) {
    if (e.kind != EventKind::FrameComplete) continue;
    if (e.frame != frames_done) throw ConsistencyError("frames completed out of order");
    ++frames_done;
    makespan = e.time_s;
  }
  if (trace.frames < 1 || frames_done != trace.frames)
    throw ConsistencyError("truncated trace: " + std::to_string(frames_done) + " of " +
                           std::to_string(trace.frames) + " frames complete");
  if (!(makespan > 0.0)) throw ConsistencyError("trace has zero duration");

  const int n = trace.cores;
  std::vector<int> running(n, 0);
  std::vector<CoreState> states(n, CoreState::Idle);
  const CoreState active = trace.simd ? CoreState::ActiveSimd : CoreState::Active;
  SimReport r;
  r.frames = trace.frames;
  r.wall_time_s = makespan;
  r.busy_s.assign(n, 0.0);
  r.core_energy_j.assign(n, 0.0);

  // Piecewise-constant power: (segment start, total power).
  std::vector<std::pair<double, double>> segments;
  double t_prev = 0.0;
  auto integrate_to = [&](double t) {
    if (t < t_prev) throw ConsistencyError("trace events out of time order");
    if (t == t_prev) return;
    const double dt = t - t_prev;
    const double p = platform.instantaneous_power(states);
    if (segments.empty() || segments.back().second != p) segments.emplace_back(t_prev, p);
    r.energy_j += p * dt;
    for (int c = 0; c < n; ++c) {
      const CoreType& type = platform.core_type(c);
      if (running[c] > 0) {
        r.busy_s[c] += dt;
        const double f = trace.simd ? type.simd_power_factor : 1.0;
        r.core_energy_j[c] += type.active_power_w * f * dt;
      } else {
        r.core_energy_j[c] += type.idle_power_w * dt;
      }
    }
    t_prev = t;
  };

  for (const SimEvent& e : trace.events) {
    if (e.time_s > makespan) throw ConsistencyError("event after the last frame completed");
    integrate_to(e.time_s);
    if (e.kind == EventKind::Migration) ++r.migrations;
    if (e.kind != EventKind::CtuStart && e.kind != EventKind::CtuComplete) continue;
    if (e.core < 0 || e.core >= n) throw ConsistencyError("event on unknown core");
    running[e.core] += e.kind == EventKind::CtuStart ? 1 : -1;
    if (running[e.core] < 0) throw ConsistencyError("completion without a start");
    states[e.core] = running[e.core] > 0 ? active : CoreState::Idle;
  }
  integrate_to(makespan);

  r.fps = r.frames / makespan;
  r.epf_j = r.energy_j / r.frames;
  r.avg_power_w = r.energy_j / makespan;
  r.utilization.resize(n);
  for (int c = 0; c < n; ++c) r.utilization[c] = std::min(1.0, r.busy_s[c] / makespan);

  auto power_at = [&](double t) {
    auto it = std::upper_bound(segments.begin(), segments.end(), t,
                               [](double v, const auto& s) { return v < s.first; });
    return it == segments.begin() ? segments.front().second : std::prev(it)->second;
  };
  const double interval = platform.sample_interval_s();
  for (int k = 0; (k + 0.5) * interval < makespan; ++k)
    r.power_samples.push_back(power_at((k + 0.5) * interval));
  if (r.power_samples.empty()) r.power_samples.push_back(power_at(makespan / 2));
  double sum = 0.0;
  for (double p : r.power_samples) sum += p;
  r.sampled_energy_j = sum / r.power_samples.size() * makespan;
  return r;
}

std::vector<std::vector<double>> completion_times(const EventTrace& trace) {
  const int per_frame = kPhaseCount * trace.dims.ctu_count();
  std::vector<std::vector<double>> out(trace.frames, std::vector<double>(per_frame, -1.0));
  for (const SimEvent& e : trace.events)
    if (e.kind == EventKind::CtuComplete && e.task)
      out.at(e.frame).at(task_index(*e.task, trace.dims)) = e.time_s;
  return out;
}

double analytic_wavefront_makespan(GridDims dims, double t_ctu) {
  return (dims.cols + std::min(dims.cols, 3) * (dims.rows - 1)) * t_ctu;
}

namespace {

struct RefThread {
  std::optional<TaskId> task;
  double cost = 0.0;
  double remaining = 0.0;
  double ready_at = 0.0;
  int next_col = 0;
};

class ReferenceFrame {
 public:
  ReferenceFrame(const SimConfig& cfg, int frame, double t0, double dt0, ReferenceResult& out)
      : cfg_(cfg),
        costs_(cfg.workload[frame]),
        frame_(frame),
        now_(t0),
        dt0_(dt0),
        out_(out),
        state_(initial_assignment(cfg.policy, cfg.platform, cfg.dims)),
        threads_(cfg.policy.threads),
        done_(cfg.dims, frame),
        busy_(kPhaseCount * cfg.dims.ctu_count(), 0) {
    out_.completion_s.emplace_back(kPhaseCount * cfg.dims.ctu_count(), -1.0);
  }

  double run() {
    const int filter_total = (kPhaseCount - 1) * cfg_.dims.ctu_count();
    while (filter_done_ < filter_total) {
      start_work();
      step();
    }
    push(EventKind::FrameComplete, -1, -1, std::nullopt);
    return now_;
  }

 private:
  void push(EventKind kind, int thread, int core, std::optional<TaskId> task) {
    SimEvent e;
    e.time_s = now_;
    e.kind = kind;
    e.frame = frame_;
    e.thread = thread;
    e.core = core;
    e.task = task;
    out_.trace.events.push_back(e);
  }

  void begin(int t, const TaskId& id) {
    RefThread& th = threads_[t];
    th.task = id;
    th.cost = costs_.effective_task_cost(id, cfg_.simd);
    th.remaining = th.cost;
    busy_[task_index(id, cfg_.dims)] = 1;
    push(EventKind::CtuStart, t, state_.core_of(t), id);
  }

  bool startable(int t) const {
    return !threads_[t].task && state_.core_of(t) >= 0 && now_ >= threads_[t].ready_at;
  }

  void start_work() {
    if (!state_.filter_stage()) {
      for (int t = 0; t < state_.thread_count(); ++t) {
        const int row = state_.row_of(t);
        if (!startable(t) || row < 0 || threads_[t].next_col >= cfg_.dims.cols) continue;
        const TaskId id{Phase::Recon, {row, threads_[t].next_col}, frame_};
        if (is_ready(id, done_)) begin(t, id);
      }
      return;
    }
    std::vector<TaskId> ready;
    for (const TaskId& id : ready_tasks(done_))
      if (id.phase != Phase::Recon && !busy_[task_index(id, cfg_.dims)]) ready.push_back(id);
    std::vector<int> avail;
    for (int t = 0; t < state_.thread_count(); ++t)
      if (startable(t)) avail.push_back(t);
    if (ready.empty() || avail.empty()) return;
    const std::vector<int> load = loads();
    for (const auto& [t, id] : dispatch_filter(state_, ready, load, avail)) begin(t, id);
  }

  std::vector<int> loads() const {
    std::vector<int> load(cfg_.platform.core_count(), 0);
    for (int t = 0; t < state_.thread_count(); ++t)
      if (threads_[t].task) ++load[state_.core_of(t)];
    return load;
  }

  void step() {
    const std::vector<int> load = loads();
    std::vector<double> rate(threads_.size(), 0.0);
    double dt = dt0_;
    double wake = std::numeric_limits<double>::infinity();
    bool pending = false;
    for (int t = 0; t < state_.thread_count(); ++t) {
      const RefThread& th = threads_[t];
      if (th.task) {
        const int core = state_.core_of(t);
        const int n = load[core];
        rate[t] = cfg_.platform.core_type(core).speed_wu_per_s / n;
        if (n > 1) rate[t] *= 1.0 - cfg_.oversub_penalty;
        dt = std::min(dt, th.remaining / rate[t]);
        pending = true;
      } else if (state_.core_of(t) >= 0 && th.ready_at > now_) {
        wake = std::min(wake, th.ready_at);
        pending = true;
      }
    }
    if (!pending)
      throw SimulationError("reference: no runnable work in frame " + std::to_string(frame_), {});
    const bool to_wake = wake - now_ <= dt;
    if (to_wake) dt = wake - now_;
    // Zero-cost tasks (filter passes with no filter work) complete without time passing.
    const bool instant = dt == 0.0 && !to_wake;
    if (!instant && !(now_ + dt > now_)) throw SimulationError("reference: step underflow", {});

    std::vector<int> finished;
    for (int t = 0; t < state_.thread_count(); ++t) {
      RefThread& th = threads_[t];
      if (!th.task) continue;
      th.remaining -= rate[t] * dt;
      if (th.remaining <= 1e-9 * th.cost) finished.push_back(t);
    }
    now_ = to_wake ? wake : now_ + dt;

    std::sort(finished.begin(), finished.end(), [&](int a, int b) {
      const TaskId& x = *threads_[a].task;
      const TaskId& y = *threads_[b].task;
      if (x.coord != y.coord) return x.coord < y.coord;
      if (x.phase != y.phase) return x.phase < y.phase;
      return state_.core_of(a) < state_.core_of(b);
    });
    for (int t : finished) finish(t);
  }

  void finish(int t) {
    RefThread& th = threads_[t];
    const TaskId id = *th.task;
    th.task.reset();
    done_.insert(id);
    out_.completion_s.back()[task_index(id, cfg_.dims)] = now_;
    push(EventKind::CtuComplete, t, state_.core_of(t), id);
    if (id.phase != Phase::Recon) {
      ++filter_done_;
      follow(on_filter_ctu_complete(state_, t));
      return;
    }
    th.next_col = id.coord.col + 1;
    if (th.next_col == cfg_.dims.cols)
      follow(on_row_complete(state_, t));
    else
      follow(on_recon_ctu_complete(state_, t, id.coord));
    if (done_.recon_complete())
      for (const Action& a : filter_stage_start(state_)) note(a);
  }

  void follow(const std::vector<Action>& actions) {
    for (const Action& a : actions) {
      note(a);
      for (const Action& d : state_.apply(a)) note(d);
    }
  }

  void note(const Action& a) {
    RefThread& th = threads_[a.thread];
    if (a.kind == Action::Kind::MigrateSelf || a.kind == Action::Kind::BindTo) {
      th.ready_at = now_ + cfg_.policy.migration_overhead_s;
      push(EventKind::Migration, a.thread, a.core, std::nullopt);
    } else if (a.kind == Action::Kind::TakeRow) {
      th.next_col = 0;
    }
  }

  const SimConfig& cfg_;
  const CostModel& costs_;
  int frame_;
  double now_;
  double dt0_;
  ReferenceResult& out_;
  SchedState state_;
  std::vector<RefThread> threads_;
  TaskSet done_;
  std::vector<char> busy_;
  int filter_done_ = 0;
};

}  // namespace

ReferenceResult reference_simulate(const SimConfig& config) {
  config.validate();
  const GridDims dims = config.dims;
  const long long tasks = 1LL * kPhaseCount * dims.ctu_count() * config.frames;
  if (tasks > 5000)
    throw DomainError("reference simulation is limited to 5000 tasks, got " +
                      std::to_string(tasks));

  double max_speed = 0.0;
  for (int c = 0; c < config.platform.core_count(); ++c)
    max_speed = std::max(max_speed, config.platform.core_type(c).speed_wu_per_s);
  double min_cost = std::numeric_limits<double>::infinity();
  const FrameGraph graph(dims);
  for (int f = 0; f < config.frames; ++f)
    for (int i = 0; i < graph.task_count(); ++i) {
      const double c = config.workload[f].effective_task_cost(graph.task(i), config.simd);
      if (c > 0.0) min_cost = std::min(min_cost, c);
    }
  if (!std::isfinite(min_cost)) throw DomainError("workload has no positive task cost");

  ReferenceResult out;
  out.trace.frames = config.frames;
  out.trace.cores = config.platform.core_count();
  out.trace.threads = config.policy.threads;
  out.trace.simd = config.simd;
  out.trace.dims = dims;
  double t = 0.0;
  for (int f = 0; f < config.frames; ++f)
    t = ReferenceFrame(config, f, t, min_cost / max_speed / 1000.0, out).run();
  out.makespan_s = t;
  return out;
}

double percent_delta(double value, double baseline) {
  if (baseline == 0.0) throw DomainError("percent delta against a zero baseline");
  return 100.0 * (value - baseline) / baseline;
}

double cluster_power(const SimReport& report, const Platform& platform, PolicyKind policy) {
  const auto& cores =
      policy == PolicyKind::LittleOnly ? platform.little_cores() : platform.big_cores();
  double e = 0.0;
  for (int c : cores) e += report.core_energy_j.at(c);
  return e / report.wall_time_s;
}

PaperComparison compare_to_paper(const std::map<SweepKey, SimReport>& reports,
                                 const TargetTable& targets, const Platform& platform) {
  std::set<std::string> missing;
  auto get = [&](PolicyKind p, int n, bool simd) -> const SimReport* {
    auto it = reports.find({p, n, simd});
    if (it != reports.end()) return &it->second;
    missing.insert(std::string(to_string(p)) + "/" + std::to_string(n) +
                   (simd ? "/simd-on" : "/simd-off"));
    return nullptr;
  };

  PaperComparison out;
  std::set<int> counts;
  for (const auto& [key, _] : reports) counts.insert(key.threads);
  for (int n : counts) {
    const SimReport* u = get(PolicyKind::BigOnlyOs, n, false);
    const SimReport* s = get(PolicyKind::StaticPinned, n, false);
    const SimReport* a = get(PolicyKind::CriticalityAware, n, false);
    const SimReport* v = get(PolicyKind::CriticalityAware, n, true);
    if (!u || !s || !a || !v) continue;
    for (int m = 0; m < 2; ++m) {
      auto val = [m](const SimReport* r) { return m == 0 ? r->fps : r->epf_j; };
      PolicyTableRow row;
      row.threads = n;
      row.big_os = val(u);
      row.stat = val(s);
      row.stat_vs_big_os = percent_delta(val(s), val(u));
      row.affinity = val(a);
      row.affinity_vs_big_os = percent_delta(val(a), val(u));
      row.affinity_vs_static = percent_delta(val(a), val(s));
      row.affinity_simd = val(v);
      row.affinity_simd_vs_static = percent_delta(val(v), val(s));
      row.affinity_simd_vs_affinity = percent_delta(val(v), val(a));
      (m == 0 ? out.fps : out.epf).push_back(row);
    }
  }

  for (const Target& t : targets.rows()) {
    const SimReport* r = get(t.policy, t.threads, t.simd);
    if (!r) continue;
    double sim = 0.0;
    switch (t.metric) {
      case Metric::Fps: sim = r->fps; break;
      case Metric::Epf: sim = r->epf_j; break;
      case Metric::Power: sim = r->avg_power_w; break;
      case Metric::ClusterPower: sim = cluster_power(*r, platform, t.policy); break;
    }
    out.deviations.push_back({t, sim, percent_delta(sim, t.value)});
  }

  if (!missing.empty()) {
    std::string what = "missing reports:";
    for (const auto& m : missing) what += " " + m;
    throw ConfigError("reports", 0, what);
  }
  return out;
}

}  // namespace wavesched
