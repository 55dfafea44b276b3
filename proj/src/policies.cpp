// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#include "wavesched/policies.hpp"

#include <algorithm>
#include <tuple>

#include "wavesched/errors.hpp"

namespace wavesched {

const char* to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::BigOnlyOs: return "big-os";
    case PolicyKind::LittleOnly: return "little";
    case PolicyKind::StaticPinned: return "static";
    case PolicyKind::CriticalityAware: return "affinity";
  }
  return "?";
}

PolicyKind parse_policy(std::string_view name) {
  if (name == "big-os") return PolicyKind::BigOnlyOs;
  if (name == "little") return PolicyKind::LittleOnly;
  if (name == "static") return PolicyKind::StaticPinned;
  if (name == "affinity") return PolicyKind::CriticalityAware;
  throw ConfigError("policy", 0,
                    "unknown policy '" + std::string(name) + "' (big-os|little|static|affinity)");
}

const char* to_string(Action::Kind kind) {
  switch (kind) {
    case Action::Kind::None: return "none";
    case Action::Kind::MigrateSelf: return "migrate";
    case Action::Kind::BindTo: return "bind";
    case Action::Kind::Vacate: return "vacate";
    case Action::Kind::TakeRow: return "take-row";
    case Action::Kind::Idle: return "idle";
  }
  return "?";
}

void PolicySpec::validate() const {
  if (threads < 1) throw ConfigError("threads", 0, "must be >= 1");
  if (!(migration_overhead_s >= 0.0))
    throw ConfigError("migration_overhead_s", 0, "must be non-negative");
}

SchedState::SchedState(PolicySpec spec, Platform platform, GridDims dims)
    : spec_(spec),
      platform_(std::move(platform)),
      dims_(dims),
      core_(spec.threads, -1),
      row_(spec.threads, -1),
      bound_(platform_.core_count(), 0) {
  spec_.validate();
  dims_.validate();
}

std::vector<int> SchedState::idle_big_cores() const {
  std::vector<int> out;
  for (int c : platform_.big_cores())
    if (bound_[c] == 0) out.push_back(c);
  return out;
}

std::vector<int> SchedState::free_little_cores() const {
  std::vector<int> out;
  for (int c : platform_.little_cores())
    if (bound_[c] == 0) out.push_back(c);
  return out;
}

int SchedState::little_rank(int thread) const {
  if (!on_little(thread) || row_[thread] < 0) return 0;
  int rank = 1;
  for (int t = 0; t < thread_count(); ++t)
    if (t != thread && on_little(t) && row_[t] >= 0 && row_[t] < row_[thread]) ++rank;
  return rank;
}

bool SchedState::any_little_row_holder() const {
  for (int t = 0; t < thread_count(); ++t)
    if (on_little(t) && row_[t] >= 0) return true;
  return false;
}

void SchedState::bind(int thread, int core) {
  core_[thread] = core;
  ++bound_[core];
}

void SchedState::unbind(int thread) {
  if (core_[thread] >= 0) --bound_[core_[thread]];
  core_[thread] = -1;
}

std::vector<Action> SchedState::claim_vacancy(int core) {
  std::vector<Action> out;
  if (waiting_.empty() || bound_[core] != 0 || platform_.is_big(core)) return out;
  const int w = waiting_.front();
  waiting_.pop_front();
  bind(w, core);
  out.push_back({Action::Kind::BindTo, w, core});
  if (!filter_stage_ && rows_remain()) {
    row_[w] = next_row_++;
    out.push_back({Action::Kind::TakeRow, w, core, row_[w]});
  } else {
    out.push_back({Action::Kind::Idle, w, core});
  }
  return out;
}

std::vector<Action> SchedState::apply(const Action& a) {
  switch (a.kind) {
    case Action::Kind::None: return {};
    case Action::Kind::MigrateSelf:
    case Action::Kind::BindTo: {
      const int old = core_[a.thread];
      if (old >= 0) unbind(a.thread);
      waiting_.erase(std::remove(waiting_.begin(), waiting_.end(), a.thread), waiting_.end());
      bind(a.thread, a.core);
      return old >= 0 ? claim_vacancy(old) : std::vector<Action>{};
    }
    case Action::Kind::Vacate:
      unbind(a.thread);
      row_[a.thread] = -1;
      waiting_.push_back(a.thread);
      return {};
    case Action::Kind::TakeRow:
      if (a.row != next_row_ || !rows_remain())
        throw ConsistencyError("rows must be issued in order: expected " +
                               std::to_string(next_row_) + ", got " + std::to_string(a.row));
      row_[a.thread] = a.row;
      ++next_row_;
      return {};
    case Action::Kind::Idle:
      row_[a.thread] = -1;
      return {};
  }
  return {};
}

std::vector<Action> SchedState::enter_filter_stage() {
  filter_stage_ = true;
  std::fill(row_.begin(), row_.end(), -1);
  std::vector<Action> out;
  while (!waiting_.empty()) {
    const int w = waiting_.front();
    waiting_.pop_front();
    auto free = idle_big_cores();
    if (free.empty()) free = free_little_cores();
    if (free.empty()) throw ConsistencyError("no core left for waiting thread " + std::to_string(w));
    bind(w, free.front());
    out.push_back({Action::Kind::BindTo, w, free.front()});
  }
  return out;
}

SchedState initial_assignment(const PolicySpec& spec, const Platform& platform, GridDims dims) {
  spec.validate();
  SchedState state(spec, platform, dims);
  const auto& big = platform.big_cores();
  const auto& little = platform.little_cores();
  const int n = spec.threads;

  auto require = [&](bool ok, const std::string& why) {
    if (!ok) throw DomainError(std::string(to_string(spec.kind)) + " with " + std::to_string(n) +
                               " threads: " + why);
  };

  for (int t = 0; t < n; ++t) {
    int core = -1;
    switch (spec.kind) {
      case PolicyKind::BigOnlyOs:
        require(!big.empty(), "platform has no big cores");
        core = big[t % big.size()];
        break;
      case PolicyKind::LittleOnly:
        require(!little.empty(), "platform has no LITTLE cores");
        core = little[t % little.size()];
        break;
      case PolicyKind::StaticPinned:
      case PolicyKind::CriticalityAware:
        require(n <= static_cast<int>(big.size() + little.size()),
                "at most one thread per core is supported");
        core = t < static_cast<int>(big.size()) ? big[t] : little[t - big.size()];
        break;
    }
    state.apply({Action::Kind::BindTo, t, core});
    if (state.rows_remain()) state.apply({Action::Kind::TakeRow, t, core, state.next_row()});
  }
  return state;
}

std::vector<Action> on_recon_ctu_complete(const SchedState& state, int thread, CtuCoord coord) {
  if (state.spec().kind != PolicyKind::CriticalityAware) return {};
  if (state.row_of(thread) != coord.row)
    throw ConsistencyError("thread " + std::to_string(thread) + " does not own row " +
                           std::to_string(coord.row));
  if (!state.on_little(thread)) return {};
  const int rank = state.little_rank(thread);
  const auto idle = state.idle_big_cores();
  if (static_cast<int>(idle.size()) < rank) return {};
  return {{Action::Kind::MigrateSelf, thread, idle.front(), -1, rank, static_cast<int>(idle.size())}};
}

std::vector<Action> on_row_complete(const SchedState& state, int thread) {
  const int core = state.core_of(thread);
  const bool rows = state.rows_remain();
  const auto take_or_idle = [&](int at) -> Action {
    return rows ? Action{Action::Kind::TakeRow, thread, at, state.next_row()}
                : Action{Action::Kind::Idle, thread, at};
  };

  if (state.spec().kind != PolicyKind::CriticalityAware || !state.on_big(thread))
    return {take_or_idle(core)};

  // A big thread hands its core to the LITTLE rows (which are older than any row it could
  // take next) whenever threads outnumber big cores.
  const int big_count = static_cast<int>(state.platform().big_cores().size());
  const bool oversubscribed = state.thread_count() > big_count;
  if (!oversubscribed || (!rows && !state.any_little_row_holder())) return {take_or_idle(core)};

  const auto free = state.free_little_cores();
  if (free.empty()) return {{Action::Kind::Vacate, thread, core}};
  return {{Action::Kind::MigrateSelf, thread, free.front()}, take_or_idle(free.front())};
}

std::vector<Action> filter_stage_start(SchedState& state) {
  auto binds = state.enter_filter_stage();
  const Platform& p = state.platform();
  for (int c = 0; c < p.core_count(); ++c) {
    if (state.spec().kind == PolicyKind::StaticPinned ||
        state.spec().kind == PolicyKind::CriticalityAware) {
      if (state.bound_count(c) > 1)
        throw ConsistencyError("core " + std::to_string(c) + " holds " +
                               std::to_string(state.bound_count(c)) + " threads at the barrier");
      if (state.thread_count() == p.core_count() && state.bound_count(c) != 1)
        throw ConsistencyError("core " + std::to_string(c) + " unoccupied at the barrier");
    }
  }
  return binds;
}

std::vector<Action> on_filter_ctu_complete(const SchedState& state, int thread) {
  if (state.spec().kind != PolicyKind::CriticalityAware || !state.on_little(thread)) return {};
  const auto idle = state.idle_big_cores();
  if (idle.empty()) return {};
  return {{Action::Kind::MigrateSelf, thread, idle.front(), -1, 0, static_cast<int>(idle.size())}};
}

std::vector<std::pair<int, TaskId>> dispatch_filter(const SchedState& state,
                                                    std::span<const TaskId> ready,
                                                    std::span<const int> running_per_core,
                                                    std::span<const int> available_threads) {
  std::vector<int> load(running_per_core.begin(), running_per_core.end());
  std::vector<int> pool(available_threads.begin(), available_threads.end());
  std::vector<std::pair<int, TaskId>> out;
  const Platform& p = state.platform();
  for (const TaskId& task : ready) {
    if (pool.empty()) break;
    auto key = [&](int t) {
      const int c = state.core_of(t);
      return std::make_tuple(load[c], p.is_big(c) ? 0 : 1, c, t);
    };
    auto best = std::min_element(pool.begin(), pool.end(),
                                 [&](int a, int b) { return key(a) < key(b); });
    const int t = *best;
    pool.erase(best);
    ++load[state.core_of(t)];
    out.emplace_back(t, task);
  }
  return out;
}

}  // namespace wavesched
