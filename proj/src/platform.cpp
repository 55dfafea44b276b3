// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#include "wavesched/platform.hpp"

#include <cmath>

#include "wavesched/errors.hpp"

namespace wavesched {

void CoreType::validate() const {
  const std::string k = name.empty() ? std::string("core") : name;
  if (!(speed_wu_per_s > 0.0)) throw ConfigError(k + ".speed_wu_per_s", 0, "must be positive");
  if (!(idle_power_w >= 0.0)) throw ConfigError(k + ".idle_power_w", 0, "must be non-negative");
  if (!(active_power_w >= idle_power_w))
    throw ConfigError(k + ".active_power_w", 0, "must be >= idle power");
  if (!(simd_power_factor > 0.0))
    throw ConfigError(k + ".simd_power_factor", 0, "must be positive");
}

Platform::Platform(std::vector<Cluster> clusters, double base_power_w, double sample_interval_s)
    : clusters_(std::move(clusters)),
      base_power_w_(base_power_w),
      sample_interval_s_(sample_interval_s) {
  validate();
  index();
}

void Platform::index() {
  cluster_of_core_.clear();
  big_cores_.clear();
  little_cores_.clear();
  big_ = little_ = -1;
  for (int c = 0; c < static_cast<int>(clusters_.size()); ++c) {
    if (big_ < 0 || clusters_[c].type.speed_wu_per_s > clusters_[big_].type.speed_wu_per_s) big_ = c;
  }
  for (int c = 0; c < static_cast<int>(clusters_.size()); ++c)
    if (c != big_ && little_ < 0) little_ = c;
  for (int c = 0; c < static_cast<int>(clusters_.size()); ++c) {
    for (int k = 0; k < clusters_[c].cores; ++k) {
      const int id = static_cast<int>(cluster_of_core_.size());
      cluster_of_core_.push_back(c);
      if (c == big_) big_cores_.push_back(id);
      if (c == little_) little_cores_.push_back(id);
    }
  }
}

void Platform::validate() const {
  if (clusters_.empty()) throw ConfigError("clusters", 0, "platform needs at least one cluster");
  if (clusters_.size() > 2) throw ConfigError("clusters", 0, "at most two core types are supported");
  int total = 0;
  for (const auto& cl : clusters_) {
    cl.type.validate();
    if (cl.cores < 0) throw ConfigError(cl.type.name + ".cores", 0, "must be non-negative");
    total += cl.cores;
  }
  if (total < 1) throw ConfigError("cores", 0, "platform needs at least one core");
  if (!(base_power_w_ >= 0.0)) throw ConfigError("base_power_w", 0, "must be non-negative");
  if (!(sample_interval_s_ > 0.0)) throw ConfigError("sample_interval_s", 0, "must be positive");
}

double Platform::speed_ratio() const {
  if (little_ < 0) return 1.0;
  return clusters_[big_].type.speed_wu_per_s / clusters_[little_].type.speed_wu_per_s;
}

double Platform::instantaneous_power(std::span<const CoreState> states) const {
  if (static_cast<int>(states.size()) != core_count())
    throw DomainError("expected " + std::to_string(core_count()) + " core states, got " +
                      std::to_string(states.size()));
  double p = base_power_w_;
  for (int c = 0; c < core_count(); ++c) {
    const CoreType& t = core_type(c);
    switch (states[c]) {
      case CoreState::Idle: p += t.idle_power_w; break;
      case CoreState::Active: p += t.active_power_w; break;
      case CoreState::ActiveSimd: p += t.active_power_w * t.simd_power_factor; break;
    }
  }
  return p;
}

// Uncalibrated starting point; data/exynos5422.conf holds the values `wavesched calibrate` fits.
Platform Platform::exynos5422() { return big_little(4, 4, 2.2431); }

Platform Platform::big_little(int big_cores, int little_cores, double speed_ratio) {
  CoreType big{"big", 2.0, 1000.0, 1.10, 0.10, 0.93};
  CoreType little{"little", 1.4, 1000.0 / speed_ratio, 0.28, 0.05, 0.93};
  return Platform({{big, big_cores}, {little, little_cores}}, 1.0, 0.250);
}

Platform Platform::homogeneous(int cores, double speed_wu_per_s) {
  CoreType t{"big", 2.0, speed_wu_per_s, 1.0, 0.0, 1.0};
  return Platform({{t, cores}}, 0.0, 0.250);
}

double effective_speed(const CoreType& core, int resident_threads) {
  if (resident_threads < 1) throw DomainError("effective_speed needs at least one resident thread");
  return core.speed_wu_per_s / resident_threads;
}

}  // namespace wavesched
