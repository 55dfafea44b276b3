// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

namespace wavesched {

struct CoreType {
  std::string name;
  double freq_ghz = 1.0;
  /// Work units retired per second by one thread running alone.
  double speed_wu_per_s = 1000.0;
  double active_power_w = 1.0;
  double idle_power_w = 0.0;
  /// Multiplier on active power while the core runs SIMD-accelerated kernels.
  double simd_power_factor = 1.0;

  void validate() const;
  friend bool operator==(const CoreType&, const CoreType&) = default;
};

struct Cluster {
  CoreType type;
  int cores = 4;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

enum class CoreState : unsigned char { Idle, Active, ActiveSimd };

/// Cores are numbered cluster by cluster in declaration order. The fastest cluster is the
/// "big" cluster; when a second cluster exists it is the "LITTLE" one.
class Platform {
 public:
  Platform() = default;
  Platform(std::vector<Cluster> clusters, double base_power_w, double sample_interval_s = 0.250);

  /// Four big cores at 2.0 GHz and four LITTLE cores at 1.4 GHz with the default
  /// (uncalibrated) speed and power parameters.
  static Platform exynos5422();
  /// `cores` identical cores of unit power, for analytic tests.
  static Platform homogeneous(int cores, double speed_wu_per_s = 1000.0);
  /// Two-cluster platform with the default power parameters and the given core counts.
  static Platform big_little(int big_cores, int little_cores, double speed_ratio = 2.2431);

  const std::vector<Cluster>& clusters() const { return clusters_; }
  double base_power_w() const { return base_power_w_; }
  double sample_interval_s() const { return sample_interval_s_; }

  int core_count() const { return static_cast<int>(cluster_of_core_.size()); }
  int cluster_of(int core) const { return cluster_of_core_.at(core); }
  const CoreType& core_type(int core) const { return clusters_[cluster_of(core)].type; }

  int big_cluster() const { return big_; }
  /// -1 on a single-cluster platform.
  int little_cluster() const { return little_; }
  bool is_big(int core) const { return cluster_of(core) == big_; }
  const std::vector<int>& big_cores() const { return big_cores_; }
  const std::vector<int>& little_cores() const { return little_cores_; }
  /// big speed / LITTLE speed (1 on a single-cluster platform).
  double speed_ratio() const;

  /// base + sum of idle power of idle cores + sum of active power of busy cores.
  double instantaneous_power(std::span<const CoreState> states) const;

  void validate() const;
  friend bool operator==(const Platform& a, const Platform& b) {
    return a.clusters_ == b.clusters_ && a.base_power_w_ == b.base_power_w_ &&
           a.sample_interval_s_ == b.sample_interval_s_;
  }

 private:
  void index();

  std::vector<Cluster> clusters_;
  double base_power_w_ = 0.0;
  double sample_interval_s_ = 0.250;
  std::vector<int> cluster_of_core_;
  std::vector<int> big_cores_;
  std::vector<int> little_cores_;
  int big_ = -1;
  int little_ = -1;
};

/// Fair processor share of one of `resident_threads` threads running on `core`.
double effective_speed(const CoreType& core, int resident_threads);

}  // namespace wavesched
