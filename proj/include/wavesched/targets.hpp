// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wavesched/policies.hpp"

namespace wavesched {

/// Measured quantity a target refers to.
enum class Metric {
  Fps,
  Epf,
  /// Average total power in W.
  Power,
  /// Average power of the cores of the cluster the policy runs on, in W.
  ClusterPower,
};

const char* to_string(Metric metric);

struct Target {
  Metric metric = Metric::Fps;
  PolicyKind policy = PolicyKind::BigOnlyOs;
  int threads = 1;
  bool simd = false;
  double value = 0.0;
};

/// Reference measurements, read from `metric,policy,threads,simd,value` records.
class TargetTable {
 public:
  TargetTable() = default;
  explicit TargetTable(std::vector<Target> rows) : rows_(std::move(rows)) {}

  static TargetTable load(const std::filesystem::path& path);
  static TargetTable parse(std::istream& in);

  const std::vector<Target>& rows() const { return rows_; }
  std::optional<double> find(Metric metric, PolicyKind policy, int threads, bool simd) const;
  void set(const Target& target);

 private:
  std::vector<Target> rows_;
};

}  // namespace wavesched
