// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#include "wavesched/targets.hpp"

#include <fstream>
#include <sstream>

#include "wavesched/errors.hpp"

namespace wavesched {

const char* to_string(Metric metric) {
  switch (metric) {
    case Metric::Fps: return "fps";
    case Metric::Epf: return "epf";
    case Metric::Power: return "power";
    case Metric::ClusterPower: return "cluster_power";
  }
  return "?";
}

namespace {

Metric parse_metric(const std::string& s, int line) {
  if (s == "fps") return Metric::Fps;
  if (s == "epf") return Metric::Epf;
  if (s == "power") return Metric::Power;
  if (s == "cluster_power") return Metric::ClusterPower;
  throw ParseError(line, "unknown metric '" + s + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

TargetTable TargetTable::parse(std::istream& in) {
  TargetTable table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string part; std::getline(ss, part, ',');) f.push_back(trim(part));
    if (f.size() != 5) throw ParseError(lineno, "expected metric,policy,threads,simd,value");
    if (f[0] == "metric") continue;
    Target t;
    t.metric = parse_metric(f[0], lineno);
    try {
      t.policy = parse_policy(f[1]);
      t.threads = std::stoi(f[2]);
      t.value = std::stod(f[4]);
    } catch (const std::exception& e) {
      throw ParseError(lineno, e.what());
    }
    if (f[3] != "on" && f[3] != "off") throw ParseError(lineno, "simd must be on or off");
    t.simd = f[3] == "on";
    table.set(t);
  }
  return table;
}

TargetTable TargetTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("targets", 0, "cannot open '" + path.string() + "'");
  return parse(in);
}

std::optional<double> TargetTable::find(Metric metric, PolicyKind policy, int threads,
                                        bool simd) const {
  for (const auto& r : rows_)
    if (r.metric == metric && r.policy == policy && r.threads == threads && r.simd == simd)
      return r.value;
  return std::nullopt;
}

void TargetTable::set(const Target& target) {
  for (auto& r : rows_) {
    if (r.metric == target.metric && r.policy == target.policy && r.threads == target.threads &&
        r.simd == target.simd) {
      r.value = target.value;
      return;
    }
  }
  rows_.push_back(target);
}

}  // namespace wavesched
