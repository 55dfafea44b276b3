// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#include "wavesched/calibration.hpp"

#include <Eigen/Dense>
#include <map>
#include <optional>

#include "wavesched/errors.hpp"

namespace wavesched {

namespace {

std::string key_name(Metric m, PolicyKind p, int threads, bool simd) {
  return std::string(to_string(m)) + "," + to_string(p) + "," + std::to_string(threads) + "," +
         (simd ? "on" : "off");
}

std::map<SweepKey, SimReport> simulate_targets(const Settings& s, const TargetTable& targets) {
  std::vector<SweepKey> keys;
  for (const Target& t : targets.rows()) keys.push_back({t.policy, t.threads, t.simd});
  std::map<SweepKey, SimReport> out;
  for (SweepCell& cell : run_cells(s.to_sim_config(), std::move(keys))) {
    if (!cell.report)
      throw SimulationError("calibration run " + std::string(to_string(cell.key.policy)) + "/" +
                            std::to_string(cell.key.threads) + " failed: " + cell.error);
    out.emplace(cell.key, std::move(*cell.report));
  }
  return out;
}

struct Occupancy {
  double time = 0.0;
  double frames = 0.0;
  double busy_big = 0.0;
  double busy_little = 0.0;
  /// Idle-power energy of all cores.
  double idle_energy = 0.0;
};

Occupancy occupancy(const SimReport& r, const Platform& p) {
  Occupancy o;
  o.time = r.wall_time_s;
  o.frames = r.frames;
  for (int c = 0; c < p.core_count(); ++c) {
    const CoreType& t = p.core_type(c);
    (p.is_big(c) ? o.busy_big : o.busy_little) += r.busy_s[c];
    o.idle_energy += t.idle_power_w * (r.wall_time_s - r.busy_s[c]);
  }
  return o;
}

}  // namespace

CalibrationResult calibrate(const Settings& base, const TargetTable& targets) {
  using M = Metric;
  using P = PolicyKind;
  std::vector<std::string> missing;
  auto need = [&](M m, P p, int n, bool simd) {
    auto v = targets.find(m, p, n, simd);
    if (!v) missing.push_back(key_name(m, p, n, simd));
    return v.value_or(0.0);
  };
  const double fps1 = need(M::Fps, P::BigOnlyOs, 1, false);
  const double little4 = need(M::Fps, P::LittleOnly, 4, false);
  auto big4 = targets.find(M::Fps, P::StaticPinned, 4, false);
  if (!big4) big4 = targets.find(M::Fps, P::BigOnlyOs, 4, false);
  if (!big4)
    missing.push_back(key_name(M::Fps, P::StaticPinned, 4, false) + " (or " +
                      key_name(M::Fps, P::BigOnlyOs, 4, false) + ")");
  need(M::Epf, P::BigOnlyOs, 1, false);
  need(M::Epf, P::BigOnlyOs, 4, false);
  if (!missing.empty()) {
    std::string what = "calibration targets missing:";
    for (const auto& m : missing) what += " " + m;
    throw ConfigError("targets", 0, what);
  }
  if (base.workload.kind == WorkloadKind::Trace)
    throw ConfigError("workload", 0, "calibration needs a generated (uniform or lognormal) workload");
  if (base.big.cores < 4 || base.little.cores < 4)
    throw ConfigError("cores", 0, "calibration needs at least four cores of each type");

  CalibrationResult res;
  Settings s = base;

  res.speed_ratio = *big4 / little4;
  if (!(res.speed_ratio > 1.0))
    throw ConfigError("speed_ratio", 0, "targets imply a big:LITTLE speed ratio <= 1");
  s.little.type.speed_wu_per_s = s.big.type.speed_wu_per_s / res.speed_ratio;

  KernelParams& k = s.workload.params;
  if (auto simd1 = targets.find(M::Fps, P::CriticalityAware, 1, true)) {
    const double r = *simd1 / fps1;
    const double denom = 1.0 / r - (1.0 - k.vector_fraction);
    if (!(k.vector_fraction > 0.0) || !(denom > 0.0) || k.vector_fraction / denom < 1.0)
      throw ConfigError("vector_speedup", 0, "SIMD FPS target is not reachable with vector_fraction " +
                                                 std::to_string(k.vector_fraction));
    k.vector_speedup = k.vector_fraction / denom;
  }
  res.vector_speedup = k.vector_speedup;

  // FPS is inversely proportional to mean_wu for a fixed seed.
  {
    Settings unit = s;
    unit.workload.mean_wu = 1.0;
    unit.policy.kind = P::BigOnlyOs;
    unit.policy.threads = 1;
    unit.simd = false;
    const double fps_unit = simulate(unit.to_sim_config()).report.fps;
    s.workload.mean_wu = fps_unit / fps1;
  }
  res.mean_wu = s.workload.mean_wu;

  // Timing does not depend on power, so one batch of runs serves every power fit.
  const auto runs = simulate_targets(s, targets);
  const Platform plat = s.platform();

  struct EpfRow {
    Occupancy occ;
    double target = 0.0;
    /// SIMD rows: occupancy and target of the same run without SIMD, when measured.
    std::optional<Occupancy> plain_occ;
    double plain_target = 0.0;
  };
  std::vector<std::pair<Occupancy, double>> plain;
  std::vector<EpfRow> vec;
  for (const Target& t : targets.rows()) {
    if (t.metric != M::Epf) continue;
    const Occupancy o = occupancy(runs.at({t.policy, t.threads, t.simd}), plat);
    if (!t.simd) {
      plain.emplace_back(o, t.value);
      continue;
    }
    EpfRow row{o, t.value, std::nullopt, 0.0};
    if (auto p = targets.find(M::Epf, t.policy, t.threads, false)) {
      row.plain_occ = occupancy(runs.at({t.policy, t.threads, false}), plat);
      row.plain_target = *p;
    }
    vec.push_back(row);
  }
  bool any_little = false;
  for (const auto& [o, _] : plain) any_little = any_little || o.busy_little > 0.0;
  const int cols = any_little ? 3 : 2;
  Eigen::MatrixXd a(plain.size(), cols);
  Eigen::VectorXd b(plain.size());
  for (size_t i = 0; i < plain.size(); ++i) {
    const auto& [o, epf] = plain[i];
    const double w = epf * o.frames;
    // energy = base*T + act_big*busy_big + act_little*busy_little + idle terms
    double rhs = epf * o.frames - o.idle_energy +
                 s.big.type.idle_power_w * o.busy_big + s.little.type.idle_power_w * o.busy_little;
    a(i, 0) = o.time / w;
    a(i, 1) = o.busy_big / w;
    if (any_little) a(i, 2) = o.busy_little / w;
    else rhs -= s.little.type.active_power_w * o.busy_little;
    b(i) = rhs / w;
  }
  const auto qr = a.colPivHouseholderQr();
  if (qr.rank() < cols)
    throw ConfigError("targets", 0, "EPF targets do not determine the power parameters");
  const Eigen::VectorXd x = qr.solve(b);
  s.base_power_w = x(0);
  s.big.type.active_power_w = x(1);
  if (any_little) s.little.type.active_power_w = x(2);

  // The SIMD factor scales active power only. Where the non-SIMD measurement of the same run
  // exists it is fitted to the measured EPF ratio, which keeps the error of the baseline
  // power fit out of it; otherwise to the SIMD EPF itself.
  if (!vec.empty()) {
    auto energy = [&](const Occupancy& o, double factor) {
      return s.base_power_w * o.time + o.idle_energy +
             factor * (s.big.type.active_power_w * o.busy_big +
                       s.little.type.active_power_w * o.busy_little);
    };
    double num = 0.0, den = 0.0;
    for (const EpfRow& r : vec) {
      const double fixed = energy(r.occ, 0.0);
      const double slope = energy(r.occ, 1.0) - fixed;
      double x, y;
      if (r.plain_occ) {
        const double e_plain = energy(*r.plain_occ, 1.0);
        x = slope / e_plain;
        y = r.target / r.plain_target - fixed / e_plain;
      } else {
        const double e = r.target * r.occ.frames;
        x = slope / e;
        y = 1.0 - fixed / e;
      }
      num += x * y;
      den += x * x;
    }
    if (!(den > 0.0)) throw ConfigError("targets", 0, "SIMD EPF targets carry no active time");
    s.big.type.simd_power_factor = s.little.type.simd_power_factor = num / den;
  }
  s.platform();  // validates the fitted values

  res.base_power_w = s.base_power_w;
  res.big_active_power_w = s.big.type.active_power_w;
  res.little_active_power_w = s.little.type.active_power_w;
  res.simd_power_factor = s.big.type.simd_power_factor;

  const auto final_runs = simulate_targets(s, targets);
  const Platform final_plat = s.platform();
  for (const Target& t : targets.rows()) {
    const SimReport& r = final_runs.at({t.policy, t.threads, t.simd});
    double sim = 0.0;
    switch (t.metric) {
      case M::Fps: sim = r.fps; break;
      case M::Epf: sim = r.epf_j; break;
      case M::Power: sim = r.avg_power_w; break;
      case M::ClusterPower: sim = cluster_power(r, final_plat, t.policy); break;
    }
    res.residuals.push_back({t, sim, percent_delta(sim, t.value)});
  }
  res.settings = s;
  return res;
}

PaperComparison paper_repro(const Settings& settings, const TargetTable& targets) {
  std::vector<SweepKey> keys;
  for (int n = 1; n <= 8; ++n) {
    keys.push_back({PolicyKind::BigOnlyOs, n, false});
    keys.push_back({PolicyKind::StaticPinned, n, false});
    keys.push_back({PolicyKind::CriticalityAware, n, false});
    keys.push_back({PolicyKind::CriticalityAware, n, true});
  }
  for (const Target& t : targets.rows()) keys.push_back({t.policy, t.threads, t.simd});
  std::map<SweepKey, SimReport> reports;
  for (SweepCell& cell : run_cells(settings.to_sim_config(), std::move(keys))) {
    if (!cell.report)
      throw SimulationError(std::string(to_string(cell.key.policy)) + "/" +
                            std::to_string(cell.key.threads) + " failed: " + cell.error);
    reports.emplace(cell.key, std::move(*cell.report));
  }
  return compare_to_paper(reports, targets, settings.platform());
}

}  // namespace wavesched
