// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "wavesched/calibration.hpp"
#include "wavesched/errors.hpp"

using namespace wavesched;

namespace {

const TargetTable& bundled() {
  static const TargetTable t = TargetTable::load(WAVESCHED_DEFAULT_TARGETS);
  return t;
}

const CalibrationResult& fitted() {
  static const CalibrationResult r = calibrate(Settings{}, bundled());
  return r;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string strip_comments(std::istream& in) {
  std::string out, line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') out += line + '\n';
  return out;
}

}  // namespace

TEST_CASE("targets file") {
  std::istringstream in(
      "# comment\nmetric,policy,threads,simd,value\nfps,big-os,1,off,7.963\n"
      "epf,affinity,8,on,0.193\ncluster_power,little,4,off,1.5\n");
  const TargetTable t = TargetTable::parse(in);
  REQUIRE(t.rows().size() == 3);
  CHECK(t.find(Metric::Fps, PolicyKind::BigOnlyOs, 1, false) == 7.963);
  CHECK(t.find(Metric::Epf, PolicyKind::CriticalityAware, 8, true) == 0.193);
  CHECK_FALSE(t.find(Metric::Epf, PolicyKind::CriticalityAware, 8, false));
  std::istringstream bad("fps,big-os,one,off,1\n");
  CHECK_THROWS_AS(TargetTable::parse(bad), ParseError);
  std::istringstream bad_metric("speed,big-os,1,off,1\n");
  CHECK_THROWS_AS(TargetTable::parse(bad_metric), ParseError);
  CHECK(bundled().find(Metric::Fps, PolicyKind::CriticalityAware, 8, false) == 25.628);
}

TEST_CASE("calibration reproduces the serial measurements") {
  const CalibrationResult& r = fitted();
  const SimReport serial = simulate([&] {
    Settings s = r.settings;
    s.policy = {PolicyKind::BigOnlyOs, 1, s.policy.migration_overhead_s};
    return s.to_sim_config();
  }()).report;
  CHECK(std::abs(serial.fps - 7.963) < 1e-6);
  CHECK(rel(serial.epf_j, 0.327) < 0.05);
  CHECK(r.speed_ratio == doctest::Approx(22.655 / 10.1));
  CHECK(r.settings.speed_ratio() == doctest::Approx(r.speed_ratio));
  CHECK(r.settings.workload.mean_wu == r.mean_wu);
  CHECK(r.settings.big.type.active_power_w == r.big_active_power_w);
  CHECK(r.residuals.size() == bundled().rows().size());
  for (const Deviation& d : r.residuals) CHECK(std::isfinite(d.delta_pct));
}

TEST_CASE("calibrating a calibrated config changes nothing") {
  const CalibrationResult& a = fitted();
  const CalibrationResult b = calibrate(a.settings, bundled());
  CHECK(rel(b.mean_wu, a.mean_wu) < 1e-9);
  CHECK(rel(b.speed_ratio, a.speed_ratio) < 1e-9);
  CHECK(rel(b.vector_speedup, a.vector_speedup) < 1e-9);
  CHECK(rel(b.base_power_w, a.base_power_w) < 1e-9);
  CHECK(rel(b.big_active_power_w, a.big_active_power_w) < 1e-9);
  CHECK(rel(b.little_active_power_w, a.little_active_power_w) < 1e-9);
  CHECK(rel(b.simd_power_factor, a.simd_power_factor) < 1e-9);
}

TEST_CASE("the bundled config is the calibration of the defaults") {
  std::ifstream shipped(WAVESCHED_DEFAULT_CONFIG);
  REQUIRE(shipped);
  std::istringstream fresh(serialize(fitted().settings));
  CHECK(strip_comments(shipped) == strip_comments(fresh));
}

TEST_CASE("under-determined targets are reported") {
  TargetTable t;
  t.set({Metric::Fps, PolicyKind::BigOnlyOs, 1, false, 7.963});
  try {
    calibrate(Settings{}, t);
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("fps,little,4,off") != std::string::npos);
    CHECK(what.find("epf") != std::string::npos);
  }
  Settings trace;
  trace.workload.kind = WorkloadKind::Trace;
  trace.workload.path = "unused.csv";
  CHECK_THROWS_AS(calibrate(trace, bundled()), ConfigError);
}

TEST_CASE("paper_repro covers every thread count") {
  Settings s = fitted().settings;
  s.frames = 5;
  const PaperComparison c = paper_repro(s, bundled());
  REQUIRE(c.fps.size() == 8);
  REQUIRE(c.epf.size() == 8);
  for (int n = 1; n <= 8; ++n) CHECK(c.fps[n - 1].threads == n);
  CHECK(c.deviations.size() == bundled().rows().size());
}
