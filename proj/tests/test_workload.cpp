// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "doctest.h"
#include "wavesched/errors.hpp"
#include "wavesched/workload.hpp"

using namespace wavesched;

namespace {

std::string parse_error(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_trace(in);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("uniform workload") {
  WorkloadSpec s;
  s.kind = WorkloadKind::Uniform;
  s.mean_wu = 100.0;
  const auto frames = generate(s, {2, 2}, 1);
  REQUIRE(frames.size() == 1);
  CHECK(frames[0].recon() == std::vector<double>(4, 100.0));
}

TEST_CASE("lognormal workload") {
  WorkloadSpec s;
  s.kind = WorkloadKind::Lognormal;
  s.mean_wu = 100.0;
  s.sigma = 0.5;
  s.seed = 7;
  const auto a = generate(s, {17, 30}, 3);
  const auto& r = a[0].recon();
  const double mean = std::accumulate(r.begin(), r.end(), 0.0) / r.size();
  CHECK(std::abs(mean - 100.0) < 5.0);

  // Log-moments of a larger sample against the generating parameters.
  const auto big = generate(s, {17, 30}, 40);
  double m1 = 0.0, m2 = 0.0;
  int n = 0;
  for (const auto& f : big)
    for (double x : f.recon()) {
      m1 += std::log(x);
      m2 += std::log(x) * std::log(x);
      ++n;
    }
  m1 /= n;
  const double sd = std::sqrt(m2 / n - m1 * m1);
  CHECK(sd == doctest::Approx(0.5).epsilon(0.02));
  CHECK(m1 == doctest::Approx(std::log(100.0) - 0.125).epsilon(0.002));

  CHECK(generate(s, {17, 30}, 3) == a);
  CHECK(a[0] != a[1]);
  s.seed = 8;
  CHECK(generate(s, {17, 30}, 3) != a);
}

TEST_CASE("filter passes take the configured share of frame work") {
  WorkloadSpec s;
  s.params.filter_fraction = 0.2;
  s.params.filter_split = {0.25, 0.25, 0.5};
  const CostModel m = generate(s, {3, 4}, 1)[0];
  double recon = 0.0, filter = 0.0, h = 0.0, sao = 0.0;
  for (int p = 0; p < kPhaseCount; ++p)
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 4; ++c) {
        const double w = m.task_cost({static_cast<Phase>(p), {r, c}});
        (p == 0 ? recon : filter) += w;
        if (p == 1) h += w;
        if (p == 3) sao += w;
      }
  CHECK(filter / (recon + filter) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(m.total_work() == doctest::Approx(recon + filter).epsilon(1e-12));
  CHECK(sao == doctest::Approx(2.0 * h).epsilon(1e-12));
}

TEST_CASE("effective_cost") {
  CHECK(effective_cost(100.0, false, 0.58, 1.5) == 100.0);
  CHECK(effective_cost(100.0, true, 1.0, 2.0) == doctest::Approx(50.0));
  // v = 0.58 and the S that makes the SIMD factor 1/1.2407.
  const double factor = 1.0 / 1.2407;
  const double v = 0.58;
  const double speedup = v / (factor - (1.0 - v));
  CHECK(effective_cost(100.0, true, v, speedup) == doctest::Approx(80.60).epsilon(1e-4));
}

TEST_CASE("trace files") {
  SUBCASE("round trip") {
    std::istringstream in("frame,row,col,work_units\n0,0,0,10\n0,0,1,20\n0,1,0,30\n0,1,1,40\n");
    const auto frames = parse_trace(in);
    REQUIRE(frames.size() == 1);
    CHECK(frames[0].dims() == GridDims{2, 2});
    CHECK(frames[0].recon() == std::vector<double>{10, 20, 30, 40});
    std::ostringstream out;
    write_trace(out, frames);
    std::istringstream again(out.str());
    CHECK(parse_trace(again) == frames);
  }
  SUBCASE("records in any order, several frames") {
    std::istringstream in("1,0,0,5\n0,0,0,1\n1,0,1,6\n0,0,1,2\n");
    const auto frames = parse_trace(in);
    REQUIRE(frames.size() == 2);
    CHECK(frames[1].recon() == std::vector<double>{5, 6});
  }
  SUBCASE("errors") {
    CHECK(parse_error("0,0,0,10\n0,0,1,20\n0,1,0,30\n").find("frame 0, row 1, col 1") !=
          std::string::npos);
    const std::string dup = parse_error("0,0,0,10\n0,0,0,11\n");
    CHECK(dup.find("duplicate") != std::string::npos);
    CHECK(dup.find("frame 0, row 0, col 0") != std::string::npos);
    CHECK(parse_error("0,0,x,10\n").find("line 1") != std::string::npos);
    CHECK(parse_error("0,0,0\n") != "");
    CHECK(parse_error("0,0,0,-3\n") != "");
    CHECK(parse_error("") != "");
    // Frame 1 covers a smaller grid than frame 0.
    CHECK(parse_error("0,0,0,1\n0,0,1,1\n1,0,0,1\n") != "");
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_trace("/nonexistent/trace.csv"), ConfigError);
  }
}

TEST_CASE("parameter validation") {
  WorkloadSpec s;
  s.mean_wu = 0.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.params.filter_fraction = 1.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.params.filter_split = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.params.vector_speedup = 0.9;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  CHECK_THROWS_AS(CostModel({2, 2}, {1, 2, 3}), DomainError);
}
