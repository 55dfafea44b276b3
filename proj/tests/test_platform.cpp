// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#include <vector>

#include "doctest.h"
#include "wavesched/errors.hpp"
#include "wavesched/platform.hpp"

using namespace wavesched;

namespace {

std::vector<CoreState> states(int big_active, int little_active, CoreState active = CoreState::Active) {
  std::vector<CoreState> s(8, CoreState::Idle);
  for (int i = 0; i < big_active; ++i) s[i] = active;
  for (int i = 0; i < little_active; ++i) s[4 + i] = active;
  return s;
}

}  // namespace

TEST_CASE("effective_speed") {
  CoreType big{"big", 2.0, 1000.0, 1.1, 0.1, 1.0};
  CHECK(effective_speed(big, 1) == 1000.0);
  CHECK(effective_speed(big, 2) == 500.0);
  const Platform p = Platform::big_little(4, 4, 2.24);
  CHECK(effective_speed(p.core_type(4), 1) == doctest::Approx(446.43).epsilon(1e-4));
  CHECK(p.speed_ratio() == doctest::Approx(2.24));
  CHECK_THROWS_AS(effective_speed(big, 0), DomainError);
}

TEST_CASE("core numbering") {
  const Platform p = Platform::exynos5422();
  CHECK(p.core_count() == 8);
  CHECK(p.big_cores() == std::vector<int>{0, 1, 2, 3});
  CHECK(p.little_cores() == std::vector<int>{4, 5, 6, 7});
  CHECK(p.is_big(3));
  CHECK_FALSE(p.is_big(4));
  const Platform h = Platform::homogeneous(3);
  CHECK(h.little_cluster() == -1);
  CHECK(h.little_cores().empty());
  CHECK(h.speed_ratio() == 1.0);
}

TEST_CASE("instantaneous_power") {
  const Platform p = Platform::exynos5422();
  CHECK(p.instantaneous_power(states(0, 0)) == doctest::Approx(1.6));
  const double full_big = p.instantaneous_power(states(4, 0));
  CHECK(full_big == doctest::Approx(5.6));
  CHECK(std::abs(full_big - 5.5) / 5.5 < 0.10);
  // LITTLE cluster alone: four active LITTLE cores.
  const double little_cluster = 4 * 0.28;
  CHECK(std::abs(little_cluster - 1.5) / 1.5 < 0.30);
  CHECK(p.instantaneous_power(states(0, 4)) == doctest::Approx(1.0 + 0.4 + 4 * 0.28));
  CHECK(p.instantaneous_power(states(1, 0, CoreState::ActiveSimd)) ==
        doctest::Approx(1.6 - 0.1 + 1.1 * 0.93));

  // Power never decreases when a core goes from idle to active.
  for (int b = 0; b < 4; ++b)
    for (int l = 0; l < 4; ++l) {
      CHECK(p.instantaneous_power(states(b + 1, l)) > p.instantaneous_power(states(b, l)));
      CHECK(p.instantaneous_power(states(b, l + 1)) > p.instantaneous_power(states(b, l)));
    }
  CHECK_THROWS_AS(p.instantaneous_power(std::vector<CoreState>(7, CoreState::Idle)), DomainError);
}

TEST_CASE("platform validation") {
  CoreType t{"big", 2.0, 1000.0, 1.0, 0.1, 1.0};
  t.speed_wu_per_s = 0.0;
  CHECK_THROWS_AS(t.validate(), ConfigError);
  t = {"big", 2.0, 1000.0, 0.05, 0.1, 1.0};
  CHECK_THROWS_AS(t.validate(), ConfigError);
  CoreType ok{"big", 2.0, 1000.0, 1.0, 0.1, 1.0};
  CHECK_THROWS_AS(Platform({}, 1.0), ConfigError);
  CHECK_THROWS_AS(Platform({{ok, 1}, {ok, 1}, {ok, 1}}, 1.0), ConfigError);
  CHECK_THROWS_AS(Platform({{ok, 0}}, 1.0), ConfigError);
  CHECK_THROWS_AS(Platform({{ok, 2}}, -1.0), ConfigError);
  CHECK_THROWS_AS(Platform({{ok, 2}}, 1.0, 0.0), ConfigError);
}
