// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#include <vector>

#include "doctest.h"
#include "wavesched/errors.hpp"
#include "wavesched/policies.hpp"

using namespace wavesched;
using K = Action::Kind;

namespace {

const GridDims kHd{17, 30};

SchedState start(PolicyKind kind, int threads, GridDims dims = kHd) {
  return initial_assignment({kind, threads, 0.0}, Platform::exynos5422(), dims);
}

void apply_all(SchedState& s, const std::vector<Action>& actions) {
  for (const Action& a : actions) s.apply(a);
}

}  // namespace

TEST_CASE("initial_assignment") {
  SUBCASE("criticality-aware, eight threads") {
    const SchedState s = start(PolicyKind::CriticalityAware, 8);
    for (int t = 0; t < 8; ++t) {
      CHECK(s.core_of(t) == t);
      CHECK(s.row_of(t) == t);
    }
    CHECK(s.next_row() == 8);
    CHECK(s.idle_big_cores().empty());
  }
  SUBCASE("big-os shares a big core at five threads") {
    const SchedState s = start(PolicyKind::BigOnlyOs, 5);
    CHECK(s.bound_count(0) == 2);
    for (int c = 1; c < 4; ++c) CHECK(s.bound_count(c) == 1);
    for (int c = 4; c < 8; ++c) CHECK(s.bound_count(c) == 0);
  }
  SUBCASE("static with four threads binds like big-os") {
    const SchedState a = start(PolicyKind::StaticPinned, 4);
    const SchedState b = start(PolicyKind::BigOnlyOs, 4);
    for (int t = 0; t < 4; ++t) CHECK(a.core_of(t) == b.core_of(t));
  }
  SUBCASE("little-only stays on the LITTLE cluster") {
    const SchedState s = start(PolicyKind::LittleOnly, 6);
    for (int t = 0; t < 6; ++t) CHECK(s.on_little(t));
  }
  SUBCASE("fewer rows than threads") {
    const SchedState s = start(PolicyKind::CriticalityAware, 8, {3, 5});
    CHECK(s.row_of(2) == 2);
    CHECK(s.row_of(3) == -1);
    CHECK_FALSE(s.rows_remain());
  }
  SUBCASE("capacity") {
    CHECK_THROWS_AS(start(PolicyKind::StaticPinned, 9), DomainError);
    CHECK_THROWS_AS(start(PolicyKind::CriticalityAware, 9), DomainError);
    CHECK_NOTHROW(start(PolicyKind::BigOnlyOs, 9));
    CHECK_THROWS_AS(initial_assignment({PolicyKind::LittleOnly, 2, 0.0},
                                       Platform::homogeneous(4), kHd),
                    DomainError);
    CHECK_THROWS_AS(start(PolicyKind::BigOnlyOs, 0), ConfigError);
  }
}

TEST_CASE("rank guard during reconstruction") {
  SchedState s = start(PolicyKind::CriticalityAware, 8);
  // T1 (thread 0) finishes row 0 with every LITTLE core busy and gives up big.A.
  const auto done = on_row_complete(s, 0);
  REQUIRE(done == std::vector<Action>{{K::Vacate, 0, 0}});
  apply_all(s, done);
  CHECK(s.idle_big_cores() == std::vector<int>{0});

  CHECK(s.little_rank(4) == 1);
  CHECK(s.little_rank(5) == 2);
  // T6 (rank 2) sees a single idle big core.
  CHECK(on_recon_ctu_complete(s, 5, {5, 3}).empty());
  // T5 (rank 1) takes it.
  const auto move = on_recon_ctu_complete(s, 4, {4, 3});
  REQUIRE(move.size() == 1);
  CHECK(move[0].kind == K::MigrateSelf);
  CHECK(move[0].core == 0);
  CHECK(move[0].rank == 1);
  CHECK(move[0].idle_big == 1);

  // The waiting T1 claims the LITTLE core T5 left and takes row 8.
  const auto derived = s.apply(move[0]);
  CHECK(derived == std::vector<Action>{{K::BindTo, 0, 4}, {K::TakeRow, 0, 4, 8}});
  CHECK(s.core_of(0) == 4);
  CHECK(s.row_of(0) == 8);
  CHECK(s.core_of(4) == 0);
  CHECK(s.waiting().empty());

  // Big threads and non-affinity policies never migrate mid-row.
  CHECK(on_recon_ctu_complete(s, 4, {4, 4}).empty());
  CHECK_THROWS_AS(on_recon_ctu_complete(s, 4, {5, 4}), ConsistencyError);
  SchedState st = start(PolicyKind::StaticPinned, 8);
  CHECK(on_recon_ctu_complete(st, 4, {4, 3}).empty());
}

TEST_CASE("rank 3 needs three idle big cores") {
  SchedState s = start(PolicyKind::CriticalityAware, 8);
  for (int t = 0; t < 2; ++t) apply_all(s, on_row_complete(s, t));
  CHECK(s.idle_big_cores().size() == 2);
  CHECK(on_recon_ctu_complete(s, 6, {6, 1}).empty());
  apply_all(s, on_row_complete(s, 2));
  CHECK(s.idle_big_cores().size() == 3);
  const auto move = on_recon_ctu_complete(s, 6, {6, 1});
  REQUIRE(move.size() == 1);
  CHECK(move[0].kind == K::MigrateSelf);
  CHECK(move[0].core == 0);
}

TEST_CASE("on_row_complete") {
  SUBCASE("big thread swaps into a free LITTLE core") {
    SchedState s = start(PolicyKind::CriticalityAware, 8);
    // T5 leaves LITTLE.A for an idle big core first.
    apply_all(s, on_row_complete(s, 0));
    s.apply(on_recon_ctu_complete(s, 4, {4, 3})[0]);
    // T2 finishes row 1: LITTLE.A is taken by T1, so T2 must wait.
    CHECK(on_row_complete(s, 1) == std::vector<Action>{{K::Vacate, 1, 1}});
  }
  SUBCASE("free LITTLE core available") {
    SchedState s = start(PolicyKind::CriticalityAware, 7);
    // LITTLE.D (core 7) is free.
    const auto a = on_row_complete(s, 0);
    CHECK(a == std::vector<Action>{{K::MigrateSelf, 0, 7}, {K::TakeRow, 0, 7, 7}});
  }
  SUBCASE("no rows left and no LITTLE rows: idle in place") {
    SchedState s = start(PolicyKind::CriticalityAware, 4, {4, 6});
    CHECK(on_row_complete(s, 0) == std::vector<Action>{{K::Idle, 0, 0}});
    SchedState e = start(PolicyKind::CriticalityAware, 8, {4, 6});
    CHECK(on_row_complete(e, 0) == std::vector<Action>{{K::Idle, 0, 0}});
  }
  SUBCASE("static thread on LITTLE keeps its core") {
    SchedState s = start(PolicyKind::StaticPinned, 8);
    CHECK(on_row_complete(s, 5) == std::vector<Action>{{K::TakeRow, 5, 5, 8}});
    CHECK(on_row_complete(s, 0) == std::vector<Action>{{K::TakeRow, 0, 0, 8}});
  }
  SUBCASE("rows are issued in order") {
    SchedState s = start(PolicyKind::StaticPinned, 2);
    CHECK_THROWS_AS(s.apply({K::TakeRow, 0, 0, 5}), ConsistencyError);
  }
}

TEST_CASE("filter stage") {
  SUBCASE("eight threads occupy every core") {
    SchedState s = start(PolicyKind::CriticalityAware, 8);
    CHECK(filter_stage_start(s).empty());
    CHECK(s.filter_stage());
    for (int c = 0; c < 8; ++c) CHECK(s.bound_count(c) == 1);
  }
  SUBCASE("a waiting thread is bound at the barrier") {
    SchedState s = start(PolicyKind::CriticalityAware, 8);
    apply_all(s, on_row_complete(s, 0));
    const auto binds = filter_stage_start(s);
    CHECK(binds == std::vector<Action>{{K::BindTo, 0, 0}});
  }
  SUBCASE("four threads use the big cluster") {
    SchedState s = start(PolicyKind::BigOnlyOs, 4);
    filter_stage_start(s);
    for (int c = 0; c < 4; ++c) CHECK(s.bound_count(c) == 1);
  }
  SUBCASE("two threads on one core at the barrier is a policy bug") {
    SchedState s = start(PolicyKind::CriticalityAware, 6);
    s.apply({K::MigrateSelf, 5, 4});
    CHECK_THROWS_AS(filter_stage_start(s), ConsistencyError);
  }
  SUBCASE("LITTLE threads move to idle big cores, big threads stay") {
    SchedState s = start(PolicyKind::CriticalityAware, 6);
    s.apply({K::MigrateSelf, 1, 6});
    filter_stage_start(s);
    const auto a = on_filter_ctu_complete(s, 4);
    REQUIRE(a.size() == 1);
    CHECK(a[0].kind == K::MigrateSelf);
    CHECK(a[0].core == 1);
    s.apply(a[0]);
    CHECK(on_filter_ctu_complete(s, 5).empty());
    CHECK(on_filter_ctu_complete(s, 0).empty());
    SchedState st = start(PolicyKind::StaticPinned, 6);
    st.apply({K::MigrateSelf, 1, 6});
    filter_stage_start(st);
    CHECK(on_filter_ctu_complete(st, 4).empty());
  }
}

TEST_CASE("dispatch_filter prefers lightly loaded big cores") {
  SchedState s = start(PolicyKind::BigOnlyOs, 6);
  filter_stage_start(s);
  const std::vector<TaskId> ready{{Phase::HFilter, {0, 0}}, {Phase::HFilter, {1, 0}},
                                  {Phase::HFilter, {2, 0}}};
  std::vector<int> running(8, 0);
  running[1] = 1;
  const std::vector<int> avail{0, 2, 3, 4, 5};
  const auto d = dispatch_filter(s, ready, running, avail);
  REQUIRE(d.size() == 3);
  // Threads 0 and 4 share core 0 and thread 5 sits on the busy core 1.
  CHECK(d[0].first == 0);
  CHECK(d[1].first == 2);
  CHECK(d[2].first == 3);
  CHECK(d[0].second == ready[0]);
  CHECK(d[2].second == ready[2]);

  SchedState m = start(PolicyKind::CriticalityAware, 8);
  filter_stage_start(m);
  std::vector<int> none(8, 0);
  const std::vector<int> all{7, 6, 5, 4, 3, 2, 1, 0};
  const auto e = dispatch_filter(m, ready, none, all);
  REQUIRE(e.size() == 3);
  CHECK(e[0].first == 0);
  CHECK(e[1].first == 1);
  CHECK(e[2].first == 2);
}

TEST_CASE("policy names") {
  for (PolicyKind k : {PolicyKind::BigOnlyOs, PolicyKind::LittleOnly, PolicyKind::StaticPinned,
                       PolicyKind::CriticalityAware})
    CHECK(parse_policy(to_string(k)) == k);
  CHECK_THROWS_AS(parse_policy("fifo"), ConfigError);
}
