#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include <bdheap/deposition.hpp>
#include <bdheap/errors.hpp>
#include <bdheap/rng.hpp>

using namespace bdheap;

namespace {

ColumnSequence random_events(std::size_t n, std::size_t t, RngStream& rng) {
  ColumnSequence s;
  for (std::size_t k = 0; k < t; ++k) s.events.push_back(1 + rng.uniform_index(n));
  return s;
}

// Sum over every directed path that ends at `site` after the last event. Walking
// backwards, a path sitting on the dropped column at an event visits a marked
// site (weight u) and moves to one of the three neighbouring columns beneath.
double path_sum(const ColumnSequence& ev, std::size_t n, std::size_t site, double u) {
  double total = 0.0;
  std::function<void(std::size_t, std::size_t, int)> walk = [&](std::size_t t, std::size_t s,
                                                                 int marks) {
    if (t == 0) {
      total += std::pow(u, marks);
      return;
    }
    if (ev.events[t - 1] != s) {
      walk(t - 1, s, marks);
      return;
    }
    for (int d = -1; d <= 1; ++d) {
      const long next = static_cast<long>(s) + d;
      if (next < 1 || next > static_cast<long>(n)) continue;
      walk(t - 1, static_cast<std::size_t>(next), marks + 1);
    }
  };
  walk(ev.size(), site, 0);
  return total;
}

} // namespace

TEST_CASE("hard rule examples") {
  CHECK(deposit_hard(HeightProfile({0, 2, 1}), 2) == HeightProfile({0, 3, 1}));
  CHECK(deposit_hard(HeightProfile({0, 2, 1}), 1) == HeightProfile({3, 2, 1}));
  CHECK(deposit_hard(HeightProfile({0, 2, 1}), 3) == HeightProfile({0, 2, 3}));
  CHECK(deposit_hard(HeightProfile(std::vector<std::int64_t>{3}), 1) == HeightProfile(std::vector<std::int64_t>{4}));
  CHECK(replay_hard(2, ColumnSequence{{1, 2}}) == HeightProfile({1, 2}));
  CHECK(replay_hard(3, ColumnSequence{{2, 2, 2}}) == HeightProfile({0, 3, 0}));
  CHECK(replay_hard(1, ColumnSequence{{1, 1, 1, 1, 1}}) == HeightProfile(std::vector<std::int64_t>{5}));
}

TEST_CASE("periodic boundary wraps the neighbours") {
  CHECK(deposit_hard(HeightProfile({0, 0, 4}), 1, Boundary::periodic) ==
        HeightProfile({5, 0, 4}));
  CHECK(deposit_hard(HeightProfile({0, 0, 4}), 1, Boundary::free) == HeightProfile({1, 0, 4}));
}

TEST_CASE("out of range columns are rejected") {
  CHECK_THROWS_AS(deposit_hard(HeightProfile({0, 0}), 3), DomainError);
  CHECK_THROWS_AS(deposit_hard(HeightProfile({0, 0}), 0), DomainError);
  CHECK_THROWS_AS(replay_hard(2, ColumnSequence{{1, 5}}), DomainError);
}

TEST_CASE("simulation is reproducible per seed") {
  RngStream a(42, 0), b(42, 0), c(43, 0);
  const auto ra = simulate(16, 2000, a);
  const auto rb = simulate(16, 2000, b);
  const auto rc = simulate(16, 2000, c);
  CHECK(ra.profile == rb.profile);
  CHECK(ra.events == rb.events);
  CHECK_FALSE(ra.events == rc.events);
  CHECK(replay_hard(16, ra.events) == ra.profile);
}

TEST_CASE("heights are monotone and bounded by the event count") {
  RngStream rng(7, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(12);
    const auto ev = random_events(n, 200, rng);
    HeightProfile p(n);
    for (std::size_t t = 0; t < ev.size(); ++t) {
      const HeightProfile next = deposit_hard(p, ev.events[t]);
      for (std::size_t i = 0; i < n; ++i) {
        if (i + 1 == ev.events[t]) {
          CHECK(next.heights[i] > p.heights[i]);
        } else {
          CHECK(next.heights[i] == p.heights[i]);
        }
      }
      p = next;
    }
    CHECK(p.max() <= static_cast<std::int64_t>(ev.size()));
  }
}

TEST_CASE("recorded simulation matches the plain one") {
  RngStream a(5, 1), b(5, 1);
  std::vector<TrajectoryRow> rows;
  const auto plain = simulate(8, 1000, a);
  const auto rec = simulate_recorded(8, 1000, b, Boundary::free, 100, rows);
  CHECK(plain.profile == rec.profile);
  REQUIRE(rows.size() == 10);
  CHECK(rows.back().t == 1000);
  CHECK(rows.back().h_max == rec.profile.max());
  CHECK(rows.back().width2 == doctest::Approx(spatial_variance(rec.profile)));
}

TEST_CASE("soft rule examples") {
  const auto s = deposit_soft(SoftProfile({0.0, 0.0, 0.0}), 2, 1.0);
  CHECK(s.heights[1] == doctest::Approx(std::log(3.0) + 1.0).epsilon(1e-12));
  CHECK(s.heights[0] == 0.0);

  const auto big = deposit_soft(SoftProfile({0.0, 2.0, 1.0}), 2, 1e6);
  CHECK(big.heights[1] == doctest::Approx(3.0).epsilon(1e-5));

  const double beta = 2.5;
  const auto eq = deposit_soft(SoftProfile({4.0, 4.0, 4.0}), 2, beta);
  CHECK(eq.heights[1] == doctest::Approx(4.0 + std::log(3.0) / beta + 1.0).epsilon(1e-12));

  CHECK_THROWS_AS(deposit_soft(SoftProfile(std::vector<double>{0.0}), 1, 0.0), DomainError);
  CHECK_THROWS_AS(deposit_soft(SoftProfile(std::vector<double>{0.0}), 1, -1.0), DomainError);
}

TEST_CASE("soft heights stay finite at large heights") {
  const auto s = deposit_soft(SoftProfile({1e6, 1e6 + 1, 1e6}), 2, 50.0);
  CHECK(std::isfinite(s.heights[1]));
  CHECK(s.heights[1] >= 1e6 + 2);
}

TEST_CASE("soft and hard heights are sandwiched") {
  RngStream rng(11, 0);
  for (double beta : {0.5, 10.0, 50.0, 100.0}) {
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 2 + rng.uniform_index(10);
      const auto ev = random_events(n, 300, rng);
      const auto hard = replay_hard(n, ev);
      const auto soft = replay_soft(n, ev, beta);
      const double bound = static_cast<double>(ev.size()) * std::log(3.0) / beta;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = soft.heights[i] - static_cast<double>(hard.heights[i]);
        CHECK(d >= -1e-9);
        CHECK(d <= bound + 1e-9);
      }
    }
  }
}

TEST_CASE("polymer examples") {
  const double u = 1.7;
  auto st = PolymerState::uniform(3, std::log(u));
  st = polymer_evolve(st, ColumnSequence{{2}});
  CHECK(st.log_weights[0] == doctest::Approx(0.0));
  CHECK(std::exp(st.log_weights[1]) == doctest::Approx(3 * u).epsilon(1e-13));
  CHECK(st.log_weights[2] == doctest::Approx(0.0));
  st = polymer_evolve(st, ColumnSequence{{2}});
  CHECK(std::exp(st.log_weights[1]) == doctest::Approx(3 * u * u + 2 * u).epsilon(1e-13));
  CHECK_THROWS_AS(polymer_evolve(PolymerState::uniform(3, 0.0), ColumnSequence{{1}}), DomainError);
}

TEST_CASE("polymer weights equal the explicit path sum") {
  RngStream rng(3, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ev = random_events(4, 6, rng);
    const double u = 1.05 + 2.0 * rng.uniform01();
    const auto st = polymer_evolve(PolymerState::uniform(4, std::log(u)), ev);
    for (std::size_t i = 1; i <= 4; ++i) {
      CHECK(st.log_weights[i - 1] == doctest::Approx(std::log(path_sum(ev, 4, i, u))).epsilon(1e-12));
    }
  }
}

TEST_CASE("polymer free energy approaches the hard heights") {
  RngStream rng(19, 0);
  const auto ev = random_events(9, 400, rng);
  const auto hard = replay_hard(9, ev);
  for (double beta : {10.0, 50.0, 100.0}) {
    const auto st = polymer_evolve(PolymerState::uniform(9, beta), ev);
    const double bound = static_cast<double>(ev.size()) * std::log(3.0) / beta;
    for (std::size_t i = 0; i < 9; ++i) {
      const double d = st.log_weights[i] / beta - static_cast<double>(hard.heights[i]);
      CHECK(d >= -1e-9);
      CHECK(d <= bound + 1e-9);
    }
  }
}

TEST_CASE("spatial variance") {
  CHECK(spatial_variance(HeightProfile({2, 2, 2})) == 0.0);
  CHECK(spatial_variance(HeightProfile({0, 2})) == doctest::Approx(1.0));
}
