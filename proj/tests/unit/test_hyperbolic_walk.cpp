#include <doctest.h>

#include <cmath>
#include <numbers>

#include <bdheap/errors.hpp>
#include <bdheap/hyperbolic_walk.hpp>
#include <bdheap/rng.hpp>

using namespace bdheap;

namespace {

const double kRoot3 = std::sqrt(3.0);

} // namespace

TEST_CASE("generators are exact involutions") {
  const auto h = gamma2_generators_exact();
  for (const auto& g : h) CHECK(g * g == ExactIsometry::identity());
  CHECK_FALSE(h[0] * h[1] == h[1] * h[0]);
}

TEST_CASE("generator entries") {
  const auto h = gamma2_generators();
  CHECK(h[0].a == 1.0);
  CHECK(h[0].b == doctest::Approx(-2.0 / kRoot3).epsilon(1e-15));
  CHECK(h[0].c == 0.0);
  CHECK(h[0].d == -1.0);
  CHECK(h[1].b == doctest::Approx(2.0 / kRoot3).epsilon(1e-15));
  CHECK(h[2].a == 0.0);
  CHECK(h[2].b == doctest::Approx(1.0 / kRoot3).epsilon(1e-15));
  CHECK(h[2].c == doctest::Approx(kRoot3).epsilon(1e-15));
  const auto e = gamma2_generators_exact();
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(e[k].b.to_double() == doctest::Approx(h[k].b).epsilon(1e-15));
    CHECK(e[k].c.to_double() == doctest::Approx(h[k].c).epsilon(1e-15));
    const auto sq = h[k] * h[k];
    CHECK(std::abs(sq.a - 1.0) < 1e-14);
    CHECK(std::abs(sq.b) < 1e-14);
    CHECK(std::abs(sq.c) < 1e-14);
    CHECK(std::abs(sq.d - 1.0) < 1e-14);
  }
}

TEST_CASE("hyperbolic distance examples") {
  CHECK(hyperbolic_distance(Isometry{}) == 0.0);
  CHECK(hyperbolic_distance(Isometry{std::exp(1.0), 0, 0, std::exp(-1.0)}) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(hyperbolic_distance(gamma2_generators()[0]) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(hyperbolic_distance(Isometry{0.5, 0, 0, 0.5}), NumericalError);
}

TEST_CASE("distance increments at the extremes") {
  for (int alpha = 0; alpha < 3; ++alpha) {
    const double phi = generator_phase(alpha);
    CHECK(distance_increment(-phi / 2.0, alpha) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    CHECK(distance_increment((std::numbers::pi - phi) / 2.0, alpha) ==
          doctest::Approx(-std::log(3.0)).epsilon(1e-12));
  }
}

TEST_CASE("walk never repeats a generator and tracks the direct product") {
  RngStream rng(1, 0);
  const auto h = gamma2_generators();
  WalkState st;
  double vx = 1.0, vy = 0.0, log_norm = 0.0;
  for (int n = 1; n <= 2000; ++n) {
    const WalkState next = walk_step(st, rng);
    CHECK(next.alpha != st.alpha);
    CHECK(next.theta >= 0.0);
    CHECK(next.theta < std::numbers::pi);
    const auto& g = h[static_cast<std::size_t>(next.alpha)];
    const double nx = g.a * vx + g.c * vy;
    const double ny = g.b * vx + g.d * vy;
    const double len = std::hypot(nx, ny);
    vx = nx / len;
    vy = ny / len;
    log_norm += std::log(len);
    st = next;
    if (n > 100) REQUIRE(std::abs(st.mu - 2.0 * log_norm) < 0.01);
  }
  CHECK(st.n == 2000);
}

TEST_CASE("direct product distance grows at the same rate") {
  RngStream rng(2, 0);
  const auto h = gamma2_generators();
  WalkState st;
  Isometry v;
  for (int n = 0; n < 300; ++n) {
    st = walk_step(st, rng);
    v = v * h[static_cast<std::size_t>(st.alpha)];
  }
  // The two distances differ by a bounded amount set by the base point.
  CHECK(std::abs(hyperbolic_distance(v) - st.mu) < 3.0);
}

TEST_CASE("folded angle stays in the fundamental domain") {
  RngStream rng(3, 0);
  for (int k = 0; k < 10000; ++k) {
    const double theta = rng.uniform(0.0, std::numbers::pi);
    const int alpha = static_cast<int>(rng.uniform_index(3));
    const double psi = folded_angle(theta, alpha);
    CHECK(psi >= 0.0);
    CHECK(psi <= std::numbers::pi / 2.0 + 1e-15);
    CHECK(std::log(5.0 / 3.0 + 4.0 / 3.0 * std::cos(2 * psi)) ==
          doctest::Approx(distance_increment(theta, alpha)).epsilon(1e-10));
  }
}

TEST_CASE("lyapunov exponent") {
  for (auto method : {GammaMethod::montecarlo, GammaMethod::measure_integral}) {
    const auto r = lyapunov_gamma(200000, 4, RngStream(5, 0), method);
    CHECK(r.gamma == doctest::Approx(0.79).epsilon(0.02 / 0.79));
    CHECK(r.std_error > 0.0);
  }
  CHECK_THROWS_AS(lyapunov_gamma(0, 1, RngStream(1, 0), GammaMethod::montecarlo), DomainError);
  CHECK_THROWS_AS(lyapunov_gamma(9999, 1, RngStream(1, 0), GammaMethod::montecarlo), DomainError);
}

TEST_CASE("invariant measure histogram is normalised") {
  const auto r = lyapunov_gamma(100000, 2, RngStream(6, 0), GammaMethod::measure_integral);
  const auto& hist = r.histogram;
  double integral = 0.0;
  for (double d : hist.density()) integral += d * hist.bin_width();
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(hist.clamped() == 0);
}

TEST_CASE("deterministic alternation follows the periodic orbit") {
  WalkOptions opt;
  opt.p_plus_one = 1.0;
  const auto a = lyapunov_gamma(30000, 1, RngStream(1, 0), GammaMethod::montecarlo, opt);
  const auto b = lyapunov_gamma(30000, 1, RngStream(99, 0), GammaMethod::montecarlo, opt);
  CHECK(a.gamma == b.gamma);
  CHECK(a.gamma == doctest::Approx(deterministic_orbit_gamma()).epsilon(1e-3));
}

TEST_CASE("thread count does not change the estimate") {
  WalkOptions opt;
  const auto one = lyapunov_gamma(20000, 4, RngStream(8, 0), GammaMethod::montecarlo, opt);
  opt.threads = 4;
  const auto four = lyapunov_gamma(20000, 4, RngStream(8, 0), GammaMethod::montecarlo, opt);
  CHECK(one.gamma == four.gamma);
}
