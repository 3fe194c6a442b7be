#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <bdheap/anderson.hpp>
#include <bdheap/errors.hpp>
#include <bdheap/exp_poly.hpp>
#include <bdheap/lie.hpp>
#include <bdheap/painleve.hpp>
#include <bdheap/rational.hpp>
#include <bdheap/rng.hpp>
#include <bdheap/toda.hpp>

using namespace bdheap;

namespace {

TodaState make_state(std::vector<double> mu, std::vector<double> p, double kappa,
                     TodaBoundary bc) {
  TodaState s;
  s.mu = std::move(mu);
  s.p = std::move(p);
  s.kappa = kappa;
  s.bc = bc;
  return s;
}

TodaState random_state(std::size_t n, TodaBoundary bc, RngStream& rng) {
  TodaState s;
  s.bc = bc;
  for (std::size_t j = 0; j < n; ++j) {
    s.mu.push_back(rng.uniform(-0.5, 0.5));
    s.p.push_back(rng.uniform(-0.5, 0.5));
  }
  return s;
}

RationalPoly poly(std::vector<long> c) {
  std::vector<mpq_class> q;
  for (long v : c) q.emplace_back(v);
  return RationalPoly(std::move(q));
}

// Second derivative by Richardson-extrapolated central differences.
template <class F>
double second_derivative(F f, double s, double h) {
  auto d = [&](double step) { return (f(s + step) - 2 * f(s) + f(s - step)) / (step * step); };
  return (4 * d(h / 2) - d(h)) / 3;
}

} // namespace

TEST_CASE("toda accelerations") {
  const auto a = toda_rhs(make_state({0, 0}, {0, 0}, 1.0, TodaBoundary::open));
  CHECK(a == std::vector<double>{-1.0, 1.0});

  RngStream rng(1, 0);
  for (auto bc : {TodaBoundary::open, TodaBoundary::periodic}) {
    const auto s = random_state(7, bc, rng);
    double sum = 0.0;
    for (double x : toda_rhs(s)) sum += x;
    CHECK(std::abs(sum) < 1e-13);
  }

  const auto far = toda_rhs(make_state({-60, 0, 60}, {0, 0, 0}, 1.0, TodaBoundary::open));
  for (double x : far) CHECK(std::abs(x) < 1e-20);
}

TEST_CASE("invalid states are rejected") {
  CHECK_THROWS_AS(toda_evolve(make_state({0, 0}, {0}, 1.0, TodaBoundary::open), 1e-3, 1), DomainError);
  CHECK_THROWS_AS(toda_evolve(make_state({0, 0}, {0, 0}, -1.0, TodaBoundary::open), 1e-3, 1), DomainError);
  CHECK_THROWS_AS(toda_evolve(make_state({}, {}, 1.0, TodaBoundary::open), 1e-3, 1), DomainError);
}

TEST_CASE("free flight") {
  const auto s0 = make_state({0.1, -0.3, 2.0}, {0.5, -1.0, 0.25}, 0.0, TodaBoundary::periodic);
  const auto s = toda_evolve(s0, 1e-3, 10000);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(s.mu[j] == doctest::Approx(s0.mu[j] + 10.0 * s0.p[j]).epsilon(1e-12));
    CHECK(s.p[j] == s0.p[j]);
  }
}

TEST_CASE("two particle energy conservation and reversibility") {
  const auto s0 = make_state({-0.4, 0.4}, {0.7, -0.7}, 1.0, TodaBoundary::open);
  const auto traj = toda_integrate(s0, 1e-3, 10000, 1000);
  CHECK(traj.states.size() == 11);
  const double h0 = hamiltonian(s0);
  for (const auto& s : traj.states) {
    CHECK(std::abs(hamiltonian(s) - h0) / std::abs(h0) < 1e-8);
    CHECK(s.mu[0] + s.mu[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  }
  CHECK(time_reversal_error(s0, 1e-3, 10000) < 1e-6);
}

TEST_CASE("energy and momentum conservation up to sixteen particles") {
  RngStream rng(2, 0);
  for (std::size_t n : {3u, 8u, 16u}) {
    for (auto bc : {TodaBoundary::open, TodaBoundary::periodic}) {
      const auto s0 = random_state(n, bc, rng);
      const auto s = toda_evolve(s0, 1e-3, 10000);
      CHECK(std::abs(hamiltonian(s) - hamiltonian(s0)) / std::abs(hamiltonian(s0)) < 1e-8);
      CHECK(std::abs(total_momentum(s) - total_momentum(s0)) < 1e-12);
    }
  }
}

TEST_CASE("lax matrix in the printed convention") {
  const auto s = make_state({0, 0, 0}, {0, 0, 0}, 1.0, TodaBoundary::periodic);
  const Eigen::MatrixXcd l = lax_matrix(s, 1.0, LaxConvention::printed);
  Eigen::MatrixXcd expected(3, 3);
  expected << 0, 1, 1, 1, 0, 1, -1, 1, 0;
  CHECK((l - expected).norm() == 0.0);
  const auto ev = lax_spectrum(s, 1.0, LaxConvention::printed);
  REQUIRE(ev.size() == 3);
  CHECK(std::abs(ev[0] - std::complex<double>(-1.0, 0.0)) < 1e-12);
  CHECK(std::abs(ev[1]) < 1e-12);
  CHECK(std::abs(ev[2] - std::complex<double>(1.0, 0.0)) < 1e-12);
  CHECK_THROWS_AS(lax_matrix(s, 0.0), DomainError);
}

TEST_CASE("open chain at rest has the tridiagonal spectrum") {
  const std::size_t n = 6;
  const auto s = make_state(std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 1.0,
                            TodaBoundary::open);
  auto ev = lax_spectrum(s, 1.0);
  std::vector<double> expected;
  for (std::size_t k = 1; k <= n; ++k) expected.push_back(2 * std::cos(k * std::numbers::pi / (n + 1)));
  std::sort(expected.begin(), expected.end());
  for (std::size_t k = 0; k < n; ++k) {
    CHECK(ev[k].real() == doctest::Approx(expected[k]).epsilon(1e-12));
    CHECK(std::abs(ev[k].imag()) < 1e-12);
  }
}

TEST_CASE("large momenta dominate the spectrum") {
  const auto s = make_state({0, 0, 0}, {5, 5, 5}, 1.0, TodaBoundary::periodic);
  for (auto conv : {LaxConvention::flow, LaxConvention::printed}) {
    for (const auto& e : lax_spectrum(s, 1.0, conv)) CHECK(std::abs(e + 5.0) <= 2.0 + 1e-12);
  }
}

TEST_CASE("isospectral flow") {
  const auto free = make_state({0.1, 0.2, 0.3}, {1.0, -0.5, 0.25}, 0.0, TodaBoundary::periodic);
  CHECK(isospectrality_check(free, 1.0, 1e-3, 1000).max_drift == 0.0);

  RngStream rng(3, 0);
  const auto s0 = random_state(3, TodaBoundary::periodic, rng);
  const auto r = isospectrality_check(s0, 1.0, 1e-3, 10000);
  CHECK(r.max_drift < 1e-8);
  CHECK(r.energy_drift < 1e-8);
  CHECK(r.curve_residual < 1e-8);
}

TEST_CASE("spectral drift shrinks at fourth order") {
  RngStream rng(4, 0);
  const auto s0 = random_state(4, TodaBoundary::periodic, rng);
  const double coarse = isospectrality_check(s0, 1.0, 0.1, 100).max_drift;
  const double fine = isospectrality_check(s0, 1.0, 0.05, 200).max_drift;
  const double order = std::log2(coarse / fine);
  CHECK(order > 3.5);
  CHECK(order < 4.5);
}

TEST_CASE("monodromy trace is finite") {
  RngStream rng(5, 0);
  const auto s = random_state(5, TodaBoundary::periodic, rng);
  CHECK(std::isfinite(monodromy_trace(s, 0.3)));
}

TEST_CASE("tau functions of exponential sums") {
  const ExpPoly phi = parse_phi("exp:1@1,1@2");
  const auto taus = tau_from_phi(phi, 3);
  CHECK(taus[0] == ExpPoly::constant(1));
  CHECK(taus[1] == phi);
  CHECK(taus[2] == ExpPoly::exponential(1, 3));
  CHECK(taus[3].is_zero());
  for (int j = 0; j < 3; ++j) CHECK(bilinear_residual(taus, j).is_zero());

  CHECK(tau_from_phi(parse_phi("exp:1@1"), 2)[2].is_zero());
  CHECK_THROWS_AS(parse_phi("sin:1"), DomainError);
  CHECK_THROWS_AS(parse_phi("exp:1@"), DomainError);
}

TEST_CASE("bilinear identity holds for polynomial and mixed seeds") {
  for (const char* text : {"poly:1,2,0,1", "exp:2@1,3@-1/2,1@3", "exp:1/3@0,5@2/3"}) {
    const auto taus = tau_from_phi(parse_phi(text), 4);
    for (int j = 0; j < 4; ++j) CHECK(bilinear_residual(taus, j).is_zero());
  }
}

TEST_CASE("tau functions are positive up to the rank") {
  const auto taus = tau_from_phi(parse_phi("exp:2@1,3@-1/2,1@3"), 5);
  for (double s : {-2.0, -0.5, 0.0, 0.7, 1.5}) {
    for (int j = 1; j <= 3; ++j) CHECK(taus[static_cast<std::size_t>(j)].eval(s) > 0.0);
  }
  CHECK(taus[4].is_zero());
  CHECK(taus[5].is_zero());
}

TEST_CASE("log tau differences solve the open chain") {
  const auto taus = tau_from_phi(parse_phi("exp:1@1,1@2"), 2);
  auto mu1 = [&](double s) { return -std::log(taus[1].eval(s)); };
  auto mu2 = [&](double s) { return std::log(taus[1].eval(s) / taus[2].eval(s)); };
  for (double s : {-1.0, 0.0, 0.5, 1.3}) {
    CHECK(mu1(s) == doctest::Approx(-s - std::log1p(std::exp(s))).epsilon(1e-14));
    const double lhs = second_derivative(mu1, s, 1e-3);
    const double rhs = -std::exp(mu1(s) - mu2(s));
    CHECK(std::abs(lhs - rhs) < 1e-8);
  }
}

TEST_CASE("yablonskii vorob'ev polynomials") {
  const auto q = yablonskii(12);
  CHECK(q[0] == poly({1}));
  CHECK(q[1] == poly({0, 1}));
  CHECK(q[2] == poly({4, 0, 0, 1}));
  CHECK(q[3] == poly({-80, 0, 0, 20, 0, 0, 1}));
  for (std::size_t j = 0; j < q.size(); ++j) {
    CHECK(q[j].degree() == static_cast<long>(j * (j + 1) / 2));
    CHECK(has_integer_coefficients(q[j]));
  }
  // The recurrence run from Q_{-1} = 1 and checked by multiplication.
  const RationalPoly z = RationalPoly::z();
  RationalPoly prev(mpq_class(1));
  for (std::size_t j = 0; j + 1 < q.size(); ++j) {
    const auto& c = q[j];
    const RationalPoly rhs =
        z * c * c - RationalPoly(mpq_class(4)) * (c.derivative().derivative() * c - c.derivative() * c.derivative());
    CHECK(q[j + 1] * prev == rhs);
    prev = c;
  }
}

TEST_CASE("rational painleve ii solutions") {
  const double z = 1.7;
  const double w = -1.0 / z;
  CHECK(-2.0 / (z * z * z) == doctest::Approx(2 * w * w * w + z * w + 1.0));
  for (int j = 0; j <= 10; ++j) CHECK(painleve2_residual(j).is_zero());
  const auto q = yablonskii(11);
  CHECK(painleve2_residual(q, 11).is_zero());
}

TEST_CASE("sigma gauge") {
  const auto good = sigma_gauge_check(8);
  CHECK(good.passed);
  CHECK(good.pq_is_minus_z_over_4);
  for (const auto& r : good.residuals) CHECK(r.is_zero());

  SigmaGaugeOptions trivial;
  trivial.a = GaussianRational(1);
  CHECK_FALSE(sigma_gauge_check(4, trivial).passed);

  SigmaGaugeOptions flipped;
  flipped.exponent_sign = -1;
  CHECK_FALSE(sigma_gauge_check(4, flipped).passed);
}

TEST_CASE("lie algebra checks") {
  const auto r = lie_checks();
  for (const auto& c : r.checks) {
    INFO(c.name);
    CHECK(c.passed);
  }
  CHECK(r.casimir_is_scalar);
  CHECK(r.casimir_scalar == mpq_class(8, 3));
  CHECK(r.casimir == mpq_class(8, 3) * LieElement::identity(3));

  const auto e12 = LieElement::unit(3, 0, 1);
  const auto e23 = LieElement::unit(3, 1, 2);
  CHECK(commutator(e12, e23) == LieElement::unit(3, 0, 2));
}

TEST_CASE("anderson duality") {
  const auto one = anderson_duality_check({0.37});
  REQUIRE(one.eigenvalues.size() == 1);
  CHECK(one.eigenvalues[0] == doctest::Approx(0.37));
  CHECK(one.max_residual < 1e-14);

  const auto two = anderson_duality_check({0.0, 0.0});
  CHECK(two.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(two.eigenvalues[1] == doctest::Approx(1.0));
  CHECK(two.max_residual < 1e-14);

  RngStream rng(6, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rep = anderson_duality_check(random_potential(50, 2.0, rng));
    CHECK(rep.max_residual < 1e-8);
    CHECK(rep.max_residual_double >= rep.max_residual);
    CHECK(std::is_sorted(rep.eigenvalues.begin(), rep.eigenvalues.end()));
  }
  const auto u = random_potential(1000, 3.0, rng);
  for (double x : u) CHECK(std::abs(x) <= 1.5);
}
