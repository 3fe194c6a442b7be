#include "bdheap/matrix_growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bdheap/errors.hpp"
#include "bdheap/parallel.hpp"

namespace bdheap {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using MatrixLd = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// Column-pivoted Householder QR of B diag(e^s), carried out on B alone: the
// column scales only enter the pivot choice and the final split R = diag(e^L) T.
// On return B diag(e^s) P = Q diag(e^L) T, T unit upper triangular with
// |T_kj| <= 1 (up to rounding), and perm[k] is the source column of column k.
struct ScaledQr {
  Eigen::MatrixXd q;
  Eigen::VectorXd log_diag;
  Eigen::MatrixXd t;
  std::vector<std::size_t> perm;
};

ScaledQr scaled_qr(Eigen::MatrixXd a, Eigen::VectorXd s) {
  const auto n = static_cast<Eigen::Index>(a.rows());
  ScaledQr out;
  out.q = Eigen::MatrixXd::Identity(n, n);
  out.perm.resize(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) out.perm[static_cast<std::size_t>(k)] = static_cast<std::size_t>(k);

  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index best = k;
    double best_log = kNegInf;
    for (Eigen::Index j = k; j < n; ++j) {
      const double nrm = a.col(j).tail(n - k).norm();
      const double lg = nrm > 0.0 ? std::log(nrm) + s(j) : kNegInf;
      if (lg > best_log) {
        best_log = lg;
        best = j;
      }
    }
    if (best_log == kNegInf) {
      throw NumericalError("product factorisation is singular at column " + std::to_string(k));
    }
    if (best != k) {
      a.col(k).swap(a.col(best));
      std::swap(s(k), s(best));
      std::swap(out.perm[static_cast<std::size_t>(k)], out.perm[static_cast<std::size_t>(best)]);
    }
    // Householder reflector zeroing a(k+1:, k).
    Eigen::VectorXd v = a.col(k).tail(n - k);
    const double alpha = v.norm();
    const double beta = v(0) >= 0.0 ? -alpha : alpha;
    v(0) -= beta;
    const double vnorm2 = v.squaredNorm();
    if (vnorm2 > 0.0) {
      a.bottomRightCorner(n - k, n - k) -=
          (2.0 / vnorm2) * v * (v.transpose() * a.bottomRightCorner(n - k, n - k));
      out.q.rightCols(n - k) -= (2.0 / vnorm2) * (out.q.rightCols(n - k) * v) * v.transpose();
    }
    a.col(k).tail(n - k - 1).setZero();
    if (a(k, k) < 0.0) {
      a.row(k) *= -1.0;
      out.q.col(k) *= -1.0;
    }
  }

  out.log_diag.resize(n);
  out.t = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double rkk = a(k, k);
    out.log_diag(k) = std::log(rkk) + s(k);
    for (Eigen::Index j = k + 1; j < n; ++j) {
      const double rkj = a(k, j);
      if (rkj == 0.0) continue;
      const double mag = std::exp(std::log(std::abs(rkj)) - std::log(rkk) + s(j) - s(k));
      out.t(k, j) = rkj > 0.0 ? mag : -mag;
    }
  }
  return out;
}

// Rows of P^T X: row k is row perm[k] of X.
Eigen::MatrixXd permute_rows(const Eigen::MatrixXd& x, const std::vector<std::size_t>& perm) {
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    out.row(static_cast<Eigen::Index>(k)) = x.row(static_cast<Eigen::Index>(perm[k]));
  }
  return out;
}

void check_block_column(Column column, std::size_t dim) {
  if (column < 1 || column + 1 > dim) {
    throw DomainError("soft generator column " + std::to_string(column) +
                      " does not fit a 2x2 block in dimension " + std::to_string(dim));
  }
}

std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

} // namespace

// ---------------------------------------------------------------------------
// Tropical

TropicalMatrix::TropicalMatrix(std::size_t n) : n_(n), a_(n * n, kNegInf) {
  for (std::size_t i = 0; i < n; ++i) (*this)(i, i) = 0.0;
}

TropicalMatrix TropicalMatrix::generator(std::size_t n, Column column) {
  if (column < 1 || column > n) {
    throw DomainError("tropical generator column out of range");
  }
  TropicalMatrix g(n);
  const std::size_t i = column - 1;
  g(i, i) = 1.0;
  if (i > 0) g(i, i - 1) = 1.0;
  if (i + 1 < n) g(i, i + 1) = 1.0;
  return g;
}

TropicalMatrix TropicalMatrix::operator*(const TropicalMatrix& rhs) const {
  if (rhs.n_ != n_) throw DomainError("tropical product: size mismatch");
  TropicalMatrix out(n_);
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t c = 0; c < n_; ++c) {
      double best = kNegInf;
      for (std::size_t k = 0; k < n_; ++k) {
        best = std::max(best, (*this)(r, k) + rhs(k, c));
      }
      out(r, c) = best;
    }
  }
  return out;
}

std::vector<double> TropicalMatrix::apply(const std::vector<double>& v) const {
  if (v.size() != n_) throw DomainError("tropical apply: size mismatch");
  std::vector<double> out(n_, kNegInf);
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t k = 0; k < n_; ++k) {
      out[r] = std::max(out[r], (*this)(r, k) + v[k]);
    }
  }
  return out;
}

HeightProfile tropical_heights(const ColumnSequence& events, std::size_t n_columns) {
  validate_events(events, n_columns);
  std::vector<std::int64_t> a(n_columns, 0);
  for (Column c : events.events) {
    const std::size_t i = c - 1;
    std::int64_t m = a[i];
    if (i > 0) m = std::max(m, a[i - 1]);
    if (i + 1 < n_columns) m = std::max(m, a[i + 1]);
    a[i] = m + 1;
  }
  return HeightProfile(std::move(a));
}

HeightProfile tropical_heights_by_product(const ColumnSequence& events, std::size_t n_columns) {
  validate_events(events, n_columns);
  TropicalMatrix v(n_columns);
  for (Column c : events.events) {
    v = TropicalMatrix::generator(n_columns, c) * v; // V_t = g_t V_{t-1}
  }
  const auto a = v.apply(std::vector<double>(n_columns, 0.0));
  HeightProfile p(n_columns);
  for (std::size_t i = 0; i < n_columns; ++i) {
    p.heights[i] = static_cast<std::int64_t>(std::llround(a[i]));
  }
  return p;
}

std::vector<double> finite_u_heights(const ColumnSequence& events, std::size_t n_columns,
                                     double log_u) {
  if (!(log_u > 0.0)) {
    throw DomainError("finite_u_heights: ln u must be positive");
  }
  auto state = polymer_evolve(PolymerState::uniform(n_columns, log_u), events, Boundary::free);
  for (auto& w : state.log_weights) w /= log_u;
  return std::move(state.log_weights);
}

// ---------------------------------------------------------------------------
// Blocks and measures

Sl2Block Sl2Block::checked(double a, double b, double c, double d) {
  const double det = a * d - b * c;
  const double scale = std::max(1.0, std::abs(a * d) + std::abs(b * c));
  if (!std::isfinite(det) || std::abs(det - 1.0) > 1e-12 * scale) {
    throw DomainError("Sl2Block: determinant " + std::to_string(det) + " is not 1");
  }
  return Sl2Block{a, b, c, d};
}

Sl2Block Sl2Block::diagonal(double r) { return Sl2Block{std::exp(r), 0.0, 0.0, std::exp(-r)}; }

Sl2Block Sl2Block::rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return Sl2Block{c, -s, s, c};
}

Sl2Block Sl2Block::shear(double x) { return Sl2Block{1.0, x, 0.0, 1.0}; }

Sl2Block Sl2Block::operator*(const Sl2Block& o) const {
  return Sl2Block{a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

void BlockMeasure::validate() const {
  if (!(r0 >= 0.0) || !(x0 >= 0.0) || !std::isfinite(r0) || !std::isfinite(x0)) {
    throw DomainError("BlockMeasure: r0 and x0 must be finite and non-negative");
  }
}

Sl2Block BlockMeasure::sample(RngStream& rng) const {
  const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double r = r0 > 0.0 ? rng.uniform(-r0, r0) : 0.0;
  const double x = x0 > 0.0 ? rng.uniform(-x0, x0) : 0.0;
  return Sl2Block::rotation(theta) * Sl2Block::diagonal(r) * Sl2Block::shear(x);
}

BlockSampler sampler_from(const BlockMeasure& measure) {
  measure.validate();
  return [measure](RngStream& rng) { return measure.sample(rng); };
}

BlockSampler constant_sampler(const Sl2Block& block) {
  return [block](RngStream&) { return block; };
}

// ---------------------------------------------------------------------------
// ProductState

ProductState::ProductState(std::size_t dim, std::size_t refactor_every)
    : dim_(dim), refactor_every_(refactor_every) {
  if (dim < 2) throw DomainError("ProductState: dimension must be at least 2");
  if (refactor_every == 0) throw DomainError("ProductState: refactor interval must be positive");
  const auto n = static_cast<Eigen::Index>(dim);
  buffer_ = Eigen::MatrixXd::Identity(n, n);
  q_ = Eigen::MatrixXd::Identity(n, n);
  l_ = Eigen::VectorXd::Zero(n);
  x_ = Eigen::MatrixXd::Identity(n, n);
}

void ProductState::apply(Column column, const Sl2Block& g) {
  check_block_column(column, dim_);
  const auto i = static_cast<Eigen::Index>(column - 1);
  // Only rows i and i+1 of the buffer change, so blocks on disjoint row pairs
  // commute bit for bit.
  const Eigen::RowVectorXd ri = buffer_.row(i);
  const Eigen::RowVectorXd rj = buffer_.row(i + 1);
  buffer_.row(i) = g.a * ri + g.b * rj;
  buffer_.row(i + 1) = g.c * ri + g.d * rj;
  ++t_;
  if (++pending_ >= refactor_every_) refactor();
}

void ProductState::fold(Eigen::MatrixXd& q, Eigen::VectorXd& l, Eigen::MatrixXd& x) const {
  // V = G Q D X. Factor (G Q) D = Q' D' T' P^T, then X' = T' P^T X.
  ScaledQr f = scaled_qr(buffer_ * q, l);
  Eigen::MatrixXd xn = f.t * permute_rows(x, f.perm);
  // Keep the rows of X at unit length, moving their norms into the scales.
  for (Eigen::Index r = 0; r < xn.rows(); ++r) {
    const double nrm = xn.row(r).norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) {
      throw NumericalError("product factorisation degenerated (row norm " + std::to_string(nrm) +
                           ")");
    }
    xn.row(r) /= nrm;
    f.log_diag(r) += std::log(nrm);
  }
  q = std::move(f.q);
  l = std::move(f.log_diag);
  x = std::move(xn);
}

void ProductState::refactor() {
  if (pending_ == 0) return;
  fold(q_, l_, x_);
  buffer_.setIdentity();
  pending_ = 0;
}

Eigen::MatrixXd ProductState::dense() const {
  Eigen::MatrixXd d = q_ * l_.array().exp().matrix().asDiagonal() * x_;
  return buffer_ * d;
}

std::vector<double> ProductState::log_scales() const {
  Eigen::MatrixXd q = q_;
  Eigen::VectorXd l = l_;
  Eigen::MatrixXd x = x_;
  if (pending_ > 0) fold(q, l, x);
  return {l.data(), l.data() + l.size()};
}

ProductState apply_soft_generator(ProductState state, Column column, const Sl2Block& block) {
  state.apply(column, block);
  return state;
}

std::vector<double> radial_coords(const ProductState& state, RadialMode mode) {
  const auto n = static_cast<Eigen::Index>(state.dim_);
  Eigen::MatrixXd q = state.q_;
  Eigen::VectorXd l = state.l_;
  Eigen::MatrixXd x = state.x_;
  if (state.pending_ > 0) state.fold(q, l, x);

  if (mode == RadialMode::eigen_modulus) {
    // V = Q D X is similar to D (X Q).
    const long double lmax = l.maxCoeff();
    MatrixLd m = (x * q).cast<long double>();
    for (Eigen::Index r = 0; r < n; ++r) m.row(r) *= std::exp(static_cast<long double>(l(r)) - lmax);
    Eigen::EigenSolver<MatrixLd> es(m, false);
    if (es.info() != Eigen::Success) {
      throw NumericalError("radial_coords: eigenvalue iteration did not converge");
    }
    std::vector<double> mu(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
      mu[static_cast<std::size_t>(k)] =
          static_cast<double>(std::log(std::abs(es.eigenvalues()(k))) + lmax);
    }
    return sorted_desc(std::move(mu));
  }

  // Singular values of D X. Transposing and refactoring is an unshifted QR
  // sweep; on graded matrices it drives T towards the identity, and whatever
  // coupling is left is resolved by a long-double SVD of the rescaled matrix.
  Eigen::MatrixXd t = x;
  for (int sweep = 0; sweep < 6; ++sweep) {
    ScaledQr f = scaled_qr(t.transpose(), l);
    l = f.log_diag;
    t = f.t;
  }
  const long double lmax = l.maxCoeff();
  MatrixLd m = t.cast<long double>();
  bool underflow = false;
  for (Eigen::Index r = 0; r < n; ++r) {
    const long double sc = std::exp(static_cast<long double>(l(r)) - lmax);
    underflow = underflow || sc == 0.0L;
    m.row(r) *= sc;
  }
  std::vector<double> mu(static_cast<std::size_t>(n));
  if (underflow) {
    // Scales span more than the long-double range; the sweeps have already
    // decoupled them, so the log-scales are the answer.
    for (Eigen::Index k = 0; k < n; ++k) mu[static_cast<std::size_t>(k)] = l(k);
    return sorted_desc(std::move(mu));
  }
  Eigen::JacobiSVD<MatrixLd> svd(m);
  for (Eigen::Index k = 0; k < n; ++k) {
    const long double sv = svd.singularValues()(k);
    if (!(sv > 0.0L)) {
      throw NumericalError("radial_coords: vanishing singular value");
    }
    mu[static_cast<std::size_t>(k)] = static_cast<double>(std::log(sv) + lmax);
  }
  return sorted_desc(std::move(mu));
}

// ---------------------------------------------------------------------------
// gamma_N

namespace {

std::vector<std::size_t> checkpoints_of(const GammaConfig& cfg) {
  if (!cfg.checkpoints.empty()) {
    std::vector<std::size_t> cp = cfg.checkpoints;
    std::sort(cp.begin(), cp.end());
    cp.erase(std::unique(cp.begin(), cp.end()), cp.end());
    if (cp.front() == 0 || cp.back() > cfg.t_max) {
      throw DomainError("gamma_estimator: checkpoints must lie in [1, t_max]");
    }
    return cp;
  }
  std::vector<std::size_t> cp;
  for (std::size_t k = 1; k <= 10; ++k) {
    const std::size_t t = cfg.t_max * k / 10;
    if (t > 0 && (cp.empty() || cp.back() != t)) cp.push_back(t);
  }
  return cp;
}

} // namespace

GammaResult gamma_estimator(const GammaConfig& cfg, const RngStream& rng) {
  if (cfg.n_columns < 2) throw DomainError("gamma_estimator: need N >= 2");
  if (cfg.t_max < 1) throw DomainError("gamma_estimator: need T >= 1");
  if (cfg.trials < 1) throw DomainError("gamma_estimator: need at least one trial");
  if (cfg.forced_column && (*cfg.forced_column < 1 || *cfg.forced_column > cfg.n_columns)) {
    throw DomainError("gamma_estimator: forced column out of range");
  }
  const BlockSampler sampler = cfg.sampler ? cfg.sampler : sampler_from(cfg.measure);
  const auto cps = checkpoints_of(cfg);
  const std::size_t n = cfg.n_columns;

  // ratios[trial][checkpoint], NaN for a discarded sample.
  std::vector<std::vector<double>> ratios(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t trial) {
    const RngStream base = rng.child(trial);
    RngStream heap_cols = base.child(0);
    RngStream blocks = base.child(1);
    RngStream product_cols = base.child(2);
    std::vector<std::int64_t> h(n, 0);
    ProductState state(n + 1);
    std::int64_t hmax = 0;
    auto& out = ratios[trial];
    out.reserve(cps.size());
    std::size_t next = 0;
    for (std::size_t t = 1; t <= cfg.t_max; ++t) {
      const Column c = cfg.forced_column ? *cfg.forced_column : 1 + heap_cols.uniform_index(n);
      deposit_hard_inplace(h, c, cfg.boundary);
      hmax = std::max(hmax, h[c - 1]);
      Column pc = c;
      if (cfg.mode == GammaMode::independent && !cfg.forced_column) {
        pc = 1 + product_cols.uniform_index(n);
      }
      state.apply(pc, sampler(blocks));
      if (next < cps.size() && t == cps[next]) {
        const double mu_max = radial_coords(state, cfg.radial).front();
        out.push_back(mu_max > 0.0 ? static_cast<double>(hmax) / mu_max
                                   : std::numeric_limits<double>::quiet_NaN());
        ++next;
      }
    }
  });

  GammaResult res;
  std::vector<double> inv_t;
  std::vector<double> means;
  for (std::size_t k = 0; k < cps.size(); ++k) {
    GammaPoint p{cps[k], 0.0, 0.0, 0, 0};
    double s1 = 0.0;
    for (const auto& r : ratios) {
      if (std::isnan(r[k])) {
        ++p.discarded;
      } else {
        s1 += r[k];
        ++p.samples;
      }
    }
    if (p.samples > 0) {
      p.mean = s1 / static_cast<double>(p.samples);
      double s2 = 0.0;
      for (const auto& r : ratios) {
        if (!std::isnan(r[k])) s2 += (r[k] - p.mean) * (r[k] - p.mean);
      }
      if (p.samples > 1) {
        p.std_error = std::sqrt(s2 / static_cast<double>(p.samples - 1) /
                                static_cast<double>(p.samples));
      }
      inv_t.push_back(1.0 / static_cast<double>(p.t));
      means.push_back(p.mean);
    } else {
      p.mean = std::numeric_limits<double>::quiet_NaN();
    }
    res.points.push_back(p);
  }
  if (means.size() >= 2) {
    res.extrapolation = least_squares(inv_t, means);
  } else if (means.size() == 1) {
    res.extrapolation.intercept = means.front();
    res.extrapolation.n = 1;
  } else {
    res.extrapolation.intercept = std::numeric_limits<double>::quiet_NaN();
  }
  return res;
}

std::optional<double> gamma_ratio(const ColumnSequence& events, std::size_t n_columns,
                                  const BlockSampler& sampler, RngStream& rng, RadialMode mode) {
  if (events.size() == 0) return std::nullopt;
  const HeightProfile h = replay_hard(n_columns, events, Boundary::free);
  ProductState state(n_columns + 1);
  for (Column c : events.events) state.apply(c, sampler(rng));
  const double mu_max = radial_coords(state, mode).front();
  if (!(mu_max > 0.0)) return std::nullopt;
  return static_cast<double>(h.max()) / mu_max;
}

// ---------------------------------------------------------------------------

std::optional<double> ricatti_step(double rho, const Sl2Block& g) {
  const double den = g.c * rho + g.d;
  if (den == 0.0) return std::nullopt;
  return (g.a * rho + g.b) / den;
}

double product_lyapunov(const BlockSampler& sampler, std::size_t steps, RngStream& rng) {
  if (steps < 1000) throw DomainError("product_lyapunov: need at least 1000 steps");
  double x = 1.0;
  double y = 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    const Sl2Block g = sampler(rng);
    const double nx = g.a * x + g.b * y;
    const double ny = g.c * x + g.d * y;
    const double nrm = std::hypot(nx, ny);
    acc += std::log(nrm);
    x = nx / nrm;
    y = ny / nrm;
  }
  return acc / static_cast<double>(steps);
}

double product_lyapunov(const BlockMeasure& measure, std::size_t steps, RngStream& rng) {
  return product_lyapunov(sampler_from(measure), steps, rng);
}

} // namespace bdheap
