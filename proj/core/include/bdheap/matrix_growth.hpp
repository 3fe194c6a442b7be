#pragma once

// Matrix pictures of deposition.
//
// At u -> infinity the generator of column i acts on a height vector in the
// (max, +) semiring. At finite coupling the generators become soft SL(2,R)
// blocks embedded along the diagonal, and the heap height is compared with the
// largest radial coordinate of the running product.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bdheap/deposition.hpp"
#include "bdheap/fit.hpp"
#include "bdheap/rng.hpp"

namespace bdheap {

// ---------------------------------------------------------------------------
// Tropical limit

/// Square matrix over the (max, +) semiring; -infinity is the additive zero.
class TropicalMatrix {
public:
  explicit TropicalMatrix(std::size_t n); // tropical identity
  static TropicalMatrix generator(std::size_t n, Column column);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }

  TropicalMatrix operator*(const TropicalMatrix& rhs) const;
  std::vector<double> apply(const std::vector<double>& v) const;

private:
  std::size_t n_;
  std::vector<double> a_;
};

/// Heights from the tropical generator action a_i <- max(a_{i-1}, a_i, a_{i+1}) + 1
/// on the zero vector, one event at a time.
HeightProfile tropical_heights(const ColumnSequence& events, std::size_t n_columns);

/// Same heights through the explicit time-ordered (max, +) matrix product.
/// O(T N^3); intended for small cases.
HeightProfile tropical_heights_by_product(const ColumnSequence& events, std::size_t n_columns);

/// ln(V a)_i / ln u for the finite-u generators (u on the three entries of row i)
/// applied to a = (1, ..., 1). Evaluated in the log domain.
std::vector<double> finite_u_heights(const ColumnSequence& events, std::size_t n_columns,
                                     double log_u);

// ---------------------------------------------------------------------------
// Soft SL(2,R) products

struct Sl2Block {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  /// Throws DomainError unless |ad - bc - 1| <= 1e-12 * max(1, |ad| + |bc|).
  static Sl2Block checked(double a, double b, double c, double d);
  static Sl2Block diagonal(double r); // diag(e^r, e^-r)
  static Sl2Block rotation(double theta);
  static Sl2Block shear(double x);     // [[1, x], [0, 1]]

  double det() const noexcept { return a * d - b * c; }
  Sl2Block operator*(const Sl2Block& o) const;
};

/// U = R(theta) diag(e^r, e^-r) shear(x), theta ~ U[0, 2 pi), r ~ U[-r0, r0], x ~ U[-x0, x0].
struct BlockMeasure {
  double r0 = 1.0;
  double x0 = 1.0;

  /// Throws DomainError for negative or non-finite parameters.
  void validate() const;
  Sl2Block sample(RngStream& rng) const;
};

using BlockSampler = std::function<Sl2Block(RngStream&)>;

BlockSampler sampler_from(const BlockMeasure& measure);
BlockSampler constant_sampler(const Sl2Block& block);

enum class RadialMode { singular_values, eigen_modulus };

/// Running product V_t = g_t ... g_1 kept as Q diag(e^L) X with Q orthogonal,
/// L the accumulated log-scales and X well conditioned. New blocks are
/// collected in a small dense buffer that is folded in every `refactor_every`
/// events, so the raw product is never formed.
class ProductState {
public:
  explicit ProductState(std::size_t dim, std::size_t refactor_every = 16);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t events() const noexcept { return t_; }
  std::size_t refactor_every() const noexcept { return refactor_every_; }

  /// Left-multiplies by the block embedded on rows/columns {column, column+1}.
  void apply(Column column, const Sl2Block& block);

  /// Folds the pending buffer into the factorisation.
  void refactor();

  /// Dense reconstruction; overflows for long runs, meant for small t.
  Eigen::MatrixXd dense() const;

  /// Log-scales of the current factorisation after folding pending blocks.
  std::vector<double> log_scales() const;

  friend std::vector<double> radial_coords(const ProductState& state, RadialMode mode);

private:
  void fold(Eigen::MatrixXd& q, Eigen::VectorXd& l, Eigen::MatrixXd& x) const;

  std::size_t dim_;
  std::size_t refactor_every_;
  std::size_t t_ = 0;
  std::size_t pending_ = 0;
  Eigen::MatrixXd buffer_; // product of blocks since the last fold
  Eigen::MatrixXd q_;
  Eigen::VectorXd l_;
  Eigen::MatrixXd x_;
};

/// Free-function form of ProductState::apply returning a new state.
ProductState apply_soft_generator(ProductState state, Column column, const Sl2Block& block);

/// mu_j sorted descending. Singular-value mode gives ln of the singular values
/// of V_t; eigen-modulus mode gives ln |eigenvalue|. Throws NumericalError if
/// the factorisation has degenerated.
std::vector<double> radial_coords(const ProductState& state,
                                  RadialMode mode = RadialMode::singular_values);

enum class GammaMode { coupled, independent };

struct GammaConfig {
  std::size_t n_columns = 10;             // heap columns; the product has n_columns + 1 rows
  std::size_t t_max = 10000;
  std::size_t trials = 32;
  std::vector<std::size_t> checkpoints;   // default: t_max/10, 2 t_max/10, ..., t_max
  BlockMeasure measure{};
  BlockSampler sampler{};                 // overrides `measure` when set
  GammaMode mode = GammaMode::coupled;
  RadialMode radial = RadialMode::singular_values;
  std::optional<Column> forced_column{};  // every event in this column when set
  Boundary boundary = Boundary::free;
  unsigned threads = 1;
};

struct GammaPoint {
  std::size_t t;
  double mean;
  double std_error;
  std::size_t samples;
  std::size_t discarded; // mu_max <= 0
};

struct GammaResult {
  std::vector<GammaPoint> points;
  LinearFit extrapolation; // mean gamma against 1/T
  double gamma0() const noexcept { return extrapolation.intercept; }
};

/// Ensemble average of max_i h_i / max_j mu_j at each checkpoint and its
/// affine extrapolation to 1/T = 0. Trial k draws from rng.child(k).
GammaResult gamma_estimator(const GammaConfig& config, const RngStream& rng);

/// h_max / mu_max for one explicit column sequence with blocks drawn from
/// `sampler`; nullopt when mu_max <= 0.
std::optional<double> gamma_ratio(const ColumnSequence& events, std::size_t n_columns,
                                  const BlockSampler& sampler, RngStream& rng,
                                  RadialMode mode = RadialMode::singular_values);

/// Projective action rho -> (a rho + b) / (c rho + d); nullopt at the pole.
std::optional<double> ricatti_step(double rho, const Sl2Block& block);

/// Top Lyapunov exponent of an i.i.d. block product from the growth of the
/// vector e_1, renormalised every step. steps must be at least 1000.
double product_lyapunov(const BlockSampler& sampler, std::size_t steps, RngStream& rng);
double product_lyapunov(const BlockMeasure& measure, std::size_t steps, RngStream& rng);

} // namespace bdheap
