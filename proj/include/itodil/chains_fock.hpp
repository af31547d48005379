#pragma once

#include <cstdint>
#include <vector>

#include "itodil/linalg.hpp"

namespace itodil {

// Finite chain of interaction times, strictly increasing within [0, horizon).
// The empty chain is valid.
class Chain {
 public:
  Chain() = default;
  Chain(std::vector<double> times, double horizon);

  const std::vector<double>& times() const { return times_; }
  double horizon() const { return horizon_; }
  std::size_t size() const { return times_.size(); }

  // Number of points in [0, t).
  std::size_t count_before(double t) const;

 private:
  std::vector<double> times_ = {};
  double horizon_ = 1.0;
};

// Rigid translation of the chain together with its window.
Chain translate(const Chain& chain, double shift);

// Sampling configuration for the counting process. The point process has
// intensity 2*nu: the interaction algebra is one-dimensional but is
// represented in two dimensions, and the factor two in the measure is
// cancelled by the pairing weights of the per-point factor.
struct PoissonConfig {
  double nu = 1.0;
  double horizon = 1.0;
  std::int64_t samples = 1;
  std::uint64_t seed = 0;
};

// d x d Hermitian generator data; construction validates Hermiticity.
class Hamiltonian {
 public:
  explicit Hamiltonian(Matrix m, double tol = 1e-12);
  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  Matrix m_;
};

enum class PropagatorMethod { exact_series, matrix_exponential, monte_carlo };

struct PropagatorEstimate {
  Matrix matrix;
  PropagatorMethod method = PropagatorMethod::exact_series;
  double stderr_max = 0.0;  // 0 for the deterministic methods
  std::int64_t truncation_or_samples = 0;
};

// Draws one chain: point count from Poisson(2 nu t), then sorted uniform
// order statistics on [0, t). Fully determined by (config.seed, draw_index).
Chain sample_chain(const PoissonConfig& config, std::int64_t draw_index);

// Volume t^n / n! of the ordered simplex {0 <= t_1 < ... < t_n < t}.
double simplex_volume(int n, double t);

// Truncated chain-series propagator sum_{n<=N} (nu (-iH))^n t^n / n!,
// the chain integral of the per-point factor nu L with L = -iH. Converges
// to exp(-i nu H t).
PropagatorEstimate exact_expectation(const Hamiltonian& h, double t, double nu, int truncation);

// Independent route to the same propagator via scaling-and-squaring expm.
PropagatorEstimate matrix_exponential_propagator(const Hamiltonian& h, double t, double nu);

// Upper bound ||nu H t||^(N+1) / (N+1)! on the series truncation error.
double series_remainder_bound(const Hamiltonian& h, double t, double nu, int truncation);

// Single-point pairing factor I + L/2 of the Poisson state-vector against
// the interaction operator: with sampling intensity 2 nu, the product
// estimator has mean exp(2 nu t (factor - I)) = exp(-i nu H t).
Matrix coherent_pairing_factor(const Hamiltonian& h, double nu);

// Monte Carlo propagator: averages the per-chain product factor^n over
// config.samples sampled chains using the fixed pairwise reduction.
// stderr_max is the largest entrywise sample standard deviation divided by
// sqrt(samples).
PropagatorEstimate mc_expectation(const Hamiltonian& h, const PoissonConfig& config);

// Same estimator for an arbitrary constant per-point factor; used by the
// partially dilated and large-number processes.
PropagatorEstimate mc_product_expectation(const Matrix& factor, const PoissonConfig& config);

}  // namespace itodil
