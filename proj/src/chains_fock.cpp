#include "itodil/chains_fock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "itodil/rng.hpp"

namespace itodil {

Chain::Chain(std::vector<double> times, double horizon) : times_(std::move(times)), horizon_(horizon) {
  if (!(horizon_ > 0.0)) throw std::invalid_argument("Chain: horizon must be positive");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!(times_[i] >= 0.0 && times_[i] < horizon_))
      throw std::invalid_argument("Chain: times must lie in [0, horizon)");
    if (i > 0 && !(times_[i - 1] < times_[i]))
      throw std::invalid_argument("Chain: times must be strictly increasing");
  }
}

std::size_t Chain::count_before(double t) const {
  return static_cast<std::size_t>(std::lower_bound(times_.begin(), times_.end(), t) - times_.begin());
}

Chain translate(const Chain& chain, double shift) {
  std::vector<double> shifted = chain.times();
  for (double& x : shifted) x += shift;
  // The window moves rigidly with the points; negative shifts past the
  // origin would push points out of the admissible range.
  if (!shifted.empty() && shifted.front() < 0.0)
    throw std::invalid_argument("translate: shift moves points below zero");
  return Chain(std::move(shifted), chain.horizon() + shift);
}

Hamiltonian::Hamiltonian(Matrix m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1)
    throw std::invalid_argument("Hamiltonian: matrix must be square and nonempty");
  if (hermiticity_defect(m_) > tol)
    throw std::invalid_argument("Hamiltonian: matrix is not Hermitian within tolerance");
}

namespace {

void validate_config(const PoissonConfig& config) {
  if (!(config.nu >= 0.0)) throw std::invalid_argument("PoissonConfig: nu must be nonnegative");
  if (!(config.horizon > 0.0)) throw std::invalid_argument("PoissonConfig: horizon must be positive");
  if (config.samples < 1) throw std::invalid_argument("PoissonConfig: samples must be positive");
}

}  // namespace

Chain sample_chain(const PoissonConfig& config, std::int64_t draw_index) {
  validate_config(config);
  rng::Stream stream(config.seed, static_cast<std::uint64_t>(draw_index));
  const std::int64_t n = stream.poisson(2.0 * config.nu * config.horizon);
  std::vector<double> times(static_cast<std::size_t>(n));
  for (double& x : times) x = stream.uniform() * config.horizon;
  std::sort(times.begin(), times.end());
  // Ties have probability zero but would violate strict ordering; nudge.
  for (std::size_t i = 1; i < times.size(); ++i)
    if (times[i] <= times[i - 1]) times[i] = std::nextafter(times[i - 1], config.horizon);
  return Chain(std::move(times), config.horizon);
}

double simplex_volume(int n, double t) {
  if (n < 0) throw std::invalid_argument("simplex_volume: n must be nonnegative");
  double v = 1.0;
  for (int k = 1; k <= n; ++k) v *= t / static_cast<double>(k);
  return v;
}

PropagatorEstimate exact_expectation(const Hamiltonian& h, double t, double nu, int truncation) {
  if (truncation < 0) throw std::invalid_argument("exact_expectation: truncation must be nonnegative");
  const Matrix generator = Complex(0.0, -1.0) * nu * h.matrix();
  return {taylor_propagator(generator, t, truncation), PropagatorMethod::exact_series, 0.0, truncation};
}

PropagatorEstimate matrix_exponential_propagator(const Hamiltonian& h, double t, double nu) {
  const Matrix generator = Complex(0.0, -1.0) * nu * h.matrix();
  return {expm(generator * t), PropagatorMethod::matrix_exponential, 0.0, 0};
}

double series_remainder_bound(const Hamiltonian& h, double t, double nu, int truncation) {
  const double x = hermitian_spectral_norm(h.matrix()) * std::abs(nu) * std::abs(t);
  double bound = 1.0;
  for (int k = 1; k <= truncation + 1; ++k) bound *= x / static_cast<double>(k);
  return bound;
}

Matrix coherent_pairing_factor(const Hamiltonian& h, double nu) {
  if (!(nu >= 0.0)) throw std::invalid_argument("coherent_pairing_factor: nu must be nonnegative");
  const Eigen::Index d = h.dim();
  return Matrix::Identity(d, d) + Complex(0.0, -0.5) * h.matrix();
}

PropagatorEstimate mc_product_expectation(const Matrix& factor, const PoissonConfig& config) {
  validate_config(config);
  const Eigen::Index d = factor.rows();
  if (factor.cols() != d) throw std::invalid_argument("mc_product_expectation: factor must be square");
  const std::int64_t m = config.samples;

  // Point counts are all that the per-chain product depends on for a
  // constant factor; powers are cached up to the largest observed count.
  std::vector<std::size_t> counts(static_cast<std::size_t>(m));
  std::size_t max_count = 0;
  for (std::int64_t i = 0; i < m; ++i) {
    counts[static_cast<std::size_t>(i)] = sample_chain(config, i).size();
    max_count = std::max(max_count, counts[static_cast<std::size_t>(i)]);
  }
  std::vector<Matrix> powers;
  powers.reserve(max_count + 1);
  powers.push_back(Matrix::Identity(d, d));
  for (std::size_t n = 1; n <= max_count; ++n) powers.push_back(powers.back() * factor);
  const auto product_of = [&](std::int64_t i) -> const Matrix& {
    return powers[counts[static_cast<std::size_t>(i)]];
  };

  const Matrix mean =
      pairwise_sum(0, m, [&](std::int64_t i) -> Matrix { return product_of(i); }) / static_cast<double>(m);

  double stderr_max = 0.0;
  if (m > 1) {
    const Eigen::MatrixXd sq = pairwise_sum(
        0, m, [&](std::int64_t i) -> Eigen::MatrixXd { return (product_of(i) - mean).cwiseAbs2(); });
    // Entrywise sample std over the M products, divided by sqrt(M).
    stderr_max = std::sqrt(sq.maxCoeff() / static_cast<double>(m - 1) / static_cast<double>(m));
  }
  return {mean, PropagatorMethod::monte_carlo, stderr_max, m};
}

PropagatorEstimate mc_expectation(const Hamiltonian& h, const PoissonConfig& config) {
  return mc_product_expectation(coherent_pairing_factor(h, config.nu), config);
}

}  // namespace itodil
