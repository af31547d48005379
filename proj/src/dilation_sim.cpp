#include "itodil/dilation_sim.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace itodil {

namespace {

constexpr Complex kMinusI{0.0, -1.0};

Matrix generator_of(const Hamiltonian& h) { return kMinusI * h.matrix(); }

}  // namespace

Matrix interaction_block(const Matrix& generator) {
  if (generator.rows() != generator.cols())
    throw std::invalid_argument("interaction_block: generator must be square");
  const Eigen::Index d = generator.rows();
  Matrix block = Matrix::Identity(2 * d, 2 * d);
  block.block(0, d, d, d) = generator;
  return block;
}

InteractionOperator build_interaction(const Hamiltonian& h) {
  return {h, interaction_block(generator_of(h)), Metric::tensor(Metric::anti_diagonal(2), Metric::identity(h.dim()))};
}

Matrix semi_tensor_product(const Matrix& x, const Matrix& y, Eigen::Index object_dim) {
  const Eigen::Index d = object_dim;
  if (d < 1 || x.rows() != 2 * d || x.cols() != 2 * d || y.rows() != 2 * d || y.cols() != 2 * d)
    throw std::invalid_argument("semi_tensor_product: factors must be (2d)x(2d)");
  Matrix out = Matrix::Zero(4 * d, 4 * d);
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index j = 0; j < 2; ++j)
      for (Eigen::Index k = 0; k < 2; ++k)
        for (Eigen::Index l = 0; l < 2; ++l)
          out.block((2 * i + k) * d, (2 * j + l) * d, d, d) =
              x.block(i * d, j * d, d, d) * y.block(k * d, l * d, d, d);
  return out;
}

SemiTensorSquare semi_tensor_square(const InteractionOperator& g) {
  const Eigen::Index d = g.hamiltonian.dim();
  const Matrix increment_part = g.block - Matrix::Identity(2 * d, 2 * d);
  SemiTensorSquare out;
  out.product = Matrix::Identity(4 * d, 4 * d) + semi_tensor_product(increment_part, increment_part, d);
  const Matrix dt = increment(IncrementKind::dt2).matrix;
  out.expected =
      Matrix::Identity(4 * d, 4 * d) - kron(dt, kron(dt, g.hamiltonian.matrix() * g.hamiltonian.matrix()));
  out.defect = max_abs(out.product - out.expected);
  return out;
}

CompoundState evolve_on_chain(const InteractionOperator& g, const Chain& chain, const Vector& psi,
                              double t, int max_points) {
  const Eigen::Index d = g.hamiltonian.dim();
  if (psi.size() != d) throw std::invalid_argument("evolve_on_chain: psi dimension mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-12) throw std::invalid_argument("evolve_on_chain: psi must be a unit vector");
  if (!(t <= chain.horizon())) throw std::invalid_argument("evolve_on_chain: t exceeds the chain horizon");
  if (chain.size() > static_cast<std::size_t>(max_points))
    throw std::length_error("evolve_on_chain: chain exceeds the configured maximum length");
  if (chain.size() >= 32)
    throw std::length_error("evolve_on_chain: dense pattern tensor cannot address this many points");

  const std::size_t n = chain.size();
  CompoundState state{chain, d, std::vector<Vector>(std::size_t{1} << n, Vector::Zero(d))};
  state.amplitudes[0] = psi;

  const Matrix l = generator_of(g.hamiltonian);
  const std::size_t interacted = chain.count_before(t);
  for (std::size_t slot = 0; slot < interacted; ++slot) {
    const std::size_t bit = std::size_t{1} << slot;
    // [[I, L], [0, I]] on (object, slot): the output component gains L times
    // the input component, the input component is unchanged. Ascending mask
    // order is safe since only bit-set patterns are written.
    for (std::size_t mask = 0; mask < state.amplitudes.size(); ++mask)
      if (!(mask & bit)) state.amplitudes[mask | bit] += l * state.amplitudes[mask];
  }
  return state;
}

Matrix amplitude_matrix(const CompoundState& state) {
  Matrix m(state.object_dim, static_cast<Eigen::Index>(state.amplitudes.size()));
  for (std::size_t i = 0; i < state.amplitudes.size(); ++i)
    m.col(static_cast<Eigen::Index>(i)) = state.amplitudes[i];
  return m;
}

int entanglement_rank(const CompoundState& state, double tol) {
  if (state.chain.size() < 1) throw std::invalid_argument("entanglement_rank: chain must be nonempty");
  Eigen::JacobiSVD<Matrix> svd(amplitude_matrix(state));
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++rank;
  return rank;
}

Vector project_output(const CompoundState& state, double nu) {
  if (!(nu >= 0.0)) throw std::invalid_argument("project_output: nu must be nonnegative");
  // Per-slot dual weights (input, output) = (1, 1/2). A pattern with k
  // switched slots therefore contributes 2^-k of its amplitude, and the
  // Poisson average at intensity 2 nu of the result is exp(-i nu H t) psi:
  // the halving absorbs the factor two of the sampling measure.
  Vector out = Vector::Zero(state.object_dim);
  for (std::size_t mask = 0; mask < state.amplitudes.size(); ++mask)
    out += std::ldexp(1.0, -static_cast<int>(std::popcount(mask))) * state.amplitudes[mask];
  return out;
}

Matrix partial_dilation_propagator(const Hamiltonian& h, const PartialDilationConfig& cfg, double t,
                                   int truncation) {
  if (!(cfg.lambda > 0.0)) throw std::invalid_argument("partial_dilation_propagator: lambda must be positive");
  if (!(cfg.nu > 0.0)) throw std::invalid_argument("partial_dilation_propagator: nu must be positive");
  if (truncation < 0) throw std::invalid_argument("partial_dilation_propagator: truncation must be nonnegative");
  const Matrix free_part = expm(kMinusI * cfg.lambda * t * h.matrix());
  const Matrix counting_generator = (Complex(0.0, 1.0) * cfg.nu / cfg.lambda) * h.matrix();

  // Large boosts make the one-shot series numerically lossy, so the chain
  // series is taken over dyadic subwindows (each truncated at the same
  // order) and multiplied back up.
  const double norm = (counting_generator * t).cwiseAbs().rowwise().sum().maxCoeff();
  int splits = 0;
  while (std::ldexp(norm, -splits) > 2.0 && splits < 40) ++splits;
  Matrix series = taylor_propagator(counting_generator, std::ldexp(t, -splits), truncation);
  for (int s = 0; s < splits; ++s) series = series * series;
  return free_part * series;
}

Matrix dilated_output_operator(const Hamiltonian& h, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilated_output_operator: lambda must be positive");
  const Eigen::Index d = h.dim();
  Matrix g = Matrix::Identity(4 * d, 4 * d);
  // [[I, 0, -i lambda H], [0, G_lambda, 0], [0, 0, I]] with the middle
  // fiber block G_lambda = I + (i/lambda) H (x) dt.
  g.block(0, 3 * d, d, d) = kMinusI * lambda * h.matrix();
  g.block(d, 2 * d, d, d) = (Complex(0.0, 1.0) / lambda) * h.matrix();
  return g;
}

Matrix output_pairing_matrix(const Hamiltonian& h, double lambda, double nu, const Matrix& core4) {
  if (!(nu >= 0.0)) throw std::invalid_argument("output_pairing_matrix: nu must be nonnegative");
  if (core4.rows() != 4 || core4.cols() != 4)
    throw std::invalid_argument("output_pairing_matrix: core must be 4x4");
  const Eigen::Index d = h.dim();
  const Matrix g = dilated_output_operator(h, lambda);
  const Metric metric = Metric::tensor(Metric::anti_diagonal(4), Metric::identity(d));
  const Matrix conjugated = star_adjoint(g, metric) * kron(core4, Matrix::Identity(d, d)) * g;

  // xi_nu has the dual row (1, sqrt(nu) xi_+^star, 0) = (1, sqrt(nu), 0, 0);
  // under the anti-diagonal metric the vector itself is (0, 0, sqrt(nu), 1).
  const double root = std::sqrt(nu);
  const Eigen::Vector4d dual(1.0, root, 0.0, 0.0);
  const Eigen::Vector4d vec(0.0, 0.0, root, 1.0);
  Matrix out = Matrix::Zero(d, d);
  for (Eigen::Index a = 0; a < 4; ++a)
    for (Eigen::Index b = 0; b < 4; ++b)
      if (dual(a) != 0.0 && vec(b) != 0.0)
        out += dual(a) * vec(b) * conjugated.block(a * d, b * d, d, d);
  return out;
}

double output_measure(const Hamiltonian& h, double lambda, double nu) {
  const Matrix r = output_pairing_matrix(h, lambda, nu, increment(IncrementKind::dn_hat4).matrix);
  return r.trace().real() / static_cast<double>(h.dim());
}

double martingale_centering_defect(const Hamiltonian& h, double lambda, double nu) {
  const Matrix core = (increment(IncrementKind::dn_hat4).matrix -
                       nu * increment(IncrementKind::dt4_corner).matrix) /
                      lambda;
  return max_abs(output_pairing_matrix(h, lambda, nu, core));
}

OutputLedger output_ledger(const Hamiltonian& h, double lambda, double nu) {
  if (!(lambda > 0.0)) throw std::invalid_argument("output_ledger: lambda must be positive");
  return {output_measure(h, lambda, nu), {1.0 / lambda, -nu / lambda}};
}

std::vector<LargeNumberRow> large_number_sweep(const Hamiltonian& h, double t,
                                               const std::vector<double>& nus, std::int64_t samples,
                                               std::uint64_t seed) {
  if (nus.empty()) throw std::invalid_argument("large_number_sweep: nus must be nonempty");
  const Eigen::Index d = h.dim();
  const Matrix target = expm(kMinusI * t * h.matrix());
  std::vector<LargeNumberRow> rows;
  rows.reserve(nus.size());
  for (std::size_t k = 0; k < nus.size(); ++k) {
    const double nu = nus[k];
    if (!(nu > 0.0)) throw std::invalid_argument("large_number_sweep: nu values must be positive");
    // Generator -iH/nu per interaction: pairing factor I - i H / (2 nu),
    // sampled at intensity 2 nu. The product estimator has mean exp(-iHt)
    // for every nu.
    const Matrix factor = Matrix::Identity(d, d) + kMinusI / (2.0 * nu) * h.matrix();
    PoissonConfig config{nu, t, samples, seed + (k + 1) * 0x9e3779b97f4a7c15ULL};
    const PropagatorEstimate estimate = mc_product_expectation(factor, config);
    const double fluctuation = estimate.stderr_max * std::sqrt(static_cast<double>(samples));
    const double fluctuation_stderr =
        samples > 1 ? fluctuation / std::sqrt(2.0 * static_cast<double>(samples - 1)) : 0.0;
    rows.push_back({nu, max_abs(estimate.matrix - target), estimate.stderr_max, fluctuation,
                    fluctuation_stderr});
  }
  return rows;
}

}  // namespace itodil
