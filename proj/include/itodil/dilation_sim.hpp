#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "itodil/chains_fock.hpp"
#include "itodil/linalg.hpp"
#include "itodil/pseudo_algebra.hpp"

namespace itodil {

// Memory guard for the 2^n compound tensor.
inline constexpr int kDefaultMaxChainPoints = 16;

// One pseudo-measurement: the block operator [[I, -iH], [0, I]] on the
// object tensored with the two-dimensional apparatus fiber (fiber indexing
// the outer blocks). Star-unitary under eta_2 (x) I_d exactly when H is
// Hermitian.
struct InteractionOperator {
  Hamiltonian hamiltonian;
  Matrix block;
  Metric metric;
};

// Raw block [[I, L], [0, I]] for an arbitrary generator; no validation.
Matrix interaction_block(const Matrix& generator);

InteractionOperator build_interaction(const Hamiltonian& h);

// Semi-tensor product: operator product on the object factor, tensor
// product on the apparatus fibers. x and y are (2d)x(2d) fiber-outer block
// matrices; the result lives on fiber (x) fiber (x) object.
Matrix semi_tensor_product(const Matrix& x, const Matrix& y, Eigen::Index object_dim);

// The two-point interaction term: the unitized semi-tensor square of the
// increment G - I, which must equal I - H^2 (x) dt (x) dt. The single-point
// terms of the full product are not part of this identity.
struct SemiTensorSquare {
  Matrix product;
  Matrix expected;
  double defect;
};
SemiTensorSquare semi_tensor_square(const InteractionOperator& g);

// Object-plus-apparatus state over a chain: one object d-vector per sign
// pattern of the n slots. Bit i of the pattern index set means slot i has
// been switched to the output gauge vector.
struct CompoundState {
  Chain chain;
  Eigen::Index object_dim = 0;
  std::vector<Vector> amplitudes;
};

// Applies the interaction jointly to (object, slot) for every chain point
// in [0, t), in increasing time order, starting from the all-input
// embedding of psi. The amplitude of a pattern with k switched slots is
// (-iH)^k psi.
CompoundState evolve_on_chain(const InteractionOperator& g, const Chain& chain, const Vector& psi,
                              double t, int max_points = kDefaultMaxChainPoints);

// d x 2^n matrix of pattern amplitudes.
Matrix amplitude_matrix(const CompoundState& state);

// Numerical rank (singular values > tol) of the amplitude matrix;
// 1 means the object is separable from the apparatus record.
int entanglement_rank(const CompoundState& state, double tol);

// Pairs every apparatus slot with the dual functional that weights the
// input component by 1 and the output component by 1/2, i.e. the Poisson
// state-vector pairing written for the all-input embedding. Averaged over
// chains of intensity 2 nu this reproduces the boosted propagator applied
// to psi; nu only fixes the measure the caller sampled from.
Vector project_output(const CompoundState& state, double nu);

// Splitting of the generator -i(lambda - nu/lambda) H into a free part and
// a dilated counting part.
struct PartialDilationConfig {
  double lambda = 1.0;
  double nu = 1.0;
};

// exp(-i H lambda t) times the truncated chain series of (i nu / lambda) H;
// equals exp(-i (lambda - nu/lambda) H t) up to the series remainder.
Matrix partial_dilation_propagator(const Hamiltonian& h, const PartialDilationConfig& cfg, double t,
                                   int truncation);

// Dilated interaction operator of the partially dilated process on
// object (x) (C + fiber + C), as a 4d x 4d fiber-outer block matrix.
Matrix dilated_output_operator(const Hamiltonian& h, double lambda);

// xi_nu-pairing of core (conjugated by the dilated interaction) per unit
// object norm, as a d x d matrix.
Matrix output_pairing_matrix(const Hamiltonian& h, double lambda, double nu, const Matrix& core4);

// Scalar coefficient of the output measure of the counting increment;
// equals nu independently of lambda and H.
double output_measure(const Hamiltonian& h, double lambda, double nu);

// Size of the xi_nu-pairing of the centered martingale increment
// (dn_hat - nu dt_corner)/lambda; vanishes for every lambda, nu, H.
double martingale_centering_defect(const Hamiltonian& h, double lambda, double nu);

struct OutputLedger {
  double per_point_counting_coefficient;
  std::pair<double, double> martingale_increment_coefficients;  // (1/lambda, -nu/lambda)
};
OutputLedger output_ledger(const Hamiltonian& h, double lambda, double nu);

// One row per nu of the large-number run: the process with generator -iH/nu
// per interaction sampled at intensity 2 nu. bias is the max-entry distance
// of the Monte Carlo mean from exp(-iHt); fluctuation is the max-entry
// sample standard deviation of the per-chain products.
struct LargeNumberRow {
  double nu;
  double bias;
  double mc_stderr;
  double fluctuation;
  double fluctuation_stderr;
};
std::vector<LargeNumberRow> large_number_sweep(const Hamiltonian& h, double t,
                                               const std::vector<double>& nus, std::int64_t samples,
                                               std::uint64_t seed);

}  // namespace itodil
