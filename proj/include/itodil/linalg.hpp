#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace itodil {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Largest entry modulus (max-entry norm).
double max_abs(const Matrix& m);

// Max-entry norm of m - m^dagger.
double hermiticity_defect(const Matrix& m);

// Kronecker product, left factor indexing the outer blocks.
Matrix kron(const Matrix& a, const Matrix& b);

// Dense matrix exponential by scaling and squaring around a Taylor core.
Matrix expm(const Matrix& a);

// Truncated propagator series sum_{n=0}^{order} (a t)^n / n!.
Matrix taylor_propagator(const Matrix& a, double t, int order);

// Largest |eigenvalue| of a Hermitian matrix.
double hermitian_spectral_norm(const Matrix& h);

// Deterministic pairwise reduction of f(lo) + ... + f(hi-1). The range is
// split at its midpoint, so the summation tree depends only on [lo, hi) and
// results are reproducible under any evaluation schedule.
template <class F>
auto pairwise_sum(std::int64_t lo, std::int64_t hi, F&& f) -> decltype(f(lo)) {
  if (hi - lo == 1) return f(lo);
  const std::int64_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(lo, mid, f) + pairwise_sum(mid, hi, f);
}

}  // namespace itodil
