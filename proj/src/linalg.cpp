#include "itodil/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace itodil {

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const Matrix& m) {
  return max_abs(m - m.adjoint());
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("expm: matrix must be square");
  const Eigen::Index n = a.rows();

  // Halve until the scaled infinity norm is at most 1/2, run the Taylor
  // series to machine precision, then square back up.
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix x = a / std::ldexp(1.0, squarings);

  Matrix term = Matrix::Identity(n, n);
  Matrix sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = (term * x) / static_cast<double>(k);
    sum += term;
    if (max_abs(term) < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

Matrix taylor_propagator(const Matrix& a, double t, int order) {
  if (a.rows() != a.cols()) throw std::invalid_argument("taylor_propagator: matrix must be square");
  if (order < 0) throw std::invalid_argument("taylor_propagator: order must be nonnegative");
  const Eigen::Index n = a.rows();
  Matrix term = Matrix::Identity(n, n);
  Matrix sum = term;
  for (int k = 1; k <= order; ++k) {
    term = (term * a) * (t / static_cast<double>(k));
    sum += term;
  }
  return sum;
}

double hermitian_spectral_norm(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace itodil
