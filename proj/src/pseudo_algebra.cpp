#include "itodil/pseudo_algebra.hpp"

#include <cmath>
#include <stdexcept>

namespace itodil {

Metric::Metric(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("Metric: matrix must be square");
  if (max_abs(m_ - m_.transpose()) != 0.0) throw std::invalid_argument("Metric: matrix must be symmetric");
  if (max_abs(m_ * m_ - Matrix::Identity(m_.rows(), m_.cols())) != 0.0)
    throw std::invalid_argument("Metric: matrix must be involutive");
}

Metric Metric::anti_diagonal(Eigen::Index dim) {
  if (dim < 1) throw std::invalid_argument("Metric: dimension must be positive");
  Matrix m = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) m(i, dim - 1 - i) = 1.0;
  return Metric(std::move(m));
}

Metric Metric::identity(Eigen::Index dim) {
  if (dim < 1) throw std::invalid_argument("Metric: dimension must be positive");
  return Metric(Matrix::Identity(dim, dim));
}

Metric Metric::tensor(const Metric& a, const Metric& b) {
  return Metric(kron(a.matrix(), b.matrix()));
}

Matrix star_adjoint(const Matrix& m, const Metric& metric) {
  if (m.rows() != m.cols()) throw std::invalid_argument("star_adjoint: matrix must be square");
  if (m.rows() != metric.dim()) throw std::invalid_argument("star_adjoint: matrix and metric dimensions differ");
  return metric.matrix() * m.adjoint() * metric.matrix();
}

PseudoOperator star_adjoint(const PseudoOperator& op) {
  return {star_adjoint(op.matrix, op.metric), op.metric};
}

bool is_star_unitary(const PseudoOperator& op, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("is_star_unitary: tolerance must be positive");
  const Matrix st = star_adjoint(op.matrix, op.metric);
  const Matrix id = Matrix::Identity(op.matrix.rows(), op.matrix.cols());
  return max_abs(st * op.matrix - id) <= tol && max_abs(op.matrix * st - id) <= tol;
}

Complex eta_pairing(const Vector& x, const Metric& metric, const Vector& y) {
  if (x.size() != metric.dim() || y.size() != metric.dim())
    throw std::invalid_argument("eta_pairing: vector and metric dimensions differ");
  return (x.adjoint() * metric.matrix() * y)(0, 0);
}

GaugePair::GaugePair() : xi_plus(0.0, 1.0), xi_minus(1.0, 0.0) {}

IncrementRep increment(IncrementKind kind) {
  auto unit = [](Eigen::Index dim, Eigen::Index r, Eigen::Index c) {
    Matrix m = Matrix::Zero(dim, dim);
    m(r, c) = 1.0;
    return m;
  };
  switch (kind) {
    case IncrementKind::dt2:
      return {kind, unit(2, 0, 1), Metric::anti_diagonal(2)};
    case IncrementKind::dt3:
      return {kind, unit(3, 0, 2), Metric::anti_diagonal(3)};
    case IncrementKind::dn3:
      return {kind, unit(3, 1, 1), Metric::anti_diagonal(3)};
    case IncrementKind::da3:
      return {kind, unit(3, 0, 1), Metric::anti_diagonal(3)};
    case IncrementKind::da_star3:
      return {kind, unit(3, 1, 2), Metric::anti_diagonal(3)};
    case IncrementKind::dt4_corner:
      return {kind, unit(4, 0, 3), Metric::anti_diagonal(4)};
    case IncrementKind::dn_hat4:
      // Time increment in the middle 2x2 slot of the 1+2+1 block structure.
      return {kind, unit(4, 1, 2), Metric::anti_diagonal(4)};
  }
  throw std::logic_error("increment: unknown kind");
}

std::optional<IncrementRep> ito_product(const IncrementRep& a, const IncrementRep& b) {
  auto is_basis3 = [](IncrementKind k) {
    return k == IncrementKind::dt3 || k == IncrementKind::dn3 || k == IncrementKind::da3 ||
           k == IncrementKind::da_star3;
  };
  if (!is_basis3(a.kind) || !is_basis3(b.kind))
    throw std::invalid_argument("ito_product: both factors must be 3x3 increment kinds");

  const Matrix product = a.matrix * b.matrix;
  if (max_abs(product) == 0.0) return std::nullopt;
  for (IncrementKind k :
       {IncrementKind::dt3, IncrementKind::dn3, IncrementKind::da3, IncrementKind::da_star3}) {
    IncrementRep candidate = increment(k);
    if (max_abs(product - candidate.matrix) == 0.0) return candidate;
  }
  throw std::logic_error("ito_product: product is not an increment basis element");
}

LorentzBoost::LorentzBoost(double nu_in) : nu(nu_in), matrix(Matrix::Zero(2, 2)) {
  if (!(nu > 0.0)) throw std::invalid_argument("LorentzBoost: nu must be positive");
  matrix(0, 0) = 1.0 / std::sqrt(nu);
  matrix(1, 1) = std::sqrt(nu);
}

PseudoOperator diagonalizer() {
  Matrix u(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  u << s, s, s, -s;
  return {u, Metric::anti_diagonal(2)};
}

HyperbolicConjugation lorentz_conjugate_hyperbolic(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("lorentz_conjugate_hyperbolic: theta must be finite");
  HyperbolicConjugation out;
  out.input << std::cosh(theta), std::sinh(theta), std::sinh(theta), std::cosh(theta);
  Eigen::Matrix2d u;
  const double s = 1.0 / std::sqrt(2.0);
  u << s, s, s, -s;
  out.output = u * out.input * u.transpose();
  return out;
}

WeylGenerator::WeylGenerator(double nu_in) : nu(nu_in), matrix(Matrix::Identity(4, 4)) {
  if (!(nu > 0.0)) throw std::invalid_argument("WeylGenerator: nu must be positive");
  const double root = std::sqrt(nu);
  const GaugePair gauge;
  // Row 0 carries -sqrt(nu) xi_plus^star against the middle slot, the middle
  // slot sends sqrt(nu) xi_plus into the last column.
  const Eigen::RowVector2cd xi_plus_star = gauge.xi_plus.adjoint() * Metric::anti_diagonal(2).matrix();
  matrix.block<1, 2>(0, 1) = -root * xi_plus_star;
  matrix.block<2, 1>(1, 3) = root * gauge.xi_plus;
}

Matrix weyl_conjugate(double nu, const Matrix& core) {
  if (core.rows() != 4 || core.cols() != 4) throw std::invalid_argument("weyl_conjugate: core must be 4x4");
  const WeylGenerator z(nu);
  return star_adjoint(z.matrix, Metric::anti_diagonal(4)) * core * z.matrix;
}

Matrix weyl_conjugate_counting(double nu) {
  return weyl_conjugate(nu, increment(IncrementKind::dn_hat4).matrix);
}

Matrix central_limit_increment(double nu) {
  const double root = std::sqrt(nu);
  const Matrix core = increment(IncrementKind::dn_hat4).matrix / root -
                      root * increment(IncrementKind::dt4_corner).matrix;
  return weyl_conjugate(nu, core);
}

Matrix pseudo_wiener_increment() {
  const GaugePair gauge;
  Matrix m = Matrix::Zero(4, 4);
  const Eigen::RowVector2cd xi_minus_star = gauge.xi_minus.adjoint() * Metric::anti_diagonal(2).matrix();
  m.block<1, 2>(0, 1) = xi_minus_star;
  m.block<2, 1>(1, 3) = gauge.xi_minus;
  return m;
}

}  // namespace itodil
