#pragma once

#include <optional>

#include "itodil/linalg.hpp"

namespace itodil {

// Indefinite inner-product metric: real symmetric, involutive, 0/1 entries.
// The built-in metrics are the anti-diagonal forms in dimensions 2, 3 and 4
// and tensor products thereof; the identity is included for object factors.
class Metric {
 public:
  static Metric anti_diagonal(Eigen::Index dim);
  static Metric identity(Eigen::Index dim);
  static Metric tensor(const Metric& a, const Metric& b);

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  explicit Metric(Matrix m);
  Matrix m_;
};

// Square operator paired with the metric that induces its star adjoint
// eta A^dagger eta.
struct PseudoOperator {
  Matrix matrix;
  Metric metric;
};

Matrix star_adjoint(const Matrix& m, const Metric& metric);
PseudoOperator star_adjoint(const PseudoOperator& op);

// True iff op^star op and op op^star are both within tol of the identity
// in max-entry norm.
bool is_star_unitary(const PseudoOperator& op, double tol);

// <x, y>_eta = x^dagger eta y.
Complex eta_pairing(const Vector& x, const Metric& metric, const Vector& y);

// Input (future) and output (past) gauge vectors of the two-dimensional
// apparatus fiber. Both are null for the anti-diagonal metric and pair to 1;
// the time increment maps input to output and annihilates output.
struct GaugePair {
  Eigen::Vector2cd xi_plus;
  Eigen::Vector2cd xi_minus;
  GaugePair();
};

// Canonical matrix representations of the differential increments:
//   dt2                        2x2 time increment (upper-right unit)
//   dt3, dn3, da3, da_star3    3x3 time/counting/annihilation/creation
//   dt4_corner, dn_hat4        4x4 forms used by the Weyl conjugations,
//                              with the 2x2 time increment in the middle
//                              slot of the 1+2+1 block structure
enum class IncrementKind { dt2, dt3, dn3, da3, da_star3, dt4_corner, dn_hat4 };

struct IncrementRep {
  IncrementKind kind;
  Matrix matrix;
  Metric metric;
};

IncrementRep increment(IncrementKind kind);

// Product in the 3x3 increment algebra, classified against the basis.
// Returns nullopt when the product vanishes; only the 3x3 kinds are valid.
std::optional<IncrementRep> ito_product(const IncrementRep& a, const IncrementRep& b);

// diag(1/sqrt(nu), sqrt(nu)); star-unitary, and conjugation scales the time
// increment by nu.
struct LorentzBoost {
  double nu;
  Matrix matrix;
  explicit LorentzBoost(double nu);
};

// The dagger-unitary basis change taking the anti-diagonal 2x2 metric to
// diag(1, -1).
PseudoOperator diagonalizer();

// Conjugating the symmetric hyperbolic rotation by the diagonalizer yields
// diag(exp(theta), exp(-theta)); nu = exp(2 theta) links the two boost
// parameterizations.
struct HyperbolicConjugation {
  Eigen::Matrix2d input;
  Eigen::Matrix2d output;
};
HyperbolicConjugation lorentz_conjugate_hyperbolic(double theta);

// Upper-triangular star-unitary generator of the Weyl transform between the
// Poisson embedding and the Fock-vacuum basis, on the 4-dim per-point space.
struct WeylGenerator {
  double nu;
  Matrix matrix;
  explicit WeylGenerator(double nu);
};

// Z_nu^star * core * Z_nu for a 4x4 core.
Matrix weyl_conjugate(double nu, const Matrix& core);

// Z_nu^star * dn_hat * Z_nu: the counting increment in the vacuum basis,
// which splits as a centered martingale part plus nu times the corner time
// increment.
Matrix weyl_conjugate_counting(double nu);

// Z_nu^star * (dn_hat/sqrt(nu) - sqrt(nu) dt_corner) * Z_nu. Converges to
// the pseudo-Wiener increment entrywise at rate exactly 1/sqrt(nu).
Matrix central_limit_increment(double nu);

// The limit of the above: annihilation and creation against the output
// gauge vector, in 4x4 block form. Nilpotent and star-self-adjoint.
Matrix pseudo_wiener_increment();

}  // namespace itodil
