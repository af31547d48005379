#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "itodil/linalg.hpp"
#include "itodil/pseudo_algebra.hpp"
#include "itodil/rng.hpp"

using namespace itodil;

namespace {

Matrix unit_matrix(Eigen::Index dim, Eigen::Index r, Eigen::Index c) {
  Matrix m = Matrix::Zero(dim, dim);
  m(r, c) = 1.0;
  return m;
}

Matrix random_complex(Eigen::Index dim, std::uint64_t seed) {
  rng::Stream stream(seed, 0);
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      m(i, j) = Complex(2.0 * stream.uniform() - 1.0, 2.0 * stream.uniform() - 1.0);
  return m;
}

}  // namespace

TEST_CASE("metric constructors") {
  const Metric eta2 = Metric::anti_diagonal(2);
  CHECK(eta2.dim() == 2);
  CHECK(eta2.matrix()(0, 1) == Complex(1.0));
  CHECK(eta2.matrix()(0, 0) == Complex(0.0));

  // eta_4 coincides with eta_2 (x) eta_2.
  CHECK(max_abs(Metric::tensor(eta2, eta2).matrix() - Metric::anti_diagonal(4).matrix()) == 0.0);

  // Involutive and symmetric for every built-in dimension.
  for (Eigen::Index d : {2, 3, 4}) {
    const Metric eta = Metric::anti_diagonal(d);
    CHECK(max_abs(eta.matrix() * eta.matrix() - Matrix::Identity(d, d)) == 0.0);
    CHECK(max_abs(eta.matrix() - eta.matrix().transpose()) == 0.0);
  }
}

TEST_CASE("star adjoint is an involution and reverses products") {
  std::vector<Metric> metrics = {Metric::anti_diagonal(2), Metric::anti_diagonal(3),
                                 Metric::anti_diagonal(4),
                                 Metric::tensor(Metric::anti_diagonal(2), Metric::anti_diagonal(3))};
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    const Metric& eta = metrics[m];
    const Eigen::Index d = eta.dim();
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const Matrix a = random_complex(d, 1000 * m + 10 * d + seed);
      const Matrix b = random_complex(d, 2000 * m + 10 * d + seed);
      // Involution is exact: the adjoint only permutes and conjugates.
      CHECK(max_abs(star_adjoint(star_adjoint(a, eta), eta) - a) == 0.0);
      CHECK(max_abs(star_adjoint(a * b, eta) - star_adjoint(b, eta) * star_adjoint(a, eta)) <= 1e-13);
    }
  }
}

TEST_CASE("increment matrices sit at their canonical positions") {
  auto check_single = [](IncrementKind kind, Eigen::Index dim, Eigen::Index r, Eigen::Index c) {
    const IncrementRep rep = increment(kind);
    REQUIRE(rep.matrix.rows() == dim);
    CHECK(rep.metric.dim() == dim);
    CHECK(rep.matrix(r, c) == Complex(1.0));
    CHECK(rep.matrix.cwiseAbs().sum() == 1.0);
  };
  check_single(IncrementKind::dt2, 2, 0, 1);
  check_single(IncrementKind::dt3, 3, 0, 2);
  check_single(IncrementKind::dn3, 3, 1, 1);
  check_single(IncrementKind::da3, 3, 0, 1);
  check_single(IncrementKind::da_star3, 3, 1, 2);
  check_single(IncrementKind::dt4_corner, 4, 0, 3);
  check_single(IncrementKind::dn_hat4, 4, 1, 2);

  // dn_hat4 carries the 2x2 time increment in the middle slot.
  const Matrix middle = increment(IncrementKind::dn_hat4).matrix.block<2, 2>(1, 1);
  CHECK(max_abs(middle - increment(IncrementKind::dt2).matrix) == 0.0);
}

TEST_CASE("star adjoint rejects mismatched dimensions") {
  CHECK_THROWS_AS(star_adjoint(Matrix::Identity(3, 3), Metric::anti_diagonal(2)), std::invalid_argument);
  CHECK_THROWS_AS(star_adjoint(Matrix::Zero(2, 3), Metric::anti_diagonal(2)), std::invalid_argument);
}

TEST_CASE("time increment is nilpotent and star-self-adjoint") {
  const IncrementRep dt = increment(IncrementKind::dt2);
  CHECK(max_abs(dt.matrix * dt.matrix) == 0.0);
  CHECK(max_abs(star_adjoint(dt.matrix, dt.metric) - dt.matrix) == 0.0);

  // Identity is fixed by the star adjoint under any metric.
  CHECK(max_abs(star_adjoint(Matrix::Identity(3, 3), Metric::anti_diagonal(3)) - Matrix::Identity(3, 3)) == 0.0);
}

TEST_CASE("gauge vectors: action of dt and pairings") {
  const GaugePair gauge;
  const IncrementRep dt = increment(IncrementKind::dt2);
  const Metric eta2 = Metric::anti_diagonal(2);

  CHECK(max_abs(dt.matrix * gauge.xi_plus - gauge.xi_minus) == 0.0);
  CHECK(max_abs(dt.matrix * gauge.xi_minus) == 0.0);

  CHECK(eta_pairing(gauge.xi_minus, eta2, gauge.xi_plus) == Complex(1.0));
  CHECK(eta_pairing(gauge.xi_plus, eta2, gauge.xi_plus) == Complex(0.0));
  CHECK(eta_pairing(gauge.xi_minus, eta2, gauge.xi_minus) == Complex(0.0));
  // Unital against the time increment.
  CHECK(eta_pairing(gauge.xi_plus, eta2, dt.matrix * gauge.xi_plus) == Complex(1.0));
}

TEST_CASE("star adjoint exchanges annihilation and creation") {
  // Direct triple product eta_3 e_21 eta_3 as the independent route.
  const Metric eta3 = Metric::anti_diagonal(3);
  const Matrix direct = eta3.matrix() * unit_matrix(3, 1, 0) * eta3.matrix();
  CHECK(max_abs(direct - increment(IncrementKind::da_star3).matrix) == 0.0);

  const IncrementRep da = increment(IncrementKind::da3);
  CHECK(max_abs(star_adjoint(da.matrix, da.metric) - increment(IncrementKind::da_star3).matrix) == 0.0);
}

TEST_CASE("3x3 and 4x4 increments are star-self-adjoint where expected") {
  for (IncrementKind k : {IncrementKind::dt3, IncrementKind::dn3, IncrementKind::dn_hat4,
                          IncrementKind::dt4_corner}) {
    const IncrementRep rep = increment(k);
    CHECK(max_abs(star_adjoint(rep.matrix, rep.metric) - rep.matrix) == 0.0);
  }
}

TEST_CASE("full ito multiplication table") {
  const IncrementKind basis[4] = {IncrementKind::dt3, IncrementKind::dn3, IncrementKind::da3,
                                  IncrementKind::da_star3};
  // Expected table, rows = left factor, columns = right factor; nullopt = 0.
  auto expected = [](IncrementKind a, IncrementKind b) -> std::optional<IncrementKind> {
    if (a == IncrementKind::dn3 && b == IncrementKind::dn3) return IncrementKind::dn3;
    if (a == IncrementKind::da3 && b == IncrementKind::da_star3) return IncrementKind::dt3;
    if (a == IncrementKind::dn3 && b == IncrementKind::da_star3) return IncrementKind::da_star3;
    if (a == IncrementKind::da3 && b == IncrementKind::dn3) return IncrementKind::da3;
    return std::nullopt;
  };
  for (IncrementKind a : basis) {
    for (IncrementKind b : basis) {
      const auto product = ito_product(increment(a), increment(b));
      const auto want = expected(a, b);
      CHECK(product.has_value() == want.has_value());
      if (product && want) {
        CHECK(product->kind == *want);
        // Integer-exact: the raw matrix product equals the basis element.
        CHECK(max_abs(increment(a).matrix * increment(b).matrix - increment(*want).matrix) == 0.0);
      }
      if (!want) CHECK(max_abs(increment(a).matrix * increment(b).matrix) == 0.0);
    }
  }
}

TEST_CASE("ito product rejects non-3x3 kinds") {
  CHECK_THROWS_AS(ito_product(increment(IncrementKind::dt2), increment(IncrementKind::dn3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(ito_product(increment(IncrementKind::dn3), increment(IncrementKind::dn_hat4)),
                  std::invalid_argument);
}

TEST_CASE("diagonalizer rotates the metric to diag(1,-1)") {
  const PseudoOperator u = diagonalizer();
  const Metric eta2 = Metric::anti_diagonal(2);
  Matrix want(2, 2);
  want << 1, 0, 0, -1;
  CHECK(max_abs(u.matrix.adjoint() * eta2.matrix() * u.matrix - want) <= 1e-15);
  CHECK(max_abs(u.matrix.adjoint() * u.matrix - Matrix::Identity(2, 2)) <= 1e-15);

  // Rotated gauge vectors.
  const GaugePair gauge;
  Eigen::Vector2cd plus_rotated = u.matrix.adjoint() * gauge.xi_plus;
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(plus_rotated(0) - Complex(s)) <= 1e-15);
  CHECK(std::abs(plus_rotated(1) - Complex(-s)) <= 1e-15);
}

TEST_CASE("hyperbolic rotation diagonalizes to exp(+-theta)") {
  for (double theta : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    const HyperbolicConjugation c = lorentz_conjugate_hyperbolic(theta);
    CHECK(std::abs(c.input(0, 0) - std::cosh(theta)) == 0.0);
    CHECK(std::abs(c.input(0, 1) - std::sinh(theta)) == 0.0);
    Eigen::Matrix2d want;
    want << std::exp(theta), 0, 0, std::exp(-theta);
    CHECK((c.output - want).cwiseAbs().maxCoeff() <= 1e-12 * std::exp(std::abs(theta)));
  }
  // theta = 0 gives identity in, identity out.
  const HyperbolicConjugation id = lorentz_conjugate_hyperbolic(0.0);
  CHECK((id.input - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((id.output - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("lorentz boost: star-unitary, scales dt by nu") {
  const IncrementRep dt = increment(IncrementKind::dt2);
  for (double nu : {0.1, 1.0, 10.0}) {
    const LorentzBoost boost(nu);
    CHECK(is_star_unitary({boost.matrix, Metric::anti_diagonal(2)}, 1e-12));
    const Matrix conjugated =
        star_adjoint(boost.matrix, Metric::anti_diagonal(2)) * dt.matrix * boost.matrix;
    CHECK(max_abs(conjugated - nu * dt.matrix) <= 1e-12 * std::max(1.0, nu));
  }
  CHECK_THROWS_AS(LorentzBoost(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(LorentzBoost(0.0), std::invalid_argument);
}

TEST_CASE("hyperbolic output matches the boost at nu = exp(2 theta)") {
  for (double theta : {-1.0, 0.3, 2.0}) {
    const HyperbolicConjugation c = lorentz_conjugate_hyperbolic(theta);
    const LorentzBoost boost(std::exp(2.0 * theta));
    const Matrix boost_star = star_adjoint(boost.matrix, Metric::anti_diagonal(2));
    CHECK(max_abs(c.output.cast<Complex>() - boost_star) <= 1e-12 * std::exp(2.0 * std::abs(theta)));
  }
}

TEST_CASE("is_star_unitary: positives and negatives") {
  CHECK(is_star_unitary({Matrix::Identity(3, 3), Metric::anti_diagonal(3)}, 1e-15));
  CHECK(is_star_unitary({LorentzBoost(3.0).matrix, Metric::anti_diagonal(2)}, 1e-13));
  // dt is nilpotent, dt^star dt = 0 is nowhere near the identity.
  const IncrementRep dt = increment(IncrementKind::dt2);
  CHECK_FALSE(is_star_unitary({dt.matrix, dt.metric}, 1e-6));
}

TEST_CASE("weyl generator is star-unitary and triangular") {
  for (double nu : {0.5, 1.0, 100.0}) {
    const WeylGenerator z(nu);
    CHECK(is_star_unitary({z.matrix, Metric::anti_diagonal(4)}, 1e-13));
    for (Eigen::Index i = 0; i < 4; ++i) {
      CHECK(z.matrix(i, i) == Complex(1.0));
      for (Eigen::Index j = 0; j < i; ++j) CHECK(z.matrix(i, j) == Complex(0.0));
    }
  }
  CHECK_THROWS_AS(WeylGenerator(0.0), std::invalid_argument);
}

namespace {

// Expected Z^star dn Z assembled blockwise from the gauge vectors:
// [[0, sqrt(nu) xi_-^star, nu], [0, dt, sqrt(nu) xi_-], [0, 0, 0]].
Matrix expected_weyl_counting(double nu) {
  const double root = std::sqrt(nu);
  const GaugePair gauge;
  const Metric eta2 = Metric::anti_diagonal(2);
  Matrix m = Matrix::Zero(4, 4);
  m.block<1, 2>(0, 1) = root * (gauge.xi_minus.adjoint() * eta2.matrix());
  m(0, 3) = nu;
  m.block<2, 2>(1, 1) = increment(IncrementKind::dt2).matrix;
  m.block<2, 1>(1, 3) = root * gauge.xi_minus;
  return m;
}

}  // namespace

TEST_CASE("weyl conjugation of the counting increment") {
  for (double nu : {1.0, 4.0}) {
    const Matrix got = weyl_conjugate_counting(nu);
    CHECK(max_abs(got - expected_weyl_counting(nu)) <= 1e-12 * std::max(1.0, nu));
    CHECK(std::abs(got(0, 3) - Complex(nu)) <= 1e-12 * nu);

    // Splits into a centered part plus nu times the corner time increment,
    // and the centered part keeps the counting block structure.
    const Matrix centered = got - nu * increment(IncrementKind::dt4_corner).matrix;
    CHECK(std::abs(centered(0, 3)) <= 1e-12 * nu);
    CHECK(max_abs(centered.block<2, 2>(1, 1) - increment(IncrementKind::dt2).matrix) <= 1e-13);
  }

  // nu = 1 displayed form, entry by entry.
  const Matrix one = weyl_conjugate_counting(1.0);
  Matrix want(4, 4);
  want << 0, 0, 1, 1,  //
      0, 0, 1, 1,      //
      0, 0, 0, 0,      //
      0, 0, 0, 0;
  CHECK(max_abs(one - want) <= 1e-14);

  // Conjugating zero gives zero.
  CHECK(max_abs(weyl_conjugate(2.5, Matrix::Zero(4, 4))) == 0.0);
  CHECK_THROWS_AS(weyl_conjugate_counting(-1.0), std::invalid_argument);
}

TEST_CASE("central limit increment approaches the pseudo-Wiener form at rate 1/sqrt(nu)") {
  const Matrix wiener = pseudo_wiener_increment();

  // Closed form at nu = 1: middle block is exactly dt.
  const Matrix at_one = central_limit_increment(1.0);
  CHECK(max_abs(at_one.block<2, 2>(1, 1) - increment(IncrementKind::dt2).matrix) == 0.0);

  for (double nu : {1e2, 1e4, 1e6}) {
    const double deviation = max_abs(central_limit_increment(nu) - wiener);
    CHECK(std::abs(deviation - 1.0 / std::sqrt(nu)) <= 1e-14);
  }

  // The limit increment is nilpotent and star-self-adjoint.
  CHECK(max_abs(wiener * wiener) == 0.0);
  CHECK(max_abs(star_adjoint(wiener, Metric::anti_diagonal(4)) - wiener) == 0.0);

  // Block form da (x) xi_-^star + da^star (x) xi_-: only entries (0,2), (1,3).
  CHECK(wiener(0, 2) == Complex(1.0));
  CHECK(wiener(1, 3) == Complex(1.0));
  CHECK(max_abs(wiener) == 1.0);
  CHECK(wiener.cwiseAbs().sum() == 2.0);
}
