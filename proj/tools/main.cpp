// Command-line front end: identity verification, propagator computation,
// convergence sweeps and single-trajectory reports, all machine-readable.
// Exit codes: 0 ok, 1 failed check, 2 I/O or usage, 3 validation,
// 4 resource cap.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "itodil/chains_fock.hpp"
#include "itodil/dilation_sim.hpp"
#include "itodil/linalg.hpp"
#include "itodil/presets.hpp"
#include "itodil/pseudo_algebra.hpp"
#include "itodil/rng.hpp"

using json = nlohmann::ordered_json;
using namespace itodil;

namespace {

constexpr int kExitCheckFailure = 1;
constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;
constexpr int kExitResourceCap = 4;

struct CliError {
  int code;
  std::string message;
};

struct Check {
  std::string name;
  double value;
  double threshold;
  bool pass;
};

Check make_check(std::string name, double value, double threshold) {
  const bool pass = value <= threshold;
  return {std::move(name), value, threshold, pass};
}

json checks_to_json(const std::vector<Check>& checks) {
  json out = json::array();
  for (const Check& c : checks)
    out.push_back(json{{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
  return out;
}

bool all_pass(const std::vector<Check>& checks) {
  for (const Check& c : checks)
    if (!c.pass) return false;
  return true;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(json::array({v(i).real(), v(i).imag()}));
  return out;
}

Matrix matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw CliError{kExitIo, "matrix must be a nonempty array of rows"};
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw CliError{kExitIo, "matrix rows must all have length dim"};
    for (Eigen::Index j = 0; j < n; ++j) {
      const json& entry = row[static_cast<std::size_t>(j)];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number())
        throw CliError{kExitIo, "matrix entries must be [re, im] number pairs"};
      m(i, j) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return m;
}

// Presets: pauli-x / pauli-y / pauli-z, or random-hermitian:DIM:SEED.
Hamiltonian parse_preset(const std::string& preset) {
  if (preset.rfind("random-hermitian:", 0) == 0) {
    const std::string args = preset.substr(17);
    const auto colon = args.find(':');
    if (colon == std::string::npos)
      throw CliError{kExitValidation, "random-hermitian preset needs the form random-hermitian:DIM:SEED"};
    try {
      const long dim = std::stol(args.substr(0, colon));
      const unsigned long long seed = std::stoull(args.substr(colon + 1));
      if (dim < 1) throw std::invalid_argument("dim");
      return random_hermitian(static_cast<Eigen::Index>(dim), seed);
    } catch (const std::exception&) {
      throw CliError{kExitValidation, "bad random-hermitian preset: " + preset};
    }
  }
  try {
    return preset_hamiltonian(preset);
  } catch (const std::invalid_argument& e) {
    throw CliError{kExitValidation, e.what()};
  }
}

Hamiltonian load_hamiltonian(const std::string& path, const std::string& preset) {
  if (!preset.empty()) return parse_preset(preset);
  std::ifstream in(path);
  if (!in) throw CliError{kExitIo, "cannot open Hamiltonian file: " + path};
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw CliError{kExitIo, std::string("malformed Hamiltonian file: ") + e.what()};
  }
  if (!doc.contains("dim") || !doc.contains("matrix") || !doc["dim"].is_number_integer())
    throw CliError{kExitIo, "Hamiltonian file needs integer 'dim' and 'matrix'"};
  const auto dim = doc["dim"].get<Eigen::Index>();
  if (dim < 1) throw CliError{kExitIo, "'dim' must be at least 1"};
  const Matrix m = matrix_from_json(doc["matrix"]);
  if (m.rows() != dim) throw CliError{kExitIo, "'matrix' shape does not match 'dim'"};
  try {
    return Hamiltonian(m);
  } catch (const std::invalid_argument& e) {
    throw CliError{kExitValidation, e.what()};
  }
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void emit_text(const std::string& text, const std::string& out_path) {
  std::fputs(text.c_str(), stdout);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw CliError{kExitIo, "cannot write output file: " + out_path};
    out << text;
  }
}

void emit_report(const json& report, const std::string& out_path) {
  emit_text(report.dump(2) + "\n", out_path);
}

int max_chain_points() {
  if (const char* env = std::getenv("ITO_DILATION_MAX_CHAIN")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0)
      throw CliError{kExitValidation, "ITO_DILATION_MAX_CHAIN must be a nonnegative integer"};
    return static_cast<int>(v);
  }
  return kDefaultMaxChainPoints;
}

Matrix random_complex(Eigen::Index dim, std::uint64_t seed) {
  rng::Stream stream(seed, 1);
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      m(i, j) = Complex(2.0 * stream.uniform() - 1.0, 2.0 * stream.uniform() - 1.0);
  return m;
}

// ---------------------------------------------------------------- verify --

int run_verify(std::uint64_t seed, std::optional<double> tol_mc, double extra_lambda,
               bool inject_dt_perturbation, const std::string& out_path) {
  std::vector<Check> checks;
  const Metric eta2 = Metric::anti_diagonal(2);
  const Metric eta4 = Metric::anti_diagonal(4);

  // dt representation; the perturbation hook flips an off-diagonal zero so
  // the nilpotency check must fail.
  {
    Matrix dt = increment(IncrementKind::dt2).matrix;
    if (inject_dt_perturbation) dt(1, 0) = 1.0;
    checks.push_back(make_check("dt_squared_zero", max_abs(dt * dt), 0.0));
    checks.push_back(make_check("dt_star_self_adjoint", max_abs(star_adjoint(dt, eta2) - dt), 0.0));
  }

  // Full ito table.
  {
    const IncrementKind basis[4] = {IncrementKind::dt3, IncrementKind::dn3, IncrementKind::da3,
                                    IncrementKind::da_star3};
    double defect = 0.0;
    for (IncrementKind a : basis) {
      for (IncrementKind b : basis) {
        const Matrix product = increment(a).matrix * increment(b).matrix;
        const auto classified = ito_product(increment(a), increment(b));
        const Matrix expected = classified ? classified->matrix : Matrix::Zero(3, 3);
        defect = std::max(defect, max_abs(product - expected));
        // The only non-vanishing products of the table.
        const bool nonzero = (a == IncrementKind::dn3 && b == IncrementKind::dn3) ||
                             (a == IncrementKind::da3 && b == IncrementKind::da_star3) ||
                             (a == IncrementKind::dn3 && b == IncrementKind::da_star3) ||
                             (a == IncrementKind::da3 && b == IncrementKind::dn3);
        if (nonzero != classified.has_value()) defect = std::max(defect, 1.0);
      }
    }
    checks.push_back(make_check("ito_table", defect, 0.0));
  }

  // Star involution and anti-multiplicativity on random operators.
  {
    double involution = 0.0, reversal = 0.0;
    for (Eigen::Index d : {2, 3, 4}) {
      const Metric eta = Metric::anti_diagonal(d);
      for (std::uint64_t k = 0; k < 4; ++k) {
        const Matrix a = random_complex(d, seed + 17 * static_cast<std::uint64_t>(d) + k);
        const Matrix b = random_complex(d, seed + 31 * static_cast<std::uint64_t>(d) + k);
        involution = std::max(involution, max_abs(star_adjoint(star_adjoint(a, eta), eta) - a));
        reversal = std::max(
            reversal, max_abs(star_adjoint(a * b, eta) - star_adjoint(b, eta) * star_adjoint(a, eta)));
      }
    }
    checks.push_back(make_check("star_involution", involution, 0.0));
    checks.push_back(make_check("star_antimultiplicative", reversal, 1e-13));
  }

  // Gauge vector relations.
  {
    const GaugePair gauge;
    const Matrix dt = increment(IncrementKind::dt2).matrix;
    double defect = max_abs(dt * gauge.xi_plus - gauge.xi_minus);
    defect = std::max(defect, max_abs(dt * gauge.xi_minus));
    defect = std::max(defect, std::abs(eta_pairing(gauge.xi_minus, eta2, gauge.xi_plus) - 1.0));
    defect = std::max(defect, std::abs(eta_pairing(gauge.xi_plus, eta2, gauge.xi_plus)));
    defect = std::max(defect, std::abs(eta_pairing(gauge.xi_minus, eta2, gauge.xi_minus)));
    defect = std::max(defect, std::abs(eta_pairing(gauge.xi_plus, eta2, dt * gauge.xi_plus) - 1.0));
    checks.push_back(make_check("gauge_pairings", defect, 0.0));
  }

  // Minkowski diagonalization and the hyperbolic correspondence.
  {
    const PseudoOperator u = diagonalizer();
    Matrix diag(2, 2);
    diag << 1, 0, 0, -1;
    checks.push_back(make_check("minkowski_diagonalization",
                                max_abs(u.matrix.adjoint() * eta2.matrix() * u.matrix - diag), 1e-15));
    double defect = 0.0;
    for (double theta : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      const HyperbolicConjugation c = lorentz_conjugate_hyperbolic(theta);
      Eigen::Matrix2d want;
      want << std::exp(theta), 0, 0, std::exp(-theta);
      defect = std::max(defect, (c.output - want).cwiseAbs().maxCoeff() / std::exp(std::abs(theta)));
    }
    checks.push_back(make_check("lorentz_hyperbolic", defect, 1e-12));
  }

  // Boost action on the time increment.
  {
    double unitary = 0.0, action = 0.0;
    const Matrix dt = increment(IncrementKind::dt2).matrix;
    for (double nu : {0.1, 1.0, 10.0}) {
      const LorentzBoost boost(nu);
      const Matrix bs = star_adjoint(boost.matrix, eta2);
      unitary = std::max(unitary, max_abs(bs * boost.matrix - Matrix::Identity(2, 2)));
      action = std::max(action, max_abs(bs * dt * boost.matrix - nu * dt) / std::max(1.0, nu));
    }
    checks.push_back(make_check("boost_star_unitary", unitary, 1e-12));
    checks.push_back(make_check("boost_action", action, 1e-12));
  }

  // Weyl generator and the conjugated counting increment.
  {
    double unitary = 0.0;
    for (double nu : {0.5, 1.0, 100.0}) {
      const WeylGenerator z(nu);
      const Matrix zs = star_adjoint(z.matrix, eta4);
      unitary = std::max(unitary, max_abs(zs * z.matrix - Matrix::Identity(4, 4)));
    }
    checks.push_back(make_check("weyl_star_unitary", unitary, 1e-13));

    double conj = 0.0;
    const GaugePair gauge;
    for (double nu : {1.0, 4.0}) {
      const double root = std::sqrt(nu);
      Matrix want = Matrix::Zero(4, 4);
      want.block<1, 2>(0, 1) = root * (gauge.xi_minus.adjoint() * eta2.matrix());
      want(0, 3) = nu;
      want.block<2, 2>(1, 1) = increment(IncrementKind::dt2).matrix;
      want.block<2, 1>(1, 3) = root * gauge.xi_minus;
      conj = std::max(conj, max_abs(weyl_conjugate_counting(nu) - want) / std::max(1.0, nu));
    }
    checks.push_back(make_check("weyl_conjugation", conj, 1e-12));
  }

  // Central limit of the centered counting increment.
  {
    const Matrix wiener = pseudo_wiener_increment();
    double rate = 0.0;
    for (double nu : {1e2, 1e4, 1e6})
      rate = std::max(rate, std::abs(max_abs(central_limit_increment(nu) - wiener) - 1.0 / std::sqrt(nu)));
    checks.push_back(make_check("central_limit_rate", rate, 1e-14));
    checks.push_back(make_check("pseudo_wiener_nilpotent", max_abs(wiener * wiener), 0.0));
  }

  // Interaction operators for random Hermitian generators.
  {
    double defect = 0.0;
    for (Eigen::Index d : {2, 4, 8}) {
      for (std::uint64_t k = 0; k < 4; ++k) {
        const InteractionOperator g = build_interaction(random_hermitian(d, seed + 1000 * d + k));
        const Matrix gs = star_adjoint(g.block, g.metric);
        defect = std::max(defect, max_abs(gs * g.block - Matrix::Identity(2 * d, 2 * d)));
      }
    }
    checks.push_back(make_check("interaction_star_unitary", defect, 1e-12));
    checks.push_back(
        make_check("semi_tensor_square", semi_tensor_square(build_interaction(random_hermitian(4, seed))).defect,
                   1e-13));
  }

  // Propagator recovery: chain series against the exponential route.
  {
    double deviation = 0.0, unitarity = 0.0;
    for (Eigen::Index d : {2, 4, 8}) {
      const Hamiltonian h = random_hermitian(d, seed + 7 * static_cast<std::uint64_t>(d));
      const double t = 2.5 / hermitian_spectral_norm(h.matrix());
      const Matrix series = exact_expectation(h, t, 1.0, 25).matrix;
      deviation = std::max(deviation, max_abs(series - matrix_exponential_propagator(h, t, 1.0).matrix));
      unitarity = std::max(unitarity, max_abs(series.adjoint() * series - Matrix::Identity(d, d)));
    }
    checks.push_back(make_check("propagator_series_vs_expm", deviation, 1e-10));
    checks.push_back(make_check("propagator_unitarity", unitarity, 1e-8));
  }

  // Partial dilation, output measure and martingale centering.
  {
    const Hamiltonian hz(pauli_z());
    std::vector<double> lambdas = {0.5, 1.0, 2.0};
    if (extra_lambda > 0.0) lambdas.push_back(extra_lambda);
    double dilation = 0.0, measure = 0.0, centering = 0.0;
    for (double lambda : lambdas) {
      for (double nu : {0.25, 1.0, 4.0}) {
        const Matrix got = partial_dilation_propagator(hz, {lambda, nu}, 1.0, 60);
        const Matrix want = expm(Complex(0.0, -(lambda - nu / lambda)) * pauli_z());
        dilation = std::max(dilation, max_abs(got - want));
        measure = std::max(measure, std::abs(output_measure(hz, lambda, nu) - nu) / std::max(1.0, nu));
        centering = std::max(centering, martingale_centering_defect(hz, lambda, nu) / std::max(1.0, nu));
      }
      measure = std::max(measure, std::abs(output_measure(Hamiltonian(Matrix::Zero(2, 2)), lambda, 4.0) - 4.0));
    }
    checks.push_back(make_check("partial_dilation", dilation, 1e-10));
    checks.push_back(make_check("output_measure", measure, 1e-12));
    checks.push_back(make_check("martingale_centering", centering, 1e-12));
  }

  // Monte Carlo propagator against the exact series.
  {
    const Hamiltonian hz(pauli_z());
    const PropagatorEstimate mc = mc_expectation(hz, {1.0, 1.0, 20000, seed});
    const Matrix exact = exact_expectation(hz, 1.0, 1.0, 25).matrix;
    const double value = max_abs(mc.matrix - exact);
    const double threshold = tol_mc ? *tol_mc : 5.0 * mc.stderr_max;
    checks.push_back(make_check("mc_propagator", value, threshold));
  }

  json report;
  report["command"] = "verify";
  report["inputs"] = {{"seed", seed},
                      {"tol_mc", tol_mc ? json(*tol_mc) : json(nullptr)},
                      {"lambda", extra_lambda > 0.0 ? json(extra_lambda) : json(nullptr)},
                      {"inject_dt_perturbation", inject_dt_perturbation}};
  report["results"] = {{"checks_run", checks.size()}};
  report["checks"] = checks_to_json(checks);
  report["pass"] = all_pass(checks);
  emit_report(report, out_path);

  for (const Check& c : checks)
    if (!c.pass) std::fprintf(stderr, "FAILED: %s (value %.3e, threshold %.3e)\n", c.name.c_str(), c.value, c.threshold);
  return all_pass(checks) ? 0 : kExitCheckFailure;
}

// ------------------------------------------------------------- propagate --

int run_propagate(const Hamiltonian& h, const std::string& source, double t, double nu,
                  const std::string& method, int truncation, std::int64_t samples, std::uint64_t seed,
                  const std::string& out_path) {
  if (!(t >= 0.0) || !(nu >= 0.0)) throw CliError{kExitValidation, "t and nu must be nonnegative"};

  const PropagatorEstimate reference = matrix_exponential_propagator(h, t, nu);
  PropagatorEstimate estimate;
  if (method == "exact-series") {
    estimate = exact_expectation(h, t, nu, truncation);
  } else if (method == "expm") {
    estimate = reference;
  } else if (method == "mc") {
    if (nu == 0.0 || t == 0.0) {
      // Degenerate measure: every chain is empty.
      estimate = {Matrix::Identity(h.dim(), h.dim()), PropagatorMethod::monte_carlo, 0.0, samples};
    } else {
      estimate = mc_expectation(h, {nu, t, samples, seed});
    }
  } else {
    throw CliError{kExitIo, "unknown method: " + method};
  }

  const double deviation = max_abs(estimate.matrix - reference.matrix);
  std::vector<Check> checks;
  if (method == "exact-series") {
    const double remainder = series_remainder_bound(h, t, nu, truncation);
    checks.push_back(make_check("deviation_from_expm", deviation, std::max(1e-10, 2.0 * remainder)));
  } else if (method == "mc") {
    checks.push_back(make_check("deviation_from_expm", deviation, std::max(5.0 * estimate.stderr_max, 1e-12)));
  } else {
    checks.push_back(make_check("deviation_from_expm", deviation, 0.0));
  }
  checks.push_back(make_check(
      "unitarity",
      max_abs(estimate.matrix.adjoint() * estimate.matrix - Matrix::Identity(h.dim(), h.dim())),
      method == "mc" ? std::max(25.0 * estimate.stderr_max, 1e-12) : 1e-8));

  json report;
  report["command"] = "propagate";
  report["inputs"] = {{"hamiltonian", source}, {"t", t},           {"nu", nu},
                      {"method", method},      {"truncation", truncation}, {"samples", samples},
                      {"seed", seed}};
  report["results"] = {{"matrix", matrix_to_json(estimate.matrix)},
                       {"deviation_from_expm", deviation},
                       {"stderr", estimate.stderr_max}};
  if (method == "exact-series")
    report["results"]["remainder_bound"] = series_remainder_bound(h, t, nu, truncation);
  report["checks"] = checks_to_json(checks);
  report["pass"] = all_pass(checks);
  emit_report(report, out_path);
  return all_pass(checks) ? 0 : kExitCheckFailure;
}

// ----------------------------------------------------------------- sweep --

std::vector<double> parse_grid(const std::string& grid, const std::vector<double>& fallback) {
  if (grid.empty()) return fallback;
  std::vector<double> values;
  std::stringstream stream(grid);
  std::string token;
  while (std::getline(stream, token, ',')) {
    try {
      values.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw CliError{kExitIo, "bad grid value: " + token};
    }
  }
  if (values.empty()) throw CliError{kExitIo, "empty grid"};
  return values;
}

struct SweepRow {
  double grid_value;
  double metric;
  double stderr_value;
  bool pass;
  std::optional<double> extra;
};

int run_sweep(const Hamiltonian& h, const std::string& source, const std::string& mode,
              const std::string& grid, double t, double nu, std::int64_t samples, std::uint64_t seed,
              const std::string& out_path, const std::string& format) {
  std::vector<SweepRow> rows;
  std::string value_column = "nu";
  std::string metric_column;
  std::string extra_column;

  if (mode == "central-limit") {
    metric_column = "deviation";
    const Matrix wiener = pseudo_wiener_increment();
    for (double g : parse_grid(grid, {1e2, 1e4, 1e6})) {
      if (!(g > 0.0)) throw CliError{kExitValidation, "central-limit grid values must be positive"};
      const double deviation = max_abs(central_limit_increment(g) - wiener);
      rows.push_back({g, deviation, 0.0, std::abs(deviation - 1.0 / std::sqrt(g)) <= 1e-14, std::nullopt});
    }
  } else if (mode == "mc-samples") {
    value_column = "samples";
    metric_column = "error";
    const Matrix exact = exact_expectation(h, t, nu, 25).matrix;
    for (double g : parse_grid(grid, {1e2, 1e3, 1e4})) {
      const auto m = static_cast<std::int64_t>(g);
      if (m < 1) throw CliError{kExitValidation, "mc-samples grid values must be positive integers"};
      const PropagatorEstimate mc = mc_expectation(h, {nu, t, m, seed});
      const double error = max_abs(mc.matrix - exact);
      rows.push_back({g, error, mc.stderr_max, error <= 5.0 * mc.stderr_max, std::nullopt});
    }
  } else if (mode == "large-number") {
    metric_column = "bias";
    extra_column = "fluctuation";
    const std::vector<double> nus = parse_grid(grid, {1.0, 10.0, 100.0});
    for (double g : nus)
      if (!(g > 0.0)) throw CliError{kExitValidation, "large-number grid values must be positive"};
    for (const LargeNumberRow& row : large_number_sweep(h, t, nus, samples, seed))
      rows.push_back({row.nu, row.bias, row.mc_stderr, row.bias <= 5.0 * row.mc_stderr, row.fluctuation});
  } else {
    throw CliError{kExitIo, "unknown sweep mode: " + mode};
  }

  if (format == "csv") {
    std::string text = value_column + "," + metric_column + ",stderr,pass";
    if (!extra_column.empty()) text += "," + extra_column;
    text += "\n";
    for (const SweepRow& row : rows) {
      text += format_double(row.grid_value) + "," + format_double(row.metric) + "," +
              format_double(row.stderr_value) + "," + (row.pass ? "true" : "false");
      if (row.extra) text += "," + format_double(*row.extra);
      text += "\n";
    }
    emit_text(text, out_path);
  } else if (format == "json") {
    json report;
    report["command"] = "sweep";
    report["inputs"] = {{"hamiltonian", source}, {"mode", mode},     {"t", t},
                        {"nu", nu},              {"samples", samples}, {"seed", seed}};
    json out_rows = json::array();
    for (const SweepRow& row : rows) {
      json r = {{value_column, row.grid_value},
                {metric_column, row.metric},
                {"stderr", row.stderr_value},
                {"pass", row.pass}};
      if (row.extra) r[extra_column] = *row.extra;
      out_rows.push_back(std::move(r));
    }
    report["results"] = {{"rows", out_rows}};
    bool pass = true;
    for (const SweepRow& row : rows) pass = pass && row.pass;
    report["pass"] = pass;
    emit_report(report, out_path);
  } else {
    throw CliError{kExitIo, "unknown format: " + format};
  }

  for (const SweepRow& row : rows)
    if (!row.pass) return kExitCheckFailure;
  return 0;
}

// ------------------------------------------------------------ trajectory --

Vector parse_psi(const std::string& spec, const Hamiltonian& h) {
  const Eigen::Index d = h.dim();
  if (spec.empty() || spec == "uniform") {
    Vector psi = Vector::Constant(d, Complex(1.0, 0.0));
    return psi / std::sqrt(static_cast<double>(d));
  }
  if (spec.rfind("eig", 0) == 0) {
    Eigen::Index index = 0;
    try {
      index = static_cast<Eigen::Index>(std::stol(spec.substr(3)));
    } catch (const std::exception&) {
      throw CliError{kExitValidation, "bad eigenvector spec: " + spec};
    }
    if (index < 0 || index >= d) throw CliError{kExitValidation, "eigenvector index out of range"};
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
    return solver.eigenvectors().col(index);
  }
  json doc;
  try {
    doc = json::parse(spec);
  } catch (const json::exception&) {
    throw CliError{kExitValidation, "psi must be 'uniform', 'eigK' or a JSON array of [re, im] pairs"};
  }
  if (!doc.is_array() || static_cast<Eigen::Index>(doc.size()) != d)
    throw CliError{kExitValidation, "psi must have one [re, im] pair per dimension"};
  Vector psi(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const json& entry = doc[static_cast<std::size_t>(i)];
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number())
      throw CliError{kExitValidation, "psi entries must be [re, im] number pairs"};
    psi(i) = Complex(entry[0].get<double>(), entry[1].get<double>());
  }
  if (std::abs(psi.norm() - 1.0) > 1e-12) throw CliError{kExitValidation, "psi must be a unit vector"};
  return psi;
}

std::string pattern_label(std::size_t mask, std::size_t n) {
  if (n == 0) return "(empty)";
  std::string label(n, '+');
  for (std::size_t i = 0; i < n; ++i)
    if (mask & (std::size_t{1} << i)) label[i] = '-';
  return label;
}

int run_trajectory(const Hamiltonian& h, const std::string& source, double nu, double t,
                   std::uint64_t seed, const std::string& psi_spec, const std::string& out_path) {
  if (!(t > 0.0) || !(nu >= 0.0)) throw CliError{kExitValidation, "t must be positive and nu nonnegative"};
  const Vector psi = parse_psi(psi_spec, h);

  const Chain chain = sample_chain({nu, t, 1, seed}, 0);
  const int cap = max_chain_points();
  if (chain.size() > static_cast<std::size_t>(cap)) {
    std::fprintf(stderr,
                 "sampled chain has %zu points, beyond the cap of %d; lower nu*t or raise "
                 "ITO_DILATION_MAX_CHAIN\n",
                 chain.size(), cap);
    return kExitResourceCap;
  }

  const InteractionOperator g = build_interaction(h);
  const CompoundState state = evolve_on_chain(g, chain, psi, t, cap);

  json amplitude_norms = json::object();
  for (std::size_t mask = 0; mask < state.amplitudes.size(); ++mask) {
    const double norm = state.amplitudes[mask].norm();
    if (norm > 0.0) amplitude_norms[pattern_label(mask, chain.size())] = norm;
  }

  json report;
  report["command"] = "trajectory";
  report["inputs"] = {{"hamiltonian", source}, {"nu", nu}, {"t", t}, {"seed", seed},
                      {"psi", psi_spec.empty() ? "uniform" : psi_spec}};
  report["results"] = {{"chain", chain.times()},
                       {"chain_length", chain.size()},
                       {"amplitude_norms", amplitude_norms},
                       {"entanglement_rank",
                        chain.size() >= 1 ? json(entanglement_rank(state, 1e-10)) : json(nullptr)},
                       {"projected_output", vector_to_json(project_output(state, nu))}};
  report["pass"] = true;
  emit_report(report, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-measurement dilation of Hamiltonian dynamics"};
  app.require_subcommand(1);

  std::string hamiltonian_path, preset, out_path, method = "exact-series", mode = "mc-samples";
  std::string format = "csv", grid, psi_spec;
  double t = 1.0, nu = 1.0, lambda = 0.0;
  int truncation = 25;
  std::int64_t samples = 100000;
  std::uint64_t seed = 42;
  std::optional<double> tol_mc;
  bool inject_dt = false;

  auto add_hamiltonian_flags = [&](CLI::App* cmd) {
    cmd->add_option("--hamiltonian", hamiltonian_path, "path to a Hamiltonian JSON file");
    cmd->add_option("--preset", preset,
                    "built-in Hamiltonian: pauli-x, pauli-y, pauli-z, random-hermitian:DIM:SEED");
  };

  CLI::App* verify = app.add_subcommand("verify", "run the full identity suite");
  verify->add_option("--seed", seed, "seed for randomized checks");
  double tol_mc_value = -1.0;
  verify->add_option("--tol-mc", tol_mc_value, "absolute threshold overriding 5*stderr for the MC check");
  verify->add_option("--lambda", lambda, "extra lambda grid point for the dilation checks");
  verify->add_flag("--inject-dt-perturbation", inject_dt, "test hook: perturb dt so its checks fail");
  verify->add_option("--out", out_path, "also write the report to this file");

  CLI::App* propagate = app.add_subcommand("propagate", "compute the boosted propagator");
  add_hamiltonian_flags(propagate);
  propagate->add_option("--t", t, "time horizon");
  propagate->add_option("--nu", nu, "boost / interaction intensity");
  propagate->add_option("--method", method, "exact-series, expm or mc");
  propagate->add_option("--truncation", truncation, "chain series truncation");
  propagate->add_option("--samples", samples, "Monte Carlo sample count");
  propagate->add_option("--seed", seed, "Monte Carlo seed");
  propagate->add_option("--out", out_path, "also write the report to this file");

  CLI::App* sweep = app.add_subcommand("sweep", "convergence and limit sweeps");
  add_hamiltonian_flags(sweep);
  sweep->add_option("--mode", mode, "mc-samples, large-number or central-limit");
  sweep->add_option("--grid", grid, "comma-separated grid values");
  sweep->add_option("--t", t, "time horizon");
  sweep->add_option("--nu", nu, "interaction intensity (mc-samples mode)");
  sweep->add_option("--samples", samples, "samples per grid point (large-number mode)");
  sweep->add_option("--seed", seed, "seed");
  sweep->add_option("--out", out_path, "write the table to this file");
  sweep->add_option("--format", format, "csv or json");

  CLI::App* trajectory = app.add_subcommand("trajectory", "sample and evolve a single chain");
  add_hamiltonian_flags(trajectory);
  trajectory->add_option("--nu", nu, "interaction intensity");
  trajectory->add_option("--t", t, "time horizon");
  trajectory->add_option("--seed", seed, "chain seed");
  trajectory->add_option("--psi", psi_spec, "uniform, eigK, or JSON [re,im] pairs");
  trajectory->add_option("--out", out_path, "also write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitIo;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (verify->parsed()) {
      if (tol_mc_value >= 0.0) tol_mc = tol_mc_value;
      code = run_verify(seed, tol_mc, lambda, inject_dt, out_path);
    } else {
      if (hamiltonian_path.empty() == preset.empty())
        throw CliError{kExitIo, "exactly one of --hamiltonian and --preset is required"};
      const std::string source = preset.empty() ? hamiltonian_path : preset;
      const Hamiltonian h = load_hamiltonian(hamiltonian_path, preset);
      if (propagate->parsed()) {
        code = run_propagate(h, source, t, nu, method, truncation, samples, seed, out_path);
      } else if (sweep->parsed()) {
        code = run_sweep(h, source, mode, grid, t, nu, samples, seed, out_path, format);
      } else if (trajectory->parsed()) {
        code = run_trajectory(h, source, nu, t, seed, psi_spec, out_path);
      }
    }
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }

  // Timing goes to stderr so reports on stdout stay byte-reproducible.
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  std::fprintf(stderr, "# wall_time_s %.6f\n", elapsed.count());
  return code;
}
