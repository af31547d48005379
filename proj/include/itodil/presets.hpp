#pragma once

#include <stdexcept>
#include <string>

#include "itodil/chains_fock.hpp"
#include "itodil/linalg.hpp"
#include "itodil/rng.hpp"

namespace itodil {

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

// Dense Hermitian matrix with entries derived from a counter-based stream;
// fully determined by (dim, seed).
inline Hamiltonian random_hermitian(Eigen::Index dim, std::uint64_t seed) {
  rng::Stream stream(seed, 0);
  Matrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      a(i, j) = Complex(2.0 * stream.uniform() - 1.0, 2.0 * stream.uniform() - 1.0);
  return Hamiltonian((a + a.adjoint()) / 2.0);
}

inline Hamiltonian preset_hamiltonian(const std::string& name) {
  if (name == "pauli-x") return Hamiltonian(pauli_x());
  if (name == "pauli-y") return Hamiltonian(pauli_y());
  if (name == "pauli-z") return Hamiltonian(pauli_z());
  throw std::invalid_argument("unknown Hamiltonian preset: " + name);
}

}  // namespace itodil
