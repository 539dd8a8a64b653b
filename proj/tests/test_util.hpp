// Copyright 2026 The sasr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SASR_TESTS_TEST_UTIL_HPP
#define SASR_TESTS_TEST_UTIL_HPP

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "sasr/atom.hpp"
#include "sasr/hilbert.hpp"

namespace sasr::testing {

/// Random density matrix of dimension `dim` supported on the lowest
/// `support` Fock levels.
inline FieldState random_field(std::mt19937_64& rng, int dim, int support) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < support; ++i) {
    for (int j = 0; j < support; ++j) a(i, j) = Complex(normal(rng), normal(rng));
  }
  Eigen::MatrixXcd q = a * a.adjoint();
  q /= q.trace().real();
  return FieldState(q);
}

inline PureFieldState random_pure_field(std::mt19937_64& rng, int dim, int support) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim);
  for (int i = 0; i < support; ++i) c(i) = Complex(normal(rng), normal(rng));
  return PureFieldState(c);
}

/// Random physical atom, mixed unless `pure`.
inline AtomState random_atom(std::mt19937_64& rng, bool pure = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const AtomState a = prepare(M_PI * u(rng), 2.0 * M_PI * u(rng));
  return pure ? a : dephase(a, u(rng));
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace sasr::testing

#endif  // SASR_TESTS_TEST_UTIL_HPP
