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

#include <bit>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sasr/dicke.hpp"

namespace sasr {
namespace {

EnsembleSpec random_spec(std::mt19937_64& rng, int max_atoms) {
  std::uniform_int_distribution<int> n_dist(1, max_atoms);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double theta = M_PI * u(rng);
  return EnsembleSpec{n_dist(rng), std::polar(std::sin(theta / 2), 2 * M_PI * u(rng)),
                      std::polar(std::cos(theta / 2), 2 * M_PI * u(rng))};
}

TEST(DickeRate, Values) {
  EXPECT_DOUBLE_EQ(dicke_rate(2, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(dicke_rate(2, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(dicke_rate(7, 3.5), 7.0);
  EXPECT_DOUBLE_EQ(dicke_rate(10, 0.0), 30.0);
  EXPECT_DOUBLE_EQ(dicke_rate(3, -1.5), 0.0);
}

TEST(DickeRate, ProductFormForRandomPairs) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> n_dist(1, 64);
  for (int i = 0; i < 100; ++i) {
    const int n = n_dist(rng);
    const int k = std::uniform_int_distribution<int>(0, n)(rng);
    const int excited = n - k;
    // Excited atoms times (ground atoms + 1).
    EXPECT_DOUBLE_EQ(dicke_rate(n, 0.5 * n - k), static_cast<double>(excited) * (k + 1));
  }
}

TEST(DickeRate, RejectsInvalidPairs) {
  EXPECT_THROW(dicke_rate(2, 1.5), InvalidArgument);
  EXPECT_THROW(dicke_rate(3, 1.0), InvalidArgument);
  EXPECT_THROW(dicke_rate(0, 0.0), InvalidArgument);
}

TEST(Decompose, FullyExcited) {
  const auto c = decompose_product_state(EnsembleSpec{5, 1.0, 0.0});
  ASSERT_EQ(c.size(), 6u);
  EXPECT_DOUBLE_EQ(c[0].m, 2.5);
  EXPECT_DOUBLE_EQ(c[0].probability, 1.0);
  for (std::size_t k = 1; k < c.size(); ++k) EXPECT_EQ(c[k].probability, 0.0);
}

TEST(Decompose, SingleAtom) {
  const Complex ce = std::polar(0.6, 0.2), cg = std::polar(0.8, -1.0);
  const auto c = decompose_product_state(EnsembleSpec{1, ce, cg});
  ASSERT_EQ(c.size(), 2u);
  EXPECT_NEAR(std::abs(c[0].amplitude - ce), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(c[1].amplitude - cg), 0.0, 1e-15);
}

TEST(Decompose, BalancedPair) {
  const double h = 1.0 / std::sqrt(2.0);
  const auto c = decompose_product_state(EnsembleSpec{2, h, h});
  EXPECT_NEAR(c[0].probability, 0.25, 1e-15);
  EXPECT_NEAR(c[1].probability, 0.5, 1e-15);
  EXPECT_NEAR(c[2].probability, 0.25, 1e-15);
  EXPECT_DOUBLE_EQ(c[1].m, 0.0);
}

TEST(Decompose, NormalizedUpToGuard) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    EnsembleSpec s = random_spec(rng, 64);
    s.n_atoms = 64;
    double total = 0.0;
    for (const auto& c : decompose_product_state(s)) total += c.probability;
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
  EXPECT_THROW(decompose_product_state(EnsembleSpec{65, 1.0, 0.0}), ResourceError);
}

TEST(Decompose, MatchesProjectionOfProductState) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const EnsembleSpec s = random_spec(rng, 10);
    const int n = s.n_atoms;
    std::vector<Complex> sums(n + 1, 0.0);
    std::vector<double> counts(n + 1, 0.0);
    for (unsigned bits = 0; bits < (1u << n); ++bits) {
      const int excited = std::popcount(bits);
      Complex amp = 1.0;
      for (int i = 0; i < n; ++i) amp *= ((bits >> i) & 1u) ? s.c_e : s.c_g;
      sums[n - excited] += amp;
      counts[n - excited] += 1.0;
    }
    const auto c = decompose_product_state(s);
    for (int k = 0; k <= n; ++k) {
      // Overlap with the normalized symmetric state of k ground-state atoms.
      EXPECT_NEAR(std::abs(c[k].amplitude - sums[k] / std::sqrt(counts[k])), 0.0, 1e-12);
    }
  }
}

TEST(EnsembleRate, Values) {
  EXPECT_DOUBLE_EQ(ensemble_rate(1, prepare(1.3)), prepare(1.3).rho_ee);
  EXPECT_NEAR(ensemble_rate(2, prepare(M_PI / 2)), 1.5, 1e-15);
  EXPECT_NEAR(ensemble_rate(10, prepare(M_PI / 2)), 27.5, 1e-13);
}

TEST(BruteForce, Values) {
  EXPECT_DOUBLE_EQ(brute_force_rate(EnsembleSpec{1, 1.0, 0.0}), 1.0);
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(brute_force_rate(EnsembleSpec{2, h, h}), 1.5, 1e-15);
  EXPECT_THROW(brute_force_rate(EnsembleSpec{13, 1.0, 0.0}), ResourceError);
}

TEST(Oracles, RandomPureSpecs) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const EnsembleSpec s = random_spec(rng, 10);
    const double rate = ensemble_rate(s.n_atoms, s.atom());
    EXPECT_NEAR(brute_force_rate(s), rate, 1e-9);
    double weighted = 0.0;
    for (const auto& c : decompose_product_state(s)) weighted += c.probability * dicke_rate(s.n_atoms, c.m);
    EXPECT_NEAR(weighted, rate, 1e-9);
  }
}

TEST(Spec, RejectsUnnormalizedAmplitudes) {
  EXPECT_THROW(ensemble_rate(0, prepare(1.0)), InvalidArgument);
  EXPECT_THROW(decompose_product_state(EnsembleSpec{3, 1.0, 1.0}), InvalidArgument);
}

}  // namespace
}  // namespace sasr
