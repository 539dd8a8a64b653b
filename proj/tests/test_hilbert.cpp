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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sasr/hilbert.hpp"
#include "test_util.hpp"

namespace sasr {
namespace {

using testing::max_abs_diff;
using testing::random_field;

TEST(Vacuum, TraceAndMean) {
  const FieldState s = vacuum(5);
  EXPECT_EQ(s.dim(), 6);
  EXPECT_DOUBLE_EQ(trace(s), 1.0);
  EXPECT_DOUBLE_EQ(mean_photon(s), 0.0);
}

TEST(Vacuum, SmallestCutoff) {
  const FieldState s = vacuum(1);
  Eigen::Matrix2cd expected;
  expected << 1, 0, 0, 0;
  EXPECT_EQ(s.matrix(), Eigen::MatrixXcd(expected));
}

TEST(Vacuum, HermitianAndPositive) {
  for (int n_max : {1, 3, 17}) {
    const FieldState s = vacuum(n_max);
    EXPECT_EQ(hermiticity_defect(s), 0.0);
    EXPECT_GE(min_eigenvalue(s), -1e-12);
  }
}

TEST(Vacuum, RejectsZeroCutoff) { EXPECT_THROW(vacuum(0), InvalidArgument); }

TEST(Coherent, ZeroAmplitudeIsVacuum) {
  EXPECT_EQ(coherent(0.0, 12).matrix(), vacuum(12).matrix());
}

TEST(Coherent, MeanPhotonIsAlphaSquared) {
  EXPECT_NEAR(mean_photon(coherent(Complex(0.0, -0.5), 20)), 0.25, 1e-6);
}

TEST(Coherent, PoissonDistribution) {
  const auto p = photon_distribution(coherent(1.0, 30));
  double factorial = 1.0;
  for (int n = 0; n <= 30; ++n) {
    if (n > 0) factorial *= n;
    EXPECT_NEAR(p(n), std::exp(-1.0) / factorial, 1e-8) << "n=" << n;
  }
}

TEST(Coherent, UnitTraceAfterTruncation) {
  EXPECT_NEAR(trace(coherent(Complex(1.5, 0.7), 32)), 1.0, 1e-14);
}

TEST(Coherent, InadequateCutoffThrows) {
  EXPECT_THROW(coherent(3.0, 20), TruncationError);
  EXPECT_NO_THROW(coherent(3.0, 49));
}

TEST(MeanPhoton, Diagonal) {
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(3, 3);
  q(0, 0) = q(2, 2) = 0.5;
  EXPECT_DOUBLE_EQ(mean_photon(FieldState(q)), 1.0);
}

TEST(PhotonDistribution, IsTheDiagonal) {
  std::mt19937_64 rng(7);
  const FieldState s = random_field(rng, 8, 8);
  const auto p = photon_distribution(s);
  for (int n = 0; n < 8; ++n) EXPECT_EQ(p(n), s(n, n).real());
  EXPECT_NEAR(p.sum(), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(photon_distribution(vacuum(4))(0), 1.0);
}

TEST(Fidelity, SelfFidelity) {
  const Complex alpha(0.8, -0.3);
  EXPECT_NEAR(fidelity_to_coherent(coherent(alpha, 30), alpha), 1.0, 1e-8);
  EXPECT_DOUBLE_EQ(fidelity_to_coherent(vacuum(10), 0.0), 1.0);
}

TEST(Fidelity, VacuumOverlap) {
  EXPECT_NEAR(fidelity_to_coherent(vacuum(40), 2.0), std::exp(-4.0), 1e-6);
}

TEST(Fidelity, TargetBeyondCutoffThrows) {
  EXPECT_THROW(fidelity_to_coherent(vacuum(5), 2.0), TruncationError);
}

TEST(Decay, ZeroTimeIsIdentity) {
  std::mt19937_64 rng(1);
  const FieldState s = random_field(rng, 6, 6);
  EXPECT_EQ(apply_decay(s, 2.0, 0.0).matrix(), s.matrix());
}

TEST(Decay, CoherentStaysCoherent) {
  const double dt = std::log(2.0) / 2.0;  // 2 gamma dt = ln 2 at gamma = 1
  const FieldState s = apply_decay(coherent(1.0, 30), 1.0, dt);
  EXPECT_NEAR(fidelity_to_coherent(s, 1.0 / std::sqrt(2.0)), 1.0, 1e-8);
}

TEST(Decay, SinglePhotonHalfLife) {
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(4, 4);
  q(1, 1) = 1.0;
  const auto p = photon_distribution(apply_decay(FieldState(q), 1.0, std::log(2.0) / 2.0));
  EXPECT_NEAR(p(0), 0.5, 1e-10);
  EXPECT_NEAR(p(1), 0.5, 1e-10);
}

TEST(Decay, RejectsNegativeArguments) {
  EXPECT_THROW(apply_decay(vacuum(3), -1.0, 0.1), InvalidArgument);
  EXPECT_THROW(apply_decay(vacuum(3), 1.0, -0.1), InvalidArgument);
}

TEST(Decay, InfiniteTimeReachesVacuum) {
  std::mt19937_64 rng(3);
  EXPECT_LT(max_abs_diff(apply_decay(random_field(rng, 6, 6), 1.0, 1e3).matrix(), vacuum(5).matrix()),
            1e-12);
}

class DecayProperties : public ::testing::TestWithParam<int> {};

TEST_P(DecayProperties, ComposesAndPreservesInvariants) {
  std::mt19937_64 rng(GetParam());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const FieldState s = random_field(rng, 10, 10);
  const double gamma = 0.5 + u(rng), t1 = u(rng), t2 = u(rng);
  const FieldState once = apply_decay(s, gamma, t1 + t2);
  const FieldState twice = apply_decay(apply_decay(s, gamma, t1), gamma, t2);
  EXPECT_LT(max_abs_diff(once.matrix(), twice.matrix()), 1e-9);
  EXPECT_NEAR(trace(once), 1.0, 1e-10);
  EXPECT_LT(hermiticity_defect(once), 1e-12);
  EXPECT_GE(min_eigenvalue(once), -1e-9);
  EXPECT_NEAR(mean_photon(once), std::exp(-2.0 * gamma * (t1 + t2)) * mean_photon(s), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(RandomStates, DecayProperties, ::testing::Range(0, 20));

TEST(PureFieldState, NormalizesOnConstruction) {
  Eigen::VectorXcd c(3);
  c << 3.0, Complex(0.0, 4.0), 0.0;
  const PureFieldState psi(c);
  EXPECT_NEAR(psi.amplitudes().norm(), 1.0, 1e-15);
  EXPECT_NEAR(mean_photon(psi), 16.0 / 25.0, 1e-15);
  EXPECT_THROW(PureFieldState(Eigen::VectorXcd::Zero(3)), NumericalDegeneracy);
}

TEST(PureFieldState, DensityIsProjector) {
  std::mt19937_64 rng(5);
  const FieldState s = to_density(testing::random_pure_field(rng, 6, 6));
  EXPECT_NEAR(purity(s), 1.0, 1e-12);
  EXPECT_NEAR(trace(s), 1.0, 1e-12);
}

}  // namespace
}  // namespace sasr
