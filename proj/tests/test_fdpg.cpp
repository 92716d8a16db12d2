#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fdpg_oracles.hpp"
#include "polyhedron_oracles.hpp"
#include "pdca/fdpg.hpp"
#include "test_util.hpp"

using namespace pdca;
using namespace pdca::testing;

namespace {

double stationarity(double v, double s, double L, double b, int p) {
  return L * p * ipow(v + b, p - 1) + v - s;
}

// Bisection on the increasing map v -> L p (v+b)^{p-1} + v - s.
double prox_by_bisection(double s, double L, double b, int p) {
  double lo = -1.0, hi = 1.0;
  while (stationarity(lo, s, L, b, p) > 0) lo *= 2;
  while (stationarity(hi, s, L, b, p) < 0) hi *= 2;
  for (int i = 0; i < 2000 && hi - lo > 0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (stationarity(mid, s, L, b, p) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(ProxPhi, LinearCase) { EXPECT_NEAR(prox_phi(3.0, 1.0, 0.0, 2), 1.0, 1e-15); }

TEST(ProxPhi, RootOfPowerIsFixed) {
  for (int p : {2, 4, 6}) {
    EXPECT_EQ(prox_phi(-0.75, 2.0, 0.75, p), -0.75);
    EXPECT_EQ(prox_phi(3.5, 0.1, -3.5, p), 3.5);
  }
}

TEST(ProxPhi, QuarticExample) { EXPECT_NEAR(prox_phi(5.0, 1.0, 0.0, 4), 1.0, 1e-14); }

TEST(ProxPhi, MatchesBisectionOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 300; ++trial) {
    const double s = u(rng), b = u(rng), L = std::exp(u(rng));
    for (int p : {2, 4, 6}) {
      const double v = prox_phi(s, L, b, p);
      const double ref = prox_by_bisection(s, L, b, p);
      EXPECT_NEAR(v, ref, 1e-10 * (1 + std::abs(ref))) << s << ' ' << L << ' ' << b << ' ' << p;
    }
  }
}

TEST(ProxPhi, StationarityResidualOnRandomDraws) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-10, 10);
  std::uniform_real_distribution<double> logL(-6, 6);
  const int powers[] = {2, 4, 6};
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double s = u(rng), b = u(rng), L = std::exp(logL(rng));
    const int p = powers[trial % 3];
    const double v = prox_phi(s, L, b, p);
    worst = std::max(worst, std::abs(stationarity(v, s, L, b, p)) / (1 + std::abs(s)));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(ProxPhi, RejectsBadArguments) {
  EXPECT_THROW(prox_phi(1.0, 0.0, 0.0, 2), ValidationError);
  EXPECT_THROW(prox_phi(1.0, 1.0, 0.0, 3), ValidationError);
}

TEST(SpectralNorm, Identity) {
  EXPECT_NEAR(spectral_norm(Matrix::Identity(3, 3)).value, 1.0, 1e-12);
}

TEST(SpectralNorm, Diagonal) {
  Matrix A = Matrix::Zero(2, 2);
  A(0, 0) = 3;
  A(1, 1) = 1;
  const auto sn = spectral_norm(A);
  EXPECT_NEAR(sn.value, 3.0, 1e-10);
  EXPECT_TRUE(sn.converged);
}

TEST(SpectralNorm, MatchesSvd) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g(0, 1);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix A(10, 6);
    for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = g(rng);
    const double ref = Eigen::JacobiSVD<Matrix>(A).singularValues()[0];
    EXPECT_NEAR(spectral_norm(A, trial).value, ref, 1e-6 * ref);
  }
}

TEST(SpectralNorm, CapFlagsDegradedAccuracy) {
  std::mt19937_64 rng(14);
  std::normal_distribution<double> g(0, 1);
  Matrix A(30, 30);
  for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = g(rng);
  const auto sn = spectral_norm(A, 1, 1e-16, 2);
  EXPECT_FALSE(sn.converged);
  EXPECT_GT(sn.value, 0.0);
}

TEST(Fdpg, QuadraticOnLargeBoxGoesToZero) {
  const int n = 4;
  PowerSumPart part;
  part.A = Matrix::Identity(n, n);
  part.b = Vector::Zero(n);
  part.powers = Eigen::VectorXi::Constant(n, 2);
  part.rho = 1.0;
  part.lipschitz = 1.01;
  const Polyhedron P = Polyhedron::box(Vector::Constant(n, -1e6), Vector::Constant(n, 1e6));
  const auto res = fdpg_solve(part, Vector::Zero(n), P, Vector::Constant(n, 3.0), {1e-10, 20000});
  EXPECT_TRUE(res.converged);
  EXPECT_LE(res.u.norm(), 1e-8);
}

TEST(Fdpg, MatchesProjectedGradientOnSimplexQuartic) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    auto inst = random_subproblem(rng, 2, 4, true);
    const Vector ref = projected_gradient_oracle(inst.part, inst.c, inst.P, Vector::Constant(2, 0.5));
    const auto res = fdpg_solve(inst.part, inst.c, inst.P, Vector::Zero(4), {1e-9, 20000});
    EXPECT_TRUE(res.converged);
    EXPECT_LE((res.u - ref).norm(), 1e-5);
  }
}

TEST(Fdpg, MatchesProjectedGradientWithMixedPowers) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 5; ++trial) {
    auto inst = random_subproblem(rng, 4, 7, trial % 2 == 0, true);
    const Vector ref = projected_gradient_oracle(inst.part, inst.c, inst.P, Vector::Zero(4));
    const auto res = fdpg_solve(inst.part, inst.c, inst.P, Vector::Zero(7), {1e-9, 20000});
    EXPECT_LE((res.u - ref).norm(), 1e-5);
  }
}

TEST(Fdpg, ConvergenceRateBound) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    const int m = n + 2;
    auto inst = random_subproblem(rng, n, m, trial % 2 == 0);
    const Vector xs = projected_gradient_oracle(inst.part, inst.c, inst.P, Vector::Zero(n), 1e-13);
    const Vector ys = warm_start(inst.part, xs);
    const Vector y0 = Vector::Zero(m);
    const double C = 2.0 * std::sqrt(inst.part.lipschitz / inst.part.rho) * (y0 - ys).norm() * 1.05;
    int violations = 0;
    fdpg_solve(inst.part, inst.c, inst.P, y0, {1e-12, 300},
               [&](int k, const Vector& u, const Vector&, double) {
                 if (k >= 1 && (u - xs).norm() > C / (k + 1) + 1e-9) ++violations;
               });
    EXPECT_EQ(violations, 0) << "trial " << trial;
  }
}

TEST(Fdpg, MomentumLowerBound) {
  std::mt19937_64 rng(24);
  auto inst = random_subproblem(rng, 3, 5, true);
  int bad = 0;
  fdpg_solve(inst.part, inst.c, inst.P, Vector::Zero(5), {1e-14, 500},
             [&](int k, const Vector&, const Vector&, double s) {
               // s here is s_{k+1}
               if (s < (k + 3) / 2.0) ++bad;
             });
  EXPECT_EQ(bad, 0);
}

TEST(Fdpg, IteratesAreFeasible) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = random_subproblem(rng, 5, 8, trial % 2 == 0);
    const auto res = fdpg_solve(inst.part, inst.c, inst.P, Vector::Zero(8));
    EXPECT_TRUE(contains(inst.P, res.u, 1e-8));
  }
  Vector anchor;
  auto inst = random_subproblem(rng, 3, 5, false);
  std::mt19937_64 prng(26);
  inst.P = random_polyhedron(prng, 3, 4, 1, &anchor);
  const auto res = fdpg_solve(inst.part, inst.c, inst.P, Vector::Zero(5), {1e-6, 2000});
  EXPECT_TRUE(contains(inst.P, res.u, 1e-8));
}

TEST(Fdpg, DualityGapClosesOnConvergedRuns) {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = random_subproblem(rng, 3, 6, trial % 2 == 0, trial % 3 == 0);
    const auto res = fdpg_solve(inst.part, inst.c, inst.P, Vector::Zero(6), {1e-8, 20000});
    ASSERT_TRUE(res.converged);
    const double primal = primal_objective(inst.part, inst.c, res.u);
    const double dual = dual_objective(inst.part, inst.c, inst.P, res.y);
    EXPECT_GE(primal - dual, -1e-8 * (1 + std::abs(primal)));
    EXPECT_LE(primal - dual, 1e-4 * (1 + std::abs(primal)));
  }
}

TEST(Fdpg, WarmStartIsDualOptimumAtTheSolution) {
  std::mt19937_64 rng(28);
  auto inst = random_subproblem(rng, 3, 5, true);
  const Vector xs = projected_gradient_oracle(inst.part, inst.c, inst.P, Vector::Zero(3), 1e-13);
  const Vector ys = warm_start(inst.part, xs);
  EXPECT_LE((primal_from_dual(inst.part, inst.c, inst.P, ys) - xs).norm(), 1e-6);
  const auto res = fdpg_solve(inst.part, inst.c, inst.P, ys);
  EXPECT_LE(res.iterations, 3);
}

TEST(Fdpg, EmptyPowerPartProjectsC) {
  PowerSumPart part;
  part.A = Matrix(0, 3);
  part.b = Vector(0);
  part.powers = Eigen::VectorXi(0);
  part.rho = 2.0;
  Vector c(3);
  c << 4, 0, -2;
  const auto res = fdpg_solve(part, c, Polyhedron::simplex(3), Vector(0));
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(res.u[0], 1.0, 1e-12);
}

TEST(Fdpg, FromDcFormUsesInflatedSpectralNorm) {
  SparsePolynomial f(2, {{{4, 0}, 1.0}, {{1, 1}, -1.0}});
  const DcForm dc = hdpsdc(f, 1.5);
  const PowerSumPart part = PowerSumPart::from(dc);
  const double ref = Eigen::JacobiSVD<Matrix>(part.A).singularValues()[0];
  EXPECT_GE(part.lipschitz, ref * ref / 1.5 - 1e-9);
  EXPECT_NEAR(part.lipschitz, 1.01 * ref * ref / 1.5, 1e-6 * part.lipschitz);
  EXPECT_THROW(PowerSumPart::from(dc.with_rho(0.0)), ValidationError);
}
