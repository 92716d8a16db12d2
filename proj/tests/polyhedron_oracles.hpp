#pragma once

#include <limits>
#include <random>

#include "pdca/polyhedron.hpp"
#include "test_util.hpp"

namespace pdca::testing {

/// Exact projection by active-set enumeration: for every subset S of the
/// inequality rows, project z onto {A_S x = b_S, A_eq x = b_eq}; the closest
/// feasible candidate is the projection. Exponential in m, fine for m <= 10.
inline Vector project_by_enumeration(const Polyhedron& P, const Vector& z) {
  const auto m = P.A_ineq().rows();
  const auto r = P.A_eq().rows();
  const auto n = z.size();
  double best = std::numeric_limits<double>::infinity();
  Vector arg = z;
  for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
    const auto k = static_cast<Eigen::Index>(__builtin_popcountl(mask)) + r;
    Vector x = z;
    if (k > 0) {
      Matrix M(k, n);
      Vector rhs(k);
      Eigen::Index row = 0;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (mask & (1ul << i)) {
          M.row(row) = P.A_ineq().row(i);
          rhs[row++] = P.b_ineq()[i];
        }
      }
      for (Eigen::Index j = 0; j < r; ++j) {
        M.row(row) = P.A_eq().row(j);
        rhs[row++] = P.b_eq()[j];
      }
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(M);
      x = z - cod.solve(M * z - rhs);
      if ((M * x - rhs).norm() > 1e-9 * (1 + rhs.norm())) continue;  // inconsistent
    }
    if (!contains(P, x, 1e-11)) continue;
    const double dist = (x - z).norm();
    if (dist < best) {
      best = dist;
      arg = x;
    }
  }
  return arg;
}

/// Random nonempty polyhedron around an interior-ish anchor point.
inline Polyhedron random_polyhedron(std::mt19937_64& rng, int n, int m, int r, Vector* anchor = nullptr) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> s(0.0, 1.0);
  const Vector x0 = uniform_vector(rng, n, -1, 1);
  Matrix A(m, n), E(r, n);
  Vector b(m), q(r);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < n; ++k) A(i, k) = g(rng);
    b[i] = A.row(i).dot(x0) + s(rng);
  }
  for (int j = 0; j < r; ++j) {
    for (int k = 0; k < n; ++k) E(j, k) = g(rng);
    q[j] = E.row(j).dot(x0);
  }
  if (anchor) *anchor = x0;
  return Polyhedron(A, b, E, q);
}

}  // namespace pdca::testing
