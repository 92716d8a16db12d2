#pragma once

#include <cmath>
#include <random>

#include "pdca/fdpg.hpp"
#include "test_util.hpp"

namespace pdca::testing {

/// Projected gradient with backtracking on the primal subproblem, run until
/// successive iterates differ by <= tol.
inline Vector projected_gradient_oracle(const PowerSumPart& part, const Vector& c,
                                        const Polyhedron& P, Vector x, double tol = 1e-10,
                                        int max_iter = 200000) {
  auto F = [&](const Vector& z) { return primal_objective(part, c, z); };
  auto gradF = [&](const Vector& z) {
    Vector g = part.rho * z - c;
    if (part.rows()) {
      const Vector t = part.A * z + part.b;
      Vector s(t.size());
      for (Eigen::Index i = 0; i < t.size(); ++i) {
        s[i] = part.powers[i] * ipow(t[i], part.powers[i] - 1);
      }
      g.noalias() += part.A.transpose() * s;
    }
    return g;
  };
  x = project(P, x);
  double step = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    const Vector g = gradF(x);
    const double fx = F(x);
    Vector xn;
    for (;;) {
      xn = project(P, x - step * g);
      const Vector dx = xn - x;
      if (F(xn) <= fx + g.dot(dx) + dx.squaredNorm() / (2 * step) + 1e-15 * (1 + std::abs(fx))) break;
      step *= 0.5;
    }
    const double move = (xn - x).norm();
    x = xn;
    if (move <= tol) break;
    step *= 1.5;
  }
  return x;
}

/// Small subproblem with quartic rows, random data, simplex or box feasible set.
struct SubproblemInstance {
  PowerSumPart part;
  Vector c;
  Polyhedron P;
};

inline SubproblemInstance random_subproblem(std::mt19937_64& rng, int n, int m, bool simplex,
                                            bool mixed_powers = false) {
  std::normal_distribution<double> g(0.0, 1.0);
  SubproblemInstance inst{PowerSumPart{}, Vector(n),
                          simplex ? Polyhedron::simplex(n)
                                  : Polyhedron::box(Vector::Constant(n, -1.0), Vector::Constant(n, 1.0))};
  inst.part.A = Matrix(m, n);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < n; ++k) inst.part.A(i, k) = 0.7 * g(rng);
  inst.part.b = 0.3 * uniform_vector(rng, m, -1, 1);
  inst.part.powers = Eigen::VectorXi::Constant(m, 4);
  if (mixed_powers)
    for (int i = 0; i < m; i += 2) inst.part.powers[i] = 2;
  inst.part.rho = 1.0;
  const SpectralNorm sn = spectral_norm(inst.part.A);
  inst.part.lipschitz = 1.01 * sn.value * sn.value / inst.part.rho;
  for (int k = 0; k < n; ++k) inst.c[k] = 2.0 * g(rng);
  return inst;
}

}  // namespace pdca::testing
