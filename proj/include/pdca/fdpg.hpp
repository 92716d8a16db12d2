#pragma once

// Fast dual proximal gradient (FISTA on the dual) for
//   min_{x in P}  sum_i (a_i^T x + b_i)^{p_i} + rho/2 ||x||^2 - c^T x
// using the splitting t = A x.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "pdca/error.hpp"
#include "pdca/polyhedron.hpp"
#include "pdca/psdc.hpp"

namespace pdca {

/// argmin_v (v + b)^p + (v - s)^2 / (2L) for even p >= 2, i.e. the unique root
/// of L p (v + b)^{p-1} + v - s. Newton from v = s, kept inside the sign
/// bracket [min(0, s+b), max(0, s+b)] - b by bisection.
inline double prox_phi(double s, double L, double b, int p) {
  if (!(L > 0)) throw ValidationError("prox_phi: L must be positive");
  if (p < 2 || p % 2 != 0) throw ValidationError("prox_phi: power must be even and >= 2");
  const double r = s + b;
  if (r == 0.0) return -b;
  // In w = v + b the equation is L p w^{p-1} + w = r; its root lies between 0 and r.
  double lo = std::min(0.0, r);
  double hi = std::max(0.0, r);
  double w = r;
  const double Lp = L * p;
  for (int it = 0; it < 200; ++it) {
    const double wp = ipow(w, p - 2);
    const double g = Lp * wp * w + w - r;
    if (g == 0.0) break;
    if (g > 0) hi = std::min(hi, w);
    else lo = std::max(lo, w);
    const double dg = Lp * (p - 1) * wp + 1.0;
    double next = w - g / dg;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == w || hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::abs(r)) {
      w = next;
      break;
    }
    w = next;
  }
  // One Newton polish in the v coordinate so the reported residual is the
  // one callers measure.
  double v = w - b;
  const double t = v + b;
  const double g = Lp * ipow(t, p - 1) + v - s;
  const double dg = Lp * (p - 1) * ipow(t, p - 2) + 1.0;
  const double vp = v - g / dg;
  const double tp = vp + b;
  if (std::abs(Lp * ipow(tp, p - 1) + vp - s) < std::abs(g)) v = vp;
  return v;
}

struct SpectralNorm {
  double value = 0.0;
  bool converged = true;
  int iterations = 0;
};

/// Largest singular value by power iteration on A^T A from a seeded random
/// start. Converged when the estimate changes by <= rel_tol relatively.
inline SpectralNorm spectral_norm(const Matrix& A, std::uint64_t seed = 0x5eed,
                                  double rel_tol = 1e-8, int max_iter = 5000) {
  SpectralNorm out;
  if (A.rows() == 0 || A.cols() == 0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(A.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = g(rng);
  v.normalize();
  double prev = 0.0;
  out.converged = false;
  for (int k = 1; k <= max_iter; ++k) {
    const Vector Av = A * v;
    const double sigma = Av.norm();
    out.value = sigma;
    out.iterations = k;
    if (sigma == 0.0) {
      out.converged = true;
      break;
    }
    if (k > 1 && std::abs(sigma - prev) <= rel_tol * sigma) {
      out.converged = true;
      break;
    }
    prev = sigma;
    v = A.transpose() * Av;
    v /= v.norm();
  }
  return out;
}

/// The convex power-sum part of g: rows a_i, offsets b_i, even powers p_i,
/// the strong convexity modulus rho and a Lipschitz constant L >= ||A||^2/rho
/// of the dual smooth term.
struct PowerSumPart {
  Matrix A;
  Vector b;
  Eigen::VectorXi powers;
  double rho = 1.0;
  double lipschitz = 1.0;
  bool norm_converged = true;

  /// g-side data of a DcForm; L = 1.01 * ||A+||^2 / rho.
  static PowerSumPart from(const DcForm& dc, std::uint64_t seed = 0x5eed) {
    if (!(dc.rho > 0)) throw ValidationError("subproblem needs rho > 0");
    PowerSumPart part;
    auto [A, b] = dc.stack(true);
    part.A = std::move(A);
    part.b = std::move(b);
    part.powers = dc.stacked_powers(true);
    part.rho = dc.rho;
    const SpectralNorm sn = spectral_norm(part.A, seed);
    part.norm_converged = sn.converged;
    part.lipschitz = part.A.rows() ? std::max(1.01 * sn.value * sn.value / dc.rho, 1e-300) : 1.0;
    return part;
  }

  Eigen::Index rows() const { return A.rows(); }
};

/// sum_i (a_i^T x + b_i)^{p_i} + rho/2 ||x||^2 - c^T x
inline double primal_objective(const PowerSumPart& part, const Vector& c, const Vector& x) {
  double s = 0.5 * part.rho * x.squaredNorm() - c.dot(x);
  if (part.rows()) {
    const Vector t = part.A * x + part.b;
    for (Eigen::Index i = 0; i < t.size(); ++i) s += ipow(t[i], part.powers[i]);
  }
  return s;
}

/// Primal point attached to a dual vector: proj_P((c + A^T y) / rho).
inline Vector primal_from_dual(const PowerSumPart& part, const Vector& c, const Polyhedron& P,
                               const Vector& y) {
  Vector z = c;
  if (part.rows()) z.noalias() += part.A.transpose() * y;
  return project(P, z / part.rho);
}

/// q(y) = -psi*(A^T y) - phi*(-y).
inline double dual_objective(const PowerSumPart& part, const Vector& c, const Polyhedron& P,
                             const Vector& y) {
  Vector z = c;
  if (part.rows()) z.noalias() += part.A.transpose() * y;
  const Vector x = project(P, z / part.rho);
  const double psi_star = z.dot(x) - 0.5 * part.rho * x.squaredNorm();
  double phi_star = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const int p = part.powers[i];
    const double mag = std::pow(std::abs(y[i]) / p, 1.0 / (p - 1));
    const double w = y[i] > 0 ? -mag : mag;
    phi_star += y[i] * part.b[i] - y[i] * w - ipow(w, p);
  }
  return -psi_star - phi_star;
}

/// y_i = -p_i (a_i^T x + b_i)^{p_i - 1}, the dual point matching x.
inline Vector warm_start(const PowerSumPart& part, const Vector& x) {
  Vector y(part.rows());
  if (part.rows() == 0) return y;
  const Vector t = part.A * x + part.b;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    y[i] = -part.powers[i] * ipow(t[i], part.powers[i] - 1);
  }
  return y;
}

struct FdpgOptions {
  double tol = 5e-5;
  int max_iter = 20000;
};

struct FdpgResult {
  Vector u;
  Vector y;
  int iterations = 0;
  bool converged = false;
};

/// Called after every iteration with (k, u^k, y^{k+1}, s_{k+1}).
using FdpgObserver = std::function<void(int, const Vector&, const Vector&, double)>;

/// Runs until ||y^{k+1} - y^k|| / (1 + ||y^k||) <= tol or max_iter. The
/// returned primal point is proj_P((c + A^T y) / rho) at the final dual iterate.
inline FdpgResult fdpg_solve(const PowerSumPart& part, const Vector& c, const Polyhedron& P,
                             const Vector& y0, const FdpgOptions& opt = {},
                             const FdpgObserver& observer = {}) {
  if (!(opt.tol > 0)) throw ValidationError("fdpg: tol must be positive");
  if (c.size() != P.dimension() || (part.rows() && part.A.cols() != P.dimension())) {
    throw ValidationError("fdpg: dimension mismatch");
  }
  FdpgResult res;
  if (part.rows() == 0) {
    res.u = project(P, c / part.rho);
    res.y = Vector(0);
    res.converged = true;
    return res;
  }
  if (y0.size() != part.rows()) throw ValidationError("fdpg: y0 has wrong length");

  const double L = part.lipschitz;
  Vector y = y0;
  Vector w = y0;
  double s = 1.0;
  Vector z(c.size());
  Vector t(part.rows());
  Vector v(part.rows());
  for (int k = 0; k < opt.max_iter; ++k) {
    z = c;
    z.noalias() += part.A.transpose() * w;
    const Vector u = project(P, z / part.rho);
    t.noalias() = part.A * u;
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      v[i] = prox_phi(t[i] - L * w[i], L, part.b[i], part.powers[i]);
    }
    Vector y_next = w - (t - v) / L;
    const double s_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * s * s));
    w = y_next + ((s - 1.0) / s_next) * (y_next - y);
    const double crit = (y_next - y).norm() / (1.0 + y.norm());
    y = std::move(y_next);
    s = s_next;
    res.iterations = k + 1;
    if (observer) observer(k, u, y, s);
    if (crit <= opt.tol) {
      res.converged = true;
      break;
    }
  }
  res.y = y;
  // The primal point attached to the final dual iterate; the u^k above was
  // built from the extrapolated w^k and can lag behind when the dual barely moves.
  res.u = primal_from_dual(part, c, P, y);
  return res;
}

}  // namespace pdca
