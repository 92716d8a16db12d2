#pragma once

// DCA and its boosted variants for f = g - h over a polyhedron, where g and h
// are the convex power sums of a DcForm (each carrying rho/2 ||x||^2).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "pdca/error.hpp"
#include "pdca/fdpg.hpp"
#include "pdca/linesearch.hpp"
#include "pdca/polyhedron.hpp"
#include "pdca/psdc.hpp"

namespace pdca {

enum class Method { dca, bdca_exact, bdca_armijo };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::dca:
      return "dca";
    case Method::bdca_exact:
      return "bdcae";
    case Method::bdca_armijo:
      return "bdca";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  if (s == "dca") return Method::dca;
  if (s == "bdcae") return Method::bdca_exact;
  if (s == "bdca") return Method::bdca_armijo;
  throw ValidationError("unknown method '" + s + "' (expected dca, bdca or bdcae)");
}

struct SolverConfig {
  double epsilon = 1e-5;
  int max_outer = 2000;
  double inner_tol = 5e-5;
  int inner_max_iter = 20000;
  double armijo_sigma = 1e-3;
  double armijo_beta = 0.8;
  int armijo_max_reductions = 50;
  double t_max_cap = default_t_max;
  std::uint64_t seed = 0x5eed;
  /// Keep x^k and y^k in every record.
  bool keep_points = true;
  /// When set and returning true for k, the boosted methods take t_k = 0.
  std::function<bool(int)> force_zero_step;

  void validate() const {
    if (!(epsilon > 0) || max_outer < 1 || !(inner_tol > 0) || inner_max_iter < 1 ||
        !(armijo_sigma > 0) || !(t_max_cap > 0) || armijo_max_reductions < 0) {
      throw ValidationError("solver settings must be positive");
    }
    if (!(armijo_beta > 0 && armijo_beta < 1)) throw ValidationError("armijo_beta must lie in (0,1)");
  }
};

struct IterationRecord {
  int k = 0;
  double f_x = 0.0;  ///< f(x^k)
  double f_y = 0.0;  ///< f(y^k)
  double dnorm = 0.0;
  double t = 0.0;
  int inner_iters = 0;
  bool inner_converged = true;
  double seconds = 0.0;
  Vector x;
  Vector y;
};

struct SolveTrace {
  enum class Status { converged, max_iter };

  std::vector<IterationRecord> records;
  Status status = Status::max_iter;
  int inner_failures = 0;

  int iterations() const { return static_cast<int>(records.size()); }

  void write_csv(std::ostream& out) const {
    const auto prec = out.precision(17);
    out << "k,f,dnorm,t,inner_iters,seconds\n";
    for (const auto& r : records) {
      out << r.k << ',' << r.f_x << ',' << r.dnorm << ',' << r.t << ',' << r.inner_iters << ','
          << r.seconds << '\n';
    }
    out.precision(prec);
  }
};

struct SolveResult {
  Vector x;
  double f = 0.0;
  SolveTrace trace;
};

namespace detail {

inline double armijo_step(const DcForm& dc, const Vector& y, const Vector& d, double f_y,
                          double t_bar, const SolverConfig& cfg) {
  const double dn2 = d.squaredNorm();
  double t = std::min(t_bar, std::sqrt(2.0) / std::sqrt(dn2));
  for (int r = 0; r <= cfg.armijo_max_reductions; ++r) {
    if (dc.value(y + t * d) - f_y <= -cfg.armijo_sigma * t * t * dn2) return t;
    t *= cfg.armijo_beta;
  }
  return 0.0;
}

}  // namespace detail

/// Runs DCA (method = dca) or a boosted DCA from x0 in P. Returns x^k at the
/// iteration where ||d^k|| / (1 + ||x^k||) < epsilon, or the last iterate.
inline SolveResult solve(Method method, const DcForm& dc, const Polyhedron& P, const Vector& x0,
                         const SolverConfig& cfg = {}) {
  cfg.validate();
  if (!(dc.rho > 0)) throw ValidationError("the DC form needs rho > 0");
  check_dimension(P, x0);
  if (x0.size() != dc.n) throw ValidationError("x0 dimension does not match the DC form");
  if (!contains(P, x0, 1e-8)) throw ValidationError("initial point is not in the feasible set");

  const auto start = std::chrono::steady_clock::now();
  const PowerSumPart part = PowerSumPart::from(dc, cfg.seed);
  SolveResult out;
  Vector x = x0;
  for (int k = 0; k < cfg.max_outer; ++k) {
    IterationRecord rec;
    rec.k = k;
    rec.f_x = dc.value(x);
    const FdpgResult sub = fdpg_solve(part, dc.grad_h(x), P, warm_start(part, x),
                                      {cfg.inner_tol, cfg.inner_max_iter});
    rec.inner_iters = sub.iterations;
    rec.inner_converged = sub.converged;
    if (!sub.converged) ++out.trace.inner_failures;
    const Vector& y = sub.u;
    Vector d = y - x;
    rec.dnorm = d.norm();
    rec.f_y = dc.value(y);
    if (cfg.keep_points) {
      rec.x = x;
      rec.y = y;
    }
    if (rec.dnorm / (1.0 + x.norm()) < cfg.epsilon) {
      rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      out.trace.records.push_back(std::move(rec));
      out.trace.status = SolveTrace::Status::converged;
      out.x = x;
      out.f = dc.value(x);
      return out;
    }
    double t = 0.0;
    const bool boosted = method != Method::dca && !(cfg.force_zero_step && cfg.force_zero_step(k));
    if (boosted) {
      if (!detail::equalities_hold(P, d)) d = project_to_nullspace(P, d);
      const double t_bar = max_step(P, y, d);
      if (t_bar > 0) {
        t = method == Method::bdca_exact ? exact_line_search(dc, y, d, t_bar, cfg.t_max_cap)
                                         : detail::armijo_step(dc, y, d, rec.f_y, t_bar, cfg);
      }
    }
    rec.t = t;
    if (t > 0) {
      x = y + t * d;
      // Long steps multiply the roundoff in the equality rows by t; pull the
      // iterate back so the error cannot compound across iterations.
      if (P.A_eq().rows() > 0) x -= P.eq_min_norm(P.A_eq() * x - P.b_eq());
    } else {
      x = y;
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.trace.records.push_back(std::move(rec));
  }
  out.x = x;
  out.f = dc.value(x);
  return out;
}

inline SolveResult dca(const DcForm& dc, const Polyhedron& P, const Vector& x0,
                       const SolverConfig& cfg = {}) {
  return solve(Method::dca, dc, P, x0, cfg);
}

inline SolveResult bdca_exact(const DcForm& dc, const Polyhedron& P, const Vector& x0,
                              const SolverConfig& cfg = {}) {
  return solve(Method::bdca_exact, dc, P, x0, cfg);
}

inline SolveResult bdca_armijo(const DcForm& dc, const Polyhedron& P, const Vector& x0,
                               const SolverConfig& cfg = {}) {
  return solve(Method::bdca_armijo, dc, P, x0, cfg);
}

/// Violation of <grad f(x), z - x> >= 0 over P, measured two ways and summed:
/// the worst normalized directional slope from proj_P(x) towards 200 sampled
/// feasible points, and the projected-gradient residual ||x - proj_P(x - grad f(x))||.
inline double stationarity_residual(const DcForm& dc, const Polyhedron& P, const Vector& x,
                                    std::uint64_t seed = 7, int samples = 200) {
  const Vector g = dc.grad(x);
  const double pg = (x - project(P, x - g)).norm();
  // Slopes are taken from the feasible representative so that roundoff-level
  // infeasibility cannot produce tiny but meaningful-looking steps.
  const Vector xf = project(P, x);
  const Vector gf = dc.grad(xf);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  const auto n = x.size();
  const double min_dist = 1e-9 * (1.0 + xf.norm());
  double worst = 0.0;
  auto consider = [&](const Vector& z) {
    const double dist = (z - xf).norm();
    if (dist <= min_dist) return;
    worst = std::min(worst, gf.dot(z - xf) / dist);
  };
  if (P.kind() == Polyhedron::Kind::simplex) {
    for (Eigen::Index i = 0; i < n; ++i) consider(Vector::Unit(n, i));
  }
  for (int s = 0; s < samples; ++s) {
    Vector z(n);
    if (P.kind() == Polyhedron::Kind::simplex) {
      for (Eigen::Index i = 0; i < n; ++i) z[i] = expo(rng);
      z /= z.sum();
    } else {
      const double scale = std::pow(10.0, -3.0 + 3.0 * s / std::max(1, samples - 1));
      for (Eigen::Index i = 0; i < n; ++i) z[i] = xf[i] + scale * normal(rng);
      z = project(P, z);
    }
    consider(z);
  }
  return -worst + pg;
}

}  // namespace pdca
