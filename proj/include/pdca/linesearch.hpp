#pragma once

// Exact line search along y + t d for power-sum DC forms: the restriction
// f(y + t d) is a univariate polynomial whose coefficients come straight from
// the affine rows, and its minimizer over [0, t_bar] is found among the real
// stationary points and the interval ends.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "pdca/error.hpp"
#include "pdca/polycore.hpp"
#include "pdca/psdc.hpp"

namespace pdca {

/// c_0 + c_1 t + ... + c_k t^k
struct UnivariatePoly {
  Vector coeffs;

  UnivariatePoly() = default;
  explicit UnivariatePoly(Vector c) : coeffs(std::move(c)) {}

  Eigen::Index degree() const {
    for (Eigen::Index j = coeffs.size() - 1; j >= 0; --j) {
      if (coeffs[j] != 0.0) return j;
    }
    return -1;
  }

  double operator()(double t) const {
    double s = 0.0;
    for (Eigen::Index j = coeffs.size() - 1; j >= 0; --j) s = s * t + coeffs[j];
    return s;
  }

  UnivariatePoly derivative() const {
    if (coeffs.size() <= 1) return UnivariatePoly(Vector::Zero(1));
    Vector c(coeffs.size() - 1);
    for (Eigen::Index j = 1; j < coeffs.size(); ++j) c[j - 1] = static_cast<double>(j) * coeffs[j];
    return UnivariatePoly(std::move(c));
  }
};

namespace detail {

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Adds sign * (a + e t)^p to c and the absolute size of each term to mag.
inline void add_power_of_line(Vector& c, Vector& mag, double sign, double a, double e, int p) {
  if (p > 63) throw ValidationError("line search supports powers up to 63");
  double ap[64];
  double ep = 1.0;
  ap[0] = 1.0;
  for (int j = 1; j <= p; ++j) ap[j] = ap[j - 1] * a;
  for (int j = 0; j <= p; ++j) {
    const double term = sign * binomial(p, j) * ap[p - j] * ep;
    c[j] += term;
    mag[j] += std::abs(term);
    ep *= e;
  }
}

inline void add_rows(Vector& c, Vector& mag, double sign, const Matrix& A, const Vector& b, int p,
                     const Vector& y, const Vector& d) {
  if (A.rows() == 0) return;
  const Vector a = A * y + b;
  const Vector e = A * d;
  for (Eigen::Index i = 0; i < a.size(); ++i) add_power_of_line(c, mag, sign, a[i], e[i], p);
}

// Coefficients that cancelled down to roundoff are set to exactly zero, so a
// vanished leading term cannot masquerade as a tiny one of either sign.
inline void drop_cancelled(Vector& c, const Vector& mag) {
  for (Eigen::Index j = 1; j < c.size(); ++j) {
    if (std::abs(c[j]) <= 64 * std::numeric_limits<double>::epsilon() * mag[j]) c[j] = 0.0;
  }
}

}  // namespace detail

/// Coefficients of t -> dc.value(y + t d).
inline UnivariatePoly curve_coeffs(const DcForm& dc, const Vector& y, const Vector& d) {
  if (y.size() != dc.n || d.size() != dc.n) {
    throw ValidationError("curve_coeffs: expected vectors of length " + std::to_string(dc.n));
  }
  Vector c = Vector::Zero(std::max(dc.max_power(), 0) + 1);
  Vector mag = Vector::Zero(c.size());
  c[0] = dc.constant;
  for (const auto& blk : dc.blocks) {
    detail::add_rows(c, mag, 1.0, blk.A_plus, blk.b_plus, blk.power, y, d);
    detail::add_rows(c, mag, -1.0, blk.A_minus, blk.b_minus, blk.power, y, d);
  }
  detail::drop_cancelled(c, mag);
  return UnivariatePoly(std::move(c));
}

/// Coefficients of t -> ps.eval(yhat + t dhat) with yhat = (y, 1), dhat = (d, 0)
/// for lifted sums, and yhat = y, dhat = d otherwise.
inline UnivariatePoly curve_coeffs(const PowerSum& ps, const Vector& y, const Vector& d) {
  const auto n = static_cast<Eigen::Index>(ps.indices.empty() ? 0 : ps.indices.front().size());
  const Eigen::Index expect = ps.lifted ? n - 1 : n;
  if (y.size() != expect || d.size() != expect) {
    throw ValidationError("curve_coeffs: expected vectors of length " + std::to_string(expect));
  }
  Vector c = Vector::Zero(ps.degree + 1);
  Vector mag = Vector::Zero(c.size());
  for (std::size_t i = 0; i < ps.indices.size(); ++i) {
    const MultiIndex& al = ps.indices[i];
    double a = ps.lifted ? al[al.size() - 1] : 0.0;
    double e = 0.0;
    for (Eigen::Index k = 0; k < expect; ++k) {
      a += al[static_cast<std::size_t>(k)] * y[k];
      e += al[static_cast<std::size_t>(k)] * d[k];
    }
    detail::add_power_of_line(c, mag, ps.weights[static_cast<Eigen::Index>(i)], a, e, ps.degree);
  }
  detail::drop_cancelled(c, mag);
  return UnivariatePoly(std::move(c));
}

namespace detail {

// Real roots of the monic cubic t^3 + a t^2 + b t + c.
inline std::vector<double> cubic_roots(double a, double b, double c) {
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double shift = -a / 3.0;
  const double disc = 0.25 * q * q + p * p * p / 27.0;
  std::vector<double> out;
  if (disc > 0) {
    const double s = std::sqrt(disc);
    const double u = std::cbrt(-0.5 * q - (q >= 0 ? s : -s));
    const double x = u == 0.0 ? 0.0 : u - p / (3.0 * u);
    out.push_back(x + shift);
  } else if (p == 0.0) {
    out.push_back(shift);
  } else {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      out.push_back(r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) + shift);
    }
  }
  return out;
}

inline std::vector<double> companion_real_roots(const Vector& monic_low) {
  // monic_low holds c_0..c_{k-1} of t^k + c_{k-1} t^{k-1} + ... + c_0.
  const Eigen::Index k = monic_low.size();
  Matrix C = Matrix::Zero(k, k);
  for (Eigen::Index i = 1; i < k; ++i) C(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < k; ++i) C(i, k - 1) = -monic_low[i];
  Eigen::EigenSolver<Matrix> es(C, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < k; ++i) {
    const std::complex<double> z = es.eigenvalues()[i];
    if (std::abs(z.imag()) <= 1e-8 * (1.0 + std::abs(z.real()))) out.push_back(z.real());
  }
  return out;
}

}  // namespace detail

/// Sorted distinct real roots of p inside [lo, hi]. A zero polynomial yields {lo}.
inline std::vector<double> real_roots_in(const UnivariatePoly& p, double lo, double hi) {
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ValidationError("real_roots_in: need finite lo <= hi");
  }
  const Eigen::Index k = p.degree();
  if (k < 0) return {lo};
  if (k == 0) return {};
  const Vector& c = p.coeffs;
  std::vector<double> cand;
  if (k == 1) {
    cand.push_back(-c[0] / c[1]);
  } else if (k == 2) {
    const double disc = c[1] * c[1] - 4.0 * c[2] * c[0];
    if (disc >= 0) {
      const double q = -0.5 * (c[1] + (c[1] >= 0 ? std::sqrt(disc) : -std::sqrt(disc)));
      if (q != 0.0) {
        cand.push_back(q / c[2]);
        cand.push_back(c[0] / q);
      } else {
        cand.push_back(0.0);
      }
    }
  } else {
    // Rescale t = sigma s so the monic polynomial in s has roots of order one.
    double sigma = 0.0;
    for (Eigen::Index j = 1; j <= k; ++j) {
      sigma = std::max(sigma, std::pow(std::abs(c[k - j] / c[k]), 1.0 / static_cast<double>(j)));
    }
    if (sigma == 0.0) sigma = 1.0;
    Vector low(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      low[j] = c[j] / (c[k] * std::pow(sigma, static_cast<double>(k - j)));
    }
    std::vector<double> s = k == 3 ? detail::cubic_roots(low[2], low[1], low[0])
                                   : detail::companion_real_roots(low);
    for (double v : s) cand.push_back(v * sigma);
  }

  const UnivariatePoly dp = p.derivative();
  double cmax = 0.0;
  for (Eigen::Index j = 0; j <= k; ++j) cmax = std::max(cmax, std::abs(c[j]));
  std::vector<double> out;
  const double slack = 1e-12 * (1.0 + std::max(std::abs(lo), std::abs(hi)));
  for (double r : cand) {
    if (!std::isfinite(r)) continue;
    for (int it = 0; it < 8; ++it) {
      const double f = p(r);
      if (std::abs(f) <= 1e-14 * (1.0 + cmax)) break;
      const double g = dp(r);
      if (g == 0.0) break;
      const double next = r - f / g;
      if (!(std::abs(p(next)) < std::abs(f))) break;
      r = next;
    }
    if (r < lo - slack || r > hi + slack) continue;
    out.push_back(std::clamp(r, lo, hi));
  }
  std::sort(out.begin(), out.end());
  std::vector<double> uniq;
  for (double r : out) {
    if (uniq.empty() || r - uniq.back() > 1e-10 * (1.0 + std::abs(r))) uniq.push_back(r);
  }
  return uniq;
}

inline constexpr double default_t_max = 1e8;

/// argmin of p over {0, T} and the stationary points in [0, T]; ties go to the
/// smaller t.
inline double minimize_on_interval(const UnivariatePoly& p, double T) {
  if (!(T >= 0) || !std::isfinite(T)) throw ValidationError("minimize_on_interval: need finite T >= 0");
  std::vector<double> cand{0.0};
  for (double r : real_roots_in(p.derivative(), 0.0, T)) cand.push_back(r);
  cand.push_back(T);
  std::sort(cand.begin(), cand.end());
  double best_t = 0.0;
  double best = p(0.0);
  for (double t : cand) {
    const double v = p(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  return best_t;
}

/// Exact minimizer of t -> dc.value(y + t d) over [0, min(t_bar, t_max)].
/// Steps whose directly evaluated value exceeds f(y) (possible only through
/// roundoff in the coefficients) are rejected in favour of t = 0.
inline double exact_line_search(const DcForm& dc, const Vector& y, const Vector& d, double t_bar,
                                double t_max = default_t_max) {
  if (!(t_bar > 0)) throw ValidationError("exact_line_search: t_bar must be positive");
  const double T = std::min(t_bar, t_max);
  const double t = minimize_on_interval(curve_coeffs(dc, y, d), T);
  if (t > 0 && dc.value(y + t * d) > dc.value(y)) return 0.0;
  return t;
}

}  // namespace pdca
