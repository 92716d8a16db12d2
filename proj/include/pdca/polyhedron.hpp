#pragma once

// Polyhedra {x : A_ineq x <= b_ineq, A_eq x = b_eq}: membership, feasible
// directions, ratio-test step bounds and Euclidean projection.

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pdca/error.hpp"
#include "pdca/polycore.hpp"

namespace pdca {

class Polyhedron {
 public:
  enum class Kind { simplex, box, affine, general };

  Polyhedron(Matrix A_ineq, Vector b_ineq, Matrix A_eq, Vector b_eq)
      : A_ineq_(std::move(A_ineq)), b_ineq_(std::move(b_ineq)),
        A_eq_(std::move(A_eq)), b_eq_(std::move(b_eq)) {
    n_ = static_cast<int>(std::max(A_ineq_.cols(), A_eq_.cols()));
    if (A_ineq_.rows() == 0) A_ineq_.resize(0, n_);
    if (A_eq_.rows() == 0) A_eq_.resize(0, n_);
    if (A_ineq_.cols() != n_ || A_eq_.cols() != n_ || b_ineq_.size() != A_ineq_.rows() ||
        b_eq_.size() != A_eq_.rows()) {
      throw ValidationError("polyhedron: inconsistent row/column sizes");
    }
    if (!A_ineq_.allFinite() || !b_ineq_.allFinite() || !A_eq_.allFinite() || !b_eq_.allFinite()) {
      throw ValidationError("polyhedron: non-finite data");
    }
    detect_kind();
    if (A_eq_.rows() > 0) eq_cod_.compute(A_eq_);
  }

  /// Unit simplex {x >= 0, sum x = 1}.
  static Polyhedron simplex(int n) {
    if (n < 1) throw ValidationError("simplex: n must be >= 1");
    return Polyhedron(-Matrix::Identity(n, n), Vector::Zero(n), Matrix::Ones(1, n),
                      Vector::Ones(1));
  }

  /// Box lo <= x <= hi; infinite bounds are omitted.
  static Polyhedron box(const Vector& lo, const Vector& hi) {
    if (lo.size() != hi.size()) throw ValidationError("box: bound sizes differ");
    std::vector<std::pair<Vector, double>> rows;
    const auto n = lo.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (lo[i] > hi[i]) throw ValidationError("box: empty interval");
      if (std::isfinite(hi[i])) rows.emplace_back(Vector::Unit(n, i), hi[i]);
      if (std::isfinite(lo[i])) rows.emplace_back(-Vector::Unit(n, i), -lo[i]);
    }
    Matrix A(static_cast<Eigen::Index>(rows.size()), n);
    Vector b(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      A.row(static_cast<Eigen::Index>(r)) = rows[r].first.transpose();
      b[static_cast<Eigen::Index>(r)] = rows[r].second;
    }
    return Polyhedron(std::move(A), std::move(b), Matrix(0, n), Vector(0));
  }

  int dimension() const noexcept { return n_; }
  Kind kind() const noexcept { return kind_; }
  const Matrix& A_ineq() const noexcept { return A_ineq_; }
  const Vector& b_ineq() const noexcept { return b_ineq_; }
  const Matrix& A_eq() const noexcept { return A_eq_; }
  const Vector& b_eq() const noexcept { return b_eq_; }
  const Vector& lower() const noexcept { return lo_; }
  const Vector& upper() const noexcept { return hi_; }

  /// Min-norm solution delta of A_eq delta = r.
  Vector eq_min_norm(const Vector& r) const { return eq_cod_.solve(r); }

 private:
  void detect_kind() {
    const auto m = A_ineq_.rows();
    const auto r = A_eq_.rows();
    lo_ = Vector::Constant(n_, -std::numeric_limits<double>::infinity());
    hi_ = Vector::Constant(n_, std::numeric_limits<double>::infinity());

    if (m == 0) {
      kind_ = Kind::affine;
      return;
    }
    // Every inequality row must touch a single coordinate.
    std::vector<int> var(static_cast<std::size_t>(m), -1);
    for (Eigen::Index i = 0; i < m; ++i) {
      int nz = 0;
      for (int k = 0; k < n_; ++k) {
        if (A_ineq_(i, k) != 0.0) {
          ++nz;
          var[static_cast<std::size_t>(i)] = k;
        }
      }
      if (nz != 1) {
        kind_ = Kind::general;
        return;
      }
    }
    if (r == 0) {
      for (Eigen::Index i = 0; i < m; ++i) {
        const int k = var[static_cast<std::size_t>(i)];
        const double a = A_ineq_(i, k);
        const double bound = b_ineq_[i] / a;
        if (a > 0) hi_[k] = std::min(hi_[k], bound);
        else lo_[k] = std::max(lo_[k], bound);
      }
      kind_ = (lo_.array() <= hi_.array()).all() ? Kind::box : Kind::general;
      return;
    }
    // Simplex: -c_i x_i <= 0 covering every coordinate, plus c e.x = c.
    bool simplex = r == 1;
    std::vector<bool> covered(static_cast<std::size_t>(n_), false);
    for (Eigen::Index i = 0; simplex && i < m; ++i) {
      const int k = var[static_cast<std::size_t>(i)];
      simplex = A_ineq_(i, k) < 0 && b_ineq_[i] == 0.0;
      covered[static_cast<std::size_t>(k)] = true;
    }
    simplex = simplex && std::all_of(covered.begin(), covered.end(), [](bool c) { return c; });
    if (simplex) {
      const double c = A_eq_(0, 0);
      simplex = c > 0 && (A_eq_.row(0).array() == c).all() &&
                std::abs(b_eq_[0] - c) <= 1e-15 * std::abs(c);
    }
    kind_ = simplex ? Kind::simplex : Kind::general;
  }

  int n_ = 0;
  Matrix A_ineq_;
  Vector b_ineq_;
  Matrix A_eq_;
  Vector b_eq_;
  Kind kind_ = Kind::general;
  Vector lo_, hi_;
  Eigen::CompleteOrthogonalDecomposition<Matrix> eq_cod_;
};

inline void check_dimension(const Polyhedron& P, const Vector& x) {
  if (x.size() != P.dimension()) {
    throw ValidationError("vector dimension " + std::to_string(x.size()) +
                          " does not match polyhedron dimension " + std::to_string(P.dimension()));
  }
}

inline bool contains(const Polyhedron& P, const Vector& x, double tol = 1e-9) {
  check_dimension(P, x);
  if (!x.allFinite()) return false;
  if (P.A_ineq().rows() > 0 && ((P.A_ineq() * x - P.b_ineq()).array() > tol).any()) return false;
  if (P.A_eq().rows() > 0 && (P.A_eq() * x - P.b_eq()).lpNorm<Eigen::Infinity>() > tol) return false;
  return true;
}

namespace detail {

inline bool equalities_hold(const Polyhedron& P, const Vector& d) {
  for (Eigen::Index j = 0; j < P.A_eq().rows(); ++j) {
    const double scale = std::max(1.0, P.A_eq().row(j).norm() * d.norm());
    if (std::abs(P.A_eq().row(j).dot(d)) > 1e-9 * scale) return false;
  }
  return true;
}

}  // namespace detail

/// d is a feasible direction at y iff equality rows annihilate d and every
/// row with <a_i, d> > 0 has strictly positive slack at y.
inline bool feasible_direction(const Polyhedron& P, const Vector& y, const Vector& d) {
  check_dimension(P, d);
  if (!contains(P, y)) throw ValidationError("feasible_direction: y is not in the polyhedron");
  if (!detail::equalities_hold(P, d)) return false;
  const Vector ad = P.A_ineq() * d;
  const Vector slack = P.b_ineq() - P.A_ineq() * y;
  for (Eigen::Index i = 0; i < ad.size(); ++i) {
    if (ad[i] > 0 && !(slack[i] > 0)) return false;
  }
  return true;
}

/// Ratio test min_{<a_i,d> > 0} (b_i - <a_i,y>) / <a_i,d>; +inf when no row
/// bounds the ray.
inline double max_step(const Polyhedron& P, const Vector& y, const Vector& d) {
  check_dimension(P, y);
  check_dimension(P, d);
  if (!detail::equalities_hold(P, d)) {
    throw ValidationError("max_step: direction violates an equality row");
  }
  double t = std::numeric_limits<double>::infinity();
  const Vector ad = P.A_ineq() * d;
  const Vector slack = P.b_ineq() - P.A_ineq() * y;
  for (Eigen::Index i = 0; i < ad.size(); ++i) {
    if (ad[i] > 0) t = std::min(t, std::max(slack[i], 0.0) / ad[i]);
  }
  return t;
}

/// Euclidean projection onto the unit simplex (sort and threshold).
inline Vector project_simplex(const Vector& z) {
  const auto n = z.size();
  std::vector<double> u(z.data(), z.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double running = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    running += u[static_cast<std::size_t>(j)];
    const double t = (running - 1.0) / static_cast<double>(j + 1);
    if (u[static_cast<std::size_t>(j)] - t > 0) theta = t;
  }
  return (z.array() - theta).max(0.0).matrix();
}

/// Dykstra alternation over the halfspaces and the affine hull of the
/// equality rows. Stops when one full sweep moves the iterate and the
/// correction terms by at most tol.
inline Vector project_dykstra(const Polyhedron& P, const Vector& z, double tol = 1e-10,
                              int max_sweeps = 10000) {
  const auto m = P.A_ineq().rows();
  const bool has_eq = P.A_eq().rows() > 0;
  const auto sets = m + (has_eq ? 1 : 0);
  std::vector<Vector> incr(static_cast<std::size_t>(sets), Vector::Zero(z.size()));
  Vector rownorm2(m);
  for (Eigen::Index i = 0; i < m; ++i) rownorm2[i] = P.A_ineq().row(i).squaredNorm();

  Vector x = z;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    for (Eigen::Index s = 0; s < sets; ++s) {
      Vector& p = incr[static_cast<std::size_t>(s)];
      const Vector y = x + p;
      Vector nx = y;
      if (s < m) {
        const double viol = P.A_ineq().row(s).dot(y) - P.b_ineq()[s];
        if (viol > 0 && rownorm2[s] > 0) nx -= (viol / rownorm2[s]) * P.A_ineq().row(s).transpose();
      } else {
        nx -= P.eq_min_norm(P.A_eq() * y - P.b_eq());
      }
      const Vector np = y - nx;
      change += (nx - x).squaredNorm() + (np - p).squaredNorm();
      p = np;
      x = std::move(nx);
    }
    if (std::sqrt(change) <= tol) return x;
  }
  throw ProjectionError("Dykstra projection did not converge within " +
                        std::to_string(max_sweeps) + " sweeps");
}

/// Euclidean projection onto P, dispatched on its detected structure.
inline Vector project(const Polyhedron& P, const Vector& z) {
  check_dimension(P, z);
  switch (P.kind()) {
    case Polyhedron::Kind::simplex:
      return project_simplex(z);
    case Polyhedron::Kind::box:
      return z.cwiseMax(P.lower()).cwiseMin(P.upper());
    case Polyhedron::Kind::affine:
      if (P.A_eq().rows() == 0) return z;
      return z - P.eq_min_norm(P.A_eq() * z - P.b_eq());
    case Polyhedron::Kind::general:
      if (contains(P, z, 0.0)) return z;
      return project_dykstra(P, z);
  }
  return z;
}

/// Removes the component of d that violates the equality rows.
inline Vector project_to_nullspace(const Polyhedron& P, const Vector& d) {
  if (P.A_eq().rows() == 0) return d;
  return d - P.eq_min_norm(P.A_eq() * d);
}

// Text format: "le a1 .. an b" / "eq p1 .. pn q" rows, or a single
// "simplex n" line. '#' starts a comment.
inline Polyhedron read_polyhedron(std::istream& in) {
  std::vector<std::vector<double>> le, eq;
  std::string line;
  std::size_t lineno = 0;
  int n = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (tag == "simplex") {
      int k = 0;
      std::string extra;
      if (!(ls >> k) || k < 1 || (ls >> extra) || !le.empty() || !eq.empty()) {
        throw ValidationError(where + "expected a lone 'simplex n'");
      }
      while (std::getline(in, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        if (line.find_first_not_of(" \t\r") != std::string::npos) {
          throw ValidationError("'simplex n' cannot be combined with other rows");
        }
      }
      return Polyhedron::simplex(k);
    }
    if (tag != "le" && tag != "eq") throw ValidationError(where + "unknown row tag '" + tag + "'");
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || !std::isfinite(v)) throw ValidationError(where + "bad number '" + tok + "'");
      row.push_back(v);
    }
    if (row.size() < 2) throw ValidationError(where + "row needs coefficients and a right-hand side");
    if (n < 0) n = static_cast<int>(row.size()) - 1;
    if (static_cast<int>(row.size()) - 1 != n) throw ValidationError(where + "row length mismatch");
    (tag == "le" ? le : eq).push_back(std::move(row));
  }
  if (n < 0) throw ValidationError("polyhedron file has no rows");
  auto to_mat = [n](const std::vector<std::vector<double>>& rows, Matrix& A, Vector& b) {
    A.resize(static_cast<Eigen::Index>(rows.size()), n);
    b.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (int k = 0; k < n; ++k) A(static_cast<Eigen::Index>(i), k) = rows[i][static_cast<std::size_t>(k)];
      b[static_cast<Eigen::Index>(i)] = rows[i].back();
    }
  };
  Matrix Ai, Ae;
  Vector bi, be;
  to_mat(le, Ai, bi);
  to_mat(eq, Ae, be);
  return Polyhedron(std::move(Ai), std::move(bi), std::move(Ae), std::move(be));
}

}  // namespace pdca
