#pragma once

// Power-sum representations of forms and the two power-sum DC decompositions
// (termwise and homogenize/dehomogenize).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "pdca/error.hpp"
#include "pdca/polycore.hpp"

namespace pdca {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// d! / prod(beta_k!)
inline double multinomial(int d, const MultiIndex& beta) {
  double r = std::tgamma(d + 1.0);
  for (int b : beta.exponents()) r /= std::tgamma(b + 1.0);
  return std::round(r);
}

/// D(n,d)_{ij} = multinomial(d; alpha_j) * alpha_i^alpha_j over I_{n,d} in
/// graded-lex order, so <alpha_i, x>^d = sum_j D_ij x^alpha_j. Only the
/// structural nonzeros supp(alpha_j) subset of supp(alpha_i) are stored.
inline SparseMatrix build_D(int n, int d) {
  if (n < 1 || d < 1) throw ValidationError("build_D: need n >= 1, d >= 1");
  const auto rows = multi_index_set(n, d);
  const auto s = static_cast<Eigen::Index>(rows.size());

  std::vector<Eigen::Triplet<double>> trip;
  // Sub-index sets over a support of size k are reused across rows.
  std::map<int, std::vector<MultiIndex>> sub_sets;
  for (Eigen::Index i = 0; i < s; ++i) {
    const MultiIndex& alpha = rows[static_cast<std::size_t>(i)];
    std::vector<int> support;
    for (int k = 0; k < n; ++k) {
      if (alpha[k] > 0) support.push_back(k);
    }
    const int k = static_cast<int>(support.size());
    auto it = sub_sets.find(k);
    if (it == sub_sets.end()) it = sub_sets.emplace(k, multi_index_set(k, d)).first;
    for (const MultiIndex& sub : it->second) {
      std::vector<int> beta(static_cast<std::size_t>(n), 0);
      double power = 1.0;
      for (int q = 0; q < k; ++q) {
        const int var = support[static_cast<std::size_t>(q)];
        beta[static_cast<std::size_t>(var)] = sub[q];
        power *= ipow(alpha[var], sub[q]);
      }
      MultiIndex b(std::move(beta));
      const auto j = static_cast<Eigen::Index>(graded_lex_rank(b));
      trip.emplace_back(i, j, multinomial(d, b) * power);
    }
  }
  SparseMatrix D(s, s);
  D.setFromTriplets(trip.begin(), trip.end());
  D.makeCompressed();
  return D;
}

/// Structural nonzeros over s^2.
inline double density(const SparseMatrix& D) {
  const double s = static_cast<double>(D.rows());
  return s == 0.0 ? 0.0 : static_cast<double>(D.nonZeros()) / (s * s);
}

/// f(xhat) = sum_a weights_a <a, xhat>^degree, with xhat = (x, 1) when lifted.
struct PowerSum {
  std::vector<MultiIndex> indices;
  Vector weights;
  int degree = 0;
  bool lifted = false;
  double residual = 0.0;

  double eval(const Vector& xhat) const {
    double s = 0.0;
    for (std::size_t i = 0; i < indices.size(); ++i) {
      double l = 0.0;
      for (std::size_t k = 0; k < indices[i].size(); ++k) l += indices[i][k] * xhat[static_cast<Eigen::Index>(k)];
      s += weights[static_cast<Eigen::Index>(i)] * ipow(l, degree);
    }
    return s;
  }
};

/// Factorized D(n,d)^T for repeated weight solves over one (n, d).
class PowerSumBasis {
 public:
  PowerSumBasis(int n, int d) : n_(n), d_(d), indices_(multi_index_set(n, d)), D_(build_D(n, d)) {
    Dt_ = SparseMatrix(D_.transpose());
    Dt_.makeCompressed();
    lu_ = std::make_unique<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>>();
    lu_->analyzePattern(Dt_);
    lu_->factorize(Dt_);
    if (lu_->info() != Eigen::Success) {
      throw DecompositionError("sparse LU of D(" + std::to_string(n) + "," +
                                   std::to_string(d) + ")^T failed: " + lu_->lastErrorMessage(),
                               std::numeric_limits<double>::infinity());
    }
  }

  int dimension() const noexcept { return n_; }
  int degree() const noexcept { return d_; }
  const std::vector<MultiIndex>& indices() const noexcept { return indices_; }
  const SparseMatrix& D() const noexcept { return D_; }

  /// Coefficient vector of a form of degree d in this basis.
  Vector coefficients(const SparsePolynomial& form) const {
    Vector c = Vector::Zero(static_cast<Eigen::Index>(indices_.size()));
    for (const auto& [a, v] : form.terms()) {
      if (a.degree() != d_) throw ValidationError("form is not homogeneous of the basis degree");
      c[static_cast<Eigen::Index>(graded_lex_rank(a))] = v;
    }
    return c;
  }

  /// Solves D^T lambda = c with two rounds of iterative refinement.
  PowerSum solve(const SparsePolynomial& form, bool lifted = false) const {
    if (form.dimension() != n_) throw ValidationError("form dimension does not match basis");
    const Vector c = coefficients(form);
    Vector lambda = lu_->solve(c);
    for (int it = 0; it < 2; ++it) {
      const Vector r = c - Dt_ * lambda;
      lambda += lu_->solve(r);
    }
    const double res = (Dt_ * lambda - c).lpNorm<Eigen::Infinity>();
    const double cinf = c.size() ? c.lpNorm<Eigen::Infinity>() : 0.0;
    if (!std::isfinite(res) || res > 1e-9 * (1.0 + cinf)) {
      throw DecompositionError("power-sum weights residual " + std::to_string(res) +
                                   " exceeds tolerance",
                               res);
    }
    return PowerSum{indices_, std::move(lambda), d_, lifted, res};
  }

 private:
  int n_;
  int d_;
  std::vector<MultiIndex> indices_;
  SparseMatrix D_;
  SparseMatrix Dt_;
  std::unique_ptr<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>> lu_;
};

/// Power-sum weights of a homogeneous form of even degree >= 2.
inline PowerSum power_sum_weights(const SparsePolynomial& form) {
  if (form.dimension() < 1) throw ValidationError("power_sum_weights: empty dimension");
  if (!form.is_homogeneous()) throw ValidationError("power_sum_weights: form is not homogeneous");
  const int d = form.degree();
  if (d < 2 || d % 2 != 0) throw ValidationError("power_sum_weights: degree must be even and >= 2");
  return PowerSumBasis(form.dimension(), d).solve(form);
}

/// ||A+ x + b+||_p^p - ||A- x + b-||_p^p for one even power p.
struct DcBlock {
  int power = 2;
  Matrix A_plus;
  Vector b_plus;
  Matrix A_minus;
  Vector b_minus;
};

/// f(x) = g(x) - h(x) + constant with
///   g(x) = sum_blocks ||A+ x + b+||_p^p + rho/2 ||x||^2,
///   h(x) = sum_blocks ||A- x + b-||_p^p + rho/2 ||x||^2.
struct DcForm {
  int n = 0;
  std::vector<DcBlock> blocks;
  double rho = 0.0;
  double constant = 0.0;

  DcForm with_rho(double r) const {
    DcForm c = *this;
    c.rho = r;
    return c;
  }

  int max_power() const {
    int p = 0;
    for (const auto& b : blocks) p = std::max(p, b.power);
    return p;
  }

  double g(const Vector& x) const { return side_value(x, true) + 0.5 * rho * x.squaredNorm(); }
  double h(const Vector& x) const { return side_value(x, false) + 0.5 * rho * x.squaredNorm(); }
  /// g - h + constant, without the cancelling rho terms.
  double value(const Vector& x) const {
    return side_value(x, true) - side_value(x, false) + constant;
  }

  Vector grad_g(const Vector& x) const { return side_grad(x, true) + rho * x; }
  Vector grad_h(const Vector& x) const { return side_grad(x, false) + rho * x; }
  Vector grad(const Vector& x) const { return side_grad(x, true) - side_grad(x, false); }

  /// All A+ rows stacked, with a per-row power.
  Matrix stacked_A_plus() const { return stack(true).first; }

  std::size_t rows_plus() const {
    std::size_t r = 0;
    for (const auto& b : blocks) r += static_cast<std::size_t>(b.A_plus.rows());
    return r;
  }
  std::size_t rows_minus() const {
    std::size_t r = 0;
    for (const auto& b : blocks) r += static_cast<std::size_t>(b.A_minus.rows());
    return r;
  }

  std::pair<Matrix, Vector> stack(bool plus) const {
    Eigen::Index m = 0;
    for (const auto& b : blocks) m += plus ? b.A_plus.rows() : b.A_minus.rows();
    Matrix A(m, n);
    Vector off(m);
    Eigen::Index r = 0;
    for (const auto& b : blocks) {
      const Matrix& Ab = plus ? b.A_plus : b.A_minus;
      const Vector& bb = plus ? b.b_plus : b.b_minus;
      A.middleRows(r, Ab.rows()) = Ab;
      off.segment(r, bb.size()) = bb;
      r += Ab.rows();
    }
    return {A, off};
  }

  Eigen::VectorXi stacked_powers(bool plus) const {
    Eigen::Index m = 0;
    for (const auto& b : blocks) m += plus ? b.A_plus.rows() : b.A_minus.rows();
    Eigen::VectorXi p(m);
    Eigen::Index r = 0;
    for (const auto& b : blocks) {
      const Eigen::Index k = plus ? b.A_plus.rows() : b.A_minus.rows();
      p.segment(r, k).setConstant(b.power);
      r += k;
    }
    return p;
  }

 private:
  double side_value(const Vector& x, bool plus) const {
    double s = 0.0;
    for (const auto& b : blocks) {
      const Matrix& A = plus ? b.A_plus : b.A_minus;
      if (A.rows() == 0) continue;
      const Vector t = A * x + (plus ? b.b_plus : b.b_minus);
      for (Eigen::Index i = 0; i < t.size(); ++i) s += ipow(t[i], b.power);
    }
    return s;
  }

  Vector side_grad(const Vector& x, bool plus) const {
    Vector gr = Vector::Zero(n);
    for (const auto& b : blocks) {
      const Matrix& A = plus ? b.A_plus : b.A_minus;
      if (A.rows() == 0) continue;
      Vector t = A * x + (plus ? b.b_plus : b.b_minus);
      for (Eigen::Index i = 0; i < t.size(); ++i) t[i] = b.power * ipow(t[i], b.power - 1);
      gr.noalias() += A.transpose() * t;
    }
    return gr;
  }
};

namespace detail {

// Folds |lambda|^{1/p} into affine rows and appends them to the block of
// matching power. Weights below 1e-12 max|lambda| are dropped.
inline void fold_into(DcForm& dc, const PowerSum& ps) {
  const int n = dc.n;
  const double wmax = ps.weights.size() ? ps.weights.cwiseAbs().maxCoeff() : 0.0;
  const double cutoff = 1e-12 * wmax;

  std::vector<std::pair<Vector, double>> plus, minus;
  for (std::size_t i = 0; i < ps.indices.size(); ++i) {
    const double w = ps.weights[static_cast<Eigen::Index>(i)];
    if (!(std::abs(w) > cutoff)) continue;
    const double scale = std::pow(std::abs(w), 1.0 / ps.degree);
    Vector row(n);
    for (int k = 0; k < n; ++k) row[k] = scale * ps.indices[i][static_cast<std::size_t>(k)];
    const double offset = ps.lifted ? scale * ps.indices[i][static_cast<std::size_t>(n)] : 0.0;
    (w > 0 ? plus : minus).emplace_back(std::move(row), offset);
  }

  auto it = std::find_if(dc.blocks.begin(), dc.blocks.end(),
                         [&](const DcBlock& b) { return b.power == ps.degree; });
  if (it == dc.blocks.end()) {
    DcBlock b;
    b.power = ps.degree;
    b.A_plus.resize(0, n);
    b.A_minus.resize(0, n);
    b.b_plus.resize(0);
    b.b_minus.resize(0);
    auto pos = std::find_if(dc.blocks.begin(), dc.blocks.end(),
                            [&](const DcBlock& o) { return o.power > ps.degree; });
    it = dc.blocks.insert(pos, std::move(b));
  }
  auto append = [n](Matrix& A, Vector& b, const std::vector<std::pair<Vector, double>>& rows) {
    const Eigen::Index r0 = A.rows();
    A.conservativeResize(r0 + static_cast<Eigen::Index>(rows.size()), n);
    b.conservativeResize(r0 + static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      A.row(r0 + static_cast<Eigen::Index>(i)) = rows[i].first.transpose();
      b[r0 + static_cast<Eigen::Index>(i)] = rows[i].second;
    }
  };
  append(it->A_plus, it->b_plus, plus);
  append(it->A_minus, it->b_minus, minus);
}

}  // namespace detail

/// Termwise decomposition: each homogeneous part h_k is decomposed on its own,
/// odd parts after lifting to x_{n+1} h_k. Blocks of equal power are merged.
inline DcForm tpsdc(const SparsePolynomial& f, double rho = 0.0) {
  if (f.dimension() < 1) throw ValidationError("tpsdc: polynomial has no variables");
  DcForm dc;
  dc.n = f.dimension();
  dc.rho = rho;
  const auto parts = homogeneous_parts(f);
  dc.constant = parts[0].coefficient(MultiIndex(std::vector<int>(static_cast<std::size_t>(f.dimension()), 0)));
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const SparsePolynomial& hk = parts[k];
    if (hk.empty()) continue;
    if (k % 2 == 0) {
      detail::fold_into(dc, PowerSumBasis(dc.n, static_cast<int>(k)).solve(hk, false));
    } else {
      SparsePolynomial lifted(dc.n + 1);
      for (const auto& [a, c] : hk.terms()) lifted.add_term(a.append(1), c);
      detail::fold_into(dc, PowerSumBasis(dc.n + 1, static_cast<int>(k) + 1).solve(lifted, true));
    }
  }
  return dc;
}

/// Homogenize to d_f = 2 ceil(d/2) in n+1 variables, decompose once, then set
/// x_{n+1} = 1. Produces a single block of power d_f.
inline DcForm hdpsdc(const SparsePolynomial& f, double rho = 0.0) {
  if (f.dimension() < 1) throw ValidationError("hdpsdc: polynomial has no variables");
  if (f.degree() < 1) throw ValidationError("hdpsdc: polynomial degree must be >= 1");
  const int d = f.degree();
  const int df = 2 * ((d + 1) / 2);
  DcForm dc;
  dc.n = f.dimension();
  dc.rho = rho;
  detail::fold_into(dc, PowerSumBasis(dc.n + 1, df).solve(homogenize(f, df), true));
  return dc;
}

enum class Decomposition { tpsdc, hdpsdc };

inline DcForm decompose(const SparsePolynomial& f, Decomposition method, double rho = 0.0) {
  return method == Decomposition::tpsdc ? tpsdc(f, rho) : hdpsdc(f, rho);
}

}  // namespace pdca
