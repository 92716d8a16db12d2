#pragma once

// Multi-indices, sparse multivariate polynomials and the small amount of
// polynomial algebra needed by the power-sum decompositions.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pdca/error.hpp"

namespace pdca {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Exponent vector alpha in N^n.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents) : e_(std::move(exponents)) {
    for (int v : e_) {
      if (v < 0) throw ValidationError("multi-index entries must be nonnegative");
    }
  }
  MultiIndex(std::initializer_list<int> exponents)
      : MultiIndex(std::vector<int>(exponents)) {}

  std::size_t size() const noexcept { return e_.size(); }
  int operator[](std::size_t i) const { return e_[i]; }
  const std::vector<int>& exponents() const noexcept { return e_; }

  int degree() const noexcept {
    int s = 0;
    for (int v : e_) s += v;
    return s;
  }

  /// Copy with one extra trailing exponent.
  MultiIndex append(int last) const {
    std::vector<int> e = e_;
    e.push_back(last);
    return MultiIndex(std::move(e));
  }

  /// Copy with the trailing exponent removed.
  MultiIndex drop_last() const {
    return MultiIndex(std::vector<int>(e_.begin(), e_.end() - 1));
  }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> e_;
};

/// Graded lexicographic order: lower total degree first, then lexicographically
/// larger exponent vectors first, so I_{2,2} lists (2,0),(1,1),(0,2).
struct GradedLex {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    const int da = a.degree();
    const int db = b.degree();
    if (da != db) return da < db;
    return b.exponents() < a.exponents();
  }
};

/// s_{n,d} = C(n+d-1, d), throwing SizeError if it does not fit.
inline std::size_t count_multi_indices(int n, int d) {
  if (n < 1 || d < 0) throw ValidationError("count_multi_indices: need n >= 1, d >= 0");
  // C(n-1+d, d) = prod_{i=1..d} (n-1+i)/i, exact at every step.
  unsigned __int128 r = 1;
  for (int i = 1; i <= d; ++i) {
    r = r * static_cast<unsigned>(n - 1 + i);
    r /= static_cast<unsigned>(i);
    if (r > std::numeric_limits<std::size_t>::max() / 2) {
      throw SizeError("s_{n,d} overflows the platform size type");
    }
  }
  return static_cast<std::size_t>(r);
}

namespace detail {

inline void enumerate_rec(int pos, int remaining, std::vector<int>& cur,
                          std::vector<MultiIndex>& out) {
  const int n = static_cast<int>(cur.size());
  if (pos == n - 1) {
    cur[pos] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[pos] = v;
    enumerate_rec(pos + 1, remaining - v, cur, out);
  }
}

}  // namespace detail

/// All exponent vectors of length n summing to d, in graded-lex order.
inline std::vector<MultiIndex> multi_index_set(int n, int d) {
  const std::size_t count = count_multi_indices(n, d);
  std::vector<MultiIndex> out;
  out.reserve(count);
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  detail::enumerate_rec(0, d, cur, out);
  return out;
}

/// Position of alpha inside multi_index_set(alpha.size(), alpha.degree()).
inline std::size_t graded_lex_rank(const MultiIndex& alpha) {
  const int n = static_cast<int>(alpha.size());
  int remaining = alpha.degree();
  std::size_t rank = 0;
  for (int k = 0; k + 1 < n; ++k) {
    const int tail = n - k - 1;
    for (int v = remaining; v > alpha[k]; --v) {
      rank += count_multi_indices(tail, remaining - v);
    }
    remaining -= alpha[k];
  }
  return rank;
}

/// Integer power with 0^0 = 1.
inline double ipow(double x, int e) {
  double r = 1.0;
  double b = x;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

/// Polynomial in n variables stored as exponent -> coefficient. Zero
/// coefficients are never stored.
class SparsePolynomial {
 public:
  using TermMap = std::map<MultiIndex, double, GradedLex>;

  SparsePolynomial() = default;
  explicit SparsePolynomial(int n) : n_(n) {
    if (n < 0) throw ValidationError("polynomial dimension must be nonnegative");
  }
  SparsePolynomial(int n, std::initializer_list<std::pair<MultiIndex, double>> terms)
      : SparsePolynomial(n) {
    for (const auto& [a, c] : terms) add_term(a, c);
  }

  int dimension() const noexcept { return n_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  int degree() const noexcept {
    return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
  }

  double coefficient(const MultiIndex& a) const {
    auto it = terms_.find(a);
    return it == terms_.end() ? 0.0 : it->second;
  }

  /// Accumulates c into the coefficient of x^a, pruning exact zeros.
  void add_term(const MultiIndex& a, double c) {
    if (static_cast<int>(a.size()) != n_) {
      throw ValidationError("term length does not match polynomial dimension");
    }
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(a, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    return terms_.begin()->first.degree() == terms_.rbegin()->first.degree();
  }

  SparsePolynomial& operator+=(const SparsePolynomial& o) {
    if (o.n_ != n_) throw ValidationError("adding polynomials of different dimension");
    for (const auto& [a, c] : o.terms_) add_term(a, c);
    return *this;
  }
  friend SparsePolynomial operator+(SparsePolynomial a, const SparsePolynomial& b) {
    a += b;
    return a;
  }
  friend SparsePolynomial operator*(double s, const SparsePolynomial& p) {
    SparsePolynomial r(p.n_);
    for (const auto& [a, c] : p.terms_) r.add_term(a, s * c);
    return r;
  }

  friend bool operator==(const SparsePolynomial& a, const SparsePolynomial& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

 private:
  int n_ = 0;
  TermMap terms_;
};

inline void check_dimension(const SparsePolynomial& f, const Vector& x) {
  if (x.size() != f.dimension()) {
    throw ValidationError("point dimension " + std::to_string(x.size()) +
                          " does not match polynomial dimension " +
                          std::to_string(f.dimension()));
  }
}

inline double eval(const SparsePolynomial& f, const Vector& x) {
  check_dimension(f, x);
  double s = 0.0;
  for (const auto& [a, c] : f.terms()) {
    double m = c;
    for (std::size_t k = 0; k < a.size(); ++k) m *= ipow(x[k], a[k]);
    s += m;
  }
  return s;
}

inline Vector grad(const SparsePolynomial& f, const Vector& x) {
  check_dimension(f, x);
  Vector g = Vector::Zero(f.dimension());
  for (const auto& [a, c] : f.terms()) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      double m = c * a[i];
      for (std::size_t k = 0; k < a.size(); ++k) {
        m *= ipow(x[k], k == i ? a[k] - 1 : a[k]);
      }
      g[i] += m;
    }
  }
  return g;
}

/// Central differences (f(x+de_i) - f(x-de_i)) / 2d.
inline Vector fd_grad(const std::function<double(const Vector&)>& f, const Vector& x,
                      double delta = 1e-3) {
  if (!(delta > 0.0)) throw ValidationError("fd_grad: delta must be positive");
  Vector g(x.size());
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    xp[i] = xi + delta;
    const double fp = f(xp);
    xp[i] = xi - delta;
    const double fm = f(xp);
    xp[i] = xi;
    g[i] = (fp - fm) / (2.0 * delta);
  }
  return g;
}

/// x^a -> x^a * x_{n+1}^{d_target - |a|}.
inline SparsePolynomial homogenize(const SparsePolynomial& f, int d_target) {
  if (d_target < f.degree()) {
    throw ValidationError("homogenize: target degree below polynomial degree");
  }
  SparsePolynomial h(f.dimension() + 1);
  for (const auto& [a, c] : f.terms()) h.add_term(a.append(d_target - a.degree()), c);
  return h;
}

/// Sets the last variable to 1.
inline SparsePolynomial dehomogenize(const SparsePolynomial& f) {
  if (f.dimension() < 2) throw ValidationError("dehomogenize: need at least 2 variables");
  SparsePolynomial r(f.dimension() - 1);
  for (const auto& [a, c] : f.terms()) r.add_term(a.drop_last(), c);
  return r;
}

/// [h_0, ..., h_d] with h_k the degree-k terms of f.
inline std::vector<SparsePolynomial> homogeneous_parts(const SparsePolynomial& f) {
  std::vector<SparsePolynomial> parts(static_cast<std::size_t>(f.degree()) + 1,
                                      SparsePolynomial(f.dimension()));
  for (const auto& [a, c] : f.terms()) parts[static_cast<std::size_t>(a.degree())].add_term(a, c);
  return parts;
}

// Text format: one term per line, "c e1 ... en". Blank lines and '#' comments
// are ignored.

inline SparsePolynomial read_polynomial(std::istream& in) {
  std::string line;
  int n = -1;
  std::size_t lineno = 0;
  std::vector<std::pair<std::vector<int>, double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    double c;
    if (!(ls >> c)) {
      std::istringstream probe(line);
      std::string tok;
      if (probe >> tok) {
        throw ValidationError("line " + std::to_string(lineno) + ": bad coefficient '" + tok + "'");
      }
      continue;
    }
    std::vector<int> e;
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      long v = 0;
      try {
        v = std::stol(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || v < 0 || v > std::numeric_limits<int>::max()) {
        throw ValidationError("line " + std::to_string(lineno) + ": bad exponent '" + tok + "'");
      }
      e.push_back(static_cast<int>(v));
    }
    if (n < 0) n = static_cast<int>(e.size());
    if (static_cast<int>(e.size()) != n || n == 0) {
      throw ValidationError("line " + std::to_string(lineno) + ": expected " +
                            std::to_string(n) + " exponents");
    }
    rows.emplace_back(std::move(e), c);
  }
  if (n < 0) throw ValidationError("polynomial file has no terms");
  SparsePolynomial f(n);
  for (auto& [e, c] : rows) f.add_term(MultiIndex(std::move(e)), c);
  return f;
}

inline void write_polynomial(std::ostream& out, const SparsePolynomial& f) {
  const auto prec = out.precision(17);
  for (const auto& [a, c] : f.terms()) {
    out << c;
    for (int e : a.exponents()) out << ' ' << e;
    out << '\n';
  }
  out.precision(prec);
}

}  // namespace pdca
