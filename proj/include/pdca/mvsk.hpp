#pragma once

// Mean-variance-skewness-kurtosis portfolio objective from a returns sample.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pdca/error.hpp"
#include "pdca/polycore.hpp"
#include "pdca/polyhedron.hpp"

namespace pdca {

/// Reads a CSV with one header row of asset names and T >= 2 rows of returns.
inline Matrix read_returns(std::istream& in, const std::string& source = "returns") {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(source + ": empty file");
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  const std::size_t n = split(line).size();
  if (n == 0) throw ValidationError(source + ": header has no columns");
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != n) {
      throw ValidationError(source + ": row " + std::to_string(lineno) + " has " +
                            std::to_string(cells.size()) + " cells, expected " + std::to_string(n));
    }
    std::vector<double> row(n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::string cell = trim(cells[j]);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (cell.empty() || used != cell.size() || !std::isfinite(v)) {
        throw ValidationError(source + ": row " + std::to_string(lineno) + ", column " +
                              std::to_string(j + 1) + ": not a number '" + cell + "'");
      }
      row[j] = v;
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw ValidationError(source + ": need T >= 2 data rows");
  Matrix R(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (std::size_t j = 0; j < n; ++j) R(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = rows[t][j];
  return R;
}

inline Matrix load_returns(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open returns file '" + path + "'");
  return read_returns(in, path);
}

/// Fully symmetric order-K tensor stored once per sorted index tuple, with the
/// number of distinct permutations of that tuple.
template <int K>
class SymmetricTensor {
 public:
  using Tuple = std::array<int, K>;

  struct Entry {
    Tuple index;
    double value = 0.0;
    double multiplicity = 1.0;
  };

  SymmetricTensor() = default;
  explicit SymmetricTensor(int n) : n_(n) {
    Tuple t{};
    enumerate(0, 0, t);
    for (std::size_t i = 0; i < entries_.size(); ++i) pos_.emplace(entries_[i].index, i);
  }

  int dimension() const noexcept { return n_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::vector<Entry>& entries() noexcept { return entries_; }

  /// Value at any (unsorted) index tuple.
  double operator()(Tuple idx) const {
    std::sort(idx.begin(), idx.end());
    return entries_[pos_.at(idx)].value;
  }

  /// sum over all n^K index tuples of T_{i...} x_i ... x_l
  double contract(const Vector& x) const {
    double s = 0.0;
    for (const auto& e : entries_) {
      double m = e.value * e.multiplicity;
      for (int k = 0; k < K; ++k) m *= x[e.index[static_cast<std::size_t>(k)]];
      s += m;
    }
    return s;
  }

 private:
  void enumerate(int pos, int from, Tuple& t) {
    if (pos == K) {
      Entry e;
      e.index = t;
      // K! / prod(run lengths)!
      double mult = 1.0;
      for (int k = 2; k <= K; ++k) mult *= k;
      int run = 1;
      for (int k = 1; k <= K; ++k) {
        if (k < K && t[static_cast<std::size_t>(k)] == t[static_cast<std::size_t>(k - 1)]) {
          ++run;
        } else {
          for (int r = 2; r <= run; ++r) mult /= r;
          run = 1;
        }
      }
      e.multiplicity = mult;
      entries_.push_back(e);
      return;
    }
    for (int i = from; i < n_; ++i) {
      t[static_cast<std::size_t>(pos)] = i;
      enumerate(pos + 1, i, t);
    }
  }

  int n_ = 0;
  std::vector<Entry> entries_;
  std::map<Tuple, std::size_t> pos_;
};

struct MomentSet {
  Vector mu;
  SymmetricTensor<2> V;
  SymmetricTensor<3> S;
  SymmetricTensor<4> K;

  int dimension() const { return static_cast<int>(mu.size()); }
};

namespace detail {

template <int K>
void fill_centered(SymmetricTensor<K>& T, const Matrix& C) {
  const double inv = 1.0 / static_cast<double>(C.rows());
  for (auto& e : T.entries()) {
    Vector prod = C.col(e.index[0]);
    for (int k = 1; k < K; ++k) prod.array() *= C.col(e.index[static_cast<std::size_t>(k)]).array();
    e.value = prod.sum() * inv;
  }
}

}  // namespace detail

/// Sample moments with population normalization (divide by T).
inline MomentSet moments(const Matrix& R) {
  if (R.rows() < 2) throw ValidationError("moments: need at least 2 observations");
  const int n = static_cast<int>(R.cols());
  MomentSet ms;
  ms.mu = R.colwise().mean().transpose();
  const Matrix C = R.rowwise() - ms.mu.transpose();
  ms.V = SymmetricTensor<2>(n);
  ms.S = SymmetricTensor<3>(n);
  ms.K = SymmetricTensor<4>(n);
  detail::fill_centered(ms.V, C);
  detail::fill_centered(ms.S, C);
  detail::fill_centered(ms.K, C);
  return ms;
}

namespace detail {

template <int K>
void add_tensor_terms(SparsePolynomial& f, const SymmetricTensor<K>& T, double w) {
  if (w == 0.0) return;
  for (const auto& e : T.entries()) {
    std::vector<int> ex(static_cast<std::size_t>(T.dimension()), 0);
    for (int i : e.index) ++ex[static_cast<std::size_t>(i)];
    f.add_term(MultiIndex(std::move(ex)), w * e.multiplicity * e.value);
  }
}

}  // namespace detail

/// omega1 (-M1) + omega2 M2 + omega3 (-M3) + omega4 M4 as an explicit polynomial.
inline SparsePolynomial mvsk_polynomial(const MomentSet& ms, const std::array<double, 4>& omega) {
  for (double w : omega) {
    if (!(w >= 0)) throw ValidationError("mvsk weights must be nonnegative");
  }
  const int n = ms.dimension();
  SparsePolynomial f(n);
  if (omega[0] != 0.0) {
    for (int i = 0; i < n; ++i) {
      std::vector<int> ex(static_cast<std::size_t>(n), 0);
      ex[static_cast<std::size_t>(i)] = 1;
      f.add_term(MultiIndex(std::move(ex)), -omega[0] * ms.mu[i]);
    }
  }
  detail::add_tensor_terms(f, ms.V, omega[1]);
  detail::add_tensor_terms(f, ms.S, -omega[2]);
  detail::add_tensor_terms(f, ms.K, omega[3]);
  return f;
}

/// omega for the named investor profiles.
inline std::array<double, 4> omega_preset(const std::string& name) {
  if (name == "seeking") return {10, 1, 10, 1};
  if (name == "averse") return {1, 10, 1, 10};
  if (name == "neutral") return {10, 10, 10, 10};
  throw ValidationError("unknown omega preset '" + name + "' (expected seeking, averse or neutral)");
}

inline Polyhedron simplex(int n) { return Polyhedron::simplex(n); }

/// T x n monthly-scale returns from a seeded one-factor model with occasional
/// market drawdowns, which gives the sample nonzero skewness.
inline Matrix synthetic_returns(int T, int n, std::uint64_t seed) {
  if (T < 2 || n < 1) throw ValidationError("synthetic_returns: need T >= 2 and n >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector beta(n), alpha(n), idio(n);
  for (int j = 0; j < n; ++j) {
    beta[j] = 0.5 + u(rng);
    alpha[j] = -0.002 + 0.008 * u(rng);
    idio[j] = 0.02 + 0.04 * u(rng);
  }
  Matrix R(T, n);
  for (int t = 0; t < T; ++t) {
    double m = 0.008 + 0.04 * z(rng);
    if (u(rng) < 0.07) m -= 0.06 + 0.03 * std::abs(z(rng));
    for (int j = 0; j < n; ++j) R(t, j) = alpha[j] + beta[j] * m + idio[j] * z(rng);
  }
  return R;
}

}  // namespace pdca
