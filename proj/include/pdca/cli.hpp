#pragma once

// Command implementations behind the `pdca` executable. Each command reads a
// flat key=value configuration, validates it completely, then computes and
// writes CSV outputs plus a manifest into the output directory.

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pdca/error.hpp"
#include "pdca/fdpg.hpp"
#include "pdca/mvsk.hpp"
#include "pdca/polycore.hpp"
#include "pdca/polyhedron.hpp"
#include "pdca/psdc.hpp"
#include "pdca/solvers.hpp"

#ifndef PDCA_VERSION
#define PDCA_VERSION "0.1.0"
#endif

namespace pdca::cli {

namespace fs = std::filesystem;

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_numerical = 3;

inline std::string version() { return PDCA_VERSION; }

/// Flat key=value settings. Relative paths resolve against the directory of
/// the file they were read from.
class RunConfig {
 public:
  RunConfig() = default;

  static RunConfig parse(std::istream& in, const fs::path& base_dir = fs::current_path(),
                         const std::string& source = "config") {
    RunConfig c;
    c.base_ = base_dir;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
      const std::string t = trim(line);
      if (t.empty()) continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) {
        throw ValidationError(source + ":" + std::to_string(lineno) + ": expected key=value");
      }
      const std::string key = trim(t.substr(0, eq));
      if (key.empty()) throw ValidationError(source + ":" + std::to_string(lineno) + ": empty key");
      if (c.values_.count(key)) {
        throw ValidationError(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
      }
      c.values_[key] = trim(t.substr(eq + 1));
    }
    return c;
  }

  static RunConfig load(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path.string() + "'");
    return parse(in, fs::absolute(path).parent_path(), path.string());
  }

  /// Command-line override; wins over the file.
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  void require_known(const std::set<std::string>& allowed, const std::string& command) const {
    for (const auto& [k, v] : values_) {
      if (!allowed.count(k)) {
        throw ValidationError("unknown key '" + k + "' for command '" + command + "'");
      }
    }
  }

  std::string get(const std::string& key, const std::string& fallback = "") const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  std::string require(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end() || it->second.empty()) throw ValidationError("missing required key '" + key + "'");
    return it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return to_double(key, get(key));
  }

  long long get_int(const std::string& key, long long fallback) const {
    if (!has(key)) return fallback;
    const std::string s = get(key);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size()) throw ValidationError("key '" + key + "': not an integer '" + s + "'");
    return v;
  }

  fs::path get_path(const std::string& key) const {
    fs::path p(require(key));
    return p.is_absolute() ? p : base_ / p;
  }

  static double to_double(const std::string& key, const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size() || !std::isfinite(v)) {
      throw ValidationError("key '" + key + "': not a number '" + s + "'");
    }
    return v;
  }

  static std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

 private:
  std::map<std::string, std::string> values_;
  fs::path base_ = fs::current_path();
};

/// How rho is chosen for a decomposition: 1, the spectral norm of the stacked
/// A+ rows, or an explicit positive value.
struct RhoPolicy {
  enum class Kind { one, specnorm, value };
  Kind kind = Kind::specnorm;
  double value = 1.0;

  static RhoPolicy parse(const std::string& key, const std::string& s) {
    RhoPolicy r;
    if (s == "one") {
      r.kind = Kind::one;
    } else if (s == "specnorm") {
      r.kind = Kind::specnorm;
    } else {
      r.kind = Kind::value;
      r.value = RunConfig::to_double(key, s);
      if (!(r.value > 0)) throw ValidationError("key '" + key + "': rho must be positive");
    }
    return r;
  }

  double resolve(const DcForm& dc, std::uint64_t seed) const {
    switch (kind) {
      case Kind::one:
        return 1.0;
      case Kind::value:
        return value;
      case Kind::specnorm: {
        const double s = spectral_norm(dc.stacked_A_plus(), seed).value;
        return s > 0 ? s : 1.0;
      }
    }
    return 1.0;
  }
};

namespace detail {

inline const std::set<std::string>& solver_keys() {
  static const std::set<std::string> k{"epsilon",     "max_outer",      "inner_tol",
                                       "inner_max_iter", "armijo_sigma", "armijo_beta",
                                       "t_max_cap"};
  return k;
}

inline std::set<std::string> keys(std::initializer_list<std::string> extra, bool with_solver) {
  std::set<std::string> k{"seed", "out"};
  k.insert(extra.begin(), extra.end());
  if (with_solver) k.insert(solver_keys().begin(), solver_keys().end());
  return k;
}

inline SolverConfig solver_config(const RunConfig& c, std::uint64_t seed) {
  SolverConfig s;
  s.epsilon = c.get_double("epsilon", s.epsilon);
  s.max_outer = static_cast<int>(c.get_int("max_outer", s.max_outer));
  s.inner_tol = c.get_double("inner_tol", s.inner_tol);
  s.inner_max_iter = static_cast<int>(c.get_int("inner_max_iter", s.inner_max_iter));
  s.armijo_sigma = c.get_double("armijo_sigma", s.armijo_sigma);
  s.armijo_beta = c.get_double("armijo_beta", s.armijo_beta);
  s.t_max_cap = c.get_double("t_max_cap", s.t_max_cap);
  s.seed = seed;
  s.keep_points = false;
  s.validate();
  return s;
}

inline std::uint64_t seed_of(const RunConfig& c) {
  const long long s = c.get_int("seed", 1);
  if (s < 0) throw ValidationError("seed must be nonnegative");
  return static_cast<std::uint64_t>(s);
}

inline Decomposition parse_decomposition(const std::string& s) {
  if (s == "tpsdc") return Decomposition::tpsdc;
  if (s == "hdpsdc") return Decomposition::hdpsdc;
  throw ValidationError("unknown decomposition '" + s + "' (expected tpsdc or hdpsdc)");
}

inline std::string to_string(Decomposition d) { return d == Decomposition::tpsdc ? "tpsdc" : "hdpsdc"; }

inline std::array<double, 4> parse_omega(const std::string& s) {
  if (s == "seeking" || s == "averse" || s == "neutral") return omega_preset(s);
  const auto parts = RunConfig::split_list(s);
  if (parts.size() != 4) throw ValidationError("omega must be a preset or four comma-separated weights");
  std::array<double, 4> w{};
  for (int i = 0; i < 4; ++i) {
    w[static_cast<std::size_t>(i)] = RunConfig::to_double("omega", parts[static_cast<std::size_t>(i)]);
    if (w[static_cast<std::size_t>(i)] < 0) throw ValidationError("omega weights must be nonnegative");
  }
  return w;
}

inline fs::path out_dir(const RunConfig& c) {
  fs::path p = c.has("out") ? c.get_path("out") : fs::path("pdca-out");
  fs::create_directories(p);
  return p;
}

/// Uniform [0,1]^n projected onto P.
inline Vector random_start(std::mt19937_64& rng, const Polyhedron& P) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector x(P.dimension());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = u(rng);
  return project(P, x);
}

inline void write_manifest(const fs::path& dir, const std::string& command, const RunConfig& c,
                           const std::vector<std::pair<std::string, std::string>>& results) {
  std::ofstream m(dir / "manifest.txt");
  m << "command=" << command << '\n' << "version=" << version() << '\n';
  for (const auto& [k, v] : c.values()) m << "config." << k << '=' << v << '\n';
  for (const auto& [k, v] : results) m << k << '=' << v << '\n';
}

inline std::string num(double v, int digits = 10) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

inline void write_vector_csv(const fs::path& path, const std::string& name, const Vector& x) {
  std::ofstream out(path);
  out << "i," << name << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < x.size(); ++i) out << i << ',' << x[i] << '\n';
}

inline double max_relative_reconstruction_error(const SparsePolynomial& f, const DcForm& dc,
                                                std::uint64_t seed, int points) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  Vector x(f.dimension());
  for (int k = 0; k < points; ++k) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = u(rng);
    const double fx = eval(f, x);
    worst = std::max(worst, std::abs(dc.value(x) - fx) / (1.0 + std::abs(fx)));
  }
  return worst;
}

struct SolveOutcome {
  std::string method;
  int n = 0;
  int degree = 0;
  double rho = 0.0;
  SolveResult result;
  double residual = 0.0;
};

inline std::string summary_header() { return "method,n,d,f_final,iters,seconds,residual"; }

inline std::string summary_line(const SolveOutcome& o) {
  std::ostringstream s;
  s << std::setprecision(10) << o.method << ',' << o.n << ',' << o.degree << ',' << o.result.f << ','
    << o.result.trace.iterations() << ','
    << (o.result.trace.records.empty() ? 0.0 : o.result.trace.records.back().seconds) << ','
    << o.residual;
  return s.str();
}

inline SolveOutcome run_one(const SparsePolynomial& f, const Polyhedron& P, Method method,
                            Decomposition dec, const RhoPolicy& rho, const Vector& x0,
                            const SolverConfig& sc) {
  if (P.dimension() != f.dimension()) {
    throw ValidationError("polyhedron dimension " + std::to_string(P.dimension()) +
                          " does not match polynomial dimension " + std::to_string(f.dimension()));
  }
  if (f.empty()) throw ValidationError("the polynomial has no terms");
  DcForm dc = decompose(f, dec, 0.0);
  dc.rho = rho.resolve(dc, sc.seed);
  SolveOutcome o;
  o.method = pdca::to_string(method);
  o.n = f.dimension();
  o.degree = f.degree();
  o.rho = dc.rho;
  o.result = solve(method, dc, P, x0, sc);
  o.residual = stationarity_residual(dc, P, o.result.x);
  return o;
}

inline void finish_solve(const fs::path& dir, const std::string& command, const RunConfig& c,
                         const SolveOutcome& o, std::ostream& out) {
  {
    std::ofstream t(dir / "trace.csv");
    o.result.trace.write_csv(t);
  }
  write_vector_csv(dir / "solution.csv", "x", o.result.x);
  {
    std::ofstream s(dir / "summary.csv");
    s << summary_header() << '\n' << summary_line(o) << '\n';
  }
  write_manifest(dir, command, c,
                 {{"rho", num(o.rho)},
                  {"status", o.result.trace.status == SolveTrace::Status::converged ? "converged" : "max_iter"},
                  {"inner_failures", std::to_string(o.result.trace.inner_failures)},
                  {"f_final", num(o.result.f)}});
  out << summary_header() << '\n' << summary_line(o) << '\n';
}

inline Vector parse_x0(const RunConfig& c, const Polyhedron& P, std::mt19937_64& rng) {
  if (!c.has("x0")) return random_start(rng, P);
  const auto parts = RunConfig::split_list(c.get("x0"));
  if (static_cast<Eigen::Index>(parts.size()) != P.dimension()) {
    throw ValidationError("x0 needs " + std::to_string(P.dimension()) + " entries");
  }
  Vector x(P.dimension());
  for (std::size_t i = 0; i < parts.size(); ++i) x[static_cast<Eigen::Index>(i)] = RunConfig::to_double("x0", parts[i]);
  return x;
}

inline SparsePolynomial read_polynomial_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw ValidationError("cannot open polynomial file '" + p.string() + "'");
  return read_polynomial(in);
}

inline Polyhedron read_polyhedron_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw ValidationError("cannot open polyhedron file '" + p.string() + "'");
  return read_polyhedron(in);
}

/// Returns matrix for the mvsk and bench commands: the leading `assets`
/// columns of a returns file, or seeded synthetic data.
inline Matrix returns_for(const RunConfig& c, long long assets, long long periods, std::uint64_t seed) {
  if (c.has("returns")) {
    Matrix R = load_returns(c.get_path("returns").string());
    if (assets > R.cols()) {
      throw ValidationError("assets=" + std::to_string(assets) + " exceeds the " +
                            std::to_string(R.cols()) + " columns of the returns file");
    }
    return R.leftCols(assets > 0 ? assets : R.cols());
  }
  return synthetic_returns(static_cast<int>(periods), static_cast<int>(assets > 0 ? assets : 10), seed);
}

}  // namespace detail

/// Writes the blocks of a decomposition and checks the reconstruction on
/// random points in [-1,1]^n.
inline int cmd_decompose(const RunConfig& c, std::ostream& out) {
  c.require_known(detail::keys({"polynomial", "decomposition", "points"}, false), "decompose");
  const fs::path poly_path = c.get_path("polynomial");
  const Decomposition dec = detail::parse_decomposition(c.get("decomposition", "hdpsdc"));
  const long long points = c.get_int("points", 100);
  if (points < 1) throw ValidationError("points must be positive");
  const std::uint64_t seed = detail::seed_of(c);
  const SparsePolynomial f = detail::read_polynomial_file(poly_path);
  if (f.empty()) throw ValidationError("the polynomial has no terms");
  const fs::path dir = detail::out_dir(c);

  const DcForm dc = decompose(f, dec, 0.0);
  const double err = detail::max_relative_reconstruction_error(f, dc, seed, static_cast<int>(points));
  for (std::size_t b = 0; b < dc.blocks.size(); ++b) {
    const auto& blk = dc.blocks[b];
    for (bool plus : {true, false}) {
      std::ofstream csv(dir / ("block" + std::to_string(b) + (plus ? "_plus.csv" : "_minus.csv")));
      csv << "offset";
      for (int j = 0; j < dc.n; ++j) csv << ",a" << j + 1;
      csv << '\n' << std::setprecision(17);
      const Matrix& A = plus ? blk.A_plus : blk.A_minus;
      const Vector& o = plus ? blk.b_plus : blk.b_minus;
      for (Eigen::Index i = 0; i < A.rows(); ++i) {
        csv << o[i];
        for (Eigen::Index j = 0; j < A.cols(); ++j) csv << ',' << A(i, j);
        csv << '\n';
      }
    }
  }
  std::vector<std::pair<std::string, std::string>> res{
      {"decomposition", detail::to_string(dec)},
      {"n", std::to_string(dc.n)},
      {"degree", std::to_string(f.degree())},
      {"constant", detail::num(dc.constant, 17)},
      {"blocks", std::to_string(dc.blocks.size())},
      {"rows_plus", std::to_string(dc.rows_plus())},
      {"rows_minus", std::to_string(dc.rows_minus())},
      {"reconstruction_error", detail::num(err)}};
  for (std::size_t b = 0; b < dc.blocks.size(); ++b) {
    res.emplace_back("block" + std::to_string(b) + ".power", std::to_string(dc.blocks[b].power));
  }
  detail::write_manifest(dir, "decompose", c, res);
  out << "decomposition,n,d,blocks,rows_plus,rows_minus,reconstruction_error\n"
      << detail::to_string(dec) << ',' << dc.n << ',' << f.degree() << ',' << dc.blocks.size() << ','
      << dc.rows_plus() << ',' << dc.rows_minus() << ',' << detail::num(err) << '\n';
  if (!(err <= 1e-6)) {
    throw NumericalError("reconstruction error " + detail::num(err) + " exceeds 1e-6");
  }
  return exit_ok;
}

/// Minimizes a polynomial from a file over a polyhedron from a file.
inline int cmd_solve(const RunConfig& c, std::ostream& out) {
  c.require_known(detail::keys({"polynomial", "polyhedron", "method", "decomposition", "rho", "x0"}, true),
                  "solve");
  const std::uint64_t seed = detail::seed_of(c);
  const Method method = parse_method(c.get("method", "bdcae"));
  const Decomposition dec = detail::parse_decomposition(c.get("decomposition", "hdpsdc"));
  const RhoPolicy rho = RhoPolicy::parse("rho", c.get("rho", "specnorm"));
  const SolverConfig sc = detail::solver_config(c, seed);
  const SparsePolynomial f = detail::read_polynomial_file(c.get_path("polynomial"));
  const Polyhedron P = detail::read_polyhedron_file(c.get_path("polyhedron"));
  std::mt19937_64 rng(seed);
  const Vector x0 = detail::parse_x0(c, P, rng);
  const fs::path dir = detail::out_dir(c);
  const auto o = detail::run_one(f, P, method, dec, rho, x0, sc);
  detail::finish_solve(dir, "solve", c, o, out);
  return exit_ok;
}

/// MVSK portfolio selection on a returns file or seeded synthetic returns.
inline int cmd_mvsk(const RunConfig& c, std::ostream& out) {
  c.require_known(detail::keys({"returns", "assets", "periods", "omega", "method", "decomposition", "rho", "x0"},
                               true),
                  "mvsk");
  const std::uint64_t seed = detail::seed_of(c);
  const Method method = parse_method(c.get("method", "bdcae"));
  const Decomposition dec = detail::parse_decomposition(c.get("decomposition", "hdpsdc"));
  const RhoPolicy rho = RhoPolicy::parse("rho", c.get("rho", "specnorm"));
  const auto omega = detail::parse_omega(c.get("omega", "seeking"));
  const long long assets = c.get_int("assets", c.has("returns") ? 0 : 10);
  const long long periods = c.get_int("periods", 120);
  if (assets < 0 || periods < 2) throw ValidationError("assets must be >= 0 and periods >= 2");
  const SolverConfig sc = detail::solver_config(c, seed);
  const Matrix R = detail::returns_for(c, assets, periods, seed);
  const Polyhedron P = simplex(static_cast<int>(R.cols()));
  std::mt19937_64 rng(seed);
  const Vector x0 = detail::parse_x0(c, P, rng);
  const fs::path dir = detail::out_dir(c);
  const SparsePolynomial f = mvsk_polynomial(moments(R), omega);
  const auto o = detail::run_one(f, P, method, dec, rho, x0, sc);
  detail::finish_solve(dir, "mvsk", c, o, out);
  return exit_ok;
}

/// Table-style comparison of methods and decompositions over several MVSK
/// instances; one row per (instance, decomposition, method) plus averages.
inline int cmd_bench(const RunConfig& c, std::ostream& out) {
  c.require_known(detail::keys({"returns", "assets", "periods", "instances", "omega", "methods",
                                "decompositions", "rho_dca", "rho_bdca", "rho_bdcae"},
                               true),
                  "bench");
  const std::uint64_t seed = detail::seed_of(c);
  const long long instances = c.get_int("instances", 3);
  const long long assets = c.get_int("assets", c.has("returns") ? 0 : 10);
  const long long periods = c.get_int("periods", 120);
  if (instances < 1 || assets < 0 || periods < 2) {
    throw ValidationError("need instances >= 1, assets >= 0, periods >= 2");
  }
  std::vector<Method> methods;
  for (const auto& m : RunConfig::split_list(c.get("methods", "dca,bdca,bdcae"))) methods.push_back(parse_method(m));
  std::vector<Decomposition> decs;
  for (const auto& d : RunConfig::split_list(c.get("decompositions", "tpsdc,hdpsdc")))
    decs.push_back(detail::parse_decomposition(d));
  if (methods.empty() || decs.empty()) throw ValidationError("methods and decompositions must be nonempty");
  std::map<Method, RhoPolicy> rho{
      {Method::dca, RhoPolicy::parse("rho_dca", c.get("rho_dca", "one"))},
      {Method::bdca_armijo, RhoPolicy::parse("rho_bdca", c.get("rho_bdca", "specnorm"))},
      {Method::bdca_exact, RhoPolicy::parse("rho_bdcae", c.get("rho_bdcae", "specnorm"))}};
  const bool fixed_omega = c.has("omega");
  const auto omega_fixed = fixed_omega ? detail::parse_omega(c.get("omega")) : std::array<double, 4>{};
  const SolverConfig sc = detail::solver_config(c, seed);
  const fs::path dir = detail::out_dir(c);

  static const char* presets[] = {"seeking", "averse", "neutral"};
  std::ostringstream table;
  table << "instance,n,omega,decomposition,method,rho,iter,time,obj\n" << std::setprecision(10);
  struct Acc {
    double iter = 0, time = 0, obj = 0;
    int count = 0;
  };
  std::map<std::pair<int, int>, Acc> acc;
  for (long long i = 0; i < instances; ++i) {
    const std::uint64_t inst_seed = seed + static_cast<std::uint64_t>(i);
    const Matrix R = detail::returns_for(c, assets, periods, inst_seed);
    const std::string omega_name = fixed_omega ? c.get("omega") : presets[i % 3];
    const auto omega = fixed_omega ? omega_fixed : omega_preset(omega_name);
    const SparsePolynomial f = mvsk_polynomial(moments(R), omega);
    const Polyhedron P = simplex(static_cast<int>(R.cols()));
    std::mt19937_64 rng(inst_seed);
    const Vector x0 = detail::random_start(rng, P);
    for (std::size_t di = 0; di < decs.size(); ++di) {
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const auto o = detail::run_one(f, P, methods[mi], decs[di], rho.at(methods[mi]), x0, sc);
        const double secs = o.result.trace.records.empty() ? 0.0 : o.result.trace.records.back().seconds;
        table << i + 1 << ',' << o.n << ",\"" << omega_name << "\"," << detail::to_string(decs[di]) << ','
              << o.method << ',' << o.rho << ',' << o.result.trace.iterations() << ',' << secs << ','
              << o.result.f << '\n';
        auto& a = acc[{static_cast<int>(di), static_cast<int>(mi)}];
        a.iter += o.result.trace.iterations();
        a.time += secs;
        a.obj += o.result.f;
        ++a.count;
      }
    }
  }
  for (std::size_t di = 0; di < decs.size(); ++di) {
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      const auto& a = acc[{static_cast<int>(di), static_cast<int>(mi)}];
      table << "average,,," << detail::to_string(decs[di]) << ',' << pdca::to_string(methods[mi]) << ",,"
            << a.iter / a.count << ',' << a.time / a.count << ',' << a.obj / a.count << '\n';
    }
  }
  {
    std::ofstream b(dir / "bench.csv");
    b << table.str();
  }
  detail::write_manifest(dir, "bench", c, {{"rows", std::to_string(instances * static_cast<long long>(methods.size() * decs.size()))}});
  out << table.str();
  return exit_ok;
}

/// Runs a command, mapping failures to exit codes: 2 for invalid input,
/// 3 for numerical failure.
inline int dispatch(const std::string& command, const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (command == "decompose") return cmd_decompose(c, out);
    if (command == "solve") return cmd_solve(c, out);
    if (command == "mvsk") return cmd_mvsk(c, out);
    if (command == "bench") return cmd_bench(c, out);
    throw ValidationError("unknown command '" + command + "'");
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const SizeError& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  }
}

}  // namespace pdca::cli
