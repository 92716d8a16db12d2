// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fdpg_oracles.hpp"
#include "pdca/pdca.hpp"
#include "polyhedron_oracles.hpp"
#include "test_util.hpp"

using namespace pdca;
using namespace pdca::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double reconstruction_error(const SparsePolynomial& f, const DcForm& dc, std::mt19937_64& rng, int points) {
  double worst = 0.0;
  for (int k = 0; k < points; ++k) {
    const Vector x = uniform_vector(rng, f.dimension(), -1.0, 1.0);
    const double fx = eval(f, x);
    worst = std::max(worst, std::abs(dc.g(x) - dc.h(x) + dc.constant - fx) / std::max(1.0, std::abs(fx)));
  }
  return worst;
}

Outcome decomposition_correctness() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<int> nd(2, 8), dd(2, 4);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = nd(rng);
    const int d = dd(rng);
    const SparsePolynomial f = random_integer_polynomial(rng, n, d);
    worst = std::max(worst, reconstruction_error(f, tpsdc(f), rng, 50));
    worst = std::max(worst, reconstruction_error(f, hdpsdc(f), rng, 50));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-7 && secs <= 60.0, fmt("max rel error %.3g, %.2f s", worst, secs)};
}

Outcome d_sparsity() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int n = 7; n <= 12; ++n) {
    for (int d = 3; d <= 5; ++d) worst = std::max(worst, density(build_D(n, d)));
  }
  const double secs = seconds_since(t0);
  return {worst < 0.10 && secs <= 10.0, fmt("max density %.4f, %.2f s", worst, secs)};
}

Outcome product_weights() {
  const SparsePolynomial xy(2, {{{1, 1}, 1.0}});
  const PowerSum ps = power_sum_weights(xy);
  const double expected[3] = {-0.125, 0.5, -0.125};
  bool weights_ok = ps.weights.size() == 3;
  for (Eigen::Index i = 0; weights_ok && i < 3; ++i) weights_ok = std::abs(ps.weights[i] - expected[i]) <= 1e-15;
  SparsePolynomial sum(2);
  for (std::size_t i = 0; i < ps.indices.size() && i < 3; ++i) sum += expected[i] * expand_power(ps.indices[i], 2);
  const bool symbolic = sum == xy;
  return {weights_ok && symbolic, fmt("weights %s, expansion %s", weights_ok ? "match" : "differ",
                                      symbolic ? "equals x1*x2" : "differs")};
}

Outcome line_search_identity() {
  std::mt19937_64 rng(1004);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 5;
    const int d = 2 + trial % 3;
    const SparsePolynomial f = random_real_polynomial(rng, n, d, 0.7);
    const DcForm dc = trial % 2 ? tpsdc(f, 1.0) : hdpsdc(f, 1.0);
    const Vector y = uniform_vector(rng, n, -1, 1);
    const Vector dir = uniform_vector(rng, n, -1, 1);
    const UnivariatePoly p = curve_coeffs(dc, y, dir);
    for (int k = 0; k <= 100; ++k) {
      const double t = 2.0 * k / 100.0;
      worst = std::max(worst, rel_err(p(t), dc.value(y + t * dir)));
    }
  }
  return {worst <= 1e-8, fmt("max grid deviation %.3g", worst)};
}

// Shared by the descent and acceleration criteria.
struct MvskRun {
  int n = 0;
  double rho = 0.0;
  SolveResult dca;
  SolveResult bdcae;
};

const std::vector<MvskRun>& mvsk_runs() {
  static const std::vector<MvskRun> runs = [] {
    std::vector<MvskRun> out;
    const char* presets[] = {"seeking", "averse", "neutral"};
    const int sizes[] = {5, 10, 15};
    SolverConfig cfg;
    cfg.keep_points = false;
    for (int i = 0; i < 50; ++i) {
      const std::uint64_t seed = 5000 + static_cast<std::uint64_t>(i);
      const int n = sizes[i % 3];
      const SparsePolynomial f = mvsk_polynomial(moments(synthetic_returns(120, n, seed)), omega_preset(presets[(i / 3) % 3]));
      DcForm dc = hdpsdc(f);
      dc.rho = spectral_norm(dc.stacked_A_plus(), seed).value;
      const Polyhedron P = simplex(n);
      std::mt19937_64 rng(seed);
      const Vector x0 = project(P, uniform_vector(rng, n, 0, 1));
      cfg.seed = seed;
      out.push_back({n, dc.rho, solve(Method::dca, dc, P, x0, cfg), solve(Method::bdca_exact, dc, P, x0, cfg)});
    }
    return out;
  }();
  return runs;
}

Outcome descent_invariant() {
  const double inner_tol = SolverConfig{}.inner_tol;
  int violations = 0;
  long checked = 0;
  for (const auto& r : mvsk_runs()) {
    for (const SolveResult* s : {&r.dca, &r.bdcae}) {
      for (const auto& rec : s->trace.records) {
        const double slack = 10 * inner_tol * (1 + std::abs(rec.f_x));
        if (rec.f_y > rec.f_x - r.rho * rec.dnorm * rec.dnorm + slack) ++violations;
        ++checked;
      }
    }
  }
  return {violations == 0, fmt("%d violations in %ld iterations over 50 instances", violations, checked)};
}

Outcome acceleration() {
  int fewer = 0, objective_ok = 0;
  std::vector<double> ratios;
  for (const auto& r : mvsk_runs()) {
    const int a = r.dca.trace.iterations();
    const int b = r.bdcae.trace.iterations();
    if (b <= a) ++fewer;
    ratios.push_back(static_cast<double>(a) / std::max(b, 1));
    if (std::abs(r.bdcae.f - r.dca.f) <= 1e-4 * (1 + std::abs(r.dca.f)) || r.bdcae.f < r.dca.f) ++objective_ok;
  }
  std::sort(ratios.begin(), ratios.end());
  const double median = 0.5 * (ratios[24] + ratios[25]);
  const bool pass = fewer >= 45 && median >= 3.0 && objective_ok == 50;
  return {pass, fmt("bdcae <= dca on %d/50, median reduction %.2fx, objectives consistent on %d/50", fewer,
                    median, objective_ok)};
}

Outcome fdpg_rate() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1007);
  int violations = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 5;
    const int m = std::min(12, n + 2 + trial % 6);
    auto inst = random_subproblem(rng, n, m, trial % 2 == 0);
    const Vector xs = projected_gradient_oracle(inst.part, inst.c, inst.P, Vector::Zero(n), 1e-13);
    const Vector ys = warm_start(inst.part, xs);
    const Vector y0 = Vector::Zero(m);
    const double C = 1.05 * 2.0 * std::sqrt(inst.part.lipschitz / inst.part.rho) * (y0 - ys).norm();
    fdpg_solve(inst.part, inst.c, inst.P, y0, {1e-14, 500}, [&](int k, const Vector& u, const Vector&, double) {
      if (k >= 1 && (u - xs).norm() > C / (k + 1)) ++violations;
    });
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && secs <= 120.0, fmt("%d bound violations, %.2f s", violations, secs)};
}

double simplex_kkt_violation(const Vector& z, const Vector& x) {
  // x = max(z - theta, 0) with sum x = 1 and x >= 0.
  double theta = 0.0;
  int support = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] > 0) {
      theta += z[i] - x[i];
      ++support;
    }
  }
  if (support == 0) return std::numeric_limits<double>::infinity();
  theta /= support;
  double worst = std::abs(x.sum() - 1.0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::max(0.0, -x[i]));
    if (x[i] > 0) worst = std::max(worst, std::abs(z[i] - x[i] - theta));
    else worst = std::max(worst, std::max(0.0, z[i] - theta));
  }
  return worst;
}

Outcome prox_and_projection() {
  std::mt19937_64 rng(1008);
  std::uniform_real_distribution<double> s_dist(-50, 50), b_dist(-5, 5), logL(-3, 2);
  const int powers[] = {2, 4, 6};
  double prox_worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double s = s_dist(rng), b = b_dist(rng), L = std::pow(10.0, logL(rng));
    const int p = powers[i % 3];
    const double v = prox_phi(s, L, b, p);
    prox_worst = std::max(prox_worst, std::abs(L * p * ipow(v + b, p - 1) + v - s) / (1 + std::abs(s)));
  }
  double kkt_worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + i % 12;
    const Vector z = uniform_vector(rng, n, -2, 2);
    kkt_worst = std::max(kkt_worst, simplex_kkt_violation(z, project(Polyhedron::simplex(n), z)));
  }
  double dykstra_worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 4;
    const int m = 1 + i % 6;
    const Polyhedron P = random_polyhedron(rng, n, m, (i % 5 == 0 && n > 1) ? 1 : 0);
    const Vector z = uniform_vector(rng, n, -4, 4);
    dykstra_worst = std::max(dykstra_worst, (project(P, z) - project_by_enumeration(P, z)).norm());
  }
  const bool pass = prox_worst <= 1e-12 && kkt_worst <= 1e-10 && dykstra_worst <= 1e-6;
  return {pass, fmt("prox residual %.3g, simplex KKT %.3g, Dykstra vs enumeration %.3g", prox_worst, kkt_worst,
                    dykstra_worst)};
}

Outcome moment_oracle() {
  std::mt19937_64 rng(1009);
  double worst = 0.0;
  for (int n : {3, 8}) {
    const Matrix R = synthetic_returns(200, n, 900 + static_cast<std::uint64_t>(n));
    const MomentSet ms = moments(R);
    const Vector mu = R.colwise().mean().transpose();
    for (int k = 0; k < 20; ++k) {
      const Vector x = uniform_vector(rng, n, -1, 1);
      double direct[3] = {0, 0, 0};
      for (Eigen::Index t = 0; t < R.rows(); ++t) {
        const double c = (R.row(t).transpose() - mu).dot(x);
        direct[0] += c * c;
        direct[1] += c * c * c;
        direct[2] += c * c * c * c;
      }
      const double T = static_cast<double>(R.rows());
      const double tensor[3] = {ms.V.contract(x), ms.S.contract(x), ms.K.contract(x)};
      for (int j = 0; j < 3; ++j) {
        const double ref = direct[j] / T;
        worst = std::max(worst, std::abs(tensor[j] - ref) / std::max(std::abs(ref), 1e-300));
      }
    }
  }
  return {worst <= 1e-10, fmt("max relative deviation %.3g", worst)};
}

Outcome zero_step_identity() {
  int identical = 0;
  for (int i = 0; i < 10; ++i) {
    const std::uint64_t seed = 7000 + static_cast<std::uint64_t>(i);
    const int n = 4 + i % 3;
    const SparsePolynomial f = mvsk_polynomial(moments(synthetic_returns(80, n, seed)), omega_preset(i % 2 ? "averse" : "seeking"));
    const DcForm dc = hdpsdc(f, 1.0);
    const Polyhedron P = simplex(n);
    std::mt19937_64 rng(seed);
    const Vector x0 = project(P, uniform_vector(rng, n, 0, 1));
    SolverConfig cfg;
    cfg.seed = seed;
    const SolveResult a = solve(Method::dca, dc, P, x0, cfg);
    cfg.force_zero_step = [](int) { return true; };
    const SolveResult b = solve(Method::bdca_exact, dc, P, x0, cfg);
    bool same = a.trace.iterations() == b.trace.iterations();
    for (int k = 0; same && k < a.trace.iterations(); ++k) {
      same = a.trace.records[static_cast<std::size_t>(k)].x == b.trace.records[static_cast<std::size_t>(k)].x &&
             a.trace.records[static_cast<std::size_t>(k)].y == b.trace.records[static_cast<std::size_t>(k)].y;
    }
    if (same && a.x == b.x) ++identical;
  }
  return {identical == 10, fmt("%d/10 iterate sequences identical", identical)};
}

Outcome rho_tradeoff() {
  const int n = 15;
  const std::uint64_t seed = 1011;
  const SparsePolynomial f = mvsk_polynomial(moments(synthetic_returns(120, n, seed)), omega_preset("seeking"));
  DcForm small = hdpsdc(f, 1.0);
  DcForm large = small;
  large.rho = spectral_norm(small.stacked_A_plus(), seed).value;
  const Polyhedron P = simplex(n);
  std::mt19937_64 rng(seed);
  const Vector x0 = project(P, uniform_vector(rng, n, 0, 1));
  SolverConfig cfg;
  cfg.keep_points = false;
  cfg.max_outer = 21;
  cfg.epsilon = 1e-300;
  const auto a = solve(Method::dca, small, P, x0, cfg).trace.records;
  const auto b = solve(Method::dca, large, P, x0, cfg).trace.records;
  int dominated = 0;
  for (std::size_t k = 1; k <= 20; ++k) {
    if (k < a.size() && k < b.size() && a[k].f_x <= b[k].f_x + 1e-12 * (1 + std::abs(b[k].f_x))) ++dominated;
  }
  return {large.rho > 1.0 && dominated == 20,
          fmt("||A+|| = %.3f; rho=1 at or below rho=||A+|| on %d/20 iterations (f_20: %.6g vs %.6g)", large.rho,
              dominated, a.size() > 20 ? a[20].f_x : NAN, b.size() > 20 ? b[20].f_x : NAN)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"decomposition correctness", decomposition_correctness},
      {"D(n,d) sparsity", d_sparsity},
      {"x1*x2 power-sum weights", product_weights},
      {"line-search polynomial identity", line_search_identity},
      {"descent invariant", descent_invariant},
      {"acceleration of BDCAe over DCA", acceleration},
      {"FDPG convergence rate", fdpg_rate},
      {"prox and projection oracles", prox_and_projection},
      {"moment oracle", moment_oracle},
      {"zero-step reduction to DCA", zero_step_identity},
      {"rho trade-off", rho_tradeoff},
  };
  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
