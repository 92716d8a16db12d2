// pdca: decompose polynomials, solve DC programs and run MVSK experiments.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdca/cli.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string seed;
  std::string out;
  std::string method;
  std::string polynomial;
  std::vector<std::string> set;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "key=value configuration file");
  sub->add_option("--seed", o.seed, "random seed (overrides the config)");
  sub->add_option("--out", o.out, "output directory (overrides the config)");
  sub->add_option("--set", o.set, "extra key=value override, repeatable");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Power-sum DC decomposition and boosted DCA for polynomial optimization"};
  app.set_version_flag("--version", pdca::cli::version());
  app.require_subcommand(1);

  Overrides o;
  auto* dec = app.add_subcommand("decompose", "write the TPSDC/HDPSDC blocks of a polynomial");
  add_common(dec, o);
  dec->add_option("polynomial", o.polynomial, "polynomial file");
  dec->add_option("--method", o.method, "tpsdc or hdpsdc");

  auto* sol = app.add_subcommand("solve", "minimize a polynomial over a polyhedron");
  add_common(sol, o);
  sol->add_option("--method", o.method, "dca, bdca or bdcae");

  auto* mv = app.add_subcommand("mvsk", "mean-variance-skewness-kurtosis portfolio");
  add_common(mv, o);
  mv->add_option("--method", o.method, "dca, bdca or bdcae");

  auto* bench = app.add_subcommand("bench", "compare methods over MVSK instances");
  add_common(bench, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pdca::cli::exit_validation;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  pdca::cli::RunConfig cfg;
  try {
    if (!o.config.empty()) cfg = pdca::cli::RunConfig::load(o.config);
    for (const auto& kv : o.set) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw pdca::ValidationError("--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!o.seed.empty()) cfg.set("seed", o.seed);
    if (!o.out.empty()) cfg.set("out", std::filesystem::absolute(o.out).string());
    if (!o.polynomial.empty()) cfg.set("polynomial", std::filesystem::absolute(o.polynomial).string());
    if (!o.method.empty()) cfg.set(command == "decompose" ? "decomposition" : "method", o.method);
  } catch (const pdca::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return pdca::cli::exit_validation;
  }
  return pdca::cli::dispatch(command, cfg, std::cout, std::cerr);
}
