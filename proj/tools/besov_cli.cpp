#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "besov/scenario.hpp"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::string out = ".";
  std::string format = "json";
  int jobs = 1;
};

void add_common(CLI::App* cmd, Common& c, bool config_required) {
  auto* opt = cmd->add_option("--config", c.config, "scenario file (directory for suite)");
  if (config_required) opt->required();
  cmd->add_option("--seed", c.seed, "override the scenario seed");
  cmd->add_option("--tolerance", c.tolerance, "override the verification tolerance");
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
  cmd->add_option("--format", c.format, "stdout format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  cmd->add_option("--jobs", c.jobs, "scenarios run in parallel")->check(CLI::PositiveNumber)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Besov-space multipliers, Gaussian functionals and extrapolation checks on periodic grids"};
  app.require_subcommand(1);
  Common c;
  std::optional<std::string> operation;

  const std::pair<const char*, const char*> plain[] = {
      {"partition", "Littlewood-Paley partition and its exactness"},
      {"besov-norm", "Besov norm of a test function"},
      {"multiplier", "randomized L^p -> L^q multiplier norm estimate"},
      {"gamma", "type, cotype, gamma-bound and gamma-norm estimates"},
      {"hormander", "Hormander integral condition of a truncated kernel"},
      {"mihlin", "Mihlin shell conditions of a symbol and its adjoint"},
      {"cz", "Calderon-Zygmund decomposition checks"},
      {"weak-type", "weak type (1, a) bound"},
      {"sweep", "norm sweep along 1/p - 1/q = 1/r"},
      {"sharpness", "growth of the smoothing witness per dyadic level"},
      {"run", "any scenario, operation taken from the config"}};
  for (const auto& [name, help] : plain) {
    auto* cmd = app.add_subcommand(name, help);
    add_common(cmd, c, true);
    std::string op = name;
    cmd->callback([&operation, op] {
      if (op != "run") operation = op;
    });
  }

  auto* verify = app.add_subcommand("verify", "verify one of the quantitative bounds");
  std::string which;
  verify->add_option("check", which, "bound to verify")
      ->required()
      ->check(CLI::IsMember({"thm44", "thm45", "thm46", "prop34", "prop43", "lemma42"}));
  add_common(verify, c, true);
  verify->callback([&] { operation = "verify." + which; });

  auto* suite = app.add_subcommand("suite", "run every scenario of a directory");
  std::string dir;
  suite->add_option("dir", dir, "scenario directory");
  add_common(suite, c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  besov::RunOverrides overrides{c.seed, c.tolerance};
  if (suite->parsed()) {
    std::string path = dir.empty() ? c.config : dir;
    if (path.empty()) {
      std::cerr << "error: suite needs a scenario directory\n";
      return 1;
    }
    return besov::run_suite(path, overrides, c.out, c.jobs, std::cout, std::cerr);
  }
  auto format = c.format == "csv" ? besov::OutputFormat::csv : besov::OutputFormat::json;
  return besov::run_scenario(c.config, overrides, c.out, format, std::cout, std::cerr, operation);
}
