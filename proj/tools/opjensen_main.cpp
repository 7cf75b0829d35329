#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "opjensen/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"numerical checks for Jensen inequalities of conditional expectations"};
  app.require_subcommand(1);

  // check
  auto* check = app.add_subcommand("check", "run the conditional Jensen check on an instance file");
  std::string check_path;
  std::optional<std::string> check_out;
  std::optional<double> atol, rtol;
  check->add_option("path", check_path, "instance JSON file")->required();
  check->add_option("--out", check_out, "write the report here instead of stdout");
  check->add_option("--tol-atol", atol, "absolute margin tolerance");
  check->add_option("--tol-rtol", rtol, "relative margin tolerance");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  opjensen::GenParams gen_params;
  std::optional<std::string> gen_out;
  gen->add_option("--seed", gen_params.seed, "generator seed");
  gen->add_option("--dim", gen_params.dim, "matrix dimension (<= 64)");
  gen->add_option("--n", gen_params.n, "tuple arity (<= 4)");
  gen->add_option("--atoms", gen_params.atoms, "partition size");
  gen->add_option("--field-size", gen_params.field_size, "field atom count (<= 64)");
  gen->add_option("--function", gen_params.function,
                  "catalog name (optionally name:param) or expression");
  gen->add_option("--out", gen_out, "write the instance here instead of stdout");

  // search
  auto* search = app.add_subcommand("search", "randomized counterexample search");
  opjensen::SearchParams search_params;
  std::optional<std::string> search_out;
  search->add_option("--function", search_params.function, "function under test")->required();
  search->add_option("--cube", search_params.cube, "domain, e.g. \"-2,2\" or \"-1,1;-1,1\"");
  std::optional<int> search_n;
  search->add_option("--n", search_n, "tuple arity (default: inferred)");
  search->add_option("--dim", search_params.dims, "matrix dimensions to sample (repeatable)");
  search->add_option("--trials", search_params.trials, "trial budget");
  search->add_option("--seed", search_params.seed, "search seed");
  search->add_option("--tol-atol", search_params.overrides.atol, "absolute margin tolerance");
  search->add_option("--tol-rtol", search_params.overrides.rtol, "relative margin tolerance");
  search->add_option("--out", search_out, "write a witness instance here instead of stdout");

  // selftest
  auto* selftest = app.add_subcommand("selftest", "run every invariant suite");
  opjensen::SelftestConfig st_config;
  bool st_serial = false;
  selftest->add_option("--seed", st_config.seed, "suite seed");
  selftest->add_option("--scale", st_config.scale, "trial-count multiplier");
  selftest->add_flag("--serial", st_serial, "disable the parallel trial loops");

  // calc
  auto* calc = app.add_subcommand("calc", "print intermediate quantities for an instance");
  std::string calc_path;
  calc->add_option("path", calc_path, "instance JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) {
    opjensen::CheckOverrides overrides{atol, rtol};
    return opjensen::cmd_check(check_path, overrides, check_out, std::cout, std::cerr);
  }
  if (gen->parsed()) return opjensen::cmd_gen(gen_params, gen_out, std::cout, std::cerr);
  if (search->parsed()) {
    search_params.n = search_n;
    return opjensen::cmd_search(search_params, search_out, std::cout, std::cerr);
  }
  if (selftest->parsed()) {
    if (st_serial) st_config.mode = opjensen::ExecMode::serial;
    return opjensen::cmd_selftest(st_config, std::cout, std::cerr);
  }
  if (calc->parsed()) return opjensen::cmd_calc(calc_path, std::cout, std::cerr);
  return 2;
}
