// Compares the serial reference paths against the OpenMP trial loops.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "opjensen/convexfn.hpp"
#include "opjensen/jensen.hpp"
#include "opjensen/parallel.hpp"
#include "opjensen/selftest.hpp"

namespace {

using opjensen::ExecMode;

double time_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const std::string& name, const std::function<void(ExecMode)>& run) {
  const double serial = time_ms([&] { run(ExecMode::serial); });
  const double parallel = time_ms([&] { run(ExecMode::parallel); });
  std::printf("%-28s %10.1f ms %10.1f ms %8.2fx\n", name.c_str(), serial, parallel,
              serial / parallel);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", opjensen::max_threads());
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  row("convexity_probe", [](ExecMode mode) {
    const auto f = opjensen::ScalarFunction::parse("log(exp(x1) + exp(x2)) + x1^2", 2);
    const opjensen::CubeDomain dom({{-2.0, 2.0}, {-2.0, 2.0}});
    (void)opjensen::midpoint_convexity_probe(f, dom, 400000, 42, mode);
  });

  row("counterexample_search", [](ExecMode mode) {
    opjensen::SearchConfig config;
    config.dims = {6};
    config.trials = 4000;
    config.seed = 123;
    config.mode = mode;
    const auto f = opjensen::ScalarFunction::parse("x1^2", 1);
    const opjensen::CubeDomain dom({{-2.0, 2.0}});
    (void)opjensen::search_counterexample(f, dom, config);  // exhausts the budget
  });

  row("convex_check_suite", [](ExecMode mode) {
    opjensen::SelftestConfig config;
    config.scale = 0.2;
    config.mode = mode;
    (void)opjensen::run_suite("jensen.convex_suite", config);
  });

  row("adjointness_suite", [](ExecMode mode) {
    opjensen::SelftestConfig config;
    config.mode = mode;
    (void)opjensen::run_suite("expectation.adjointness", config);
  });

  return 0;
}
