// Benchmark comparing the serial reference kernels against the OpenMP sweeps
// on the heavy verification loops.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "voa/cli.hpp"
#include "voa/reconstruct.hpp"
#include "voa/unitarity.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(const std::function<void()>& fn) {
  auto start = Clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Row {
  std::string name;
  double serial_ms;
  double parallel_ms;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP timing of the verification kernels"};
  int depth = 8;
  int repeats = 1;
  app.add_option("--depth", depth, "Heisenberg truncation depth (default 8)");
  app.add_option("--repeats", repeats, "repetitions per measurement");
  CLI11_PARSE(app, argc, argv);

  std::printf("building heisenberg model at depth %d ...\n", depth);
  voa::Model model = voa::heisenberg(depth);
  voa::VAStructure va = voa::build_Y(model.space, model.generators);
  std::printf("total dimension %d, threads %d\n", model.space->total_dim(),
              voa::max_threads());

  std::vector<Row> rows;
  auto bench = [&](const std::string& name, auto&& fn) {
    double serial = 0.0, parallel = 0.0;
    for (int r = 0; r < repeats; ++r) {
      serial += time_ms([&] { fn(voa::ExecMode::serial); });
      parallel += time_ms([&] { fn(voa::ExecMode::parallel); });
    }
    rows.push_back({name, serial / repeats, parallel / repeats});
  };

  bench("axiom_suite", [&](voa::ExecMode mode) { voa::axiom_suite(va, mode); });
  bench("invariant_form_check",
        [&](voa::ExecMode mode) { voa::invariant_form_check(va, model.theta, mode); });

  std::printf("\n%-24s %12s %12s %9s\n", "kernel", "serial (ms)", "openmp (ms)", "speedup");
  for (const auto& row : rows)
    std::printf("%-24s %12.1f %12.1f %8.2fx\n", row.name.c_str(), row.serial_ms,
                row.parallel_ms, row.serial_ms / (row.parallel_ms > 0 ? row.parallel_ms : 1));
  return 0;
}
