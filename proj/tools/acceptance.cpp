#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "fedq/checks.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Runs the acceptance criteria A1..A10"};
  std::uint64_t seed = 1;
  int threads = 0;
  app.add_option("--seed", seed, "seed of the random-section generator");
  app.add_option("--threads", threads, "worker threads (0 = hardware)");
  CLI11_PARSE(app, argc, argv);

  auto checks = fedq::acceptance_checks(seed);
  auto report = fedq::run_checks(checks, threads);
  std::cout << "seed " << seed << "\n";
  bool ok = true;
  for (const auto& r : report) {
    ok = ok && r.pass;
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f s", r.seconds);
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << secs << "; " << r.detail << ")\n";
  }
  return ok ? 0 : 1;
}
