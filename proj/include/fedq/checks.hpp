#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fedq/geometry.hpp"
#include "fedq/report.hpp"

namespace fedq {

class ConnectionCache;

// Collects the outcome of many identities inside one check.
class Tally {
 public:
  void expect(bool ok, const std::string& what);
  bool pass() const { return failed_ == 0 && total_ > 0; }
  std::string summary() const;

 private:
  int total_ = 0;
  int failed_ = 0;
  std::vector<std::string> first_failures_;
};

struct Check {
  std::string name;
  std::function<Tally()> run;
  double time_limit = 0;  // seconds, 0 = none
};

// Runs the checks on a worker pool; the report keeps the input order.
CheckReport run_checks(const std::vector<Check>& checks, int threads = 0);

struct SuiteOptions {
  std::vector<GeometryPtr> geometries;  // empty = the four presets
  std::vector<std::string> alphas;      // empty = zero, hbar_omega, berezin_toeplitz
  int maxY = 5;
  std::optional<Scalar> level;
  std::uint64_t seed = 1;
  const ConnectionCache* cache = nullptr;
};

// geometry, fedosov, flat, fock, moment, acceptance, all.
const std::vector<std::string>& suite_names();
std::vector<Check> suite_checks(const std::string& suite, const SuiteOptions& o);
// The ten acceptance criteria, named A1..A10.
std::vector<Check> acceptance_checks(std::uint64_t seed);

// Truncated printable form of a counterexample.
std::string clip(const std::string& s, std::size_t max = 300);

}  // namespace fedq
