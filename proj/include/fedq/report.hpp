#pragma once

#include <string>
#include <vector>

namespace fedq {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

using CheckReport = std::vector<CheckResult>;

inline bool all_pass(const CheckReport& r) {
  for (const auto& c : r) {
    if (!c.pass) return false;
  }
  return true;
}

}  // namespace fedq
