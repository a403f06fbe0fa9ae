#ifndef VOA_REPORT_HPP
#define VOA_REPORT_HPP

#include <string>
#include <vector>

namespace voa {

// One verification check. `anchor` is a stable audit identifier naming the
// mathematical fact being checked; reports embed it so runs can be compared
// across versions. Every failed check carries at least one concrete witness.
struct CheckResult {
  std::string name;
  std::string anchor;
  bool passed = true;
  long checked = 0;
  long skipped_truncated = 0;
  std::vector<std::string> witnesses;

  void fail(std::string witness) {
    passed = false;
    if (witnesses.size() < 16) witnesses.push_back(std::move(witness));
  }
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  const CheckResult* first_failure() const {
    for (const auto& c : checks)
      if (!c.passed) return &c;
    return nullptr;
  }
};

}  // namespace voa

#endif  // VOA_REPORT_HPP
