#ifndef BOHM_SELFTEST_HPP
#define BOHM_SELFTEST_HPP

#include <ostream>
#include <string>
#include <vector>

namespace bohm {

struct CriterionResult {
  int number = 0;
  std::string title;
  bool passed = false;
  std::string detail;
};

/// Run the acceptance suite: every criterion at its pinned tolerance, one
/// pass/fail line each.  `filter` restricts to criteria whose title contains
/// the substring; `threads` caps the worker count (0 = hardware).
std::vector<CriterionResult> run_acceptance(const std::string& filter, int threads,
                                            bool verbose, std::ostream& log);

} // namespace bohm

#endif
