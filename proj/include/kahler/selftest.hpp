#pragma once

#include <string>
#include <vector>

namespace kahler {

struct SuiteResult {
  std::string name;
  bool passed = false;
  double max_defect = 0.0;  // worst measured quantity that must stay below `threshold`
  double threshold = 0.0;
  std::string detail;
  double seconds = 0.0;
};

struct SelftestOptions {
  std::string filter;  // substring of the suite name; empty runs all
  /// Feeds the printed-sign product curvature to the product oracle suite.
  bool sabotage_product_sign = false;
};

std::vector<std::string> selftest_suite_names();
std::vector<SuiteResult> run_selftest(const SelftestOptions& opt = {});

}  // namespace kahler
