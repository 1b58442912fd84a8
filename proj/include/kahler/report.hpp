#pragma once

#include <string>
#include <string_view>

#include "kahler/classifier.hpp"

namespace kahler {

struct Report {
  std::string tool = "kahlerlab";
  std::string tool_version;
  std::string scenario_name;
  std::string scenario_hash;
  std::string mode;  // semiparallel | mc-semiparallel | product-splitting
  Verdict verdict;
  double duration_seconds = 0.0;

  bool operator==(const Report&) const = default;
};

/// Stable JSON: fixed field order, shortest round-trip numbers. Non-finite
/// numbers are written as the strings "inf", "-inf" and "nan".
std::string render_machine(const Report& r);
/// Inverse of render_machine; throws std::invalid_argument on malformed input.
Report parse_machine(std::string_view text);

std::string render_text(const Report& r);

/// "PRODUCT_TYPE(c=1)", "PRODUCT_SPLIT(0.5, -0.5, k=4)", "FLAT", ...
std::string verdict_label(const Verdict& v);

}  // namespace kahler
