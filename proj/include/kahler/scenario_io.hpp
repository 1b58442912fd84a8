#pragma once

// Scenario files: JSON documents, one field per line when written by the
// tool. Indices are 1-based on disk and 0-based in memory.

#include <string>
#include <string_view>

#include "kahler/classifier.hpp"

namespace kahler {

/// Strict parse: unknown fields, wrong types, version != 1 and invalid ranges
/// all throw ScenarioError with a "line N" or "field /path" diagnostic.
Scenario parse_scenario(std::string_view text);

/// Pretty-printed, fixed field order, shortest round-trip numbers, trailing
/// newline. parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& s);

/// 16 hex digits of FNV-1a over the compact canonical serialization.
std::string scenario_hash(const Scenario& s);

}  // namespace kahler
