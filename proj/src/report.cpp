#include "kahler/report.hpp"

#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <sstream>

namespace kahler {

using Json = nlohmann::ordered_json;

namespace {

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x == 0.0 ? 0.0 : x;
}

double read_number(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
  }
  throw std::invalid_argument("report: expected a number, got " + j.dump());
}

std::string short_num(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

}  // namespace

std::string verdict_label(const Verdict& v) {
  std::string out(to_string(v.conclusion));
  if (v.conclusion == Conclusion::kProductType) {
    if (const auto c = v.parameter("c")) out += "(c=" + short_num(*c) + ")";
  } else if (v.conclusion == Conclusion::kProductSplit) {
    const double mu = v.parameter("mu").value_or(0.0);
    out += "(" + short_num(mu / 4.0) + ", " + short_num(-mu / 4.0) + ", k=" +
           short_num(v.parameter("k").value_or(0.0)) + ")";
  }
  return out;
}

std::string render_machine(const Report& r) {
  Json doc;
  doc["tool"] = r.tool;
  doc["tool_version"] = r.tool_version;
  doc["scenario"] = Json{{"name", r.scenario_name}, {"hash", r.scenario_hash}};
  doc["theorem"] = r.verdict.theorem;
  doc["mode"] = r.mode;
  Json verdict;
  verdict["conclusion"] = std::string(to_string(r.verdict.conclusion));
  verdict["label"] = verdict_label(r.verdict);
  verdict["fixture"] = r.verdict.fixture;
  Json params = Json::array();
  for (const auto& [name, value] : r.verdict.parameters) params.push_back(Json{{"name", name}, {"value", number(value)}});
  verdict["parameters"] = params;
  doc["verdict"] = verdict;
  Json flags = Json::array();
  for (const Flag& f : r.verdict.flags) {
    flags.push_back(Json{{"name", f.name}, {"value", f.value}, {"defect", number(f.defect)}});
  }
  doc["flags"] = flags;
  Json residuals = Json::array();
  for (const NamedValues& nv : r.verdict.residuals) {
    Json values = Json::array();
    for (double x : nv.values) values.push_back(number(x));
    residuals.push_back(Json{{"name", nv.name}, {"values", values}});
  }
  doc["residuals"] = residuals;
  doc["notes"] = r.verdict.notes;
  doc["duration_seconds"] = number(r.duration_seconds);
  return doc.dump(2) + "\n";
}

Report parse_machine(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("report: ") + e.what());
  }
  try {
    Report r;
    r.tool = doc.at("tool").get<std::string>();
    r.tool_version = doc.at("tool_version").get<std::string>();
    r.scenario_name = doc.at("scenario").at("name").get<std::string>();
    r.scenario_hash = doc.at("scenario").at("hash").get<std::string>();
    r.verdict.theorem = doc.at("theorem").get<std::string>();
    r.mode = doc.at("mode").get<std::string>();
    const Json& verdict = doc.at("verdict");
    const auto conclusion = conclusion_from_string(verdict.at("conclusion").get<std::string>());
    if (!conclusion) throw std::invalid_argument("report: unknown conclusion");
    r.verdict.conclusion = *conclusion;
    r.verdict.fixture = verdict.at("fixture").get<bool>();
    for (const Json& p : verdict.at("parameters")) {
      r.verdict.parameters.emplace_back(p.at("name").get<std::string>(), read_number(p.at("value")));
    }
    for (const Json& f : doc.at("flags")) {
      r.verdict.flags.push_back({f.at("name").get<std::string>(), f.at("value").get<bool>(),
                                 read_number(f.at("defect"))});
    }
    for (const Json& nv : doc.at("residuals")) {
      NamedValues out{nv.at("name").get<std::string>(), {}};
      for (const Json& x : nv.at("values")) out.values.push_back(read_number(x));
      r.verdict.residuals.push_back(std::move(out));
    }
    r.verdict.notes = doc.at("notes").get<std::vector<std::string>>();
    r.duration_seconds = read_number(doc.at("duration_seconds"));
    return r;
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("report: ") + e.what());
  }
}

std::string render_text(const Report& r) {
  std::ostringstream os;
  os << "scenario   " << r.scenario_name << "  [" << r.scenario_hash << "]\n";
  os << "theorem    " << r.verdict.theorem << " (" << r.mode << ")\n";
  os << "verdict    " << verdict_label(r.verdict);
  if (r.verdict.conclusion != Conclusion::kIndeterminate &&
      r.verdict.conclusion != Conclusion::kHypothesisViolation) {
    os << "  pointwise-consistent";
  }
  if (r.verdict.fixture) os << "  [fixture]";
  os << "\n\nhypotheses\n";
  for (const Flag& f : r.verdict.flags) {
    os << "  " << std::left << std::setw(18) << f.name << std::setw(6) << (f.value ? "yes" : "no")
       << "defect " << std::setprecision(3) << std::scientific << f.defect << std::defaultfloat << "\n";
  }
  if (!r.verdict.parameters.empty()) {
    os << "\nparameters\n";
    for (const auto& [name, value] : r.verdict.parameters) {
      os << "  " << std::left << std::setw(30) << name << std::setprecision(12) << value << "\n";
    }
  }
  if (!r.verdict.residuals.empty()) {
    os << "\nresiduals\n";
    for (const NamedValues& nv : r.verdict.residuals) {
      double worst = 0.0;
      for (double x : nv.values) worst = std::max(worst, std::abs(x));
      os << "  " << std::left << std::setw(30) << nv.name << "max|.| " << std::setprecision(3)
         << std::scientific << worst << std::defaultfloat << "  (" << nv.values.size() << " values)\n";
    }
  }
  if (!r.verdict.notes.empty()) {
    os << "\nnotes\n";
    for (const std::string& n : r.verdict.notes) os << "  - " << n << "\n";
  }
  os << "\n" << r.tool << " " << r.tool_version << "  " << std::setprecision(3) << r.duration_seconds << " s\n";
  return os.str();
}

}  // namespace kahler
