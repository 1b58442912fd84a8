#include "kahler/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>

namespace kahler {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void reject(const std::string& path, const std::string& what) {
  throw ScenarioError("field " + path + ": " + what);
}

void check_keys(const Json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) reject(path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) reject(path + "/" + key, "unknown field");
  }
}

const Json& require(const Json& obj, const std::string& path, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) reject(path + "/" + key, "missing");
  return *it;
}

double get_real(const Json& v, const std::string& path) {
  if (!v.is_number()) reject(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) reject(path, "must be finite");
  return x;
}

long long get_int(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) reject(path, "expected an integer");
  return v.get<long long>();
}

int get_index(const Json& v, const std::string& path, int n) {
  const long long i = get_int(v, path);
  if (i < 1 || i > n) reject(path, "index " + std::to_string(i) + " outside [1, " + std::to_string(n) + "]");
  return static_cast<int>(i - 1);
}

AmbientSpec parse_ambient(const Json& j) {
  const std::string path = "/ambient";
  check_keys(j, path, {"kind", "n", "k", "mu"});
  AmbientSpec a;
  const Json& kind = require(j, path, "kind");
  if (!kind.is_string()) reject(path + "/kind", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "flat") a.kind = AmbientKind::kFlat;
  else if (k == "product") a.kind = AmbientKind::kProduct;
  else if (k == "constant_hsc") a.kind = AmbientKind::kConstantHsc;
  else reject(path + "/kind", "unknown ambient kind \"" + k + "\"");

  const long long n = get_int(require(j, path, "n"), path + "/n");
  if (n < 2 || n > 12) reject(path + "/n", "n = " + std::to_string(n) + " outside [2, 12]");
  a.n = static_cast<int>(n);

  if (a.kind == AmbientKind::kProduct) {
    const long long kk = get_int(require(j, path, "k"), path + "/k");
    if (kk < 1 || kk > n - 1) reject(path + "/k", "k = " + std::to_string(kk) + " outside [1, n-1]");
    a.k = static_cast<int>(kk);
  } else if (j.contains("k")) {
    reject(path + "/k", "only allowed for a product ambient");
  }

  if (a.kind == AmbientKind::kFlat) {
    if (j.contains("mu") && get_real(j["mu"], path + "/mu") != 0.0) {
      reject(path + "/mu", "must be 0 for a flat ambient");
    }
  } else {
    a.mu = get_real(require(j, path, "mu"), path + "/mu");
    if (a.kind == AmbientKind::kProduct && a.mu == 0.0) {
      reject(path + "/mu", "must be nonzero for a product ambient");
    }
  }
  return a;
}

Scenario from_json(const Json& doc) {
  check_keys(doc, "", {"version", "name", "ambient", "frame", "h", "fixture", "tolerances", "seed"});
  const long long version = get_int(require(doc, "", "version"), "/version");
  if (version != 1) reject("/version", "unsupported version " + std::to_string(version));

  Scenario s;
  const Json& name = require(doc, "", "name");
  if (!name.is_string()) reject("/name", "expected a string");
  s.name = name.get<std::string>();
  s.ambient = parse_ambient(require(doc, "", "ambient"));
  const int n = s.ambient.n;
  const auto dim = static_cast<std::size_t>(2 * n);

  if (doc.contains("frame")) {
    const Json& f = doc["frame"];
    if (f.is_string()) {
      if (f.get<std::string>() != "canonical") reject("/frame", "expected \"canonical\" or a list of rows");
    } else if (f.is_array()) {
      if (f.size() != static_cast<std::size_t>(n)) reject("/frame", "expected " + std::to_string(n) + " rows");
      std::vector<Vector> rows;
      for (std::size_t r = 0; r < f.size(); ++r) {
        const std::string rp = "/frame/" + std::to_string(r);
        if (!f[r].is_array() || f[r].size() != dim) reject(rp, "expected " + std::to_string(dim) + " coordinates");
        Vector v(dim);
        for (std::size_t a = 0; a < dim; ++a) v[a] = get_real(f[r][a], rp + "/" + std::to_string(a));
        rows.push_back(std::move(v));
      }
      s.frame = std::move(rows);
    } else {
      reject("/frame", "expected \"canonical\" or a list of rows");
    }
  }

  const Json& h = require(doc, "", "h");
  if (!h.is_array()) reject("/h", "expected a list");
  for (std::size_t e = 0; e < h.size(); ++e) {
    const std::string ep = "/h/" + std::to_string(e);
    check_keys(h[e], ep, {"indices", "value"});
    const Json& idx = require(h[e], ep, "indices");
    if (!idx.is_array() || idx.size() != 3) reject(ep + "/indices", "expected [k, i, j]");
    CubicEntry c;
    for (std::size_t t = 0; t < 3; ++t) c.indices[t] = get_index(idx[t], ep + "/indices/" + std::to_string(t), n);
    c.value = get_real(require(h[e], ep, "value"), ep + "/value");
    s.h.push_back(c);
  }

  if (doc.contains("fixture")) {
    const Json& fx = doc["fixture"];
    if (!fx.is_array()) reject("/fixture", "expected a list");
    std::vector<CurvatureEntry> entries;
    for (std::size_t e = 0; e < fx.size(); ++e) {
      const std::string ep = "/fixture/" + std::to_string(e);
      check_keys(fx[e], ep, {"indices", "value"});
      const Json& idx = require(fx[e], ep, "indices");
      if (!idx.is_array() || idx.size() != 4) reject(ep + "/indices", "expected [i, j, k, l]");
      CurvatureEntry c;
      for (std::size_t t = 0; t < 4; ++t) c.indices[t] = get_index(idx[t], ep + "/indices/" + std::to_string(t), n);
      c.value = get_real(require(fx[e], ep, "value"), ep + "/value");
      entries.push_back(c);
    }
    s.fixture = std::move(entries);
  }

  if (doc.contains("tolerances")) {
    const Json& t = doc["tolerances"];
    check_keys(t, "/tolerances", {"gate", "internal", "eigen", "cluster"});
    auto read = [&](const char* key, std::optional<double>& slot) {
      if (!t.contains(key)) return;
      const std::string tp = std::string("/tolerances/") + key;
      const double v = get_real(t[key], tp);
      if (v <= 0.0) reject(tp, "must be positive");
      slot = v;
    };
    read("gate", s.tolerances.gate);
    read("internal", s.tolerances.internal);
    read("eigen", s.tolerances.eigen);
    read("cluster", s.tolerances.cluster);
  }

  if (doc.contains("seed")) {
    const Json& sd = doc["seed"];
    if (!sd.is_number_unsigned()) reject("/seed", "expected a non-negative integer");
    s.seed = sd.get<std::uint64_t>();
  }

  // Resolve once so that no accepted scenario fails later.
  (void)build_instance(s);
  return s;
}

Json to_json(const Scenario& s) {
  Json doc;
  doc["version"] = 1;
  doc["name"] = s.name;
  Json amb;
  amb["kind"] = std::string(to_string(s.ambient.kind));
  amb["n"] = s.ambient.n;
  if (s.ambient.kind == AmbientKind::kProduct) amb["k"] = s.ambient.k;
  if (s.ambient.kind != AmbientKind::kFlat) amb["mu"] = s.ambient.mu;
  doc["ambient"] = amb;
  if (s.frame) {
    Json rows = Json::array();
    for (const Vector& v : *s.frame) rows.push_back(Json(std::vector<double>(v.data().begin(), v.data().end())));
    doc["frame"] = rows;
  } else {
    doc["frame"] = "canonical";
  }
  Json h = Json::array();
  for (const CubicEntry& e : s.h) {
    h.push_back(Json{{"indices", {e.indices[0] + 1, e.indices[1] + 1, e.indices[2] + 1}}, {"value", e.value}});
  }
  doc["h"] = h;
  if (s.fixture) {
    Json fx = Json::array();
    for (const CurvatureEntry& e : *s.fixture) {
      fx.push_back(Json{{"indices", {e.indices[0] + 1, e.indices[1] + 1, e.indices[2] + 1, e.indices[3] + 1}},
                        {"value", e.value}});
    }
    doc["fixture"] = fx;
  }
  const ToleranceOverrides& t = s.tolerances;
  if (t.gate || t.internal || t.eigen || t.cluster) {
    Json tj = Json::object();
    if (t.gate) tj["gate"] = *t.gate;
    if (t.internal) tj["internal"] = *t.internal;
    if (t.eigen) tj["eigen"] = *t.eigen;
    if (t.cluster) tj["cluster"] = *t.cluster;
    doc["tolerances"] = tj;
  }
  if (s.seed) doc["seed"] = *s.seed;
  return doc;
}

// Line-per-entry layout: short leaf arrays and objects stay on one line.
void write_compactish(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
  auto is_leafy = [](const Json& v) {
    if (v.is_array()) {
      for (const Json& x : v)
        if (x.is_structured()) return false;
      return true;
    }
    if (v.is_object()) {
      for (const auto& [_, x] : v.items())
        if (x.is_object() || (x.is_array() && x.size() > 4)) return false;
      return v.size() <= 2;
    }
    return true;
  };
  if (is_leafy(j)) {
    std::string s = j.dump();
    if (j.is_array() || j.is_object()) {
      // add a space after separators for readability
      std::string spaced;
      bool in_string = false;
      for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
        spaced += c;
        if (!in_string && (c == ',' || c == ':')) spaced += ' ';
      }
      s = spaced;
    }
    out += s;
    return;
  }
  if (j.is_array()) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += inner;
      write_compactish(j[i], out, indent + 2);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += pad + "]";
    return;
  }
  out += "{\n";
  std::size_t i = 0;
  for (const auto& [key, v] : j.items()) {
    out += inner + Json(key).dump() + ": ";
    write_compactish(v, out, indent + 2);
    out += ++i < j.size() ? ",\n" : "\n";
  }
  out += pad + "}";
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    const std::size_t upto = std::min(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < upto; ++i)
      if (text[i] == '\n') ++line;
    throw ScenarioError("line " + std::to_string(line) + ": malformed document (" + e.what() + ")");
  }
  return from_json(doc);
}

std::string serialize_scenario(const Scenario& s) {
  std::string out;
  write_compactish(to_json(s), out, 0);
  out += '\n';
  return out;
}

std::string scenario_hash(const Scenario& s) {
  const std::string canonical = to_json(s).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace kahler
