#include "kahler/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "kahler/classifier.hpp"
#include "kahler/report.hpp"
#include "kahler/scenario_io.hpp"
#include "kahler/selftest.hpp"

#ifndef KAHLERLAB_VERSION
#define KAHLERLAB_VERSION "0.0.0"
#endif

namespace kahler {

const char* tool_version() { return KAHLERLAB_VERSION; }

namespace {

struct ClassifyArgs {
  std::string path;
  std::string mode;
  std::string format = "text";
  std::optional<double> tol_gate;
  std::optional<double> tol_internal;
};

struct GenerateArgs {
  std::string kind;
  int n = 4;
  int k = 1;
  double mu = 1.0;
  double c = 1.0;
  std::uint64_t seed = 1;
  std::string ambient = "flat";
  bool traceless = false;
  bool commuting = false;
  std::string output;
};

int cmd_selftest(const SelftestOptions& opt, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<SuiteResult> results = run_selftest(opt);
  bool all = true;
  for (const SuiteResult& r : results) {
    all = all && r.passed;
    out << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(28) << r.name << " max " << std::scientific
        << std::setprecision(2) << r.max_defect << " / " << r.threshold << std::defaultfloat << "  "
        << std::fixed << std::setprecision(2) << r.seconds << "s" << std::defaultfloat << "  " << r.detail
        << "\n";
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << results.size() << " suites, " << (all ? "all passed" : "FAILURES") << " in " << std::fixed
      << std::setprecision(2) << total << "s" << std::defaultfloat << "\n";
  return all ? kExitOk : kExitSelftestFailure;
}

std::string read_all(std::istream& is) {
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int cmd_classify(const ClassifyArgs& a, std::ostream& out, std::ostream& err, std::istream& in) {
  std::string text;
  if (a.path == "-") {
    text = read_all(in);
  } else {
    std::ifstream f(a.path);
    if (!f) {
      err << "kahlerlab: cannot read " << a.path << "\n";
      return kExitInputRejected;
    }
    text = read_all(f);
  }

  const auto start = std::chrono::steady_clock::now();
  Scenario s;
  std::optional<Instance> inst;
  try {
    s = parse_scenario(text);
    inst.emplace(build_instance(s));
  } catch (const ScenarioError& e) {
    err << "kahlerlab: scenario rejected: " << e.what() << "\n";
    return kExitInputRejected;
  }

  Tolerances tol = s.tolerances.apply(Tolerances{});
  if (a.tol_gate) tol.gate = *a.tol_gate;
  if (a.tol_internal) tol.internal = *a.tol_internal;

  Report r;
  r.tool_version = tool_version();
  r.scenario_name = s.name;
  r.scenario_hash = scenario_hash(s);
  if (a.mode.empty() && inst->product) {
    r.mode = "product-splitting";
    r.verdict = classify_theorem_3(inst->point, *inst->product, tol);
  } else {
    const Mode mode = a.mode == "mc-semiparallel" ? Mode::kMcSemiparallel : Mode::kSemiparallel;
    r.mode = std::string(to_string(mode));
    r.verdict = classify_theorem_1_2(inst->point, mode, tol);
  }
  r.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << (a.format == "machine" ? render_machine(r) : render_text(r));
  return kExitOk;
}

int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  Scenario s;
  try {
    if (a.kind == "product_type") {
      s = gen_product_type_instance(a.n, a.c);
    } else if (a.kind == "totally_geodesic_product") {
      s = gen_totally_geodesic_product(a.n, a.k, a.mu);
    } else if (a.kind == "flat") {
      s = gen_flat_instance(a.n, a.seed);
    } else {
      RandomOptions opt;
      opt.ambient = a.ambient == "product"        ? AmbientKind::kProduct
                    : a.ambient == "constant_hsc" ? AmbientKind::kConstantHsc
                                                  : AmbientKind::kFlat;
      opt.k = a.k;
      opt.mu = a.mu;
      opt.traceless = a.traceless;
      opt.commuting = a.commuting;
      s = gen_random_instance(a.n, a.seed, opt);
    }
    (void)build_instance(s);
  } catch (const std::invalid_argument& e) {
    err << "kahlerlab: invalid generator parameters: " << e.what() << "\n";
    return kExitInputRejected;
  }
  const std::string text = serialize_scenario(s);
  if (a.output.empty() || a.output == "-") {
    out << text;
  } else {
    std::ofstream f(a.output, std::ios::binary);
    f << text;
    if (!f) {
      err << "kahlerlab: cannot write " << a.output << "\n";
      return kExitInputRejected;
    }
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err, std::istream& in) {
  CLI::App app{"Pointwise checks for totally real submanifolds of Kaehler manifolds", "kahlerlab"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  SelftestOptions st;
  CLI::App* selftest = app.add_subcommand("selftest", "Run the built-in identity suites");
  selftest->add_option("--filter", st.filter, "Run only suites whose name contains this text");
  selftest->add_flag("--sabotage-product-sign", st.sabotage_product_sign)->group("");

  ClassifyArgs ca;
  CLI::App* classify = app.add_subcommand("classify", "Classify a scenario file");
  classify->add_option("path", ca.path, "Scenario file, or - for standard input")->required();
  classify->add_option("--mode", ca.mode, "Semiparallel condition to test")
      ->check(CLI::IsMember({"semiparallel", "mc-semiparallel"}));
  classify->add_option("--format", ca.format, "Report format")->check(CLI::IsMember({"text", "machine"}));
  classify->add_option("--tol-gate", ca.tol_gate, "Gate tolerance")->check(CLI::PositiveNumber);
  classify->add_option("--tol-internal", ca.tol_internal, "Internal consistency tolerance")
      ->check(CLI::PositiveNumber);

  GenerateArgs ga;
  CLI::App* generate = app.add_subcommand("generate", "Write a generated scenario");
  generate->add_option("--kind", ga.kind, "Generator")
      ->required()
      ->check(CLI::IsMember({"product_type", "totally_geodesic_product", "random", "flat"}));
  generate->add_option("--n", ga.n, "Submanifold dimension")->capture_default_str();
  generate->add_option("--k", ga.k, "Complex dimension of factor one")->capture_default_str();
  generate->add_option("--mu", ga.mu, "Ambient holomorphic sectional curvature")->capture_default_str();
  generate->add_option("--c", ga.c, "Sectional curvature of the M^{n-1}(c) factor")->capture_default_str();
  generate->add_option("--seed", ga.seed, "Random seed")->capture_default_str();
  generate->add_option("--ambient", ga.ambient, "Ambient for random instances")
      ->check(CLI::IsMember({"flat", "product", "constant_hsc"}))
      ->capture_default_str();
  generate->add_flag("--traceless", ga.traceless, "Random instance with H = 0");
  generate->add_flag("--commuting", ga.commuting, "Random instance with diagonal shape operators");
  generate->add_option("-o,--output", ga.output, "Output path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputRejected;
  }

  try {
    if (*selftest) return cmd_selftest(st, out);
    if (*classify) return cmd_classify(ca, out, err, in);
    if (*generate) return cmd_generate(ga, out, err);
  } catch (const std::exception& e) {
    err << "kahlerlab: internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
  return kExitInternalError;
}

}  // namespace kahler
