#include "m0n/cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "m0n/basis.hpp"
#include "m0n/cohft.hpp"
#include "m0n/errors.hpp"
#include "m0n/intersection.hpp"
#include "m0n/json_io.hpp"
#include "m0n/keel_ring.hpp"
#include "m0n/trees.hpp"
#include "m0n/verify.hpp"

namespace m0n::cli {

namespace {

struct CommandConfig {
  std::string output;
  std::string format = "json";
  bool quiet = false;

  int n = 0;
  int edges = 0;
  int order = 0;
  bool oracle = false;
  bool inverse = false;
  std::string suite = "all";
  std::uint64_t seed = SuiteOptions{}.seed;
  int samples = SuiteOptions{}.samples;
  std::string left;
  std::string right;
};


using json_io::json;

void emit(const CommandConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output);
  if (!f) throw input_error("cannot write " + cfg.output);
  f << text;
}

void require_json(const CommandConfig& cfg, const char* cmd) {
  if (cfg.format != "json") throw input_error(std::string("--format csv is only available for gram, not ") + cmd);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_trees(const CommandConfig& cfg, std::ostream& out) {
  require_json(cfg, "trees");
  const auto trees = enumerate_stable_trees(cfg.n, cfg.edges);
  json fams = json::array();
  for (const auto& t : trees) fams.push_back(json_io::family_json(t.sets()));
  emit(cfg, dump({{"n", cfg.n}, {"edges", cfg.edges}, {"count", trees.size()}, {"families", fams}}), out);
  return kOk;
}

int cmd_intersect(const CommandConfig& cfg, std::ostream& out, std::ostream& err) {
  require_json(cfg, "intersect");
  const DivisorMonomial a = json_io::monomial_from_json(json_io::read_file(cfg.left));
  const DivisorMonomial b = json_io::monomial_from_json(json_io::read_file(cfg.right));
  if (a.n() != b.n()) throw input_error("the two monomials have different n");
  const int n = a.n();
  if (a.degree() + b.degree() != n - 3 && !cfg.quiet)
    err << "warning: degrees " << a.degree() << " + " << b.degree() << " != n-3 = " << n - 3 << ", the pairing is 0\n";
  const Rational value = pairing(a, b);
  json result = {{"n", n}, {"value", json_io::rational_json(value)}};
  int code = kOk;
  if (cfg.oracle) {
    KeelRing ring(n);
    const Rational ref = ring.oracle_pairing(a, b);
    result["oracle"] = json_io::rational_json(ref);
    result["agree"] = ref == value;
    if (ref != value) code = kVerificationFailure;
  }
  emit(cfg, dump(result), out);
  return code;
}

int cmd_gram(const CommandConfig& cfg, std::ostream& out) {
  const PairingMatrices pm = gram(cfg.n);
  if (cfg.inverse && !(pm.M * pm.Minv).is_identity()) throw verification_error("M * Minv is not the identity");
  if (cfg.format == "csv") {
    std::string text = json_io::matrix_csv(pm, pm.M);
    if (cfg.inverse) text += "\n" + json_io::matrix_csv(pm, pm.Minv);
    emit(cfg, text, out);
  } else {
    emit(cfg, dump(json_io::gram_json(pm, cfg.inverse)), out);
  }
  return kOk;
}

int cmd_basis(const CommandConfig& cfg, std::ostream& out) {
  require_json(cfg, "basis");
  const auto basis = enumerate_basis(cfg.n);
  std::vector<int> counts(cfg.n - 2, 0);
  json list = json::array();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& b = basis[i];
    ++counts[b.degree()];
    const StarredElement s = star(b);
    json e = json_io::basis_element_json(b);
    e["index"] = i;
    e["name"] = b.to_string();
    e["degree"] = b.degree();
    e["star"] = s.element.to_string();
    e["star_sign"] = s.sign;
    list.push_back(e);
  }
  emit(cfg, dump({{"n", cfg.n}, {"dimensions", counts}, {"basis", list}}), out);
  return kOk;
}

int cmd_tensor(const CommandConfig& cfg, std::ostream& out) {
  require_json(cfg, "tensor");
  const FrobeniusData f1 = json_io::frobenius_from_json(json_io::read_file(cfg.left));
  const FrobeniusData f2 = json_io::frobenius_from_json(json_io::read_file(cfg.right));
  if (cfg.order < 3) throw input_error("--order must be at least 3");
  GramCache cache;
  emit(cfg, dump(json_io::potential_json(kunneth_potential(f1, f2, cfg.order, cache))), out);
  return kOk;
}

int cmd_verify(const CommandConfig& cfg, std::ostream& out, std::ostream& err) {
  require_json(cfg, "verify");
  SuiteOptions opt;
  opt.seed = cfg.seed;
  opt.samples = cfg.samples;
  const auto results = run_suite(cfg.n, cfg.suite, opt);
  json checks = json::array();
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.passed;
    checks.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    if (!cfg.quiet) err << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
  }
  emit(cfg, dump({{"n", cfg.n}, {"suite", cfg.suite}, {"passed", ok}, {"checks", checks}}), out);
  return ok ? kOk : kVerificationFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CommandConfig cfg;
  CLI::App app{"Intersection numbers on M_{0,n}, tree bases and Kunneth products of CohFTs"};
  app.require_subcommand(1);
  app.add_option("--output,-o", cfg.output, "Write the result to this file instead of stdout");
  app.add_option("--format", cfg.format, "Output format for matrices")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--quiet,-q", cfg.quiet, "Suppress warnings and progress lines");

  auto* trees = app.add_subcommand("trees", "List stable n-trees with a given number of edges");
  trees->add_option("--n", cfg.n, "Number of marked points")->required();
  trees->add_option("--edges", cfg.edges, "Number of edges")->required();

  auto* intersect = app.add_subcommand("intersect", "Pair two divisor monomials");
  intersect->add_option("left", cfg.left, "Monomial JSON file")->required();
  intersect->add_option("right", cfg.right, "Monomial JSON file")->required();
  intersect->add_flag("--oracle", cfg.oracle, "Recompute through ring rewriting and compare");

  auto* gramc = app.add_subcommand("gram", "Gram matrix of the tree basis");
  gramc->add_option("--n", cfg.n, "Number of marked points")->required();
  gramc->add_flag("--inverse", cfg.inverse, "Include the inverse matrix");

  auto* basis = app.add_subcommand("basis", "List the tree basis in its total order");
  basis->add_option("--n", cfg.n, "Number of marked points")->required();

  auto* tensor = app.add_subcommand("tensor", "Potential of the tensor product of two theories");
  tensor->add_option("left", cfg.left, "Frobenius data JSON file")->required();
  tensor->add_option("right", cfg.right, "Frobenius data JSON file")->required();
  tensor->add_option("--order", cfg.order, "Truncation order of the potential")->required();

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("--n", cfg.n, "Number of marked points")->required();
  verify->add_option("--suite", cfg.suite, "Suite name")->check(CLI::IsMember(suite_names()));
  verify->add_option("--seed", cfg.seed, "Seed for sampled comparisons");
  verify->add_option("--samples", cfg.samples, "Number of sampled pairs above the exhaustive range");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kInputError;
  }

  try {
    if (*trees) return cmd_trees(cfg, out);
    if (*intersect) return cmd_intersect(cfg, out, err);
    if (*gramc) return cmd_gram(cfg, out);
    if (*basis) return cmd_basis(cfg, out);
    if (*tensor) return cmd_tensor(cfg, out);
    if (*verify) return cmd_verify(cfg, out, err);
  } catch (const input_error& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const capability_error& e) {
    err << "capability error: " << e.what() << "\n";
    return kCapabilityError;
  } catch (const verification_error& e) {
    err << "verification failure: " << e.what() << "\n";
    return kVerificationFailure;
  }
  return kInputError;
}

}  // namespace m0n::cli
