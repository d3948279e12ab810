#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"

#include "isoclass/analyze.hpp"
#include "isoclass/classify.hpp"
#include "isoclass/error.hpp"
#include "isoclass/json_io.hpp"
#include "isoclass/sample.hpp"
#include "isoclass/synthesize.hpp"

namespace {

using namespace isoclass;
using json_io::Json;

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kNotIsometry = 3;
constexpr int kIndeterminate = 4;

/// Numeric warnings escape through this so that the report is written first.
struct MarginWarning {
  Diagnostic first;
};

std::string read_text(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path);
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::string& path) { return json_io::parse(read_text(path)); }

/// Writes through a temporary file in the target directory and renames it,
/// so readers never see a partial result.
void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + path);
    out << text;
    out.flush();
    if (!out) throw InvalidInput("cannot write " + path);
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw InvalidInput("cannot write " + path);
  }
}

void write_json(const std::string& path, const Json& j) { write_text(path, json_io::dump(j)); }

void require_valid(const IsometryInvariant& inv) {
  auto v = validate_invariant(inv);
  if (v.empty()) return;
  std::string msg = "invalid invariant:";
  for (const auto& s : v) msg += "\n  " + s;
  throw InvalidInput(msg);
}

IsometryInvariant read_invariant(const std::string& path) {
  auto inv = json_io::invariant_from_json(read_json(path));
  require_valid(inv);
  return inv;
}

struct AnalyzeArgs {
  std::string matrix, gram, factors, out = "-";
  bool numeric = false;
  ToleranceProfile tol;
};

void cmd_analyze(const AnalyzeArgs& a) {
  if (a.numeric) {
    if (!a.factors.empty()) throw InvalidInput("--factors applies to the exact path only");
    NumericIsometry iso{json_io::float_mat_from_json(read_json(a.matrix)), json_io::float_mat_from_json(read_json(a.gram))};
    spdlog::info("numeric analysis of a {}-dimensional pair", iso.n());
    auto rep = analyze_numeric(iso, a.tol);
    write_json(a.out, json_io::to_json(rep));
    if (!rep.diagnostics.empty()) throw MarginWarning{rep.diagnostics.front()};
    return;
  }
  ExactIsometry iso{json_io::mat_from_json(read_json(a.matrix)), json_io::mat_from_json(read_json(a.gram))};
  std::optional<std::vector<Poly>> factors;
  if (!a.factors.empty()) factors = json_io::factors_from_json(read_json(a.factors));
  spdlog::info("exact analysis of a {}-dimensional pair", iso.matrix.n());
  write_json(a.out, json_io::to_json(analyze_exact(iso, factors)));
}

void cmd_synthesize(const std::string& in, const std::string& out) {
  write_json(out, json_io::to_json(synthesize_isometry(read_invariant(in))));
}

void cmd_decide(const std::string& in, const std::string& method, std::size_t cap, const std::string& out) {
  auto inv = read_invariant(in);
  const bool closed = method != "enumerate";
  const bool enumer = method != "closed-form";
  RigidityReport r;
  if (enumer) {
    r = compare_methods(inv, cap);
  } else {
    r.closed_form_rigid = rigid_closed_form(inv);
  }
  write_json(out, json_io::to_json(r, closed, enumer));
}

void cmd_enumerate(const std::string& in, int pos, int neg, bool count_only, const std::string& out) {
  auto spec = json_io::glclass_from_json(read_json(in));
  if (pos < 0 || neg < 0) throw InvalidInput("--pos and --neg must be non-negative");
  Signature total{pos, neg};
  if (count_only) {
    Integer c = count_classes(spec, total);
    Json j;
    j["count"] = c.fits_slong_p() ? Json(c.get_si()) : Json(c.get_str());
    write_json(out, j);
    return;
  }
  Json arr = Json::array();
  for (const auto& inv : enumerate_classes(spec, total)) arr.push_back(json_io::to_json(inv));
  write_json(out, arr);
}

void cmd_compare(const std::string& pa, const std::string& pb, const std::string& out) {
  auto a = read_invariant(pa);
  auto b = read_invariant(pb);
  Json j;
  j["gl_conjugate"] = gl_conjugate(a, b);
  j["o_conjugate"] = o_conjugate(a, b);
  write_json(out, j);
}

/// Random synthesize/analyze round trips, exact and numeric.
void cmd_selfcheck(std::uint64_t seed, int count, int max_dim, const std::string& out) {
  if (count < 0 || max_dim < 1) throw InvalidInput("--count must be >= 0 and --max-dim >= 1");
  std::mt19937_64 rng(seed);
  SampleOptions opt;
  opt.max_dim = max_dim;
  Json failures = Json::array();
  auto fail = [&](int i, const char* check, const IsometryInvariant& inv) {
    spdlog::warn("selfcheck instance {} failed {}", i, check);
    failures.push_back({{"index", i}, {"check", check}, {"invariant", json_io::to_json(inv)}});
  };
  for (int i = 0; i < count; ++i) {
    auto inv = random_invariant(rng, opt);
    auto canon = canonicalize(inv);
    auto iso = synthesize_isometry(inv);
    if (!is_isometry(iso.matrix, iso.gram)) fail(i, "is_isometry", inv);
    if (analyze_exact(iso) != canon) fail(i, "exact round trip", inv);
    if (analyze_exact(transport_similarity(iso, random_unimodular(iso.matrix.n(), rng))) != canon)
      fail(i, "transport", inv);
    try {
      auto rep = analyze_numeric(to_numeric(iso));
      if (rep.invariant != canon || !rep.diagnostics.empty()) fail(i, "numeric round trip", inv);
    } catch (const Indeterminate&) {
      fail(i, "numeric round trip", inv);
    }
  }
  Json j;
  j["seed"] = seed;
  j["count"] = count;
  j["ok"] = failures.empty();
  j["failures"] = std::move(failures);
  write_json(out, j);
}

void setup_logging() {
  auto logger = spdlog::stderr_logger_mt("isoclass");
  logger->set_pattern("isoclass [%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* lv = std::getenv("ISOCLASS_LOG")) {
    std::string s(lv);
    if (s == "error") spdlog::set_level(spdlog::level::err);
    else if (s == "warn") spdlog::set_level(spdlog::level::warn);
    else if (s == "info") spdlog::set_level(spdlog::level::info);
    else if (s == "debug") spdlog::set_level(spdlog::level::debug);
  }
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Classify isometries of real quadratic spaces up to orthogonal conjugacy"};
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Invariant of a (matrix, Gram) pair");
  analyze->add_option("--matrix", an.matrix, "Isometry matrix JSON")->required();
  analyze->add_option("--gram", an.gram, "Gram matrix JSON")->required();
  analyze->add_option("--factors", an.factors, "Irreducible factors of the characteristic polynomial");
  analyze->add_flag("--numeric", an.numeric, "Floating-point path");
  analyze->add_option("--tol-orthogonality", an.tol.orthogonality);
  analyze->add_option("--tol-eig-cluster", an.tol.eig_cluster);
  analyze->add_option("--tol-rank-rel", an.tol.rank_rel);
  analyze->add_option("--tol-sig-margin", an.tol.sig_margin);
  analyze->add_option("--tol-max-denominator", an.tol.max_denominator);
  analyze->add_option("--out", an.out, "Output path, - for stdout");

  std::string inv_path, out = "-";
  auto* synth = app.add_subcommand("synthesize", "Canonical (matrix, Gram) pair of an invariant");
  synth->add_option("--invariant", inv_path)->required();
  synth->add_option("--out", out);

  std::string method = "both";
  std::size_t cap = 16;
  auto* decide = app.add_subcommand("decide", "Rigidity verdicts");
  decide->add_option("--invariant", inv_path)->required();
  decide->add_option("--method", method)->check(CLI::IsMember({"closed-form", "enumerate", "both"}));
  decide->add_option("--witness-cap", cap);
  decide->add_option("--out", out);

  std::string glclass;
  int pos = 0, neg = 0;
  bool count_only = false;
  auto* enumerate = app.add_subcommand("enumerate", "O-classes in a GL-class at a fixed signature");
  enumerate->add_option("--glclass", glclass)->required();
  enumerate->add_option("--pos", pos)->required();
  enumerate->add_option("--neg", neg)->required();
  enumerate->add_flag("--count-only", count_only);
  enumerate->add_option("--out", out);

  std::string inv_a, inv_b;
  auto* compare = app.add_subcommand("compare", "GL- and O-conjugacy of two invariants");
  compare->add_option("--inv-a", inv_a)->required();
  compare->add_option("--inv-b", inv_b)->required();
  compare->add_option("--out", out);

  std::uint64_t seed = 0;
  int count = 20, max_dim = 16;
  auto* selfcheck = app.add_subcommand("selfcheck", "Randomized round-trip checks");
  selfcheck->add_option("--seed", seed);
  selfcheck->add_option("--count", count);
  selfcheck->add_option("--max-dim", max_dim);
  selfcheck->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*analyze) cmd_analyze(an);
    else if (*synth) cmd_synthesize(inv_path, out);
    else if (*decide) cmd_decide(inv_path, method, cap, out);
    else if (*enumerate) cmd_enumerate(glclass, pos, neg, count_only, out);
    else if (*compare) cmd_compare(inv_a, inv_b, out);
    else if (*selfcheck) cmd_selfcheck(seed, count, max_dim, out);
    return kOk;
  } catch (const MarginWarning& w) {
    spdlog::error("numeric margin: {} = {:g} (threshold {:g})", w.first.quantity, w.first.value, w.first.threshold);
    return kIndeterminate;
  } catch (const Indeterminate& e) {
    spdlog::error("{}", e.what());
    return kIndeterminate;
  } catch (const NotAnIsometry& e) {
    spdlog::error("{}", e.what());
    return kNotIsometry;
  } catch (const InvalidInput& e) {
    spdlog::error("{}", e.what());
    return kInvalid;
  } catch (const std::exception& e) {
    // Only InternalError should land here; the exit code set has no slot for bugs.
    spdlog::error("internal error: {}", e.what());
    return kInvalid;
  }
}
