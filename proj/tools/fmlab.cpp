// fmlab: verification suites, single computations, seeded instance
// generation and report merging.
//
// Exit codes: 0 pass, 1 invariant failure, 2 usage, 3 format, 4 domain.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fmlab/cohomology.hpp"
#include "fmlab/fock.hpp"
#include "fmlab/glue.hpp"
#include "fmlab/io.hpp"
#include "fmlab/random.hpp"
#include "fmlab/regdet.hpp"
#include "fmlab/verify.hpp"

namespace {

using fmlab::io::Json;

enum Exit : int { kPass = 0, kFail = 1, kUsage = 2, kFormat = 3, kDomain = 4 };

struct Options {
  std::uint64_t seed = 1;
  std::optional<int> p;
  std::optional<int> modes;
  std::optional<int> modulus;
  std::vector<std::string> tolerances;
  std::string format = "json";
  std::string out;
  std::string suite;
  std::string what;
  std::string kind;
  std::string matrix, a, b, x, y, groupoid, cocycle, data;
  std::optional<int> plus_dim;
  int degree = 2;
  std::vector<std::string> reports;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw fmlab::Error(fmlab::ErrorKind::Format, "cannot write " + o.out);
  f << text;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return fmlab::detail::fnv1a(ss.str());
}

Json provenance(const std::vector<std::pair<std::string, std::string>>& files) {
  Json j = Json::object();
  for (const auto& [role, path] : files) j[role] = {{"path", path}, {"digest", file_digest(path)}};
  return j;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw CLI::ValidationError(what);
}

fmlab::RunConfig run_config(const Options& o) {
  fmlab::RunConfig cfg;
  cfg.seed = o.seed;
  if (o.p) cfg.max_p = *o.p;
  if (o.modes) cfg.max_modes = *o.modes;
  if (o.modulus) cfg.max_modulus = *o.modulus;
  require(cfg.max_p >= 1 && cfg.max_p <= 8, "--p must lie in [1, 8]");
  require(cfg.max_modes >= 2 && cfg.max_modes <= fmlab::kMaxModes, "--modes must lie in [2, 12]");
  require(cfg.max_modulus >= 2 && cfg.max_modulus <= 64, "--modulus must lie in [2, 64]");
  for (const auto& kv : o.tolerances) {
    const auto eq = kv.find('=');
    require(eq != std::string::npos, "--tolerance expects KEY=VAL");
    const auto key = kv.substr(0, eq);
    require(fmlab::default_tolerances().count(key) == 1, "unknown tolerance key " + key);
    double v = 0.0;
    try {
      v = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      require(false, "tolerance value for " + key + " is not a number");
    }
    require(v > 0.0 || (v == 0.0 && fmlab::default_tolerances().at(key) == 0.0), "tolerances must be positive");
    cfg.tolerance[key] = v;
  }
  return cfg;
}

int cmd_verify(const Options& o) {
  require(fmlab::is_suite(o.suite), "unknown suite " + o.suite);
  const auto cfg = run_config(o);
  const auto report = fmlab::run_verification(cfg, o.suite);
  emit(o, o.format == "text" ? fmlab::to_text(report) : fmlab::to_jsonl(report));
  return report.pass() ? kPass : kFail;
}

int cmd_compute(const Options& o) {
  Json result{{"quantity", o.what}};
  if (o.what == "detp" || o.what == "omega") {
    const int p = o.p.value_or(2);
    require(p >= 1, "--p must be a positive integer");
    result["order"] = p;
    if (o.what == "detp") {
      require(!o.matrix.empty(), "compute detp needs --matrix");
      const auto a = fmlab::io::matrix_from_json(fmlab::io::read_json_file(o.matrix));
      const auto d = fmlab::det_p(a, p);
      result["inputs"] = provenance({{"matrix", o.matrix}});
      result["value"] = fmlab::io::complex_json(d.value);
      result["log_value"] = fmlab::io::complex_json(d.log_value);
    } else {
      require(!o.a.empty() && !o.b.empty(), "compute omega needs --a and --b");
      const auto a = fmlab::io::matrix_from_json(fmlab::io::read_json_file(o.a));
      const auto b = fmlab::io::matrix_from_json(fmlab::io::read_json_file(o.b));
      result["inputs"] = provenance({{"a", o.a}, {"b", o.b}});
      result["value"] = fmlab::io::complex_json(fmlab::omega_p(a, b, p));
      result["gamma"] = fmlab::io::complex_json(fmlab::gamma_p(a, b, p));
    }
  } else if (o.what == "schwinger") {
    require(!o.x.empty() && !o.y.empty(), "compute schwinger needs --x and --y");
    const auto x = fmlab::io::matrix_from_json(fmlab::io::read_json_file(o.x));
    const auto y = fmlab::io::matrix_from_json(fmlab::io::read_json_file(o.y));
    if (x.rows() != x.cols()) throw fmlab::Error(fmlab::ErrorKind::Shape, "schwinger: X must be square");
    const int m = static_cast<int>(x.rows());
    const int k = o.plus_dim.value_or(m / 2);
    const fmlab::FockSpace space(m, fmlab::Polarization(m, k));
    const auto s = fmlab::schwinger_term(space, x, y);
    result["inputs"] = provenance({{"x", o.x}, {"y", o.y}});
    result["modes"] = m;
    result["plus_dim"] = k;
    result["value"] = fmlab::io::complex_json(s.value);
    result["residue"] = s.residue;
  } else if (o.what == "h2") {
    require(!o.groupoid.empty(), "compute h2 needs --groupoid");
    require(o.modulus.has_value(), "compute h2 needs --modulus");
    const Json gj = fmlab::io::read_json_file(o.groupoid);
    const auto g = fmlab::io::groupoid_from_json(gj);
    const fmlab::CohomologyComputation h(g, o.degree, *o.modulus);
    std::vector<int> cls;
    std::vector<std::pair<std::string, std::string>> files{{"groupoid", o.groupoid}};
    std::optional<Json> cj;
    if (!o.cocycle.empty()) {
      cj = fmlab::io::read_json_file(o.cocycle);
      files.emplace_back("cocycle", o.cocycle);
    } else if (gj.contains("cocycle")) {
      cj = gj.at("cocycle");
    }
    if (cj) {
      require(o.degree == 2, "a cocycle can only be classified in degree 2");
      const auto c = fmlab::io::cocycle_from_json(*cj, g);
      if (c.modulus() != *o.modulus)
        throw fmlab::Error(fmlab::ErrorKind::Domain, "cocycle modulus differs from --modulus");
      cls = h.classify(fmlab::cochain_from_cocycle(h.nerve(), c));
    }
    result = fmlab::io::to_json(h.group(), cls);
    result["inputs"] = provenance(files);
  } else if (o.what == "glue") {
    require(!o.data.empty(), "compute glue needs --data");
    const auto cover = fmlab::io::cover_from_json(fmlab::io::read_json_file(o.data));
    const int n = o.modulus.value_or(cover.modulus);
    require(n >= 1, "compute glue needs --modulus (or a modulus in the cover file)");
    const auto e = fmlab::glue_local_data(cover.data, n);
    const auto cls = fmlab::extension_class(e);
    result["inputs"] = provenance({{"data", o.data}});
    result["extension"] = {{"objects", e.total.objects()},
                           {"base_arrows", e.base.arrows()},
                           {"total_arrows", e.total.arrows()},
                           {"modulus", n},
                           {"centrality_violation", fmlab::centrality_check(e)}};
    result["h2"] = fmlab::io::to_json(cls.group, cls.coordinates);
  } else {
    require(false, "unknown quantity " + o.what);
  }
  emit(o, result.dump(2) + "\n");
  return kPass;
}

int cmd_generate(const Options& o) {
  fmlab::Rng rng(o.seed);
  Json out;
  if (o.kind == "random-hermitian" || o.kind == "random-unital") {
    const int n = o.modes.value_or(4);
    require(n >= 1, "--modes must be positive");
    if (n > 64) throw fmlab::Error(fmlab::ErrorKind::Capacity, "generate: at most 64 modes");
    out = fmlab::io::to_json(o.kind == "random-hermitian" ? fmlab::random_hermitian(rng, n)
                                                          : fmlab::random_unital(rng, n));
  } else if (o.kind == "random-action-groupoid" || o.kind == "refined-cover") {
    const int n = o.modulus.value_or(4);
    require(n >= 2, "--modulus must be at least 2");
    if (n > 64) throw fmlab::Error(fmlab::ErrorKind::Capacity, "generate: modulus at most 64");
    const auto inst = fmlab::random_action_instance(rng, 6, 8, n);
    // random_action_instance draws the modulus itself; pin it to the request.
    const auto c = fmlab::random_cocycle(rng, inst.action, inst.groupoid, n);
    if (o.kind == "random-action-groupoid") {
      out = fmlab::io::to_json(inst.groupoid);
      out["cocycle"] = fmlab::io::to_json(inst.groupoid, c);
    } else {
      out = fmlab::io::to_json(fmlab::random_refined_cover(rng, inst.action, c, 3), n);
    }
  } else {
    require(false, "unknown instance kind " + o.kind);
  }
  emit(o, out.dump(2) + "\n");
  return kPass;
}

int cmd_report(const Options& o) {
  require(!o.reports.empty(), "report needs at least one file");
  std::vector<fmlab::Report> parts;
  for (const auto& path : o.reports) {
    std::ifstream in(path);
    if (!in) throw fmlab::Error(fmlab::ErrorKind::Format, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    parts.push_back(fmlab::report_from_jsonl(ss.str()));
  }
  const auto merged = fmlab::merge_reports(parts);
  emit(o, o.format == "text" ? fmlab::to_text(merged) : fmlab::to_jsonl(merged));
  return merged.pass() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-truncation checks of regularized determinants, Fock-space anomalies and groupoid extensions"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "64-bit seed");
    sub->add_option("--p", o.p, "regularization order (bound for verify)");
    sub->add_option("--modes", o.modes, "number of modes / matrix size");
    sub->add_option("--modulus", o.modulus, "coefficient modulus N");
    sub->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--out", o.out, "output path (default stdout)");
  };

  auto* verify = app.add_subcommand("verify", "run an invariant battery");
  common(verify);
  verify->add_option("--suite", o.suite, "detp, grassmann, fock, groupoid, cohomology or all")->required();
  verify->add_option("--tolerance", o.tolerances, "threshold override KEY=VAL")->take_all();

  auto* compute = app.add_subcommand("compute", "compute a single quantity");
  common(compute);
  compute->add_option("what", o.what, "detp, omega, schwinger, h2 or glue")->required();
  compute->add_option("--matrix", o.matrix, "matrix JSON (detp)");
  compute->add_option("--a", o.a, "matrix JSON (omega)");
  compute->add_option("--b", o.b, "matrix JSON (omega)");
  compute->add_option("--x", o.x, "matrix JSON (schwinger)");
  compute->add_option("--y", o.y, "matrix JSON (schwinger)");
  compute->add_option("--plus-dim", o.plus_dim, "dim H+ (schwinger, default modes/2)");
  compute->add_option("--groupoid", o.groupoid, "groupoid JSON (h2)");
  compute->add_option("--cocycle", o.cocycle, "cocycle JSON to classify (h2)");
  compute->add_option("--degree", o.degree, "cohomological degree (h2, default 2)");
  compute->add_option("--data", o.data, "cover JSON (glue)");

  auto* generate = app.add_subcommand("generate", "emit a seeded random instance");
  common(generate);
  generate->add_option("kind", o.kind, "random-hermitian, random-unital, random-action-groupoid or refined-cover")
      ->required();

  auto* report = app.add_subcommand("report", "merge report files");
  common(report);
  report->add_option("files", o.reports, "report files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(o);
    if (compute->parsed()) return cmd_compute(o);
    if (generate->parsed()) return cmd_generate(o);
    return cmd_report(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const fmlab::Error& e) {
    std::cerr << e.what() << "\n";
    return e.kind() == fmlab::ErrorKind::Format ? kFormat : kDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  }
}
