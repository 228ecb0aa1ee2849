#pragma once

// Seeded invariant batteries and the report they produce.
//
// A report is a list of case records (inputs digest, measured violation,
// threshold, pass flag) plus one summary per suite. Exact checks measure a
// violation count and use threshold 0.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fmlab/cohomology.hpp"
#include "fmlab/fock.hpp"
#include "fmlab/glue.hpp"
#include "fmlab/grassmann.hpp"
#include "fmlab/groupoid.hpp"
#include "fmlab/random.hpp"
#include "fmlab/regdet.hpp"

namespace fmlab {

struct RunConfig {
  std::uint64_t seed = 1;
  int max_p = 4;
  int max_modes = 4;
  int max_modulus = 8;
  std::map<std::string, double> tolerance;  // overrides keyed like "detp.series"
};

struct CaseRecord {
  std::string suite;
  std::string name;
  std::string digest;
  double violation = 0.0;
  double threshold = 0.0;
  bool pass = true;
  std::string note;
};

struct SuiteSummary {
  std::string suite;
  int cases = 0;
  int failures = 0;
  double max_violation = 0.0;
  bool pass = true;
  std::uint64_t seed = 0;
  std::string started_at;
  double wall_time_s = 0.0;
};

struct Report {
  std::vector<CaseRecord> cases;
  std::vector<SuiteSummary> suites;

  bool pass() const {
    for (const auto& s : suites)
      if (!s.pass) return false;
    return true;
  }
  double max_violation() const {
    double v = 0.0;
    for (const auto& s : suites) v = std::max(v, s.max_violation);
    return v;
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"detp", "grassmann", "fock", "groupoid", "cohomology"};
  return names;
}

/// Default thresholds of every named check.
inline const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t{
      {"detp.series", 1e-10},         {"detp.classical", 1e-12},     {"detp.dual", 1e-9},
      {"detp.omega_cocycle", 1e-9},   {"detp.gamma", 1e-9},          {"grassmann.assoc", 1e-9},
      {"grassmann.section", 1e-9},    {"grassmann.alpha", 1e-9},     {"grassmann.alpha_trivial", 1e-12},
      {"fock.d_gamma", 1e-10},        {"fock.scalarness", 1e-9},     {"fock.antisymmetry", 1e-10},
      {"fock.lie_cocycle", 1e-9},     {"fock.block_diagonal", 1e-12}, {"fock.fixture", 1e-10},
      {"fock.bogoliubov", 1e-8},      {"fock.gerbe", 1e-10},         {"fock.window_additivity", 0.0},
      {"fock.filling", 1e-9},         {"groupoid.axioms", 0.0},      {"groupoid.cocycle", 0.0},
      {"groupoid.centrality", 0.0},   {"groupoid.extension", 0.0},   {"groupoid.roundtrip", 0.0},
      {"cohomology.dd", 0.0},         {"cohomology.simplicial", 0.0}, {"cohomology.oracle", 0.0},
      {"cohomology.free_action", 0.0}, {"cohomology.twist", 0.0},
  };
  return t;
}

/// Schwinger term of the m=2, k=1 raising/lowering pair, frozen from the
/// brute-force 4x4 commutator computation.
inline constexpr double kSchwingerFixtureValue = -1.0;

namespace detail {

inline std::string fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

inline std::uint64_t suite_seed(std::uint64_t seed, const std::string& suite) {
  std::uint64_t h = seed ^ 0x6a09e667f3bcc909ULL;
  for (unsigned char ch : suite) h = (h ^ ch) * 0x100000001b3ULL;
  return h;
}

inline double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class SuiteRun {
 public:
  SuiteRun(const RunConfig& config, std::string suite, Report& report)
      : config_(config), suite_(std::move(suite)), report_(report), rng_(suite_seed(config.seed, suite_)) {
    summary_.suite = suite_;
    summary_.seed = config.seed;
    summary_.started_at = utc_now();
    start_ = std::chrono::steady_clock::now();
  }

  Rng& rng() { return rng_; }

  double threshold(const std::string& check) const {
    const auto key = suite_ + "." + check;
    const auto it = config_.tolerance.find(key);
    if (it != config_.tolerance.end()) return it->second;
    return default_tolerances().at(key);
  }

  /// Runs `measure`; a thrown error counts as an infinite violation.
  void check(const std::string& name, const std::string& inputs, const std::function<double()>& measure) {
    CaseRecord r;
    r.suite = suite_;
    r.name = name;
    r.digest = fnv1a(suite_ + "|" + name + "|" + inputs);
    r.threshold = threshold(name);
    try {
      r.violation = measure();
    } catch (const std::exception& e) {
      r.violation = std::numeric_limits<double>::infinity();
      r.note = e.what();
    }
    r.pass = r.violation <= r.threshold;
    ++summary_.cases;
    if (!r.pass) {
      ++summary_.failures;
      summary_.pass = false;
    }
    summary_.max_violation = std::max(summary_.max_violation, r.violation);
    report_.cases.push_back(std::move(r));
  }

  void finish() {
    summary_.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    report_.suites.push_back(summary_);
  }

 private:
  const RunConfig& config_;
  std::string suite_;
  Report& report_;
  Rng rng_;
  SuiteSummary summary_;
  std::chrono::steady_clock::time_point start_;
};

inline std::string params(std::initializer_list<std::pair<const char*, long long>> kv) {
  std::string s;
  for (const auto& [k, v] : kv) s += std::string(k) + "=" + std::to_string(v) + ";";
  return s;
}

inline int count_diagnostics(const std::vector<std::string>& d) { return static_cast<int>(d.size()); }

}  // namespace detail

// ---------------------------------------------------------------------------

inline void verify_detp(const RunConfig& cfg, Report& report) {
  detail::SuiteRun run(cfg, "detp", report);
  auto& rng = run.rng();
  const int max_p = std::max(1, cfg.max_p);
  for (int i = 0; i < 200; ++i) {
    const int n = rng.between(1, 8);
    const int p = rng.between(1, max_p);
    const CMatrix a = random_with_spectral_radius(rng, n, rng.uniform(0.01, 0.1));
    const auto in = detail::params({{"case", i}, {"n", n}, {"p", p}});
    run.check("series", in, [&] {
      const Complex log_det = std::log(det_p(a, p).value);
      return std::abs(log_det - log_det_p_series(a, p, 40));
    });
    run.check("dual", in, [&] {
      const CMatrix one = identity(n);
      const Complex direct = determinant(one + r_p(a, p));
      const Complex trace_form = determinant(one + a) * std::exp(detail::subtracted_log_terms(a, p).trace());
      return detail::relative_gap(direct, trace_form);
    });
    run.check("classical", in, [&] { return detail::rel(det_p(a, 1).value, determinant(identity(n) + a)); });
  }
  for (int i = 0; i < 200; ++i) {
    const int n = rng.between(1, 8);
    const int p = rng.between(1, max_p);
    const CMatrix a = random_with_norm(rng, n, 0.4);
    const CMatrix b = random_with_norm(rng, n, 0.4);
    const CMatrix c = random_with_norm(rng, n, 0.4);
    const auto in = detail::params({{"case", i}, {"n", n}, {"p", p}});
    run.check("omega_cocycle", in, [&] {
      const Complex lhs = omega_p(a, compose_perturbations(b, c), p);
      const Complex rhs = omega_p(compose_perturbations(a, b), c, p) * omega_p(a, b, p);
      return detail::rel(lhs, rhs);
    });
    if (i < 50)
      run.check("gamma", in, [&] {
        return detail::rel(std::exp(gamma_p(a, b, p)), omega_p(a, b, p) / det_p(b, p).value);
      });
  }
  run.finish();
}

namespace detail {

/// Frame with w+ = 1 + small and random w-, so w+ stays invertible.
inline Frame random_charted_frame(Rng& rng, Eigen::Index n, Eigen::Index k) {
  CMatrix m(n, k);
  m.topRows(k) = random_unital(rng, k, 0.3);
  if (n > k) m.bottomRows(n - k) = random_complex(rng, n - k, k);
  return Frame(Polarization(n, k), m);
}

}  // namespace detail

inline void verify_grassmann(const RunConfig& cfg, Report& report) {
  detail::SuiteRun run(cfg, "grassmann", report);
  auto& rng = run.rng();
  const int max_p = std::clamp(cfg.max_p, 1, 3);
  for (int i = 0; i < 200; ++i) {
    const int k = rng.between(1, 4);
    const int n = rng.between(k, 8);
    const int p = rng.between(1, max_p);
    const Frame w = detail::random_charted_frame(rng, n, k);
    const CMatrix t1 = random_unital(rng, k, 0.3);
    const CMatrix t2 = random_unital(rng, k, 0.3);
    const DetLineElement e{w, rng.complex_normal() + 2.0};
    const auto in = detail::params({{"case", i}, {"n", n}, {"k", k}, {"p", p}});
    run.check("assoc", in, [&] {
      const auto stepwise = detline_act(detline_act(e, t1, p), t2, p);
      const auto direct = detline_act(e, t1 * t2, p);
      return std::max(max_abs(stepwise.frame.matrix() - direct.frame.matrix()), detail::rel(stepwise.lambda, direct.lambda));
    });
    if (i < 100)
      run.check("section", in, [&] {
        const Complex lhs = canonical_section(frame_act(w, t1), p);
        const Complex rhs = canonical_section(w, p) * detail::omega_ops(w_plus(w), t1, p);
        return detail::rel(lhs, rhs);
      });
  }
  for (int i = 0; i < 100; ++i) {
    const int k = rng.between(1, 3);
    const int n = rng.between(k, 6);
    const int p = rng.between(1, max_p);
    const Frame w = detail::random_charted_frame(rng, n, k);
    // g close to the identity keeps (g w q^-1)+ invertible.
    const CMatrix g = random_unital(rng, n, 0.1);
    const CMatrix q = random_unital(rng, k, 0.2);
    const CMatrix t1 = random_unital(rng, k, 0.3);
    const CMatrix t2 = random_unital(rng, k, 0.3);
    const auto in = detail::params({{"case", i}, {"n", n}, {"k", k}, {"p", p}});
    run.check("alpha", in, [&] {
      const Complex lhs = alpha_ratio(g, q, w, t1 * t2, p);
      const Complex rhs = alpha_ratio(g, q, w, t1, p) * alpha_ratio(g, q, frame_act(w, t1), t2, p);
      return detail::rel(lhs, rhs);
    });
    if (i < 20)
      run.check("alpha_trivial", in, [&] {
        return std::abs(alpha_ratio(identity(n), identity(k), w, t1, p) - Complex(1.0, 0.0));
      });
  }
  run.finish();
}

namespace detail {

inline CMatrix commutator(const CMatrix& x, const CMatrix& y) { return x * y - y * x; }

}  // namespace detail

inline void verify_fock(const RunConfig& cfg, Report& report) {
  detail::SuiteRun run(cfg, "fock", report);
  auto& rng = run.rng();
  const int max_m = std::clamp(cfg.max_modes, 2, 4);
  for (int i = 0; i < 100; ++i) {
    const int m = rng.between(1, max_m);
    const int k = rng.between(0, m);
    const FockSpace space(m, Polarization(m, k));
    const CMatrix x = random_complex(rng, m, m);
    run.check("d_gamma", detail::params({{"case", i}, {"m", m}, {"k", k}}),
              [&] { return d_gamma_defect(space, x, d_gamma(space, x).matrix); });
  }
  for (int i = 0; i < 100; ++i) {
    const int m = rng.between(2, max_m);
    const int k = rng.between(1, m - 1);
    const FockSpace space(m, Polarization(m, k));
    const CMatrix x = random_anti_hermitian(rng, m);
    const CMatrix y = random_anti_hermitian(rng, m);
    const CMatrix z = random_anti_hermitian(rng, m);
    const auto in = detail::params({{"case", i}, {"m", m}, {"k", k}});
    run.check("scalarness", in, [&] { return schwinger_term(space, x, y).residue; });
    run.check("antisymmetry", in,
              [&] { return std::abs(schwinger_term(space, x, y).value + schwinger_term(space, y, x).value); });
    run.check("lie_cocycle", in, [&] {
      using detail::commutator;
      return std::abs(schwinger_term(space, commutator(x, y), z).value +
                      schwinger_term(space, commutator(y, z), x).value +
                      schwinger_term(space, commutator(z, x), y).value);
    });
  }
  for (int i = 0; i < 20; ++i) {
    const int m = rng.between(2, max_m);
    const int k = rng.between(1, m - 1);
    const FockSpace space(m, Polarization(m, k));
    CMatrix x = CMatrix::Zero(m, m), y = CMatrix::Zero(m, m);
    x.topLeftCorner(k, k) = random_anti_hermitian(rng, k);
    x.bottomRightCorner(m - k, m - k) = random_anti_hermitian(rng, m - k);
    y.topLeftCorner(k, k) = random_anti_hermitian(rng, k);
    y.bottomRightCorner(m - k, m - k) = random_anti_hermitian(rng, m - k);
    run.check("block_diagonal", detail::params({{"case", i}, {"m", m}, {"k", k}}),
              [&] { return std::abs(schwinger_term(space, x, y).value); });
  }
  run.check("fixture", "m=2;k=1;raising-lowering", [&] {
    const FockSpace space(2, Polarization(2, 1));
    CMatrix x = CMatrix::Zero(2, 2), y = CMatrix::Zero(2, 2);
    x(0, 1) = 1.0;
    y(1, 0) = 1.0;
    return std::abs(schwinger_term(space, x, y).value - Complex(kSchwingerFixtureValue, 0.0));
  });
  for (int i = 0; i < 50; ++i) {
    const int m = rng.between(1, max_m);
    const int k = rng.between(0, m);
    const FockSpace space(m, Polarization(m, k));
    const CMatrix x = random_anti_hermitian(rng, m);
    std::vector<CVector> vs;
    for (int j = 0; j < 50; ++j) vs.push_back(random_complex(rng, m, 1).col(0));
    run.check("bogoliubov", detail::params({{"case", i}, {"m", m}, {"k", k}}), [&] {
      const CMatrix gamma = bogoliubov_implement(space, x).matrix;
      const CMatrix gamma_inv = gamma.inverse();
      const CMatrix ex = matrix_exponential(x);
      double worst = 0.0;
      for (const auto& v : vs) {
        const CVector moved = ex * v;
        worst = std::max(worst, max_abs(gamma * space.psi_star(v) * gamma_inv - space.psi_star(moved)));
      }
      return worst;
    });
  }
  auto off_spectrum_level = [&](const SpectralBackground& bg) {
    for (;;) {
      const double l = rng.uniform(-3.5, 3.5);
      if (std::abs(l) > 1e-3 && bg.off_spectrum(l)) {
        bool far = true;
        for (Eigen::Index j = 0; j < bg.spectrum().values.size(); ++j)
          far = far && std::abs(bg.spectrum().values(j) - l) > 1e-6;
        if (far) return l;
      }
    }
  };
  for (int i = 0; i < 100; ++i) {
    const int m = rng.between(1, 6);
    const SpectralBackground bg(random_hermitian(rng, m));
    std::vector<double> ls{off_spectrum_level(bg), off_spectrum_level(bg), off_spectrum_level(bg)};
    std::sort(ls.begin(), ls.end());
    if (!(ls[0] < ls[1] && ls[1] < ls[2])) continue;
    const auto in = detail::params({{"case", i}, {"m", m}});
    run.check("window_additivity", in, [&] {
      const auto a = vacuum_line(bg, ls[0], ls[1]).dim();
      const auto b = vacuum_line(bg, ls[1], ls[2]).dim();
      const auto ab = vacuum_line(bg, ls[0], ls[2]).dim();
      return a + b == ab ? 0.0 : 1.0;
    });
    run.check("gerbe", in, [&] { return std::abs(std::abs(gerbe_triple_check(bg, ls[0], ls[1], ls[2])) - 1.0); });
  }
  for (int i = 0; i < 50; ++i) {
    const int m = rng.between(1, max_m);
    const SpectralBackground bg(random_hermitian(rng, m));
    const FockSpace space(m, Polarization(m, m));
    double lo = off_spectrum_level(bg), hi = off_spectrum_level(bg);
    if (lo > hi) std::swap(lo, hi);
    if (!(lo < hi)) continue;
    run.check("filling", detail::params({{"case", i}, {"m", m}}), [&] {
      const VacuumLine window = vacuum_line(bg, lo, hi);
      FockVector state = vacuum_at_level(space, bg, lo);
      for (Eigen::Index c = window.dim() - 1; c >= 0; --c) state = space.apply_psi_star(window.frame.col(c), state);
      return std::abs(std::abs(vacuum_at_level(space, bg, hi).dot(state)) - 1.0);
    });
  }
  run.finish();
}

inline void verify_groupoid(const RunConfig& cfg, Report& report) {
  detail::SuiteRun run(cfg, "groupoid", report);
  auto& rng = run.rng();
  const int max_n = std::clamp(cfg.max_modulus, 2, 8);
  for (int i = 0; i < 50; ++i) {
    const ActionInstance inst = random_action_instance(rng, 6, 8, max_n);
    const LocalExtensionData cover = random_refined_cover(rng, inst.action, inst.cocycle, 3);
    const auto in = detail::params({{"case", i},
                                    {"points", inst.action.points()},
                                    {"group", inst.action.group().order()},
                                    {"modulus", inst.modulus},
                                    {"charts", cover.chart_count()}});
    run.check("axioms", in, [&] { return detail::count_diagnostics(axioms_check(inst.groupoid)); });
    run.check("cocycle", in, [&] { return cocycle_check(inst.groupoid, inst.cocycle); });
    const CentralExtension e = central_extend(inst.groupoid, inst.cocycle);
    run.check("centrality", in, [&] { return centrality_check(e); });
    run.check("extension", in, [&] {
      return detail::count_diagnostics(axioms_check(e.total)) + detail::count_diagnostics(extension_structure_check(e));
    });
    run.check("roundtrip", in, [&] {
      const CentralExtension glued = glue_local_data(cover, inst.modulus);
      const CoboundaryTest same(inst.groupoid, inst.modulus);
      return same.cohomologous(cocycle_from_multiplication(glued), inst.cocycle) ? 0.0 : 1.0;
    });
  }
  run.finish();
}

/// Order of H^p(G, Z/N) by brute force: |Z^p| / |B^p|, with |B^p| = |C^{p-1}| / |Z^{p-1}|.
/// Every cochain of degree p and p-1 is enumerated; intended for tiny nerves.
inline long long enumerate_cohomology_order(const FiniteGroupoid& g, int p, int modulus) {
  const Nerve n(g, p + 1);
  auto count_cocycles = [&](int q) {
    const int cells = n.size(q);
    Cochain f = zero_cochain(n, q, modulus);
    long long count = 0;
    for (;;) {
      const auto d = coboundary(f, n);
      bool zero = true;
      for (int v : d.values) zero = zero && v == 0;
      if (zero) ++count;
      int k = 0;
      while (k < cells && ++f.values[static_cast<std::size_t>(k)] == modulus) f.values[static_cast<std::size_t>(k++)] = 0;
      if (k == cells) break;
    }
    return count;
  };
  long long cochains_below = 1;
  for (int k = 0; k < n.size(p - 1); ++k) cochains_below *= modulus;
  const long long boundaries = cochains_below / count_cocycles(p - 1);
  return count_cocycles(p) / boundaries;
}

inline void verify_cohomology(const RunConfig& cfg, Report& report) {
  detail::SuiteRun run(cfg, "cohomology", report);
  auto& rng = run.rng();
  const int max_n = std::clamp(cfg.max_modulus, 2, 8);
  for (int i = 0; i < 20; ++i) {
    const ActionInstance inst = random_action_instance(rng, 3, 4, max_n);
    const Nerve nerve(inst.groupoid, 3);
    const auto in = detail::params({{"case", i}, {"points", inst.action.points()}, {"group", inst.action.group().order()}});
    run.check("simplicial", in, [&] { return detail::count_diagnostics(simplicial_identity_check(nerve)); });
    run.check("dd", in, [&] {
      int bad = 0;
      for (int p = 0; p <= 1; ++p) {
        Cochain f = zero_cochain(nerve, p, inst.modulus);
        for (auto& v : f.values) v = rng.below(inst.modulus);
        for (int v : coboundary(coboundary(f, nerve), nerve).values) bad += v != 0;
      }
      return bad;
    });
  }
  struct OracleCase {
    const char* name;
    FiniteGroupoid g;
    int modulus;
  };
  const auto z2 = FiniteGroup::cyclic(2);
  const auto z3 = FiniteGroup::cyclic(3);
  std::vector<OracleCase> oracles{
      {"BZ2/mu2", action_groupoid(RightAction::trivial(z2, 1)), 2},
      {"BZ3/mu3", action_groupoid(RightAction::trivial(z3, 1)), 3},
      {"B(Z2xZ2)/mu2", action_groupoid(RightAction::trivial(FiniteGroup::product(z2, z2), 1)), 2},
      {"Z2 on 2 points/mu2", action_groupoid(RightAction::trivial(z2, 2)), 2},
  };
  for (const auto& o : oracles)
    run.check("oracle", o.name, [&] {
      const auto h = cohomology_group(o.g, 2, o.modulus);
      long long order = 1;
      for (int f : h.invariant_factors) order *= f;
      return order == enumerate_cohomology_order(o.g, 2, o.modulus) ? 0.0 : 1.0;
    });
  for (const auto& g : group_catalog(4))
    run.check("free_action", g.name(), [&] {
      return cohomology_group(action_groupoid(RightAction::regular(g)), 2, 2).trivial() ? 0.0 : 1.0;
    });
  // Exhaustive twist invariance over BG, |G| <= 4, N <= 4: every 1-cochain b.
  for (const auto& g : group_catalog(4))
    for (int modulus = 2; modulus <= 4; ++modulus) {
      const RightAction point = RightAction::trivial(g, 1);
      const FiniteGroupoid bg = action_groupoid(point);
      const CohomologyComputation h(bg, 2, modulus);
      for (int r = 0; r < 2; ++r) {
        const PhaseCocycle c = random_cocycle(rng, point, bg, modulus);
        run.check("twist", g.name() + ";N=" + std::to_string(modulus) + ";r=" + std::to_string(r), [&] {
          const auto base = h.classify(cochain_from_cocycle(h.nerve(), c));
          std::vector<int> b(static_cast<std::size_t>(bg.arrows()), 0);
          int bad = 0;
          for (;;) {
            const auto twisted = coboundary_twist(bg, c, b);
            bad += h.classify(cochain_from_cocycle(h.nerve(), twisted)) != base;
            std::size_t k = 0;
            while (k < b.size() && ++b[k] == modulus) b[k++] = 0;
            if (k == b.size()) break;
          }
          return bad;
        });
      }
    }
  run.finish();
}

inline bool is_suite(const std::string& name) {
  if (name == "all") return true;
  for (const auto& s : suite_names())
    if (s == name) return true;
  return false;
}

inline Report run_verification(const RunConfig& cfg, const std::string& suite) {
  if (!is_suite(suite)) throw Error(ErrorKind::Domain, "unknown suite " + suite);
  Report report;
  const std::map<std::string, std::function<void(const RunConfig&, Report&)>> table{
      {"detp", verify_detp},
      {"grassmann", verify_grassmann},
      {"fock", verify_fock},
      {"groupoid", verify_groupoid},
      {"cohomology", verify_cohomology}};
  for (const auto& name : suite_names())
    if (suite == "all" || suite == name) table.at(name)(cfg, report);
  return report;
}

// ---------------------------------------------------------------------------
// Serialization: JSON lines, one per case, then one summary object.

inline nlohmann::json violation_json(double v) {
  if (std::isfinite(v)) return v;
  return "inf";
}

inline nlohmann::json case_json(const CaseRecord& r) {
  nlohmann::json j{{"type", "case"},
                   {"suite", r.suite},
                   {"case", r.name},
                   {"digest", r.digest},
                   {"violation", violation_json(r.violation)},
                   {"threshold", r.threshold},
                   {"pass", r.pass}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline nlohmann::json summary_json(const Report& report) {
  nlohmann::json suites = nlohmann::json::array();
  for (const auto& s : report.suites)
    suites.push_back({{"suite", s.suite},
                      {"cases", s.cases},
                      {"failures", s.failures},
                      {"max_violation", violation_json(s.max_violation)},
                      {"pass", s.pass},
                      {"seed", s.seed},
                      {"started_at", s.started_at},
                      {"wall_time_s", s.wall_time_s}});
  return {{"type", "summary"},
          {"pass", report.pass()},
          {"max_violation", violation_json(report.max_violation())},
          {"suites", suites}};
}

inline std::string to_jsonl(const Report& report) {
  std::string out;
  for (const auto& c : report.cases) out += case_json(c).dump() + "\n";
  out += summary_json(report).dump() + "\n";
  return out;
}

inline std::string to_text(const Report& report) {
  std::ostringstream os;
  for (const auto& s : report.suites) {
    os << (s.pass ? "PASS " : "FAIL ") << s.suite << ": " << s.cases << " cases, " << s.failures
       << " failures, max violation " << s.max_violation << " (" << s.wall_time_s << " s)\n";
    for (const auto& c : report.cases)
      if (c.suite == s.suite && !c.pass)
        os << "  failed " << c.name << " [" << c.digest << "] violation " << c.violation << " > " << c.threshold
           << (c.note.empty() ? "" : " : " + c.note) << "\n";
  }
  os << (report.pass() ? "PASS" : "FAIL") << " overall, max violation " << report.max_violation() << "\n";
  return os.str();
}

inline double parse_violation(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  return std::numeric_limits<double>::infinity();
}

/// Parses a JSON-lines report. Throws a format error on malformed input.
inline Report report_from_jsonl(const std::string& text) {
  Report r;
  std::istringstream in(text);
  std::string line;
  bool saw_summary = false;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "case") {
        CaseRecord c;
        c.suite = j.at("suite").get<std::string>();
        c.name = j.at("case").get<std::string>();
        c.digest = j.at("digest").get<std::string>();
        c.violation = parse_violation(j.at("violation"));
        c.threshold = j.at("threshold").get<double>();
        c.pass = j.at("pass").get<bool>();
        if (j.contains("note")) c.note = j.at("note").get<std::string>();
        r.cases.push_back(std::move(c));
      } else if (type == "summary") {
        saw_summary = true;
        for (const auto& s : j.at("suites")) {
          SuiteSummary ss;
          ss.suite = s.at("suite").get<std::string>();
          ss.cases = s.at("cases").get<int>();
          ss.failures = s.at("failures").get<int>();
          ss.max_violation = parse_violation(s.at("max_violation"));
          ss.pass = s.at("pass").get<bool>();
          ss.seed = s.at("seed").get<std::uint64_t>();
          ss.started_at = s.at("started_at").get<std::string>();
          ss.wall_time_s = s.at("wall_time_s").get<double>();
          r.suites.push_back(std::move(ss));
        }
      } else {
        throw Error(ErrorKind::Format, "report: unknown record type " + type);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("report: ") + e.what());
  }
  if (!saw_summary) throw Error(ErrorKind::Format, "report: no summary record");
  return r;
}

/// Union of reports. Suites with the same name are all kept; each keeps its
/// own start timestamp so the runs remain distinguishable.
inline Report merge_reports(const std::vector<Report>& reports) {
  Report out;
  for (const auto& r : reports) {
    out.cases.insert(out.cases.end(), r.cases.begin(), r.cases.end());
    out.suites.insert(out.suites.end(), r.suites.begin(), r.suites.end());
  }
  return out;
}

}  // namespace fmlab
