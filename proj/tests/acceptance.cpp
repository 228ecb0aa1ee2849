// Runs the acceptance criteria at their stated tolerances and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fmlab/cohomology.hpp"
#include "fmlab/fock.hpp"
#include "fmlab/glue.hpp"
#include "fmlab/grassmann.hpp"
#include "fmlab/random.hpp"
#include "fmlab/regdet.hpp"
#include "fmlab/verify.hpp"
#include "oracles.hpp"

using namespace fmlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Tally {
 public:
  void bound(const std::string& what, double value, double limit) {
    worst_[what] = std::max(worst_.count(what) ? worst_[what] : 0.0, value);
    limits_[what] = limit;
    if (!(value <= limit)) pass_ = false;
  }
  void exact(const std::string& what, bool ok) { bound(what, ok ? 0.0 : 1.0, 0.0); }
  void count(int n = 1) { cases_ += n; }

  Outcome outcome() const {
    std::ostringstream os;
    os << cases_ << " cases";
    for (const auto& [k, v] : worst_) os << "; " << k << " " << v << " (<= " << limits_.at(k) << ")";
    return {pass_, os.str()};
  }

 private:
  std::map<std::string, double> worst_, limits_;
  bool pass_ = true;
  int cases_ = 0;
};

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Outcome detp_series() {
  Tally t;
  Rng rng(101);
  for (int i = 0; i < 200; ++i) {
    const int n = rng.between(1, 8), p = rng.between(1, 4);
    const CMatrix a = random_with_spectral_radius(rng, n, rng.uniform(0.01, 0.1));
    t.bound("series error", std::abs(det_p(a, p).log_value - log_det_p_series(a, p, 40)), 1e-10);
    t.count();
  }
  return t.outcome();
}

Outcome omega_cocycle() {
  Tally t;
  Rng rng(102);
  for (int i = 0; i < 200; ++i) {
    const int n = rng.between(1, 8), p = rng.between(1, 4);
    const CMatrix a = random_with_norm(rng, n, 0.5), b = random_with_norm(rng, n, 0.5), c = random_with_norm(rng, n, 0.5);
    const Complex lhs = omega_p(a, compose_perturbations(b, c), p);
    const Complex rhs = omega_p(compose_perturbations(a, b), c, p) * omega_p(a, b, p);
    t.bound("relative error", rel(lhs, rhs), 1e-9);
    t.count();
  }
  return t.outcome();
}

Outcome classical_and_dual() {
  Tally t;
  Rng rng(103);
  for (int i = 0; i < 200; ++i) {
    const int n = rng.between(1, 8), p = rng.between(1, 4);
    const CMatrix a = random_with_norm(rng, n, rng.uniform(0.05, 0.9));
    const CMatrix one = identity(n);
    t.bound("det_1 vs det(1+A)", rel(det_p(a, 1).value, determinant(one + a)), 1e-12);
    const Complex direct = determinant(one + r_p(a, p));
    const Complex trace_form = determinant(one + a) * std::exp(detail::subtracted_log_terms(a, p).trace());
    t.bound("dual formula gap", detail::relative_gap(direct, trace_form), 1e-9);
    t.count();
  }
  return t.outcome();
}

Frame charted_frame(Rng& rng, Eigen::Index n, Eigen::Index k) {
  CMatrix m(n, k);
  m.topRows(k) = random_unital(rng, k, 0.3);
  if (n > k) m.bottomRows(n - k) = random_complex(rng, n - k, k);
  return Frame(Polarization(n, k), m);
}

Outcome detline_associativity() {
  Tally t;
  Rng rng(104);
  for (int i = 0; i < 200; ++i) {
    const int k = rng.between(1, 4), n = rng.between(k, 8), p = rng.between(1, 3);
    const DetLineElement e{charted_frame(rng, n, k), rng.complex_normal() + 2.0};
    const CMatrix t1 = random_unital(rng, k, 0.3), t2 = random_unital(rng, k, 0.3);
    const auto stepwise = detline_act(detline_act(e, t1, p), t2, p);
    const auto direct = detline_act(e, t1 * t2, p);
    t.bound("error", std::max(max_abs(stepwise.frame.matrix() - direct.frame.matrix()), rel(stepwise.lambda, direct.lambda)),
            1e-9);
    t.count();
  }
  return t.outcome();
}

Outcome alpha_multiplicativity() {
  Tally t;
  Rng rng(105);
  for (int i = 0; i < 100; ++i) {
    const int k = rng.between(1, 3), n = rng.between(k, 6), p = rng.between(1, 3);
    const Frame w = charted_frame(rng, n, k);
    const CMatrix g = random_unital(rng, n, 0.1), q = random_unital(rng, k, 0.2);
    const CMatrix t1 = random_unital(rng, k, 0.3), t2 = random_unital(rng, k, 0.3);
    const Complex lhs = alpha_ratio(g, q, w, t1 * t2, p);
    const Complex rhs = alpha_ratio(g, q, w, t1, p) * alpha_ratio(g, q, frame_act(w, t1), t2, p);
    t.bound("relative error", rel(lhs, rhs), 1e-9);
    t.count();
  }
  return t.outcome();
}

CMatrix bracket(const CMatrix& x, const CMatrix& y) { return x * y - y * x; }

Outcome schwinger() {
  Tally t;
  Rng rng(106);
  for (int i = 0; i < 100; ++i) {
    const int m = rng.between(2, 4), k = rng.between(1, m - 1);
    const FockSpace space(m, Polarization(m, k));
    const CMatrix x = random_anti_hermitian(rng, m), y = random_anti_hermitian(rng, m), z = random_anti_hermitian(rng, m);
    const SchwingerTerm xy = schwinger_term(space, x, y);
    t.bound("scalarness", xy.residue, 1e-9);
    t.bound("antisymmetry", std::abs(xy.value + schwinger_term(space, y, x).value), 1e-10);
    t.bound("lie cocycle", std::abs(schwinger_term(space, bracket(x, y), z).value +
                                    schwinger_term(space, bracket(y, z), x).value +
                                    schwinger_term(space, bracket(z, x), y).value),
            1e-9);
    CMatrix bx = CMatrix::Zero(m, m), by = CMatrix::Zero(m, m);
    bx.topLeftCorner(k, k) = random_anti_hermitian(rng, k);
    bx.bottomRightCorner(m - k, m - k) = random_anti_hermitian(rng, m - k);
    by.topLeftCorner(k, k) = random_anti_hermitian(rng, k);
    by.bottomRightCorner(m - k, m - k) = random_anti_hermitian(rng, m - k);
    t.bound("block diagonal", std::abs(schwinger_term(space, bx, by).value), 1e-12);
    t.count();
  }
  // The fixture against a Jordan-Wigner brute-force commutator.
  const auto a = oracle::jordan_wigner(2);
  auto quantize = [&](const CMatrix& x) {
    CMatrix out = CMatrix::Zero(4, 4);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        out += x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * a[i] * a[j].adjoint();
    return CMatrix(out - x(1, 1) * identity(4));
  };
  CMatrix x = CMatrix::Zero(2, 2), y = CMatrix::Zero(2, 2);
  x(0, 1) = 1.0;
  y(1, 0) = 1.0;
  const CMatrix s = quantize(x) * quantize(y) - quantize(y) * quantize(x) - quantize(bracket(x, y));
  const Complex oracle_value = s.trace() / 4.0;
  t.bound("oracle vs frozen fixture", std::abs(oracle_value - kSchwingerFixtureValue), 1e-10);
  t.bound("fixture", std::abs(schwinger_term(FockSpace(2, Polarization(2, 1)), x, y).value - oracle_value), 1e-10);
  return t.outcome();
}

Outcome bogoliubov() {
  Tally t;
  Rng rng(107);
  for (int i = 0; i < 50; ++i) {
    const int m = rng.between(1, 4);
    const FockSpace space(m, Polarization(m, rng.between(0, m)));
    const CMatrix x = random_anti_hermitian(rng, m);
    const CMatrix gamma = bogoliubov_implement(space, x).matrix;
    const CMatrix gamma_inv = gamma.inverse();
    const CMatrix ex = matrix_exponential(x);
    for (int j = 0; j < 50; ++j) {
      const CVector v = random_complex(rng, m, 1).col(0);
      t.bound("implementer error", max_abs(gamma * space.psi_star(v) * gamma_inv - space.psi_star(ex * v)), 1e-8);
    }
    t.count();
  }
  return t.outcome();
}

double level_off_spectrum(Rng& rng, const SpectralBackground& bg) {
  for (;;) {
    const double l = rng.uniform(-3.5, 3.5);
    bool far = true;
    for (Eigen::Index j = 0; j < bg.spectrum().values.size(); ++j) far = far && std::abs(bg.spectrum().values(j) - l) > 1e-6;
    if (far) return l;
  }
}

Outcome vacuum_gerbe() {
  Tally t;
  Rng rng(108);
  int backgrounds = 0;
  while (backgrounds < 100) {
    const int m = rng.between(1, 6);
    const SpectralBackground bg(random_hermitian(rng, m));
    std::vector<double> ls{level_off_spectrum(rng, bg), level_off_spectrum(rng, bg), level_off_spectrum(rng, bg)};
    std::sort(ls.begin(), ls.end());
    if (!(ls[0] < ls[1] && ls[1] < ls[2])) continue;
    ++backgrounds;
    const auto d01 = vacuum_line(bg, ls[0], ls[1]).dim(), d12 = vacuum_line(bg, ls[1], ls[2]).dim();
    t.exact("additivity", d01 + d12 == vacuum_line(bg, ls[0], ls[2]).dim());
    t.bound("witness | |w| - 1 |", std::abs(std::abs(gerbe_triple_check(bg, ls[0], ls[1], ls[2])) - 1.0), 1e-10);
    t.count();
  }
  for (int i = 0; i < 50; ++i) {
    const int m = rng.between(1, 4);
    const SpectralBackground bg(random_hermitian(rng, m));
    const FockSpace space(m, Polarization(m, m));
    double lo = level_off_spectrum(rng, bg), hi = level_off_spectrum(rng, bg);
    if (lo > hi) std::swap(lo, hi);
    if (!(lo < hi)) continue;
    const VacuumLine window = vacuum_line(bg, lo, hi);
    FockVector state = vacuum_at_level(space, bg, lo);
    for (Eigen::Index c = window.dim() - 1; c >= 0; --c) state = space.apply_psi_star(window.frame.col(c), state);
    t.bound("filling | |<vac, psi* vac>| - 1 |", std::abs(std::abs(vacuum_at_level(space, bg, hi).dot(state)) - 1.0), 1e-9);
    t.count();
  }
  return t.outcome();
}

Outcome groupoid_layer() {
  Tally t;
  Rng rng(109);
  for (int i = 0; i < 100; ++i) {
    const ActionInstance inst = random_action_instance(rng, 6, 8, 8);
    t.exact("axioms", axioms_check(inst.groupoid).empty());
    t.exact("cocycle", cocycle_check(inst.groupoid, inst.cocycle) == 0.0);
    const CentralExtension e = central_extend(inst.groupoid, inst.cocycle);
    t.exact("extension axioms", axioms_check(e.total).empty() && extension_structure_check(e).empty());
    t.exact("centrality", centrality_check(e) == 0.0);
    t.count();
  }
  for (int i = 0; i < 50; ++i) {
    const ActionInstance inst = random_action_instance(rng, 6, 8, 8);
    const LocalExtensionData cover = random_refined_cover(rng, inst.action, inst.cocycle, 3);
    const CentralExtension glued = glue_local_data(cover, inst.modulus);
    t.exact("round trip class",
            CoboundaryTest(inst.groupoid, inst.modulus).cohomologous(cocycle_from_multiplication(glued), inst.cocycle));
    t.count();
  }
  return t.outcome();
}

Outcome cohomology() {
  Tally t;
  Rng rng(110);
  for (int i = 0; i < 30; ++i) {
    const ActionInstance inst = random_action_instance(rng, 3, 4, 8);
    const Nerve nerve(inst.groupoid, 3);
    for (int p = 0; p <= 1; ++p) {
      Cochain f = zero_cochain(nerve, p, inst.modulus);
      for (auto& v : f.values) v = rng.below(inst.modulus);
      bool zero = true;
      for (int v : coboundary(coboundary(f, nerve), nerve).values) zero = zero && v == 0;
      t.exact("dd = 0", zero);
    }
    t.count();
  }
  const auto bz = [](int n) { return action_groupoid(RightAction::trivial(FiniteGroup::cyclic(n), 1)); };
  for (int n : {2, 3}) {
    const FiniteGroupoid g = bz(n);
    const oracle::PairOracle brute(g, n);
    const long long enumerated = static_cast<long long>(brute.cocycles().size() / brute.coboundaries().size());
    const auto h = cohomology_group(g, 2, n);
    t.exact("H2(BZ_N, mu_N) = Z_N", h.invariant_factors == std::vector<int>{n});
    t.exact("enumeration oracle", enumerated == n);
    t.count();
  }
  for (const auto& g : group_catalog(8)) {
    t.exact("free action trivial", cohomology_group(action_groupoid(RightAction::regular(g)), 2, 2).trivial());
    t.count();
  }
  for (const auto& g : group_catalog(4))
    for (int modulus = 2; modulus <= 4; ++modulus) {
      const RightAction point = RightAction::trivial(g, 1);
      const FiniteGroupoid bg = action_groupoid(point);
      const CohomologyComputation h(bg, 2, modulus);
      for (int r = 0; r < 3; ++r) {
        const PhaseCocycle c = random_cocycle(rng, point, bg, modulus);
        const auto base = h.classify(cochain_from_cocycle(h.nerve(), c));
        std::vector<int> b(static_cast<std::size_t>(bg.arrows()), 0);
        bool same = true;
        for (;;) {
          same = same && h.classify(cochain_from_cocycle(h.nerve(), coboundary_twist(bg, c, b))) == base;
          std::size_t k = 0;
          while (k < b.size() && ++b[k] == modulus) b[k++] = 0;
          if (k == b.size()) break;
        }
        t.exact("twist invariance", same);
        t.count();
      }
    }
  return t.outcome();
}

std::string strip_timestamps(const std::string& jsonl) {
  std::string out;
  std::istringstream in(jsonl);
  std::string line;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    if (j.contains("suites"))
      for (auto& s : j["suites"]) {
        s.erase("started_at");
        s.erase("wall_time_s");
      }
    out += j.dump() + "\n";
  }
  return out;
}

Outcome full_verify() {
  RunConfig cfg;
  const Report a = run_verification(cfg, "all");
  const Report b = run_verification(cfg, "all");
  const bool deterministic = strip_timestamps(to_jsonl(a)) == strip_timestamps(to_jsonl(b));
  std::ostringstream os;
  os << a.cases.size() << " cases; suites pass " << (a.pass() ? "yes" : "no") << "; deterministic "
     << (deterministic ? "yes" : "no") << "; max violation " << a.max_violation();
  return {a.pass() && deterministic, os.str()};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0: no stated runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "det_p series agreement", 5, detp_series},
      {2, "omega_p cocycle identity", 5, omega_cocycle},
      {3, "det_1 classical and dual formula", 0, classical_and_dual},
      {4, "Det_p line action associativity", 0, detline_associativity},
      {5, "alpha_ratio multiplicativity", 0, alpha_multiplicativity},
      {6, "Schwinger term", 30, schwinger},
      {7, "Bogoliubov implementability", 60, bogoliubov},
      {8, "vacuum-line gerbe", 0, vacuum_gerbe},
      {9, "groupoid layer", 30, groupoid_layer},
      {10, "cohomology", 60, cohomology},
      {11, "verify --suite all", 300, full_verify},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.budget_s <= 0 || secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s criterion %d (%s): %s; %.2f s", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    if (c.budget_s > 0) std::printf(" (< %.0f s)", c.budget_s);
    std::printf("\n");
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
