#pragma once

// Cut and reglue: assembling a central extension of A x| G from chart-local
// group 2-cocycles omega_{ab,c} and transition functions phi_{ab} on a cover
// {U_a} of G. All values are mu_N exponents.

#include <functional>
#include <string>
#include <vector>

#include "fmlab/groupoid.hpp"
#include "fmlab/operator.hpp"

namespace fmlab {

class LocalExtensionData {
 public:
  LocalExtensionData(RightAction action, std::vector<std::vector<int>> charts)
      : action_(std::move(action)), charts_(std::move(charts)) {
    const int n = action_.group().order();
    const int c = chart_count();
    if (c < 1) throw Error(ErrorKind::Domain, "cover: needs at least one chart");
    member_.assign(static_cast<std::size_t>(c) * n, false);
    for (int a = 0; a < c; ++a)
      for (int g : charts_[static_cast<std::size_t>(a)]) {
        if (g < 0 || g >= n) throw Error(ErrorKind::Domain, "cover: chart element out of range");
        member_[static_cast<std::size_t>(a) * n + g] = true;
      }
    const auto cells = static_cast<std::size_t>(action_.points()) * n;
    transition_.assign(static_cast<std::size_t>(c) * c, std::vector<int>(cells, -1));
    omega_.assign(static_cast<std::size_t>(c) * c * c, std::vector<int>(cells * n, -1));
  }

  const RightAction& action() const noexcept { return action_; }
  const FiniteGroup& group() const noexcept { return action_.group(); }
  int chart_count() const noexcept { return static_cast<int>(charts_.size()); }
  const std::vector<std::vector<int>>& charts() const noexcept { return charts_; }

  bool in_chart(int alpha, int g) const {
    return member_[static_cast<std::size_t>(alpha) * group().order() + g];
  }

  /// phi_{alpha beta}(a; g), defined for g in U_alpha and U_beta; -1 if unset.
  int transition(int alpha, int beta, int a, int g) const { return transition_[tindex(alpha, beta)][cell(a, g)]; }
  void set_transition(int alpha, int beta, int a, int g, int k) { transition_[tindex(alpha, beta)][cell(a, g)] = k; }

  /// omega_{alpha beta, gamma}(a; f, g), defined for f in U_alpha, g in U_beta, fg in U_gamma.
  int omega(int alpha, int beta, int gamma, int a, int f, int g) const {
    return omega_[oindex(alpha, beta, gamma)][cell(a, f) * group().order() + g];
  }
  void set_omega(int alpha, int beta, int gamma, int a, int f, int g, int k) {
    omega_[oindex(alpha, beta, gamma)][cell(a, f) * group().order() + g] = k;
  }

  /// Least-index chart containing g, or -1.
  int least_chart(int g) const {
    for (int a = 0; a < chart_count(); ++a)
      if (in_chart(a, g)) return a;
    return -1;
  }

 private:
  std::size_t tindex(int alpha, int beta) const {
    check_chart(alpha);
    check_chart(beta);
    return static_cast<std::size_t>(alpha) * chart_count() + beta;
  }
  std::size_t oindex(int alpha, int beta, int gamma) const {
    check_chart(alpha);
    check_chart(beta);
    check_chart(gamma);
    return (static_cast<std::size_t>(alpha) * chart_count() + beta) * chart_count() + gamma;
  }
  std::size_t cell(int a, int g) const {
    if (a < 0 || a >= action_.points() || g < 0 || g >= group().order())
      throw Error(ErrorKind::Domain, "cover: point or group element out of range");
    return static_cast<std::size_t>(a) * group().order() + g;
  }
  void check_chart(int alpha) const {
    if (alpha < 0 || alpha >= chart_count()) throw Error(ErrorKind::Domain, "cover: chart index out of range");
  }

  RightAction action_;
  std::vector<std::vector<int>> charts_;
  std::vector<bool> member_;
  std::vector<std::vector<int>> transition_;
  std::vector<std::vector<int>> omega_;
};

/// Splits a global cocycle on A x| G through chart gauges: with b_alpha(a; g)
/// given for g in U_alpha,
///   omega_{ab,c}(a; f, g) = c(a; f, g) + b_a(a; f) + b_b(a.f; g) - b_c(a; fg),
///   phi_{ab}(a; g)        = b_a(a; g) - b_b(a; g).
/// `gauge[alpha][a * |G| + g]` holds b_alpha. The result satisfies the gluing
/// condition by construction.
inline LocalExtensionData refine_cocycle(const RightAction& action, const PhaseCocycle& global,
                                         const std::vector<std::vector<int>>& charts,
                                         const std::vector<std::vector<int>>& gauge) {
  const FiniteGroup& grp = action.group();
  const int n = grp.order();
  const int big_n = global.modulus();
  if (global.is_continuous()) throw Error(ErrorKind::UnsupportedCoefficients, "refine_cocycle: needs mu_N values");
  if (gauge.size() != charts.size()) throw Error(ErrorKind::Domain, "refine_cocycle: one gauge per chart required");
  LocalExtensionData data(action, charts);
  const int c = data.chart_count();
  auto b = [&](int alpha, int a, int g) {
    return gauge[static_cast<std::size_t>(alpha)][static_cast<std::size_t>(a) * n + g];
  };
  for (int alpha = 0; alpha < c; ++alpha)
    for (int beta = 0; beta < c; ++beta)
      for (int a = 0; a < action.points(); ++a)
        for (int g = 0; g < n; ++g)
          if (data.in_chart(alpha, g) && data.in_chart(beta, g))
            data.set_transition(alpha, beta, a, g, mod_n(b(alpha, a, g) - b(beta, a, g), big_n));
  for (int alpha = 0; alpha < c; ++alpha)
    for (int beta = 0; beta < c; ++beta)
      for (int gamma = 0; gamma < c; ++gamma)
        for (int a = 0; a < action.points(); ++a)
          for (int f = 0; f < n; ++f) {
            if (!data.in_chart(alpha, f)) continue;
            for (int g = 0; g < n; ++g) {
              const int fg = grp.mul(f, g);
              if (!data.in_chart(beta, g) || !data.in_chart(gamma, fg)) continue;
              const int x = a * n + f;
              const int y = action.act(a, f) * n + g;
              const long long v = static_cast<long long>(global.exponent(x, y)) + b(alpha, a, f) +
                                  b(beta, action.act(a, f), g) - b(gamma, a, fg);
              data.set_omega(alpha, beta, gamma, a, f, g, mod_n(v, big_n));
            }
          }
  return data;
}

namespace detail {

inline std::string glue_site(int a1, int a2, int b1, int b2, int c1, int c2, int f, int g, int point) {
  return "(alpha=" + std::to_string(a1) + ", alpha'=" + std::to_string(a2) + ", beta=" + std::to_string(b1) +
         ", beta'=" + std::to_string(b2) + ", gamma=" + std::to_string(c1) + ", gamma'=" + std::to_string(c2) +
         ", f=" + std::to_string(f) + ", g=" + std::to_string(g) + ", A=" + std::to_string(point) + ")";
}

}  // namespace detail

/// Checks the local data: the cover exhausts G, every value is present and
/// in range, transitions compose (phi_aa = 0, phi_ab + phi_bc = phi_ac), the
/// gluing condition holds for every admissible choice of charts, and the
/// local group-cocycle condition holds on every composable triple.
inline void validate_local_data(const LocalExtensionData& data, int modulus) {
  const FiniteGroup& grp = data.group();
  const RightAction& act = data.action();
  const int n = grp.order();
  const int c = data.chart_count();
  const int pts = act.points();
  if (modulus < 1) throw Error(ErrorKind::Domain, "glue: modulus must be positive");
  for (int g = 0; g < n; ++g)
    if (data.least_chart(g) < 0) throw Error(ErrorKind::Domain, "glue: cover misses group element " + std::to_string(g));

  auto checked = [&](int v, const std::string& what) {
    if (v < 0) throw Error(ErrorKind::Domain, "glue: missing " + what);
    if (v >= modulus) throw Error(ErrorKind::Domain, "glue: " + what + " out of range for modulus " + std::to_string(modulus));
    return v;
  };

  for (int a1 = 0; a1 < c; ++a1)
    for (int a2 = 0; a2 < c; ++a2)
      for (int a = 0; a < pts; ++a)
        for (int g = 0; g < n; ++g) {
          if (!data.in_chart(a1, g) || !data.in_chart(a2, g)) continue;
          const std::string tag = "transition phi_" + std::to_string(a1) + std::to_string(a2) + "(A=" +
                                  std::to_string(a) + "; g=" + std::to_string(g) + ")";
          const int v = checked(data.transition(a1, a2, a, g), tag);
          if (a1 == a2 && v != 0) throw Error(ErrorKind::Descent, "glue: " + tag + " must be trivial");
          for (int a3 = 0; a3 < c; ++a3) {
            if (!data.in_chart(a3, g)) continue;
            const int lhs = mod_n(static_cast<long long>(v) + data.transition(a2, a3, a, g), modulus);
            if (lhs != data.transition(a1, a3, a, g))
              throw Error(ErrorKind::Descent, "glue: transitions do not compose at charts (" + std::to_string(a1) +
                                                  "," + std::to_string(a2) + "," + std::to_string(a3) +
                                                  "), g=" + std::to_string(g) + ", A=" + std::to_string(a));
          }
        }

  for (int a = 0; a < pts; ++a)
    for (int f = 0; f < n; ++f)
      for (int g = 0; g < n; ++g) {
        const int fg = grp.mul(f, g);
        const int af = act.act(a, f);
        for (int al = 0; al < c; ++al) {
          if (!data.in_chart(al, f)) continue;
          for (int be = 0; be < c; ++be) {
            if (!data.in_chart(be, g)) continue;
            for (int ga = 0; ga < c; ++ga) {
              if (!data.in_chart(ga, fg)) continue;
              const int w = checked(data.omega(al, be, ga, a, f, g),
                                    "omega_" + std::to_string(al) + std::to_string(be) + "," + std::to_string(ga) +
                                        "(A=" + std::to_string(a) + "; f=" + std::to_string(f) +
                                        ", g=" + std::to_string(g) + ")");
              for (int al2 = 0; al2 < c; ++al2) {
                if (!data.in_chart(al2, f)) continue;
                for (int be2 = 0; be2 < c; ++be2) {
                  if (!data.in_chart(be2, g)) continue;
                  for (int ga2 = 0; ga2 < c; ++ga2) {
                    if (!data.in_chart(ga2, fg)) continue;
                    const long long rhs = static_cast<long long>(data.transition(al, al2, a, f)) +
                                          data.transition(be, be2, af, g) - data.transition(ga, ga2, a, fg) +
                                          data.omega(al2, be2, ga2, a, f, g);
                    if (mod_n(rhs, modulus) != w)
                      throw Error(ErrorKind::Descent, "glue: gluing condition fails at " +
                                                          detail::glue_site(al, al2, be, be2, ga, ga2, f, g, a));
                  }
                }
              }
            }
          }
        }
      }

  // With gluing established, the local cocycle condition is chart independent;
  // it is checked with least-index charts.
  auto w = [&](int a, int f, int g) {
    return data.omega(data.least_chart(f), data.least_chart(g), data.least_chart(grp.mul(f, g)), a, f, g);
  };
  for (int a = 0; a < pts; ++a)
    for (int g1 = 0; g1 < n; ++g1)
      for (int g2 = 0; g2 < n; ++g2)
        for (int g3 = 0; g3 < n; ++g3) {
          const long long lhs = static_cast<long long>(w(a, grp.mul(g1, g2), g3)) + w(a, g1, g2);
          const long long rhs = static_cast<long long>(w(a, g1, grp.mul(g2, g3))) + w(act.act(a, g1), g2, g3);
          if (mod_n(lhs - rhs, modulus) != 0)
            throw Error(ErrorKind::Cocycle, "glue: local cocycle condition fails at A=" + std::to_string(a) +
                                                ", g1=" + std::to_string(g1) + ", g2=" + std::to_string(g2) +
                                                ", g3=" + std::to_string(g3));
        }
}

/// Global 2-cocycle on A x| G read off the local data through least-index
/// chart selection: c((a, f), (a.f, g)) = omega_{a(f) a(g), a(fg)}(a; f, g).
inline PhaseCocycle glued_cocycle(const LocalExtensionData& data, int modulus) {
  validate_local_data(data, modulus);
  const FiniteGroup& grp = data.group();
  const RightAction& act = data.action();
  const int n = grp.order();
  PhaseCocycle c = PhaseCocycle::discrete(act.points() * n, modulus);
  for (int a = 0; a < act.points(); ++a)
    for (int f = 0; f < n; ++f)
      for (int g = 0; g < n; ++g) {
        const int fg = grp.mul(f, g);
        c.set(a * n + f, act.act(a, f) * n + g,
              data.omega(data.least_chart(f), data.least_chart(g), data.least_chart(fg), a, f, g));
      }
  return c;
}

/// Builds the central extension P of A x| G from local data; the
/// multiplication is re-verified to be associative on every composable triple.
inline CentralExtension glue_local_data(const LocalExtensionData& data, int modulus) {
  const PhaseCocycle c = glued_cocycle(data, modulus);
  const FiniteGroupoid base = action_groupoid(data.action());
  CentralExtension e = central_extend(base, c);
  const auto diagnostics = axioms_check(e.total);
  if (!diagnostics.empty())
    throw Error(ErrorKind::InternalConsistency, "glue: glued multiplication fails " + diagnostics.front());
  return e;
}

/// eta(X, Y)(A) from the mixed second derivative at t = s = 0 of the phase
/// exponent of psi(e^{tX}) psi(e^{sY}) psi(e^{-tX}) psi(e^{-sY}), where psi is
/// the unit-phase section and the product is taken left to right with
/// (f, l)(g, m) = (fg, l (f.m) e^{2 pi i omega(f, g)}). Central differences
/// with step h give O(h^2) error.
template <class Point, class Omega>
double eta_from_omega(Omega&& omega, const CMatrix& x, const CMatrix& y, const Point& point, double h) {
  if (!(h >= 1e-6 && h <= 1e-2)) throw Error(ErrorKind::Domain, "eta_from_omega: step must lie in [1e-6, 1e-2]");
  if (x.rows() != x.cols() || y.rows() != y.cols() || x.rows() != y.rows())
    throw Error(ErrorKind::Shape, "eta_from_omega: X and Y must be square of equal size");
  auto eval = [&](const CMatrix& f, const CMatrix& g) -> double {
    double v = 0.0;
    try {
      v = static_cast<double>(omega(point, f, g));
    } catch (const std::exception& ex) {
      throw Error(ErrorKind::Callable, std::string("eta_from_omega: omega failed: ") + ex.what());
    }
    if (!std::isfinite(v)) throw Error(ErrorKind::Callable, "eta_from_omega: omega returned a non-finite value");
    return v;
  };
  auto word_phase = [&](double t, double s) {
    const CMatrix g1 = matrix_exponential(t * x);
    const CMatrix g2 = matrix_exponential(s * y);
    const CMatrix g3 = matrix_exponential(-t * x);
    const CMatrix g4 = matrix_exponential(-s * y);
    const CMatrix g12 = g1 * g2;
    const CMatrix g123 = g12 * g3;
    return eval(g1, g2) + eval(g12, g3) + eval(g123, g4);
  };
  return (word_phase(h, h) - word_phase(h, -h) - word_phase(-h, h) + word_phase(-h, -h)) / (4.0 * h * h);
}

}  // namespace fmlab
