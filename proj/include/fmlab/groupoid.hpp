#pragma once

// Finite groupoids, phase 2-cocycles and their central extensions.
//
// Composability follows s(x) = t(y) for the pair (x, y), with
// s(xy) = s(y) and t(xy) = t(x). For an action groupoid A x| G built from a
// right action, the arrow (a, g) therefore runs from a.g (source) to a
// (target), and (a, g)(a.g, h) = (a, gh).

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fmlab/error.hpp"
#include "fmlab/group.hpp"

namespace fmlab {

inline constexpr double kPhaseTolerance = 1e-10;

inline int mod_n(long long v, int n) {
  const long long r = v % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

inline std::complex<double> root_of_unity(int k, int n) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

class FiniteGroupoid {
 public:
  FiniteGroupoid() = default;

  FiniteGroupoid(int objects, std::vector<int> source, std::vector<int> target, std::vector<int> identity,
                 std::vector<int> inverse, std::vector<int> compose)
      : objects_(objects),
        arrows_(static_cast<int>(source.size())),
        src_(std::move(source)),
        tgt_(std::move(target)),
        ident_(std::move(identity)),
        inv_(std::move(inverse)),
        compose_(std::move(compose)) {
    const auto n1 = static_cast<std::size_t>(arrows_);
    if (objects_ < 1 || arrows_ < 1) throw Error(ErrorKind::Domain, "groupoid: needs objects and arrows");
    if (tgt_.size() != n1 || inv_.size() != n1 || ident_.size() != static_cast<std::size_t>(objects_) ||
        compose_.size() != n1 * n1)
      throw Error(ErrorKind::Domain, "groupoid: structure tables have inconsistent sizes");
    auto in_range = [](const std::vector<int>& t, int hi, bool allow_missing) {
      for (int v : t)
        if (v >= hi || (v < 0 && !(allow_missing && v == -1))) return false;
      return true;
    };
    if (!in_range(src_, objects_, false) || !in_range(tgt_, objects_, false) || !in_range(ident_, arrows_, false) ||
        !in_range(inv_, arrows_, false) || !in_range(compose_, arrows_, true))
      throw Error(ErrorKind::Domain, "groupoid: table entry out of range");
  }

  int objects() const noexcept { return objects_; }
  int arrows() const noexcept { return arrows_; }
  int source(int x) const { return src_[static_cast<std::size_t>(x)]; }
  int target(int x) const { return tgt_[static_cast<std::size_t>(x)]; }
  int identity(int o) const { return ident_[static_cast<std::size_t>(o)]; }
  int inverse(int x) const { return inv_[static_cast<std::size_t>(x)]; }
  bool composable(int x, int y) const { return source(x) == target(y); }

  /// xy, or -1 when the table has no entry.
  int compose(int x, int y) const { return compose_[static_cast<std::size_t>(x) * arrows_ + y]; }

  void set_compose(int x, int y, int xy) { compose_[static_cast<std::size_t>(x) * arrows_ + y] = xy; }

  std::vector<std::string> object_labels;
  std::vector<std::string> arrow_labels;

  std::string object_label(int o) const {
    return o < static_cast<int>(object_labels.size()) ? object_labels[static_cast<std::size_t>(o)] : std::to_string(o);
  }
  std::string arrow_label(int x) const {
    return x < static_cast<int>(arrow_labels.size()) ? arrow_labels[static_cast<std::size_t>(x)] : std::to_string(x);
  }

 private:
  int objects_ = 0;
  int arrows_ = 0;
  std::vector<int> src_, tgt_, ident_, inv_, compose_;
};

/// Verifies the six groupoid axioms (plus the composition domain) exhaustively.
/// Returns one diagnostic per violated axiom; empty means all hold.
inline std::vector<std::string> axioms_check(const FiniteGroupoid& g) {
  std::vector<std::string> out;
  const int n1 = g.arrows();
  auto report = [&](const std::string& axiom, long count, const std::string& first) {
    if (count > 0) out.push_back(axiom + ": " + std::to_string(count) + " violation(s), first at " + first);
  };
  auto tuple = [](std::initializer_list<int> xs) {
    std::ostringstream os;
    os << '(';
    bool first = true;
    for (int x : xs) {
      os << (first ? "" : ",") << x;
      first = false;
    }
    os << ')';
    return os.str();
  };

  long bad = 0;
  std::string where;
  for (int x = 0; x < n1; ++x)
    for (int y = 0; y < n1; ++y)
      if ((g.compose(x, y) >= 0) != g.composable(x, y) && bad++ == 0) where = tuple({x, y});
  report("axiom 0 (composition defined exactly when s(x)=t(y))", bad, where);

  bad = 0;
  for (int x = 0; x < n1; ++x)
    for (int y = 0; y < n1; ++y) {
      const int xy = g.compose(x, y);
      if (xy < 0 || !g.composable(x, y)) continue;
      if ((g.source(xy) != g.source(y) || g.target(xy) != g.target(x)) && bad++ == 0) where = tuple({x, y});
    }
  report("axiom 1 (s(xy)=s(y), t(xy)=t(x))", bad, where);

  bad = 0;
  for (int x = 0; x < n1; ++x)
    for (int y = 0; y < n1; ++y) {
      if (!g.composable(x, y)) continue;
      const int xy = g.compose(x, y);
      for (int z = 0; z < n1; ++z) {
        if (!g.composable(y, z)) continue;
        const int yz = g.compose(y, z);
        const int left = xy >= 0 ? g.compose(xy, z) : -1;
        const int right = yz >= 0 ? g.compose(x, yz) : -1;
        if ((left < 0 || right < 0 || left != right) && bad++ == 0) where = tuple({x, y, z});
      }
    }
  report("axiom 2 (associativity)", bad, where);

  bad = 0;
  for (int o = 0; o < g.objects(); ++o)
    if ((g.source(g.identity(o)) != o || g.target(g.identity(o)) != o) && bad++ == 0) where = tuple({o});
  report("axiom 3 (e is a section of s and t)", bad, where);

  bad = 0;
  for (int x = 0; x < n1; ++x) {
    const int left = g.composable(g.identity(g.target(x)), x) ? g.compose(g.identity(g.target(x)), x) : -1;
    const int right = g.composable(x, g.identity(g.source(x))) ? g.compose(x, g.identity(g.source(x))) : -1;
    if ((left != x || right != x) && bad++ == 0) where = tuple({x});
  }
  report("axiom 4 (e(t(x))x = x = xe(s(x)))", bad, where);

  bad = 0;
  for (int x = 0; x < n1; ++x)
    if ((g.source(g.inverse(x)) != g.target(x) || g.target(g.inverse(x)) != g.source(x)) && bad++ == 0)
      where = tuple({x});
  report("axiom 5 (s(x^-1)=t(x), t(x^-1)=s(x))", bad, where);

  bad = 0;
  for (int x = 0; x < n1; ++x) {
    const int xi = g.inverse(x);
    const int right = g.composable(x, xi) ? g.compose(x, xi) : -1;
    const int left = g.composable(xi, x) ? g.compose(xi, x) : -1;
    if ((right != g.identity(g.target(x)) || left != g.identity(g.source(x))) && bad++ == 0) where = tuple({x});
  }
  report("axiom 6 (xx^-1=e(t(x)), x^-1x=e(s(x)))", bad, where);
  return out;
}

/// A x| G for a right action; arrow (a, g) has index a * |G| + g.
inline FiniteGroupoid action_groupoid(const RightAction& action) {
  const FiniteGroup& grp = action.group();
  const int n = grp.order();
  const int points = action.points();
  const int arrows = points * n;
  std::vector<int> src(static_cast<std::size_t>(arrows)), tgt(src.size()), inv(src.size());
  std::vector<int> ident(static_cast<std::size_t>(points));
  std::vector<int> comp(static_cast<std::size_t>(arrows) * static_cast<std::size_t>(arrows), -1);
  for (int a = 0; a < points; ++a) {
    ident[static_cast<std::size_t>(a)] = a * n + grp.identity();
    for (int g = 0; g < n; ++g) {
      const int x = a * n + g;
      const int ag = action.act(a, g);
      src[static_cast<std::size_t>(x)] = ag;
      tgt[static_cast<std::size_t>(x)] = a;
      inv[static_cast<std::size_t>(x)] = ag * n + grp.inv(g);
      for (int h = 0; h < n; ++h) comp[static_cast<std::size_t>(x) * arrows + (ag * n + h)] = a * n + grp.mul(g, h);
    }
  }
  FiniteGroupoid out(points, std::move(src), std::move(tgt), std::move(ident), std::move(inv), std::move(comp));
  for (int a = 0; a < points; ++a) out.object_labels.push_back(std::to_string(a));
  for (int a = 0; a < points; ++a)
    for (int g = 0; g < n; ++g) out.arrow_labels.push_back("(" + std::to_string(a) + "," + std::to_string(g) + ")");
  return out;
}

/// A U(1)- or mu_N-valued function on composable pairs. Discrete values are
/// exponents k in [0, N) standing for exp(2 pi i k / N).
class PhaseCocycle {
 public:
  static PhaseCocycle discrete(int arrows, int modulus) {
    if (modulus < 1) throw Error(ErrorKind::Domain, "cocycle: modulus must be positive");
    PhaseCocycle c;
    c.arrows_ = arrows;
    c.modulus_ = modulus;
    c.exps_.assign(static_cast<std::size_t>(arrows) * static_cast<std::size_t>(arrows), -1);
    return c;
  }

  static PhaseCocycle continuous(int arrows) {
    PhaseCocycle c;
    c.arrows_ = arrows;
    c.modulus_ = 0;
    c.phases_.assign(static_cast<std::size_t>(arrows) * static_cast<std::size_t>(arrows),
                     std::complex<double>(std::nan(""), 0.0));
    return c;
  }

  /// Trivial cocycle on every composable pair of `g`.
  static PhaseCocycle trivial(const FiniteGroupoid& g, int modulus) {
    PhaseCocycle c = discrete(g.arrows(), modulus);
    for (int x = 0; x < g.arrows(); ++x)
      for (int y = 0; y < g.arrows(); ++y)
        if (g.composable(x, y)) c.set(x, y, 0);
    return c;
  }

  bool is_continuous() const noexcept { return modulus_ == 0; }
  int modulus() const noexcept { return modulus_; }
  int arrows() const noexcept { return arrows_; }

  bool has(int x, int y) const {
    const auto i = index(x, y);
    return is_continuous() ? !std::isnan(phases_[i].real()) : exps_[i] >= 0;
  }

  void set(int x, int y, long long k) {
    if (is_continuous()) throw Error(ErrorKind::Domain, "cocycle: integer exponent on a continuous cocycle");
    exps_[index(x, y)] = mod_n(k, modulus_);
  }

  void set_phase(int x, int y, std::complex<double> z) {
    if (!is_continuous()) throw Error(ErrorKind::Domain, "cocycle: complex phase on a discrete cocycle");
    phases_[index(x, y)] = z;
  }

  int exponent(int x, int y) const {
    if (is_continuous()) throw Error(ErrorKind::UnsupportedCoefficients, "cocycle: continuous values have no exponent");
    const int k = exps_[index(x, y)];
    if (k < 0) throw Error(ErrorKind::Domain, "cocycle: missing value at (" + std::to_string(x) + "," + std::to_string(y) + ")");
    return k;
  }

  std::complex<double> phase(int x, int y) const {
    if (!is_continuous()) return root_of_unity(exponent(x, y), modulus_);
    const auto z = phases_[index(x, y)];
    if (std::isnan(z.real()))
      throw Error(ErrorKind::Domain, "cocycle: missing value at (" + std::to_string(x) + "," + std::to_string(y) + ")");
    return z;
  }

  bool operator==(const PhaseCocycle& o) const {
    return modulus_ == o.modulus_ && arrows_ == o.arrows_ && exps_ == o.exps_ &&
           (is_continuous() ? phases_ == o.phases_ : true);
  }

 private:
  std::size_t index(int x, int y) const {
    if (x < 0 || y < 0 || x >= arrows_ || y >= arrows_) throw Error(ErrorKind::Domain, "cocycle: arrow out of range");
    return static_cast<std::size_t>(x) * static_cast<std::size_t>(arrows_) + static_cast<std::size_t>(y);
  }

  int arrows_ = 0;
  int modulus_ = 1;
  std::vector<int> exps_;
  std::vector<std::complex<double>> phases_;
};

namespace detail {

inline void require_total(const FiniteGroupoid& g, const PhaseCocycle& c, const char* what) {
  if (c.arrows() != g.arrows()) throw Error(ErrorKind::Domain, std::string(what) + ": cocycle/groupoid size mismatch");
  for (int x = 0; x < g.arrows(); ++x)
    for (int y = 0; y < g.arrows(); ++y)
      if (g.composable(x, y) && !c.has(x, y))
        throw Error(ErrorKind::Domain, std::string(what) + ": missing value on composable pair (" + g.arrow_label(x) +
                                           "," + g.arrow_label(y) + ")");
}

}  // namespace detail

/// max over composable triples of |c(x,y)c(xy,z)c(x,yz)^-1 c(y,z)^-1 - 1|.
/// For mu_N values the residual exponent is computed in exact integer arithmetic.
inline double cocycle_check(const FiniteGroupoid& g, const PhaseCocycle& c) {
  detail::require_total(g, c, "cocycle_check");
  double worst = 0.0;
  const int n1 = g.arrows();
  for (int x = 0; x < n1; ++x)
    for (int y = 0; y < n1; ++y) {
      if (!g.composable(x, y)) continue;
      const int xy = g.compose(x, y);
      for (int z = 0; z < n1; ++z) {
        if (!g.composable(y, z)) continue;
        const int yz = g.compose(y, z);
        if (c.is_continuous()) {
          const auto r = c.phase(x, y) * c.phase(xy, z) / (c.phase(x, yz) * c.phase(y, z));
          worst = std::max(worst, std::abs(r - 1.0));
        } else {
          const int n = c.modulus();
          const int r = mod_n(static_cast<long long>(c.exponent(x, y)) + c.exponent(xy, z) - c.exponent(x, yz) -
                                  c.exponent(y, z),
                              n);
          if (r != 0) worst = std::max(worst, std::abs(root_of_unity(r, n) - 1.0));
        }
      }
    }
  return worst;
}

/// c * delta(b) with (delta b)(x, y) = b(x) b(y) b(xy)^-1; `b` holds exponents.
inline PhaseCocycle coboundary_twist(const FiniteGroupoid& g, const PhaseCocycle& c, const std::vector<int>& b) {
  detail::require_total(g, c, "coboundary_twist");
  if (c.is_continuous()) throw Error(ErrorKind::Domain, "coboundary_twist: exponent cochain on a continuous cocycle");
  if (b.size() != static_cast<std::size_t>(g.arrows()))
    throw Error(ErrorKind::Domain, "coboundary_twist: 1-cochain must be total on arrows");
  PhaseCocycle out = PhaseCocycle::discrete(g.arrows(), c.modulus());
  for (int x = 0; x < g.arrows(); ++x)
    for (int y = 0; y < g.arrows(); ++y)
      if (g.composable(x, y))
        out.set(x, y,
                static_cast<long long>(c.exponent(x, y)) + b[static_cast<std::size_t>(x)] +
                    b[static_cast<std::size_t>(y)] - b[static_cast<std::size_t>(g.compose(x, y))]);
  return out;
}

/// Continuous-phase version of coboundary_twist.
inline PhaseCocycle coboundary_twist(const FiniteGroupoid& g, const PhaseCocycle& c,
                                     const std::vector<std::complex<double>>& b) {
  detail::require_total(g, c, "coboundary_twist");
  if (b.size() != static_cast<std::size_t>(g.arrows()))
    throw Error(ErrorKind::Domain, "coboundary_twist: 1-cochain must be total on arrows");
  PhaseCocycle out = PhaseCocycle::continuous(g.arrows());
  for (int x = 0; x < g.arrows(); ++x)
    for (int y = 0; y < g.arrows(); ++y)
      if (g.composable(x, y))
        out.set_phase(x, y,
                      c.phase(x, y) * b[static_cast<std::size_t>(x)] * b[static_cast<std::size_t>(y)] /
                          b[static_cast<std::size_t>(g.compose(x, y))]);
  return out;
}

/// An arrow of an extension: a base arrow together with its phase.
struct ExtArrow {
  int arrow = 0;
  std::complex<double> phase{1.0, 0.0};
};

/// R_1 = X_1 x phases with (x, l1)(y, l2) = (xy, l1 l2 c(x, y)).
///
/// Over mu_N the total groupoid is tabulated: arrow (x, k) has index
/// x * N + k, `projection` maps it to x and `phase_action[j * |R_1| + u]`
/// is the action of exp(2 pi i j / N) on u.
struct CentralExtension {
  FiniteGroupoid base;
  PhaseCocycle cocycle;
  int modulus = 0;
  FiniteGroupoid total;
  std::vector<int> projection;
  std::vector<int> phase_action;

  int total_index(int x, int k) const { return x * modulus + mod_n(k, modulus); }
  int act(int k, int u) const {
    return phase_action[static_cast<std::size_t>(mod_n(k, modulus)) * static_cast<std::size_t>(total.arrows()) +
                        static_cast<std::size_t>(u)];
  }

  /// Multiplication in the (x, phase) picture; valid for both coefficient kinds.
  ExtArrow multiply(const ExtArrow& u, const ExtArrow& v) const {
    if (!base.composable(u.arrow, v.arrow)) throw Error(ErrorKind::Domain, "extension: arrows are not composable");
    return ExtArrow{base.compose(u.arrow, v.arrow), u.phase * v.phase * cocycle.phase(u.arrow, v.arrow)};
  }
};

inline CentralExtension central_extend(const FiniteGroupoid& g, const PhaseCocycle& c) {
  const double violation = cocycle_check(g, c);
  if (c.is_continuous() ? violation > kPhaseTolerance : violation != 0.0)
    throw Error(ErrorKind::ExtensionIllDefined,
                "central_extend: cocycle condition fails (max violation " + std::to_string(violation) + ")");
  CentralExtension e;
  e.base = g;
  e.cocycle = c;
  if (c.is_continuous()) return e;

  const int n = c.modulus();
  const int n1 = g.arrows();
  const int total = n1 * n;
  e.modulus = n;
  std::vector<int> src(static_cast<std::size_t>(total)), tgt(src.size()), inv(src.size());
  std::vector<int> ident(static_cast<std::size_t>(g.objects()));
  std::vector<int> comp(static_cast<std::size_t>(total) * static_cast<std::size_t>(total), -1);
  e.projection.resize(static_cast<std::size_t>(total));
  e.phase_action.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(total));
  for (int x = 0; x < n1; ++x)
    for (int k = 0; k < n; ++k) {
      const int u = e.total_index(x, k);
      src[static_cast<std::size_t>(u)] = g.source(x);
      tgt[static_cast<std::size_t>(u)] = g.target(x);
      e.projection[static_cast<std::size_t>(u)] = x;
      for (int j = 0; j < n; ++j)
        e.phase_action[static_cast<std::size_t>(j) * total + u] = e.total_index(x, k + j);
      const int xi = g.inverse(x);
      const int et = g.identity(g.target(x));
      // (x,k)(x^-1,l) must equal the unit (e, -c(e,e)).
      inv[static_cast<std::size_t>(u)] = e.total_index(xi, -k - c.exponent(x, xi) - c.exponent(et, et));
      for (int y = 0; y < n1; ++y) {
        if (!g.composable(x, y)) continue;
        const int xy = g.compose(x, y);
        for (int l = 0; l < n; ++l)
          comp[static_cast<std::size_t>(u) * total + e.total_index(y, l)] =
              e.total_index(xy, static_cast<long long>(k) + l + c.exponent(x, y));
      }
    }
  for (int o = 0; o < g.objects(); ++o) {
    const int eo = g.identity(o);
    ident[static_cast<std::size_t>(o)] = e.total_index(eo, -c.exponent(eo, eo));
  }
  e.total = FiniteGroupoid(g.objects(), std::move(src), std::move(tgt), std::move(ident), std::move(inv), std::move(comp));
  e.total.object_labels = g.object_labels;
  return e;
}

/// max over phases s, t and composable (x, y) of the distance between
/// (s.x)(t.y) and st.(xy). Exhaustive over mu_N; sampled phases otherwise.
inline double centrality_check(const CentralExtension& e) {
  double worst = 0.0;
  if (e.cocycle.is_continuous()) {
    constexpr int kSamples = 8;
    const FiniteGroupoid& g = e.base;
    for (int si = 0; si < kSamples; ++si)
      for (int ti = 0; ti < kSamples; ++ti) {
        const auto s = root_of_unity(si, kSamples) * std::polar(1.0, 0.1 * si);
        const auto t = root_of_unity(ti, kSamples) * std::polar(1.0, 0.07 * ti);
        for (int x = 0; x < g.arrows(); ++x)
          for (int y = 0; y < g.arrows(); ++y) {
            if (!g.composable(x, y)) continue;
            const ExtArrow lhs = e.multiply({x, s}, {y, t});
            const ExtArrow xy = e.multiply({x, 1.0}, {y, 1.0});
            worst = std::max(worst, std::abs(lhs.phase - s * t * xy.phase));
          }
      }
    return worst;
  }
  const int n = e.modulus;
  const FiniteGroupoid& r = e.total;
  for (int u = 0; u < r.arrows(); ++u)
    for (int v = 0; v < r.arrows(); ++v) {
      if (!r.composable(u, v)) continue;
      const int uv = r.compose(u, v);
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
          const int lhs = r.compose(e.act(s, u), e.act(t, v));
          const int rhs = uv >= 0 ? e.act(s + t, uv) : -1;
          if (lhs == rhs) continue;
          if (lhs < 0 || rhs < 0 || e.projection[static_cast<std::size_t>(lhs)] != e.projection[static_cast<std::size_t>(rhs)]) {
            worst = std::max(worst, 2.0);
          } else {
            worst = std::max(worst, std::abs(root_of_unity(lhs % n - rhs % n, n) - 1.0));
          }
        }
    }
  return worst;
}

/// Checks that the projection is a groupoid morphism onto the base and that
/// mu_N acts freely and transitively on every fiber.
inline std::vector<std::string> extension_structure_check(const CentralExtension& e) {
  std::vector<std::string> out;
  if (e.cocycle.is_continuous()) return out;
  const FiniteGroupoid& r = e.total;
  const FiniteGroupoid& g = e.base;
  auto pi = [&](int u) { return e.projection[static_cast<std::size_t>(u)]; };
  for (int u = 0; u < r.arrows(); ++u) {
    if (g.source(pi(u)) != r.source(u) || g.target(pi(u)) != r.target(u)) {
      out.push_back("projection does not preserve source/target at " + std::to_string(u));
      break;
    }
  }
  for (int u = 0; u < r.arrows() && out.empty(); ++u)
    for (int v = 0; v < r.arrows(); ++v)
      if (r.composable(u, v) && pi(r.compose(u, v)) != g.compose(pi(u), pi(v))) {
        out.push_back("projection is not multiplicative at (" + std::to_string(u) + "," + std::to_string(v) + ")");
        break;
      }
  for (int o = 0; o < g.objects(); ++o)
    if (pi(r.identity(o)) != g.identity(o)) {
      out.push_back("projection does not preserve identities");
      break;
    }
  for (int u = 0; u < r.arrows(); ++u) {
    std::vector<bool> seen(static_cast<std::size_t>(e.modulus), false);
    for (int k = 0; k < e.modulus; ++k) {
      const int w = e.act(k, u);
      if (pi(w) != pi(u)) {
        out.push_back("phase action leaves the fiber of " + std::to_string(u));
        return out;
      }
      seen[static_cast<std::size_t>(w % e.modulus)] = true;
    }
    for (bool b : seen)
      if (!b) {
        out.push_back("phase action is not transitive on the fiber of " + std::to_string(u));
        return out;
      }
  }
  return out;
}

}  // namespace fmlab
