#pragma once

// Nerve of a finite groupoid, the unnormalized cochain complex with Z/N
// coefficients, cohomology groups and extension classes.
//
// X_0 holds objects, X_p (p >= 1) chains (g_1, ..., g_p) with
// s(g_i) = t(g_{i+1}). On X_1, d_0 = source and d_1 = target. On X_p,
// d_0 drops g_1, d_p drops g_p and d_i composes g_i g_{i+1}. The
// degeneracy s_i inserts an identity in front of position i+1.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "fmlab/error.hpp"
#include "fmlab/groupoid.hpp"
#include "fmlab/zn_linalg.hpp"

namespace fmlab {

inline constexpr std::size_t kMaxNerveCells = 1000000;
inline constexpr int kMaxNerveDegree = 3;

class Nerve {
 public:
  Nerve(const FiniteGroupoid& g, int p_max) : groupoid_(g), p_max_(p_max) {
    if (p_max < 0 || p_max > kMaxNerveDegree)
      throw Error(ErrorKind::Capacity, "nerve: p_max must lie in [0, " + std::to_string(kMaxNerveDegree) + "]");
    const auto problems = axioms_check(g);
    if (!problems.empty()) throw Error(ErrorKind::Domain, "nerve: groupoid axioms fail: " + problems.front());

    const int n1 = g.arrows();
    chains_.resize(static_cast<std::size_t>(p_max) + 1);
    lookup_.resize(chains_.size());
    counts_.assign(chains_.size(), 0);
    counts_[0] = g.objects();
    std::size_t total = static_cast<std::size_t>(g.objects());
    if (p_max >= 1) {
      counts_[1] = n1;
      total += static_cast<std::size_t>(n1);
      chains_[1].resize(static_cast<std::size_t>(n1));
      for (int x = 0; x < n1; ++x) chains_[1][static_cast<std::size_t>(x)] = x;
    }
    for (int p = 2; p <= p_max; ++p) {
      auto& level = chains_[static_cast<std::size_t>(p)];
      const auto& prev = chains_[static_cast<std::size_t>(p - 1)];
      for (int c = 0; c < counts_[static_cast<std::size_t>(p - 1)]; ++c) {
        const int last = prev[static_cast<std::size_t>(c) * (p - 1) + (p - 2)];
        for (int y = 0; y < n1; ++y) {
          if (!g.composable(last, y)) continue;
          if (++total > kMaxNerveCells)
            throw Error(ErrorKind::Capacity, "nerve: more than " + std::to_string(kMaxNerveCells) + " cells");
          level.insert(level.end(), prev.begin() + static_cast<std::ptrdiff_t>(c) * (p - 1),
                       prev.begin() + static_cast<std::ptrdiff_t>(c + 1) * (p - 1));
          level.push_back(y);
        }
      }
      counts_[static_cast<std::size_t>(p)] = static_cast<int>(level.size() / static_cast<std::size_t>(p));
    }
    if (total > kMaxNerveCells)
      throw Error(ErrorKind::Capacity, "nerve: more than " + std::to_string(kMaxNerveCells) + " cells");
    for (int p = 2; p <= p_max; ++p)
      for (int c = 0; c < counts_[static_cast<std::size_t>(p)]; ++c)
        lookup_[static_cast<std::size_t>(p)].emplace(key(chain(p, c)), c);

    faces_.resize(chains_.size());
    for (int p = 1; p <= p_max; ++p) {
      auto& f = faces_[static_cast<std::size_t>(p)];
      f.assign(static_cast<std::size_t>(p + 1), std::vector<int>(static_cast<std::size_t>(size(p))));
      for (int c = 0; c < size(p); ++c)
        for (int i = 0; i <= p; ++i) f[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = compute_face(p, i, c);
    }
    degens_.resize(chains_.size());
    for (int p = 0; p < p_max; ++p) {
      auto& s = degens_[static_cast<std::size_t>(p)];
      s.assign(static_cast<std::size_t>(p + 1), std::vector<int>(static_cast<std::size_t>(size(p))));
      for (int c = 0; c < size(p); ++c)
        for (int i = 0; i <= p; ++i)
          s[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = compute_degeneracy(p, i, c);
    }
  }

  const FiniteGroupoid& groupoid() const noexcept { return groupoid_; }
  int p_max() const noexcept { return p_max_; }
  int size(int p) const { return counts_.at(static_cast<std::size_t>(p)); }

  /// The arrows of a p-chain (p >= 1); for p = 0 the single object.
  std::vector<int> chain(int p, int c) const {
    if (p == 0) return {c};
    const auto& level = chains_[static_cast<std::size_t>(p)];
    const auto begin = level.begin() + static_cast<std::ptrdiff_t>(c) * p;
    return {begin, begin + p};
  }

  /// Index of a p-chain, or -1 if it is not a cell of X_p.
  int find(int p, const std::vector<int>& arrows) const {
    if (p < 0 || p > p_max_ || static_cast<int>(arrows.size()) != (p == 0 ? 1 : p)) return -1;
    if (p <= 1) return arrows[0] >= 0 && arrows[0] < size(p) ? arrows[0] : -1;
    const auto& m = lookup_[static_cast<std::size_t>(p)];
    const auto it = m.find(key(arrows));
    return it == m.end() ? -1 : it->second;
  }

  int face(int p, int i, int c) const {
    return faces_[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
  }
  int degeneracy(int p, int i, int c) const {
    return degens_[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
  }

 private:
  std::uint64_t key(const std::vector<int>& arrows) const {
    std::uint64_t k = 0;
    for (int x : arrows) k = k * static_cast<std::uint64_t>(groupoid_.arrows()) + static_cast<std::uint64_t>(x);
    return k;
  }

  int compute_face(int p, int i, int c) const {
    const auto ch = chain(p, c);
    if (p == 1) return i == 0 ? groupoid_.source(ch[0]) : groupoid_.target(ch[0]);
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(p - 1));
    for (int j = 0; j < p; ++j) {
      if (i == 0 && j == 0) continue;
      if (i == p && j == p - 1) continue;
      if (i > 0 && i < p && j == i - 1) {
        out.push_back(groupoid_.compose(ch[static_cast<std::size_t>(j)], ch[static_cast<std::size_t>(j + 1)]));
        ++j;
        continue;
      }
      out.push_back(ch[static_cast<std::size_t>(j)]);
    }
    const int idx = find(p - 1, out);
    if (idx < 0) throw Error(ErrorKind::InternalConsistency, "nerve: face left the nerve");
    return idx;
  }

  int compute_degeneracy(int p, int i, int c) const {
    if (p == 0) return groupoid_.identity(c);
    const auto ch = chain(p, c);
    const int unit = i == 0 ? groupoid_.identity(groupoid_.target(ch[0]))
                            : groupoid_.identity(groupoid_.source(ch[static_cast<std::size_t>(i - 1)]));
    std::vector<int> out = ch;
    out.insert(out.begin() + i, unit);
    const int idx = find(p + 1, out);
    if (idx < 0) throw Error(ErrorKind::InternalConsistency, "nerve: degeneracy left the nerve");
    return idx;
  }

  FiniteGroupoid groupoid_;
  int p_max_;
  std::vector<int> counts_;
  std::vector<std::vector<int>> chains_;
  std::vector<std::unordered_map<std::uint64_t, int>> lookup_;
  std::vector<std::vector<std::vector<int>>> faces_;
  std::vector<std::vector<std::vector<int>>> degens_;
};

/// Exhaustive scan of the five families of simplicial identities. Returns one
/// diagnostic per family with violations; empty means all hold.
inline std::vector<std::string> simplicial_identity_check(const Nerve& n) {
  std::vector<std::string> out;
  const int pm = n.p_max();
  long dd = 0, ds_lo = 0, ds_id = 0, ds_hi = 0, ss = 0;
  // d_i d_j = d_{j-1} d_i for i < j, on X_p with p >= 2
  for (int p = 2; p <= pm; ++p)
    for (int c = 0; c < n.size(p); ++c)
      for (int j = 1; j <= p; ++j)
        for (int i = 0; i < j; ++i)
          if (n.face(p - 1, i, n.face(p, j, c)) != n.face(p - 1, j - 1, n.face(p, i, c))) ++dd;
  // d_i s_j on X_p, s_j: X_p -> X_{p+1}
  for (int p = 0; p < pm; ++p)
    for (int c = 0; c < n.size(p); ++c)
      for (int j = 0; j <= p; ++j) {
        const int sc = n.degeneracy(p, j, c);
        for (int i = 0; i <= p + 1; ++i) {
          const int lhs = n.face(p + 1, i, sc);
          if (i < j) {
            if (lhs != n.degeneracy(p - 1, j - 1, n.face(p, i, c))) ++ds_lo;
          } else if (i == j || i == j + 1) {
            if (lhs != c) ++ds_id;
          } else if (lhs != n.degeneracy(p - 1, j, n.face(p, i - 1, c))) {
            ++ds_hi;
          }
        }
      }
  // s_i s_j = s_{j+1} s_i for i <= j
  for (int p = 0; p + 2 <= pm; ++p)
    for (int c = 0; c < n.size(p); ++c)
      for (int j = 0; j <= p; ++j)
        for (int i = 0; i <= j; ++i)
          if (n.degeneracy(p + 1, i, n.degeneracy(p, j, c)) != n.degeneracy(p + 1, j + 1, n.degeneracy(p, i, c))) ++ss;
  auto report = [&](const char* what, long count) {
    if (count > 0) out.push_back(std::string(what) + ": " + std::to_string(count) + " violations");
  };
  report("d_i d_j = d_{j-1} d_i (i<j)", dd);
  report("d_i s_j = s_{j-1} d_i (i<j)", ds_lo);
  report("d_j s_j = d_{j+1} s_j = id", ds_id);
  report("d_i s_j = s_j d_{i-1} (i>j+1)", ds_hi);
  report("s_i s_j = s_{j+1} s_i (i<=j)", ss);
  return out;
}

struct Cochain {
  int degree = 0;
  int modulus = 1;
  std::vector<int> values;
};

inline Cochain zero_cochain(const Nerve& n, int degree, int modulus) {
  if (degree < 0 || degree > n.p_max()) throw Error(ErrorKind::Domain, "cochain: degree outside the nerve");
  if (modulus < 1) throw Error(ErrorKind::Domain, "cochain: modulus must be positive");
  return {degree, modulus, std::vector<int>(static_cast<std::size_t>(n.size(degree)), 0)};
}

/// (df)(c) = sum_i (-1)^i f(d_i c) mod N.
inline Cochain coboundary(const Cochain& f, const Nerve& n) {
  if (f.degree >= n.p_max())
    throw Error(ErrorKind::Domain, "coboundary: degree " + std::to_string(f.degree) + " overflows nerve of depth " +
                                       std::to_string(n.p_max()));
  if (f.values.size() != static_cast<std::size_t>(n.size(f.degree)))
    throw Error(ErrorKind::Domain, "coboundary: cochain is not total on X_" + std::to_string(f.degree));
  const int p = f.degree + 1;
  Cochain out = zero_cochain(n, p, f.modulus);
  for (int c = 0; c < n.size(p); ++c) {
    long long acc = 0;
    for (int i = 0; i <= p; ++i) {
      const long long v = f.values[static_cast<std::size_t>(n.face(p, i, c))];
      acc += (i % 2 == 0) ? v : -v;
    }
    out.values[static_cast<std::size_t>(c)] = mod_n(acc, f.modulus);
  }
  return out;
}

/// Matrix of d_p : C^p -> C^{p+1} over Z/N.
inline ZnMatrix coboundary_matrix(const Nerve& n, int p, int modulus) {
  if (p < 0 || p >= n.p_max()) throw Error(ErrorKind::Domain, "coboundary_matrix: degree overflow");
  ZnMatrix m(n.size(p + 1), n.size(p), modulus);
  for (int c = 0; c < n.size(p + 1); ++c)
    for (int i = 0; i <= p + 1; ++i) m.add(c, n.face(p + 1, i, c), i % 2 == 0 ? 1 : -1);
  return m;
}

/// The exponents of a mu_N cocycle as a 2-cochain on the nerve.
inline Cochain cochain_from_cocycle(const Nerve& n, const PhaseCocycle& c) {
  if (c.is_continuous())
    throw Error(ErrorKind::UnsupportedCoefficients, "cochain: continuous phases have no finite-coefficient cochain");
  Cochain out = zero_cochain(n, 2, c.modulus());
  for (int k = 0; k < n.size(2); ++k) {
    const auto ch = n.chain(2, k);
    out.values[static_cast<std::size_t>(k)] = c.exponent(ch[0], ch[1]);
  }
  return out;
}

struct CohomologyGroup {
  int degree = 0;
  int modulus = 1;
  std::vector<int> invariant_factors;  // each > 1, each dividing the next
  bool trivial() const noexcept { return invariant_factors.empty(); }
  bool operator==(const CohomologyGroup&) const = default;
};

/// ker d_p / im d_{p-1} over Z/N, with coordinates for cocycles.
///
/// The kernel is read off a Smith form of d_p (tracking Q^-1), the image of
/// d_{p-1} is expressed in kernel coordinates, and the quotient is a second
/// Smith form (tracking P) of the relation matrix.
class CohomologyComputation {
 public:
  CohomologyComputation(const FiniteGroupoid& g, int degree, int modulus)
      : CohomologyComputation(Nerve(g, degree + 1), degree, modulus) {}

  CohomologyComputation(Nerve nerve, int degree, int modulus) : nerve_(std::move(nerve)), degree_(degree), modulus_(modulus) {
    if (modulus < 1) throw Error(ErrorKind::Domain, "cohomology: modulus must be positive");
    if (degree < 0 || degree + 1 > nerve_.p_max())
      throw Error(ErrorKind::Capacity, "cohomology: nerve must reach degree " + std::to_string(degree + 1));
    const int n = modulus;
    const int cells = nerve_.size(degree);
    auto kernel = smith_form(coboundary_matrix(nerve_, degree, n), false, true);
    q_inverse_ = std::move(*kernel.right_inverse);
    kernel_orders_.resize(static_cast<std::size_t>(cells));
    for (int i = 0; i < cells; ++i)
      kernel_orders_[static_cast<std::size_t>(i)] =
          i < static_cast<int>(kernel.diagonal.size()) ? kernel.diagonal[static_cast<std::size_t>(i)] : n;
    for (int i = 0; i < cells; ++i)
      if (kernel_orders_[static_cast<std::size_t>(i)] > 1) kept_.push_back(i);

    std::vector<std::vector<std::int64_t>> relations;
    for (std::size_t r = 0; r < kept_.size(); ++r) {
      const auto ord = kernel_orders_[static_cast<std::size_t>(kept_[r])];
      if (ord == n) continue;
      std::vector<std::int64_t> col(kept_.size(), 0);
      col[r] = ord;
      relations.push_back(std::move(col));
    }
    if (degree > 0) {
      const auto prev = coboundary_matrix(nerve_, degree - 1, n);
      std::vector<std::int64_t> col(static_cast<std::size_t>(cells));
      for (int j = 0; j < prev.cols(); ++j) {
        for (int i = 0; i < cells; ++i) col[static_cast<std::size_t>(i)] = prev(i, j);
        relations.push_back(kernel_coordinates(col));
      }
    }
    const int rows = static_cast<int>(kept_.size());
    ZnMatrix rel(rows, static_cast<int>(relations.size()), n);
    for (std::size_t j = 0; j < relations.size(); ++j)
      for (int i = 0; i < rows; ++i) rel(i, static_cast<int>(j)) = relations[j][static_cast<std::size_t>(i)];
    auto quotient = smith_form(rel, true, false);
    p_quotient_ = std::move(*quotient.left);
    quotient_orders_.resize(static_cast<std::size_t>(rows));
    for (int i = 0; i < rows; ++i)
      quotient_orders_[static_cast<std::size_t>(i)] =
          i < static_cast<int>(quotient.diagonal.size()) ? quotient.diagonal[static_cast<std::size_t>(i)] : n;
    group_.degree = degree;
    group_.modulus = n;
    for (int i = 0; i < rows; ++i)
      if (quotient_orders_[static_cast<std::size_t>(i)] > 1)
        group_.invariant_factors.push_back(static_cast<int>(quotient_orders_[static_cast<std::size_t>(i)]));
  }

  const CohomologyGroup& group() const noexcept { return group_; }
  const Nerve& nerve() const noexcept { return nerve_; }

  /// Class of a cocycle as exponents along the invariant factors.
  std::vector<int> classify(const Cochain& z) const {
    if (z.degree != degree_ || z.modulus != modulus_ || z.values.size() != static_cast<std::size_t>(nerve_.size(degree_)))
      throw Error(ErrorKind::Domain, "cohomology: cochain does not match the computation");
    std::vector<std::int64_t> v(z.values.begin(), z.values.end());
    const auto c = kernel_coordinates(v);
    const auto u = p_quotient_.apply(c);
    std::vector<int> out;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const auto ord = quotient_orders_[i];
      if (ord > 1) out.push_back(static_cast<int>(u[i] % ord));
    }
    return out;
  }

 private:
  std::vector<std::int64_t> kernel_coordinates(const std::vector<std::int64_t>& z) const {
    const auto y = q_inverse_.apply(z);
    std::vector<std::int64_t> out(kept_.size(), 0);
    for (std::size_t i = 0; i < y.size(); ++i) {
      const auto ord = kernel_orders_[i];
      const auto step = modulus_ / ord;
      if (y[i] % step != 0) throw Error(ErrorKind::Cocycle, "cohomology: cochain is not a cocycle");
      if (ord == 1) continue;
      const auto pos = static_cast<std::size_t>(std::lower_bound(kept_.begin(), kept_.end(), static_cast<int>(i)) - kept_.begin());
      out[pos] = y[i] / step;
    }
    return out;
  }

  Nerve nerve_;
  int degree_;
  int modulus_;
  ZnMatrix q_inverse_;
  std::vector<std::int64_t> kernel_orders_;
  std::vector<int> kept_;
  ZnMatrix p_quotient_;
  std::vector<std::int64_t> quotient_orders_;
  CohomologyGroup group_;
};

inline CohomologyGroup cohomology_group(const FiniteGroupoid& g, int degree, int modulus) {
  return CohomologyComputation(g, degree, modulus).group();
}

/// Decides whether two 2-cocycles differ by a coboundary, using only the
/// Smith form of d_1 (much cheaper than the full H^2 computation).
class CoboundaryTest {
 public:
  CoboundaryTest(const FiniteGroupoid& g, int modulus) : nerve_(g, 2), modulus_(modulus) {
    auto s = smith_form(coboundary_matrix(nerve_, 1, modulus), true, false);
    p_ = std::move(*s.left);
    orders_.resize(static_cast<std::size_t>(nerve_.size(2)));
    for (std::size_t i = 0; i < orders_.size(); ++i) orders_[i] = i < s.diagonal.size() ? s.diagonal[i] : modulus;
  }

  bool is_coboundary(const Cochain& d) const {
    std::vector<std::int64_t> v(d.values.begin(), d.values.end());
    const auto u = p_.apply(v);
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] % orders_[i] != 0 || (orders_[i] == modulus_ && u[i] != 0)) return false;
    return true;
  }

  bool cohomologous(const PhaseCocycle& a, const PhaseCocycle& b) const {
    const auto ca = cochain_from_cocycle(nerve_, a);
    const auto cb = cochain_from_cocycle(nerve_, b);
    Cochain d = ca;
    for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] = mod_n(ca.values[i] - cb.values[i], modulus_);
    return is_coboundary(d);
  }

  const Nerve& nerve() const noexcept { return nerve_; }

 private:
  Nerve nerve_;
  int modulus_;
  ZnMatrix p_;
  std::vector<std::int64_t> orders_;
};

struct ExtensionClass {
  CohomologyGroup group;
  std::vector<int> coordinates;
  bool is_zero() const {
    for (int v : coordinates)
      if (v != 0) return false;
    return true;
  }
};

/// Reads c(x, y) off the tabulated multiplication (x, 0)(y, 0) = (xy, c(x, y)).
inline PhaseCocycle cocycle_from_multiplication(const CentralExtension& e) {
  if (e.cocycle.is_continuous() || e.modulus == 0)
    throw Error(ErrorKind::UnsupportedCoefficients, "extension_class: continuous-phase extensions are not classified");
  const auto& g = e.base;
  PhaseCocycle c = PhaseCocycle::discrete(g.arrows(), e.modulus);
  for (int x = 0; x < g.arrows(); ++x)
    for (int y = 0; y < g.arrows(); ++y) {
      if (!g.composable(x, y)) continue;
      const int w = e.total.compose(e.total_index(x, 0), e.total_index(y, 0));
      if (w < 0 || e.projection[static_cast<std::size_t>(w)] != g.compose(x, y))
        throw Error(ErrorKind::InternalConsistency, "extension_class: multiplication does not cover the base");
      c.set(x, y, w % e.modulus);
    }
  return c;
}

inline ExtensionClass extension_class(const CentralExtension& e) {
  const auto c = cocycle_from_multiplication(e);
  CohomologyComputation h(e.base, 2, e.modulus);
  return {h.group(), h.classify(cochain_from_cocycle(h.nerve(), c))};
}

}  // namespace fmlab
