#pragma once

// Seeded instance generators.
//
// Bits come from std::mt19937_64, whose output sequence is fixed by the C++
// standard. The conversions to reals and integers are done here rather than
// through <random> distributions, whose algorithms are implementation-defined,
// so a seed yields the same instances on every platform.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "fmlab/cohomology.hpp"
#include "fmlab/glue.hpp"
#include "fmlab/group.hpp"
#include "fmlab/groupoid.hpp"
#include "fmlab/operator.hpp"
#include "fmlab/regdet.hpp"

namespace fmlab {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform on {0, ..., n-1} by rejection.
  int below(int n) {
    const std::uint64_t range = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return static_cast<int>(v % range);
  }
  int between(int lo, int hi) { return lo + below(hi - lo + 1); }

  /// Standard normal by Box-Muller.
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Complex complex_normal() { return {normal() * std::numbers::sqrt2 / 2.0, normal() * std::numbers::sqrt2 / 2.0}; }

  /// Derived generator for an independent stream.
  Rng split() { return Rng(engine_() ^ 0x9e3779b97f4a7c15ULL); }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Matrices

inline CMatrix random_complex(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  return m;
}

inline CMatrix random_hermitian(Rng& rng, Eigen::Index n) {
  const CMatrix g = random_complex(rng, n, n);
  return (g + g.adjoint()) / 2.0;
}

inline CMatrix random_anti_hermitian(Rng& rng, Eigen::Index n, double scale = 1.0) {
  const CMatrix g = random_complex(rng, n, n);
  return scale * (g - g.adjoint()) / 2.0;
}

inline CMatrix random_unitary(Rng& rng, Eigen::Index n) { return matrix_exponential(random_anti_hermitian(rng, n)); }

/// Random A scaled to spectral radius exactly `radius`.
inline CMatrix random_with_spectral_radius(Rng& rng, Eigen::Index n, double radius) {
  CMatrix a = random_complex(rng, n, n);
  const double rho = spectral_radius(a);
  return rho > 0.0 ? CMatrix(a * (radius / rho)) : a;
}

/// Random A with operator norm `norm`, so 1 + A is invertible when norm < 1.
inline CMatrix random_with_norm(Rng& rng, Eigen::Index n, double norm) {
  CMatrix a = random_complex(rng, n, n);
  const double s = operator_norm(a);
  return s > 0.0 ? CMatrix(a * (norm / s)) : a;
}

/// 1 + A with ||A|| = norm.
inline CMatrix random_unital(Rng& rng, Eigen::Index n, double norm = 0.4) {
  return identity(n) + random_with_norm(rng, n, norm);
}

/// Hermitian matrix whose eigenvalues all stay at least `gap` from zero.
inline CMatrix random_gapped_hermitian(Rng& rng, Eigen::Index n, double gap = 0.05) {
  for (;;) {
    CMatrix h = random_hermitian(rng, n);
    const auto eig = hermitian_eigensystem(h);
    if (eig.values.cwiseAbs().minCoeff() >= gap) return h;
  }
}

// ---------------------------------------------------------------------------
// Groups, actions and cocycles

/// Groups of order at most `max_order` from a fixed catalog.
inline std::vector<FiniteGroup> group_catalog(int max_order) {
  std::vector<FiniteGroup> out;
  for (int n = 1; n <= max_order; ++n) out.push_back(FiniteGroup::cyclic(n));
  const auto z2 = FiniteGroup::cyclic(2);
  if (max_order >= 4) out.push_back(FiniteGroup::product(z2, z2));
  if (max_order >= 6) out.push_back(FiniteGroup::dihedral(3));
  if (max_order >= 8) {
    out.push_back(FiniteGroup::product(z2, FiniteGroup::cyclic(4)));
    out.push_back(FiniteGroup::product(FiniteGroup::product(z2, z2), z2));
    out.push_back(FiniteGroup::dihedral(4));
  }
  return out;
}

/// Elements of the subgroup generated by `gens`.
inline std::vector<int> generated_subgroup(const FiniteGroup& g, const std::vector<int>& gens) {
  std::vector<bool> in(static_cast<std::size_t>(g.order()), false);
  std::vector<int> members{g.identity()};
  in[static_cast<std::size_t>(g.identity())] = true;
  for (std::size_t i = 0; i < members.size(); ++i)
    for (int s : gens) {
      const int h = g.mul(members[i], s);
      if (!in[static_cast<std::size_t>(h)]) {
        in[static_cast<std::size_t>(h)] = true;
        members.push_back(h);
      }
    }
  return members;
}

/// All homomorphisms G -> Z_n, each as a table of values.
inline std::vector<std::vector<int>> homomorphisms_to_cyclic(const FiniteGroup& g, int n) {
  std::vector<int> gens;
  while (static_cast<int>(generated_subgroup(g, gens).size()) < g.order()) {
    const auto sub = generated_subgroup(g, gens);
    std::vector<bool> in(static_cast<std::size_t>(g.order()), false);
    for (int h : sub) in[static_cast<std::size_t>(h)] = true;
    for (int h = 0; h < g.order(); ++h)
      if (!in[static_cast<std::size_t>(h)]) {
        gens.push_back(h);
        break;
      }
  }
  std::vector<std::vector<int>> out;
  std::vector<int> assign(gens.size(), 0);
  for (;;) {
    // Extend along words in the generators; reject on any inconsistency.
    std::vector<int> phi(static_cast<std::size_t>(g.order()), -1);
    phi[static_cast<std::size_t>(g.identity())] = 0;
    std::vector<int> frontier{g.identity()};
    bool ok = true;
    for (std::size_t i = 0; i < frontier.size() && ok; ++i)
      for (std::size_t k = 0; k < gens.size() && ok; ++k) {
        const int h = g.mul(frontier[i], gens[k]);
        const int v = (phi[static_cast<std::size_t>(frontier[i])] + assign[k]) % n;
        if (phi[static_cast<std::size_t>(h)] < 0) {
          phi[static_cast<std::size_t>(h)] = v;
          frontier.push_back(h);
        } else if (phi[static_cast<std::size_t>(h)] != v) {
          ok = false;
        }
      }
    for (int a = 0; a < g.order() && ok; ++a)
      for (int b = 0; b < g.order() && ok; ++b)
        ok = phi[static_cast<std::size_t>(g.mul(a, b))] ==
             (phi[static_cast<std::size_t>(a)] + phi[static_cast<std::size_t>(b)]) % n;
    if (ok) out.push_back(phi);
    std::size_t k = 0;
    while (k < assign.size() && ++assign[k] == n) assign[k++] = 0;
    if (k == assign.size()) break;
  }
  return out;
}

/// A right G-set of at most `max_points` points assembled from coset spaces
/// H\G for cyclic subgroups H and the whole group.
inline RightAction random_action(Rng& rng, const FiniteGroup& g, int max_points) {
  std::vector<int> table;
  int points = 0;
  const int n = g.order();
  for (;;) {
    std::vector<int> sub;
    if (rng.below(4) == 0)
      sub = generated_subgroup(g, {});
    else if (rng.below(3) == 0)
      sub = generated_subgroup(g, {rng.below(n)});
    else {
      std::vector<int> all(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
      sub = generated_subgroup(g, all);
    }
    const int size = n / static_cast<int>(sub.size());
    if (points + size > max_points) {
      if (points > 0) break;
      continue;
    }
    // Right cosets H x, labelled by first discovery.
    std::vector<int> coset_of(static_cast<std::size_t>(n), -1);
    int cosets = 0;
    for (int x = 0; x < n; ++x) {
      if (coset_of[static_cast<std::size_t>(x)] >= 0) continue;
      for (int h : sub) coset_of[static_cast<std::size_t>(g.mul(h, x))] = cosets;
      ++cosets;
    }
    std::vector<int> rep(static_cast<std::size_t>(cosets), -1);
    for (int x = n - 1; x >= 0; --x) rep[static_cast<std::size_t>(coset_of[static_cast<std::size_t>(x)])] = x;
    for (int c = 0; c < cosets; ++c)
      for (int s = 0; s < n; ++s)
        table.push_back(points + coset_of[static_cast<std::size_t>(g.mul(rep[static_cast<std::size_t>(c)], s))]);
    points += cosets;
    if (points == max_points || rng.below(3) == 0) break;
  }
  return RightAction(g, points, std::move(table));
}

/// A random mu_N 2-cocycle on A x| G: orbitwise multiples of pulled-back
/// carry and bilinear cocycles of G, plus a random coboundary.
inline PhaseCocycle random_cocycle(Rng& rng, const RightAction& action, const FiniteGroupoid& gpd, int modulus) {
  const FiniteGroup& g = action.group();
  const int n = g.order();
  const auto orbit = action.orbits();
  std::vector<int> weight(static_cast<std::size_t>(action.points()), 0);
  auto reweight = [&] {
    for (int a = 0; a < action.points(); ++a)
      if (orbit[static_cast<std::size_t>(a)] == a) weight[static_cast<std::size_t>(a)] = rng.below(modulus);
  };
  std::vector<long long> values(static_cast<std::size_t>(action.points()) * n * n, 0);
  auto add_group_cocycle = [&](const std::vector<int>& c) {
    reweight();
    for (int a = 0; a < action.points(); ++a) {
      const long long w = weight[static_cast<std::size_t>(orbit[static_cast<std::size_t>(a)])];
      for (int f = 0; f < n * n; ++f) values[static_cast<std::size_t>(a) * n * n + f] += w * c[static_cast<std::size_t>(f)];
    }
  };
  for (int k = 2; k <= 8; ++k) {
    const auto homs = homomorphisms_to_cyclic(g, k);
    if (homs.size() <= 1) continue;
    const auto& phi = homs[static_cast<std::size_t>(rng.below(static_cast<int>(homs.size())))];
    std::vector<int> carry(static_cast<std::size_t>(n * n));
    for (int f = 0; f < n; ++f)
      for (int h = 0; h < n; ++h)
        carry[static_cast<std::size_t>(f * n + h)] = (phi[static_cast<std::size_t>(f)] + phi[static_cast<std::size_t>(h)]) / k;
    add_group_cocycle(carry);
  }
  const auto chars = homomorphisms_to_cyclic(g, modulus);
  for (int r = 0; r < 2 && chars.size() > 1; ++r) {
    const auto& x1 = chars[static_cast<std::size_t>(rng.below(static_cast<int>(chars.size())))];
    const auto& x2 = chars[static_cast<std::size_t>(rng.below(static_cast<int>(chars.size())))];
    std::vector<int> bil(static_cast<std::size_t>(n * n));
    for (int f = 0; f < n; ++f)
      for (int h = 0; h < n; ++h)
        bil[static_cast<std::size_t>(f * n + h)] = x1[static_cast<std::size_t>(f)] * x2[static_cast<std::size_t>(h)] % modulus;
    add_group_cocycle(bil);
  }
  PhaseCocycle c = PhaseCocycle::discrete(gpd.arrows(), modulus);
  for (int a = 0; a < action.points(); ++a)
    for (int f = 0; f < n; ++f)
      for (int h = 0; h < n; ++h)
        c.set(a * n + f, action.act(a, f) * n + h, values[(static_cast<std::size_t>(a) * n + f) * n + h]);
  std::vector<int> b(static_cast<std::size_t>(gpd.arrows()));
  for (auto& v : b) v = rng.below(modulus);
  return coboundary_twist(gpd, c, b);
}

struct ActionInstance {
  RightAction action;
  FiniteGroupoid groupoid;
  int modulus;
  PhaseCocycle cocycle;
};

inline ActionInstance random_action_instance(Rng& rng, int max_points, int max_group, int max_modulus) {
  const auto catalog = group_catalog(max_group);
  const FiniteGroup& g = catalog[static_cast<std::size_t>(rng.below(static_cast<int>(catalog.size())))];
  RightAction action = random_action(rng, g, max_points);
  FiniteGroupoid gpd = action_groupoid(action);
  const int modulus = rng.between(2, max_modulus);
  PhaseCocycle c = random_cocycle(rng, action, gpd, modulus);
  return {std::move(action), std::move(gpd), modulus, std::move(c)};
}

/// A cover of G by 1..max_charts charts with random gauges, refining `global`.
inline LocalExtensionData random_refined_cover(Rng& rng, const RightAction& action, const PhaseCocycle& global,
                                               int max_charts) {
  const int n = action.group().order();
  const int count = rng.between(1, max_charts);
  std::vector<std::vector<int>> charts(static_cast<std::size_t>(count));
  for (int g = 0; g < n; ++g) {
    const int home = rng.below(count);
    for (int a = 0; a < count; ++a)
      if (a == home || rng.below(3) == 0) charts[static_cast<std::size_t>(a)].push_back(g);
  }
  for (auto& chart : charts)
    if (chart.empty()) chart.push_back(rng.below(n));
  std::vector<std::vector<int>> gauge(static_cast<std::size_t>(count));
  for (auto& b : gauge) {
    b.resize(static_cast<std::size_t>(action.points()) * n);
    for (auto& v : b) v = rng.below(global.modulus());
  }
  return refine_cocycle(action, global, charts, gauge);
}

}  // namespace fmlab
