#include <map>
#include <numeric>
#include <set>

#include "fmlab/cohomology.hpp"
#include "fmlab/random.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace fmlab;

namespace {

FiniteGroupoid bgroup(const FiniteGroup& g) { return action_groupoid(RightAction::trivial(g, 1)); }

long long order_of(const CohomologyGroup& h) {
  long long o = 1;
  for (int f : h.invariant_factors) o *= f;
  return o;
}

}  // namespace

TEST(SmithForm, OrdersMatchBruteForceImage) {
  Rng rng(51);
  for (int i = 0; i < 40; ++i) {
    const int n = rng.between(2, 12);
    const int rows = rng.between(1, 3), cols = rng.between(1, 3);
    ZnMatrix m(rows, cols, n);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(r, c) = rng.below(n);
    std::set<std::vector<std::int64_t>> image;
    std::vector<std::int64_t> x(static_cast<std::size_t>(cols), 0);
    for (;;) {
      image.insert(m.apply(x));
      std::size_t k = 0;
      while (k < x.size() && ++x[k] == n) x[k++] = 0;
      if (k == x.size()) break;
    }
    const SmithForm s = smith_form(m, true, true);
    long long predicted = 1;
    for (auto d : s.diagonal) predicted *= n / d;
    EXPECT_EQ(static_cast<long long>(image.size()), predicted) << "N=" << n;
    for (std::size_t t = 1; t < s.diagonal.size(); ++t)
      if (s.diagonal[t] != n) EXPECT_EQ(s.diagonal[t] % s.diagonal[t - 1], 0);
    ASSERT_TRUE(s.left.has_value());
    ASSERT_TRUE(s.right_inverse.has_value());
    EXPECT_EQ(s.left->rows(), rows);
    EXPECT_EQ(s.right_inverse->rows(), cols);
  }
}

TEST(SmithForm, TransformsAreInvertible) {
  Rng rng(52);
  for (int i = 0; i < 20; ++i) {
    const int n = rng.between(2, 6);
    ZnMatrix m(3, 3, n);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m(r, c) = rng.below(n);
    const SmithForm s = smith_form(m, true, true);
    for (const ZnMatrix* t : {&*s.left, &*s.right_inverse}) {
      std::set<std::vector<std::int64_t>> image;
      std::vector<std::int64_t> x(3, 0);
      for (;;) {
        image.insert(t->apply(x));
        std::size_t k = 0;
        while (k < 3 && ++x[k] == n) x[k++] = 0;
        if (k == 3) break;
      }
      EXPECT_EQ(static_cast<int>(image.size()), n * n * n);
    }
  }
}

TEST(SmithForm, KnownDiagonal) {
  ZnMatrix m(2, 2, 12);
  m(0, 0) = 4;
  m(0, 1) = 6;
  m(1, 0) = 0;
  m(1, 1) = 0;
  const SmithForm s = smith_form(m, false, false);
  EXPECT_EQ(s.diagonal, (std::vector<std::int64_t>{2, 12}));
  EXPECT_EQ(s.rank, 1);
}

TEST(Nerve, CountsFacesAndIdentities) {
  const FiniteGroupoid bz2 = bgroup(FiniteGroup::cyclic(2));
  const Nerve n(bz2, 3);
  EXPECT_EQ(n.size(0), 1);
  EXPECT_EQ(n.size(1), 2);
  EXPECT_EQ(n.size(2), 4);
  EXPECT_EQ(n.size(3), 8);
  EXPECT_TRUE(simplicial_identity_check(n).empty());

  const FiniteGroupoid g = action_groupoid(RightAction::regular(FiniteGroup::cyclic(3)));
  const Nerve m(g, 3);
  EXPECT_EQ(m.size(2), 27);
  for (int x = 0; x < g.arrows(); ++x) {
    EXPECT_EQ(m.face(1, 0, x), g.source(x));
    EXPECT_EQ(m.face(1, 1, x), g.target(x));
  }
  for (int c = 0; c < m.size(2); ++c) {
    const auto ch = m.chain(2, c);
    EXPECT_EQ(m.face(2, 0, c), ch[1]);
    EXPECT_EQ(m.face(2, 1, c), g.compose(ch[0], ch[1]));
    EXPECT_EQ(m.face(2, 2, c), ch[0]);
    EXPECT_EQ(m.find(2, ch), c);
  }
  EXPECT_EQ(m.find(2, {1, 1}), -1);
  EXPECT_EQ(m.degeneracy(0, 0, 1), g.identity(1));
  EXPECT_TRUE(simplicial_identity_check(m).empty());

  Rng rng(53);
  for (int i = 0; i < 10; ++i)
    EXPECT_TRUE(simplicial_identity_check(Nerve(random_action_instance(rng, 3, 6, 2).groupoid, 3)).empty());
}

TEST(Nerve, Limits) {
  const FiniteGroupoid bz2 = bgroup(FiniteGroup::cyclic(2));
  EXPECT_FMLAB_ERROR(ErrorKind::Capacity, Nerve(bz2, 4));
  EXPECT_FMLAB_ERROR(ErrorKind::Capacity, Nerve(bz2, -1));
  // 32 points with a free Z/32 action: X_3 has 32^4 > 10^6 cells.
  EXPECT_FMLAB_ERROR(ErrorKind::Capacity, Nerve(action_groupoid(RightAction::regular(FiniteGroup::cyclic(32))), 3));
  FiniteGroupoid broken = bz2;
  broken.set_compose(1, 1, 1);
  EXPECT_FMLAB_ERROR(ErrorKind::Domain, Nerve(broken, 2));
}

TEST(Cochains, CoboundarySquaresToZero) {
  Rng rng(54);
  for (int i = 0; i < 20; ++i) {
    const auto inst = random_action_instance(rng, 3, 6, 6);
    const Nerve n(inst.groupoid, 3);
    for (int p = 0; p <= 1; ++p) {
      Cochain f = zero_cochain(n, p, inst.modulus);
      for (auto& v : f.values) v = rng.below(inst.modulus);
      for (int v : coboundary(coboundary(f, n), n).values) EXPECT_EQ(v, 0);
    }
    EXPECT_FMLAB_ERROR(ErrorKind::Domain, coboundary(zero_cochain(n, 3, inst.modulus), n));
    // A groupoid 2-cocycle is a closed 2-cochain.
    for (int v : coboundary(cochain_from_cocycle(n, inst.cocycle), n).values) EXPECT_EQ(v, 0);
  }
}

TEST(Cohomology, GroupOrdersMatchEnumeration) {
  const auto z2 = FiniteGroup::cyclic(2);
  struct Case {
    FiniteGroupoid g;
    int modulus;
    long long order;  // |Z^2| / |B^2| from the pair oracle
  };
  std::vector<Case> cases{{bgroup(z2), 2, 0},
                          {bgroup(FiniteGroup::cyclic(3)), 3, 0},
                          {action_groupoid(RightAction::regular(z2)), 2, 0},
                          {bgroup(FiniteGroup::product(z2, z2)), 2, 0},
                          {action_groupoid(RightAction::trivial(z2, 2)), 2, 0}};
  for (auto& c : cases) {
    const oracle::PairOracle brute(c.g, c.modulus);
    c.order = static_cast<long long>(brute.cocycles().size() / brute.coboundaries().size());
  }
  EXPECT_EQ(cases[0].order, 2);
  EXPECT_EQ(cases[1].order, 3);
  EXPECT_EQ(cases[2].order, 1);
  EXPECT_EQ(cases[3].order, 8);
  EXPECT_EQ(cases[4].order, 4);
  for (const auto& c : cases) EXPECT_EQ(order_of(cohomology_group(c.g, 2, c.modulus)), c.order);

  EXPECT_EQ(cohomology_group(bgroup(z2), 2, 2).invariant_factors, std::vector<int>{2});
  EXPECT_EQ(cohomology_group(bgroup(FiniteGroup::cyclic(3)), 2, 3).invariant_factors, std::vector<int>{3});
  EXPECT_TRUE(cohomology_group(action_groupoid(RightAction::regular(z2)), 2, 2).trivial());
  EXPECT_EQ(cohomology_group(bgroup(FiniteGroup::product(z2, z2)), 2, 2).invariant_factors,
            (std::vector<int>{2, 2, 2}));
}

TEST(Cohomology, LowDegrees) {
  // H^0 is the locally constant functions on the orbit space.
  EXPECT_EQ(cohomology_group(action_groupoid(RightAction::trivial(FiniteGroup::cyclic(2), 3)), 0, 5).invariant_factors,
            (std::vector<int>{5, 5, 5}));
  EXPECT_EQ(cohomology_group(action_groupoid(RightAction::regular(FiniteGroup::cyclic(3))), 0, 4).invariant_factors,
            std::vector<int>{4});
  // H^1(BZ_n, Z/N) = Hom(Z_n, Z_N) = Z_gcd(n, N); H^2(BZ_n, Z/N) = Z_gcd(n, N).
  for (int n = 1; n <= 6; ++n)
    for (int big = 2; big <= 6; ++big) {
      const int d = std::gcd(n, big);
      const std::vector<int> expect = d > 1 ? std::vector<int>{d} : std::vector<int>{};
      EXPECT_EQ(cohomology_group(bgroup(FiniteGroup::cyclic(n)), 1, big).invariant_factors, expect);
      EXPECT_EQ(cohomology_group(bgroup(FiniteGroup::cyclic(n)), 2, big).invariant_factors, expect);
    }
  EXPECT_FMLAB_ERROR(ErrorKind::Capacity, cohomology_group(bgroup(FiniteGroup::cyclic(2)), 3, 2));
  EXPECT_FMLAB_ERROR(ErrorKind::Domain, cohomology_group(bgroup(FiniteGroup::cyclic(2)), 2, 0));
}

TEST(Cohomology, ClassifyIsCompleteAndSound) {
  const auto z2 = FiniteGroup::cyclic(2);
  const std::vector<std::pair<FiniteGroupoid, int>> cases{{bgroup(z2), 2},
                                                          {bgroup(FiniteGroup::cyclic(3)), 3},
                                                          {bgroup(FiniteGroup::cyclic(2)), 4},
                                                          {bgroup(FiniteGroup::product(z2, z2)), 2}};
  for (const auto& [g, n] : cases) {
    const oracle::PairOracle brute(g, n);
    const auto bounds = brute.coboundaries();
    const CohomologyComputation h(g, 2, n);
    std::map<std::vector<int>, std::vector<int>> representative;
    std::size_t checked = 0;
    for (const auto& z : brute.cocycles()) {
      const auto cls = h.classify(cochain_from_cocycle(h.nerve(), brute.to_cocycle(z)));
      ASSERT_EQ(cls.size(), h.group().invariant_factors.size());
      for (std::size_t i = 0; i < cls.size(); ++i) {
        EXPECT_GE(cls[i], 0);
        EXPECT_LT(cls[i], h.group().invariant_factors[i]);
      }
      auto [it, fresh] = representative.emplace(cls, z);
      if (!fresh && checked++ < 2000) {
        std::vector<int> diff(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) diff[i] = ((z[i] - it->second[i]) % n + n) % n;
        EXPECT_TRUE(bounds.count(diff)) << "same class but not cohomologous";
      }
    }
    // Every class is hit, and distinct classes are distinct cohomology classes.
    EXPECT_EQ(static_cast<long long>(representative.size()), order_of(h.group()));
  }
}

TEST(Cohomology, ClassifyRejectsNonCocycles) {
  const FiniteGroupoid bz2 = bgroup(FiniteGroup::cyclic(2));
  const CohomologyComputation h(bz2, 2, 2);
  Cochain f = zero_cochain(h.nerve(), 2, 2);
  f.values[1] = 1;
  EXPECT_FMLAB_ERROR(ErrorKind::Cocycle, h.classify(f));
  Cochain wrong = zero_cochain(h.nerve(), 1, 2);
  EXPECT_FMLAB_ERROR(ErrorKind::Domain, h.classify(wrong));
}

TEST(ExtensionClass, CarryIsNonzeroTrivialIsZero) {
  const FiniteGroupoid bz2 = bgroup(FiniteGroup::cyclic(2));
  PhaseCocycle carry = PhaseCocycle::discrete(2, 2);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) carry.set(x, y, x + y >= 2 ? 1 : 0);
  const ExtensionClass z4 = extension_class(central_extend(bz2, carry));
  EXPECT_EQ(z4.group.invariant_factors, std::vector<int>{2});
  EXPECT_EQ(z4.coordinates, std::vector<int>{1});
  EXPECT_FALSE(z4.is_zero());
  EXPECT_TRUE(extension_class(central_extend(bz2, PhaseCocycle::trivial(bz2, 2))).is_zero());

  // Twisting by a coboundary leaves the class alone.
  Rng rng(55);
  for (int i = 0; i < 20; ++i) {
    const auto inst = random_action_instance(rng, 3, 4, 4);
    std::vector<int> b(static_cast<std::size_t>(inst.groupoid.arrows()));
    for (auto& v : b) v = rng.below(inst.modulus);
    const auto a = extension_class(central_extend(inst.groupoid, inst.cocycle));
    const auto t = extension_class(central_extend(inst.groupoid, coboundary_twist(inst.groupoid, inst.cocycle, b)));
    EXPECT_EQ(a.coordinates, t.coordinates);
  }
}

TEST(CoboundaryTest, AgreesWithClassification) {
  Rng rng(56);
  for (int i = 0; i < 15; ++i) {
    const auto inst = random_action_instance(rng, 3, 4, 4);
    const auto other = random_cocycle(rng, inst.action, inst.groupoid, inst.modulus);
    const CohomologyComputation h(inst.groupoid, 2, inst.modulus);
    const bool same = h.classify(cochain_from_cocycle(h.nerve(), inst.cocycle)) ==
                      h.classify(cochain_from_cocycle(h.nerve(), other));
    EXPECT_EQ(CoboundaryTest(inst.groupoid, inst.modulus).cohomologous(inst.cocycle, other), same);
  }
}
