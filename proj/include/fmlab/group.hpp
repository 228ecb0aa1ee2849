#pragma once

// Tabulated finite groups and right actions on finite sets.

#include <numeric>
#include <string>
#include <vector>

#include "fmlab/error.hpp"

namespace fmlab {

class FiniteGroup {
 public:
  FiniteGroup() : FiniteGroup(1, std::vector<int>{0}) {}

  /// `table[g * order + h]` is the product gh.
  FiniteGroup(int order, std::vector<int> table, std::string name = "")
      : order_(order), table_(std::move(table)), name_(std::move(name)) {
    if (order < 1) throw Error(ErrorKind::Domain, "group: order must be positive");
    if (table_.size() != static_cast<std::size_t>(order) * static_cast<std::size_t>(order))
      throw Error(ErrorKind::Domain, "group: multiplication table has wrong size");
    for (int v : table_)
      if (v < 0 || v >= order) throw Error(ErrorKind::Domain, "group: table entry out of range");
    identity_ = -1;
    for (int e = 0; e < order && identity_ < 0; ++e) {
      bool ok = true;
      for (int g = 0; g < order && ok; ++g) ok = mul(e, g) == g && mul(g, e) == g;
      if (ok) identity_ = e;
    }
    if (identity_ < 0) throw Error(ErrorKind::Domain, "group: no identity element");
    inverse_.assign(static_cast<std::size_t>(order), -1);
    for (int g = 0; g < order; ++g)
      for (int h = 0; h < order; ++h)
        if (mul(g, h) == identity_ && mul(h, g) == identity_) inverse_[static_cast<std::size_t>(g)] = h;
    for (int g = 0; g < order; ++g)
      if (inverse_[static_cast<std::size_t>(g)] < 0) throw Error(ErrorKind::Domain, "group: element without inverse");
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b)
        for (int c = 0; c < order; ++c)
          if (mul(mul(a, b), c) != mul(a, mul(b, c))) throw Error(ErrorKind::Domain, "group: not associative");
  }

  int order() const noexcept { return order_; }
  int identity() const noexcept { return identity_; }
  int mul(int g, int h) const { return table_[static_cast<std::size_t>(g * order_ + h)]; }
  int inv(int g) const { return inverse_[static_cast<std::size_t>(g)]; }
  const std::vector<int>& table() const noexcept { return table_; }
  const std::string& name() const noexcept { return name_; }

  static FiniteGroup cyclic(int n) {
    std::vector<int> t(static_cast<std::size_t>(n * n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) t[static_cast<std::size_t>(a * n + b)] = (a + b) % n;
    return FiniteGroup(n, std::move(t), "Z" + std::to_string(n));
  }

  /// Element (g, h) is encoded as g * |H| + h.
  static FiniteGroup product(const FiniteGroup& g, const FiniteGroup& h) {
    const int n = g.order() * h.order();
    std::vector<int> t(static_cast<std::size_t>(n * n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const int ga = a / h.order(), ha = a % h.order();
        const int gb = b / h.order(), hb = b % h.order();
        t[static_cast<std::size_t>(a * n + b)] = g.mul(ga, gb) * h.order() + h.mul(ha, hb);
      }
    return FiniteGroup(n, std::move(t), g.name() + "x" + h.name());
  }

  /// Dihedral group of order 2n: element r^i s^j encoded as i + n j.
  static FiniteGroup dihedral(int n) {
    const int order = 2 * n;
    std::vector<int> t(static_cast<std::size_t>(order * order));
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b) {
        const int i1 = a % n, j1 = a / n, i2 = b % n, j2 = b / n;
        // r^i1 s^j1 r^i2 s^j2 = r^(i1 + (-1)^j1 i2) s^(j1 + j2)
        const int i = ((i1 + (j1 == 0 ? i2 : -i2)) % n + n) % n;
        t[static_cast<std::size_t>(a * order + b)] = i + n * ((j1 + j2) % 2);
      }
    return FiniteGroup(order, std::move(t), "D" + std::to_string(n));
  }

 private:
  int order_ = 1;
  std::vector<int> table_;
  std::string name_;
  int identity_ = 0;
  std::vector<int> inverse_;
};

/// Right action x -> x.g of a finite group on {0, ..., points-1}.
class RightAction {
 public:
  /// `table[x * |G| + g]` is x.g.
  RightAction(FiniteGroup group, int points, std::vector<int> table)
      : group_(std::move(group)), points_(points), table_(std::move(table)) {
    const int n = group_.order();
    if (points < 1) throw Error(ErrorKind::ActionAxiom, "action: set must be nonempty");
    if (table_.size() != static_cast<std::size_t>(points) * static_cast<std::size_t>(n))
      throw Error(ErrorKind::ActionAxiom, "action: table has wrong size");
    for (int v : table_)
      if (v < 0 || v >= points) throw Error(ErrorKind::ActionAxiom, "action: table entry out of range");
    for (int x = 0; x < points; ++x) {
      if (act(x, group_.identity()) != x)
        throw Error(ErrorKind::ActionAxiom, "action: x.1 != x for x=" + std::to_string(x));
      for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h)
          if (act(act(x, g), h) != act(x, group_.mul(g, h)))
            throw Error(ErrorKind::ActionAxiom, "action: (x.g).h != x.(gh) for x=" + std::to_string(x) +
                                                    " g=" + std::to_string(g) + " h=" + std::to_string(h));
    }
  }

  static RightAction trivial(const FiniteGroup& group, int points) {
    std::vector<int> t(static_cast<std::size_t>(points * group.order()));
    for (int x = 0; x < points; ++x)
      for (int g = 0; g < group.order(); ++g) t[static_cast<std::size_t>(x * group.order() + g)] = x;
    return RightAction(group, points, std::move(t));
  }

  /// G acting on itself by right translation.
  static RightAction regular(const FiniteGroup& group) {
    const int n = group.order();
    std::vector<int> t(static_cast<std::size_t>(n * n));
    for (int x = 0; x < n; ++x)
      for (int g = 0; g < n; ++g) t[static_cast<std::size_t>(x * n + g)] = group.mul(x, g);
    return RightAction(group, n, std::move(t));
  }

  const FiniteGroup& group() const noexcept { return group_; }
  int points() const noexcept { return points_; }
  int act(int x, int g) const { return table_[static_cast<std::size_t>(x * group_.order() + g)]; }
  const std::vector<int>& table() const noexcept { return table_; }

  /// Orbit label of each point (smallest point in the orbit).
  std::vector<int> orbits() const {
    std::vector<int> label(static_cast<std::size_t>(points_), -1);
    for (int x = 0; x < points_; ++x) {
      if (label[static_cast<std::size_t>(x)] >= 0) continue;
      for (int g = 0; g < group_.order(); ++g) label[static_cast<std::size_t>(act(x, g))] = x;
    }
    return label;
  }

 private:
  FiniteGroup group_;
  int points_;
  std::vector<int> table_;
};

}  // namespace fmlab
