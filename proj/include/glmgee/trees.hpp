#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace glmgee {

/// Canonical unlabeled rooted tree. Children are indices into the owning
/// TreeSet, sorted descending, which makes the representation unique per
/// isomorphism class.
struct RootedTree {
  std::vector<int> children;
  int order = 0;          // rho: number of nodes
  std::int64_t density = 0;   // gamma_d(tau) = rho * prod gamma_d(children)
  std::int64_t symmetry = 0;  // order of the automorphism group
  std::int64_t alpha = 0;     // monotonic labelings: rho! / (symmetry * density)
};

class TreeSet {
 public:
  static constexpr int kMaxOrder = 8;

  explicit TreeSet(int max_order);

  int max_order() const { return max_order_; }
  int size() const { return static_cast<int>(trees_.size()); }
  const RootedTree& operator[](int id) const { return trees_[id]; }
  const std::vector<RootedTree>& trees() const { return trees_; }

  /// Ids of all trees with the given order.
  std::vector<int> of_order(int order) const {
    std::vector<int> ids;
    for (int i = 0; i < size(); ++i)
      if (trees_[i].order == order) ids.push_back(i);
    return ids;
  }

  int count(int order) const { return static_cast<int>(of_order(order).size()); }

 private:
  int max_order_;
  std::vector<RootedTree> trees_;
};

inline std::int64_t factorial(int n) {
  std::int64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

inline TreeSet::TreeSet(int max_order) : max_order_(max_order) {
  if (max_order < 1) throw std::invalid_argument("enumerate_trees: max_order must be >= 1");
  if (max_order > kMaxOrder)
    throw std::length_error("enumerate_trees: ceiling is order 8 (115 trees)");

  trees_.push_back({{}, 1, 1, 1, 1});
  for (int n = 2; n <= max_order; ++n) {
    // A tree of order n is a root plus a multiset of earlier trees with total
    // order n-1; generating child ids in non-increasing order makes each
    // multiset appear exactly once.
    std::vector<std::vector<int>> combos;
    std::vector<int> acc;
    auto rec = [&](auto&& self, int max_id, int remaining) -> void {
      if (remaining == 0) {
        combos.push_back(acc);
        return;
      }
      for (int id = max_id; id >= 0; --id) {
        if (trees_[id].order <= remaining) {
          acc.push_back(id);
          self(self, id, remaining - trees_[id].order);
          acc.pop_back();
        }
      }
    };
    int prev_count = static_cast<int>(trees_.size());
    rec(rec, prev_count - 1, n - 1);
    for (const auto& ch : combos) {
      RootedTree t;
      t.children = ch;
      t.order = n;
      t.density = n;
      t.symmetry = 1;
      int run = 1;
      for (std::size_t k = 0; k < ch.size(); ++k) {
        t.density *= trees_[ch[k]].density;
        t.symmetry *= trees_[ch[k]].symmetry;
        if (k + 1 < ch.size() && ch[k + 1] == ch[k]) {
          ++run;
          t.symmetry *= run;  // accumulate m! for repeated children
        } else {
          run = 1;
        }
      }
      std::int64_t rho_fact = factorial(n);
      if (rho_fact % (t.symmetry * t.density) != 0)
        throw std::logic_error("tree statistics violate alpha integrality");
      t.alpha = rho_fact / (t.symmetry * t.density);
      trees_.push_back(t);
    }
  }
}

inline TreeSet enumerate_trees(int max_order) { return TreeSet(max_order); }

}  // namespace glmgee
