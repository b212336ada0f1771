#pragma once

// Ternary trees indexing the terms of the power-series solution. A tree with
// j internal nodes has 2j+1 leaves and 3j+1 nodes in total.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace nls {

class TernaryTree {
 public:
  /// The single-leaf tree.
  TernaryTree() = default;

  static TernaryTree leaf() { return {}; }
  static TernaryTree node(TernaryTree a, TernaryTree b, TernaryTree c);

  bool is_leaf() const { return node_ == nullptr; }
  /// k in {0,1,2}; only valid for internal nodes.
  const TernaryTree& child(int k) const;

  int internal_count() const;
  int leaf_count() const;
  int node_count() const { return internal_count() + leaf_count(); }

  /// "•" for a leaf, "(T1 T2 T3)" otherwise.
  std::string to_string() const;

  friend bool operator==(const TernaryTree& a, const TernaryTree& b);

 private:
  struct Internal;
  std::shared_ptr<const Internal> node_;
};

inline constexpr int kMaxEnumeratedGeneration = 8;

/// All trees with j internal nodes, in canonical order: compositions
/// (j1,j2,j3) of j-1 in lexicographic order, then children recursively.
/// Throws ResourceError for j > 8.
std::vector<TernaryTree> enumerate_trees(int j);

/// #T(j) via #T(j) = sum_{j1+j2+j3=j-1} #T(j1)#T(j2)#T(j3). Throws
/// ResourceError if the count overflows 64 bits.
std::uint64_t count_trees(int j);

/// C0 = 9 (sum_{k>=0} (1+k)^{-2})^2 = 9 (pi^2/6)^2.
double tree_bound_constant();

}  // namespace nls
