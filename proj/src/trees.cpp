#include "nls/trees.hpp"

#include <array>
#include <numbers>
#include <stdexcept>

#include "nls/errors.hpp"

namespace nls {

struct TernaryTree::Internal {
  std::array<TernaryTree, 3> children;
  int internal = 1;
  int leaves = 3;
};

TernaryTree TernaryTree::node(TernaryTree a, TernaryTree b, TernaryTree c) {
  auto in = std::make_shared<Internal>();
  in->internal = 1 + a.internal_count() + b.internal_count() + c.internal_count();
  in->leaves = a.leaf_count() + b.leaf_count() + c.leaf_count();
  in->children = {std::move(a), std::move(b), std::move(c)};
  TernaryTree t;
  t.node_ = std::move(in);
  return t;
}

const TernaryTree& TernaryTree::child(int k) const {
  if (is_leaf()) throw std::logic_error("TernaryTree::child on a leaf");
  return node_->children.at(static_cast<std::size_t>(k));
}

int TernaryTree::internal_count() const { return is_leaf() ? 0 : node_->internal; }

int TernaryTree::leaf_count() const { return is_leaf() ? 1 : node_->leaves; }

std::string TernaryTree::to_string() const {
  if (is_leaf()) return "•";
  return "(" + node_->children[0].to_string() + " " + node_->children[1].to_string() + " " +
         node_->children[2].to_string() + ")";
}

bool operator==(const TernaryTree& a, const TernaryTree& b) {
  if (a.is_leaf() || b.is_leaf()) return a.is_leaf() && b.is_leaf();
  if (a.node_ == b.node_) return true;
  for (int k = 0; k < 3; ++k) {
    if (!(a.child(k) == b.child(k))) return false;
  }
  return true;
}

namespace {

void enumerate_into(int j, std::vector<std::vector<TernaryTree>>& memo) {
  if (!memo[j].empty()) return;
  if (j == 0) {
    memo[0].push_back(TernaryTree::leaf());
    return;
  }
  for (int j1 = 0; j1 <= j - 1; ++j1) {
    for (int j2 = 0; j1 + j2 <= j - 1; ++j2) {
      const int j3 = j - 1 - j1 - j2;
      enumerate_into(j1, memo);
      enumerate_into(j2, memo);
      enumerate_into(j3, memo);
      for (const auto& a : memo[j1]) {
        for (const auto& b : memo[j2]) {
          for (const auto& c : memo[j3]) memo[j].push_back(TernaryTree::node(a, b, c));
        }
      }
    }
  }
}

}  // namespace

std::vector<TernaryTree> enumerate_trees(int j) {
  if (j < 0) throw std::invalid_argument("enumerate_trees: j must be nonnegative");
  if (j > kMaxEnumeratedGeneration) {
    throw ResourceError("enumerate_trees: j=" + std::to_string(j) + " exceeds the cap of " +
                        std::to_string(kMaxEnumeratedGeneration));
  }
  std::vector<std::vector<TernaryTree>> memo(static_cast<std::size_t>(j) + 1);
  enumerate_into(j, memo);
  return memo[j];
}

std::uint64_t count_trees(int j) {
  if (j < 0) throw std::invalid_argument("count_trees: j must be nonnegative");
  std::vector<std::uint64_t> c(static_cast<std::size_t>(j) + 1, 0);
  c[0] = 1;
  for (int m = 1; m <= j; ++m) {
    std::uint64_t acc = 0;
    for (int j1 = 0; j1 <= m - 1; ++j1) {
      for (int j2 = 0; j1 + j2 <= m - 1; ++j2) {
        std::uint64_t prod = 0;
        if (__builtin_mul_overflow(c[j1], c[j2], &prod) ||
            __builtin_mul_overflow(prod, c[m - 1 - j1 - j2], &prod) ||
            __builtin_add_overflow(acc, prod, &acc)) {
          throw ResourceError("count_trees: #T(" + std::to_string(m) + ") overflows 64 bits");
        }
      }
    }
    c[m] = acc;
  }
  return c[j];
}

double tree_bound_constant() {
  const double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
  return 9.0 * zeta2 * zeta2;
}

}  // namespace nls
