#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "nls/errors.hpp"
#include "nls/trees.hpp"

using namespace nls;

TEST_CASE("small generations") {
  const auto t0 = enumerate_trees(0);
  REQUIRE(t0.size() == 1);
  CHECK(t0[0].is_leaf());
  CHECK(t0[0].to_string() == "•");

  const auto t1 = enumerate_trees(1);
  REQUIRE(t1.size() == 1);
  CHECK(t1[0] == TernaryTree::node(TernaryTree::leaf(), TernaryTree::leaf(), TernaryTree::leaf()));
  CHECK(t1[0].to_string() == "(• • •)");

  // The second internal node sits under child 1, 2 or 3.
  const auto t2 = enumerate_trees(2);
  REQUIRE(t2.size() == 3);
  for (int k = 0; k < 3; ++k) {
    int hits = 0;
    for (const auto& t : t2) hits += t.child(k).is_leaf() ? 0 : 1;
    CHECK(hits == 1);
  }
}

TEST_CASE("counts match enumeration") {
  const std::uint64_t expect[] = {1, 1, 3, 12, 55, 273, 1428, 7752, 43263};
  for (int j = 0; j <= 8; ++j) {
    CHECK(count_trees(j) == expect[j]);
    if (j <= 6) CHECK(enumerate_trees(j).size() == expect[j]);
  }
}

TEST_CASE("enumeration is duplicate free and well shaped") {
  for (int j = 0; j <= 5; ++j) {
    std::set<std::string> seen;
    for (const auto& t : enumerate_trees(j)) {
      CHECK(t.internal_count() == j);
      CHECK(t.leaf_count() == 2 * j + 1);
      CHECK(t.node_count() == 3 * j + 1);
      seen.insert(t.to_string());
    }
    CHECK(seen.size() == count_trees(j));
  }
}

TEST_CASE("growth bound") {
  const double c0 = tree_bound_constant();
  CHECK(c0 == doctest::Approx(9.0 * std::pow(M_PI * M_PI / 6.0, 2)));
  for (int j = 0; j <= 26; ++j) {
    const double lhs = static_cast<double>(count_trees(j)) * (1.0 + j) * (1.0 + j);
    CHECK(lhs <= std::pow(c0, j) * (1.0 + 1e-12));
  }
}

TEST_CASE("caps") {
  CHECK_THROWS_AS(enumerate_trees(kMaxEnumeratedGeneration + 1), ResourceError);
  CHECK_THROWS_AS(count_trees(200), ResourceError);
  CHECK_THROWS(TernaryTree::leaf().child(0));
}
