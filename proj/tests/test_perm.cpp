#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "wreathmix/errors.hpp"
#include "wreathmix/perm.hpp"
#include "wreathmix/state.hpp"

using namespace wreathmix;

namespace {

std::vector<Permutation> all_perms(int n) {
  std::vector<Permutation> out;
  for (std::uint64_t i = 0; i < factorial(n); ++i) out.push_back(lehmer_unrank(i, n));
  return out;
}

}  // namespace

TEST_CASE("fixed points") {
  auto p = Permutation::parse_cycles("(1 2)(3 4)(5 6 7)", 10);
  CHECK(fixed_points(p).to_string() == "{8,9,10}");
  CHECK(fixed_points(Permutation::identity(5)) == IndexSet::full(5));
  CHECK(fixed_points(Permutation::parse_cycles("(1 2)", 2)).empty());
}

TEST_CASE("included indices in plain mode") {
  auto p = Permutation::parse_cycles("(12)(34)(567)", 10);
  AugmentedPermutation ap(p, IndexSet::parse("{8,10}", 10), ChainMode::plain());
  CHECK(included_indices(ap).to_string() == "{1,2,3,4,5,6,7,8,10}");
  AugmentedPermutation id(Permutation::identity(4), IndexSet(), ChainMode::plain());
  CHECK(included_indices(id).empty());
  CHECK_THROWS_AS(AugmentedPermutation(p, IndexSet::parse("{1}", 10), ChainMode::plain()), DomainError);
}

TEST_CASE("coset reduction of the worked example") {
  const int images[] = {8, 2, 4, 6, 7, 1, 5, 3};
  auto p = Permutation::from_one_line(images);
  auto rep = coset_reduce(p, 3);
  CHECK(rep.subset().to_string() == "{2,4,8}");
  CHECK(rep.involution().to_cycle_string() == "(1 4)(3 8)");
  AugmentedPermutation ap(p, IndexSet(), ChainMode::coset(3));
  CHECK(included_indices(ap).to_string() == "{1,3,4,8}");
}

TEST_CASE("coset reduction edge cases") {
  for (int r = 1; r <= 3; ++r) {
    auto rep = coset_reduce(Permutation::identity(6), r);
    CHECK(rep.subset() == IndexSet::full(r));
    CHECK(rep.involution().is_identity());
  }
  auto rep = coset_reduce(Permutation::parse_cycles("(1 2)", 2), 1);
  CHECK(rep.subset().to_string() == "{2}");
  CHECK(rep.involution().to_cycle_string() == "(1 2)");
  CHECK_THROWS_AS(coset_reduce(Permutation::identity(4), 3), DomainError);
  CHECK_THROWS_AS(coset_reduce(Permutation::identity(4), 0), DomainError);
}

TEST_CASE("cycle notation round trip") {
  for (int n = 1; n <= 5; ++n)
    for (const auto& p : all_perms(n)) CHECK(Permutation::parse_cycles(p.to_cycle_string(), n) == p);
  CHECK(Permutation::parse_cycles("e", 3).is_identity());
  CHECK(Permutation::parse_cycles("()", 3).is_identity());
  CHECK(Permutation::parse_cycles("(1,3)", 3) == Permutation::parse_cycles("(1 3)", 3));
  CHECK_THROWS_AS(Permutation::parse_cycles("(1 2)(2 3)", 3), DomainError);
  CHECK_THROWS_AS(Permutation::parse_cycles("(1 4)", 3), DomainError);
  CHECK_THROWS_AS(Permutation::parse_cycles("(1 2", 3), DomainError);
  CHECK_THROWS_AS(Permutation::from_images({0, 0, 1}), DomainError);
}

TEST_CASE("composition acts right to left") {
  auto a = Permutation::parse_cycles("(1 2)", 3);
  auto b = Permutation::parse_cycles("(2 3)", 3);
  // (a*b)(1) = a(b(1)) = a(1) = 2, (a*b)(3) = a(2) = 1
  auto ab = a * b;
  CHECK(ab(0) == 1);
  CHECK(ab(2) == 0);
  CHECK(ab.to_cycle_string() == "(1 2 3)");
}

TEST_CASE("group laws hold exhaustively for n <= 4") {
  for (int n = 1; n <= 4; ++n) {
    auto all = all_perms(n);
    auto e = Permutation::identity(n);
    for (const auto& a : all) {
      CHECK(a * a.inverse() == e);
      CHECK(a.inverse() * a == e);
      CHECK(a * e == a);
      CHECK(e * a == a);
      for (const auto& b : all)
        for (const auto& c : all) CHECK((a * b) * c == a * (b * c));
    }
  }
}

TEST_CASE("fixed points of p lie inside fixed points of its coset reduction") {
  for (int n = 2; n <= 6; ++n)
    for (int r = 1; 2 * r <= n; ++r)
      for (const auto& p : all_perms(n)) {
        auto rep = coset_reduce(p, r);
        CHECK(p.fixed_points().subset_of(rep.involution().fixed_points()));
        AugmentedPermutation group(p, IndexSet(), ChainMode::plain());
        AugmentedPermutation coset(p, IndexSet(), ChainMode::coset(r));
        CHECK(coset.included().subset_of(group.included()));
      }
}

TEST_CASE("coset reduction depends only on p([r])") {
  for (int n = 2; n <= 5; ++n)
    for (int r = 1; 2 * r <= n; ++r) {
      std::vector<Permutation> stabilizer;
      for (const auto& k : all_perms(n))
        if (k.image(IndexSet::full(r)) == IndexSet::full(r)) stabilizer.push_back(k);
      for (const auto& p : all_perms(n)) {
        auto base = coset_reduce(p, r);
        for (const auto& k : stabilizer) {
          auto other = coset_reduce(p * k, r);
          CHECK(other == base);
          CHECK(other.involution() == base.involution());
        }
      }
    }
}

TEST_CASE("canonical involutions split their moved points evenly") {
  for (int n = 2; n <= 6; ++n)
    for (int r = 1; 2 * r <= n; ++r)
      for (const auto& p : all_perms(n)) {
        const auto rep = coset_reduce(p, r);
        const auto& t = rep.involution();
        CHECK(t.is_involution());
        auto moved = t.moved_points();
        CHECK((moved & IndexSet::full(r)).size() == (moved - IndexSet::full(r)).size());
        CHECK(t.image(IndexSet::full(r)) == p.image(IndexSet::full(r)));
      }
}

TEST_CASE("ranks") {
  CHECK(lehmer_rank(Permutation::identity(3)) == 0);
  for (int n = 1; n <= 6; ++n)
    for (std::uint64_t i = 0; i < factorial(n); ++i) CHECK(lehmer_rank(lehmer_unrank(i, n)) == i);
  for (int n = 1; n <= 8; ++n)
    for (int r = 0; r <= n; ++r)
      for (std::uint64_t i = 0; i < binomial(n, r); ++i) {
        auto s = colex_unrank(i, n, r);
        CHECK(s.size() == r);
        CHECK(colex_rank(s) == i);
      }
  CHECK(colex_rank(IndexSet::full(3)) == 0);
  CHECK_THROWS_AS(lehmer_unrank(6, 3), DomainError);
}

TEST_CASE("state space ranks round trip") {
  auto space = StateSpace::wreath(4, 2);
  CHECK(space.size() == 384);
  std::set<std::string> seen;
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    auto s = space.unrank_wreath(i);
    CHECK(space.rank(s) == i);
    seen.insert(space.format(i));
  }
  CHECK(seen.size() == 384);
  CHECK(StateSpace::wreath(3, 2).size() == 48);

  auto coset = StateSpace::coset(5, 2, 3);
  CHECK(coset.size() == 243 * 10);
  for (std::uint64_t i = 0; i < coset.size(); ++i) CHECK(coset.rank(coset.unrank_coset(i)) == i);
  CHECK(space.start_rank({1, 0, 0, 1}) == space.rank(WreathState{{1, 0, 0, 1}, Permutation::identity(4)}));
  CHECK(space.format(space.rank(WreathState{{0, 1, 0, 0}, Permutation::parse_cycles("(1 2)", 4)})) == "(1,2,1,1; (1 2))");
  CHECK_THROWS_AS(space.unrank_wreath(384), DomainError);
  CHECK_THROWS_AS(StateSpace::coset(4, 3, 2), DomainError);
}

TEST_CASE("index sets") {
  auto s = IndexSet::parse("{2,4,8}", 8);
  CHECK(s.size() == 3);
  CHECK(s.contains(1));
  CHECK(s.complement(8).size() == 5);
  CHECK((s | IndexSet::of({0})).to_string() == "{1,2,4,8}");
  CHECK((s & IndexSet::of({1, 2})).to_string() == "{2}");
  CHECK(IndexSet::parse("{}", 3).empty());
  CHECK_THROWS_AS(IndexSet::parse("{0}", 3), DomainError);
  CHECK_THROWS_AS(IndexSet::parse("2,3", 3), DomainError);
}
