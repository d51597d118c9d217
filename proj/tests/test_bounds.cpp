#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wreathmix/bounds.hpp"
#include "wreathmix/errors.hpp"

using namespace wreathmix;

TEST_CASE("aggregate tables of the transposition measure") {
  const int n = 4;
  auto in = aggregate_tables(build_transposition_measure(n), 3);
  REQUIRE(in.M.size() == n + 1);
  for (int j = 0; j <= n; ++j) CHECK(in.M[static_cast<std::size_t>(j)] == doctest::Approx(double(j * j) / (n * n)));
  CHECK(in.D[0] == 0.0);
  CHECK(in.D[1] == 0.0);
  CHECK(in.D[2] == doctest::Approx(0.0));
  CHECK(in.D[3] == doctest::Approx(5.0 * std::pow(9.0, -3)));
  CHECK(in.B == *std::max_element(in.D.begin(), in.D.end()));
  CHECK(in.family() == ChainFamily::wreath);
  CHECK(contraction_exponent(in.M) == doctest::Approx(2.0));
}

TEST_CASE("contraction threshold") {
  auto b = contraction_bound(ChainFamily::wreath, 10, 0.5, 2.0, 1.0, 0.0);
  CHECK(b.threshold == doctest::Approx(5 * std::log(10.0) + 5).epsilon(1e-12));
  CHECK(b.threshold == doctest::Approx(16.5129).epsilon(1e-5));
  CHECK(b.bound == doctest::Approx(std::exp(-1.0)));
  auto c = contraction_bound(ChainFamily::coset, 10, 0.5, 2.0, 1.0, 0.0);
  CHECK(c.threshold == doctest::Approx(2.5 * (std::log(10.0) + 1)));
  CHECK(c.bound == doctest::Approx(2 * std::exp(-0.5)));
  CHECK_THROWS_AS(contraction_bound(ChainFamily::wreath, 10, 0.5, 2.0, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(contraction_bound(ChainFamily::wreath, 10, 0.5, 2.0, -1.0, 0.0), DomainError);
  CHECK_THROWS_AS(contraction_bound(ChainFamily::wreath, 10, 0.5, 0.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(contraction_bound(ChainFamily::wreath, 10, 1.0, 2.0, 1.0, 0.0), DomainError);
}

TEST_CASE("contraction exponent edge cases") {
  CHECK(contraction_exponent({0.0, 0.25, 1.0}) == doctest::Approx(2.0));
  CHECK(contraction_exponent({0.1, 0.25, 1.0}) == 0.0);
  CHECK(contraction_exponent({0.0, 1.0, 1.0}) == 0.0);
  CHECK(std::isinf(contraction_exponent({0.0, 0.0, 0.0, 1.0})));
  // M(1) = (1/3)^3, M(2) = (2/3)^1.5: the weaker of the two decides.
  CHECK(contraction_exponent({0.0, 1.0 / 27, std::pow(2.0 / 3, 1.5), 1.0}) == doctest::Approx(1.5));
}

TEST_CASE("subset sum bound on two cards by hand") {
  auto in = aggregate_tables(build_transposition_measure(2), 1);
  CHECK(in.B == doctest::Approx(0.0));
  const double excess = 1 / 0.3 - 1;
  for (int k = 1; k <= 5; ++k) {
    in.k = k;
    CHECK(subset_sum_bound(in, 0.3) == doctest::Approx(4 * excess * std::pow(1.0 / 16, k)).epsilon(1e-12));
    // Both cards showing the rarest symbol makes the bound exact.
    auto rep = decompose_wreath(build_transposition_measure(2), AlphabetMeasure({0.7, 0.3}), {1, 1}, k);
    CHECK(rep.l2_squared() == doctest::Approx(subset_sum_bound(in, 0.3)).epsilon(1e-12));
  }
}

TEST_CASE("subset sum bound dominates the exact distance") {
  std::mt19937_64 rng(17);
  AlphabetMeasure p({0.5, 0.3, 0.2});
  for (int n = 2; n <= 5; ++n) {
    auto q = random_symmetric_measure(n, rng);
    std::vector<int> x0(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x0[static_cast<std::size_t>(i)] = i % 3;
    for (int k : {1, 2, 5, 10}) {
      SubWalkCache cache(q);
      auto in = aggregate_tables(q, k, &cache);
      CHECK(decompose_wreath(q, p, x0, k, &cache).l2_squared() <= subset_sum_bound(in, p.p_min()) * (1 + 1e-12));
    }
    for (int r = 1; 2 * r <= n; ++r) {
      auto b = random_bi_invariant_coset_measure(n, r, rng);
      for (int k : {1, 3, 8}) {
        auto in = aggregate_tables(b, k);
        CHECK(in.family() == ChainFamily::coset);
        CHECK(decompose_coset(b, p, x0, k).l2_squared() <= subset_sum_bound(in, p.p_min()) * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("size uniformity") {
  for (int n = 2; n <= 6; ++n) {
    auto s = size_uniform_check(build_transposition_measure(n));
    CHECK(s.size_uniform);
    CHECK(s.f[1] == doctest::Approx(1.0 / n));
    CHECK(s.f[2] == doctest::Approx(1.0 - 1.0 / n));
  }
  auto mode = ChainMode::plain();
  AugmentedMeasure lopsided(3, mode,
                            {Atom{AugmentedPermutation(Permutation::identity(3), IndexSet::of({0}), mode), 0.5, {}},
                             Atom{AugmentedPermutation(Permutation::parse_cycles("(1 2)", 3), {}, mode), 0.5, {}}});
  CHECK_FALSE(size_uniform_check(lopsided).size_uniform);
}

TEST_CASE("envelopes reduce to the reference curves") {
  for (int n : {5, 20, 100})
    for (int m : {2, 3, 5})
      for (double c : {0.5, 1.0, 3.0}) {
        auto labelled = transposition_envelope(n, 1.0 / m, c);
        auto reference = uniform_label_transposition_curve(n, m, c / 2);
        CHECK(labelled.k == doctest::Approx(reference.k));
        CHECK(labelled.value == doctest::Approx(reference.value));
        CHECK(labelled.note == "up to universal constant");
      }
  for (int n : {4, 10, 50})
    for (double c : {0.5, 2.0}) {
      auto labelled = bernoulli_laplace_envelope(n, 0.5, c);
      auto reference = binary_label_bernoulli_laplace_curve(n, c);
      CHECK(labelled.k == doctest::Approx(reference.k));
      CHECK(labelled.value == doctest::Approx(reference.value));
    }
  CHECK(random_transposition_curve(10, 1.0).k == doctest::Approx(5 * std::log(10.0) + 10));
  CHECK(bernoulli_laplace_curve(8, 1.0, 3.0).value == doctest::Approx(3 * std::exp(-2.0)));
  CHECK_THROWS_AS(transposition_envelope(10, 0.5, 0.0), DomainError);
}

TEST_CASE("lower indicator") {
  CHECK(lower_indicator(ChainFamily::wreath, 4, 0.3, 2) == doctest::Approx(16 * (7.0 / 3) * std::pow(0.75, 8)));
  CHECK(lower_indicator(ChainFamily::coset, 4, 0.3, 2) == doctest::Approx(8 * (7.0 / 3) * std::pow(0.75, 8)));
  AlphabetMeasure p({0.7, 0.3});
  for (int n = 2; n <= 5; ++n) {
    const std::vector<int> x0(static_cast<std::size_t>(n), 1);
    for (int k : {1, 4}) {
      auto rep = decompose_wreath(build_transposition_measure(n), p, x0, k);
      double aggregated = 0;
      for (const auto& t : rep.terms)
        if (t.J.size() == n - 1) aggregated += t.term2;
      CHECK(aggregated == doctest::Approx(lower_indicator(ChainFamily::wreath, n, 0.3, k)).epsilon(1e-12));
      CHECK(rep.l2_squared() >= lower_indicator(ChainFamily::wreath, n, 0.3, k) * (1 - 1e-12));
      for (int r = 1; 2 * r <= n; ++r) {
        auto cos = decompose_coset(build_bernoulli_laplace_measure(n, r), p, x0, k);
        double agg = 0;
        for (const auto& t : cos.terms)
          if (t.J.size() == n - 1) agg += t.term2;
        CHECK(agg == doctest::Approx(lower_indicator(ChainFamily::coset, n, 0.3, k)).epsilon(1e-12));
      }
    }
  }
  CHECK_THROWS_AS(lower_indicator(ChainFamily::wreath, 4, 0.3, 0), DomainError);
}
