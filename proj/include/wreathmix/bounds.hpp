#pragma once

#include <string>
#include <vector>

#include "wreathmix/decomposition.hpp"
#include "wreathmix/state.hpp"

namespace wreathmix {

/// Subset-lattice aggregates for one measure and one k. `M[j]` is the largest
/// inclusion probability over |J| = j, `D[j]` the largest sub-walk distance
/// and `B` the largest entry of D. `r` is 0 for the wreath chain.
struct BoundInputs {
  int n = 0;
  int r = 0;
  int k = 0;
  std::vector<double> M;
  std::vector<double> D;
  double B = 0;

  ChainFamily family() const { return r > 0 ? ChainFamily::coset : ChainFamily::wreath; }
};

BoundInputs aggregate_tables(const AugmentedMeasure& qhat, int k, SubWalkCache* cache = nullptr);

/// Upper bound on the squared L2 distance from the subset sum with every
/// start weight replaced by (1/p_min - 1). Divide by 4 for the squared TV
/// bound. In the coset case the class (i, j) uses M(i + j).
double subset_sum_bound(const BoundInputs& in, double p_min);

/// Largest m with M(j) <= (j/n)^m for all j, or 0 when no m > 0 works.
double contraction_exponent(const std::vector<double>& M);

struct ContractionBound {
  double threshold = 0;  // smallest k for which the bound is claimed
  double bound = 0;      // bound on half the L2 distance
};

/// Rejects c <= 0, m <= 0 and p_min >= 1 with DomainError.
/// Wreath: k >= (n ln n)/m + n ln(1/p_min - 1)/(2m) + cn/m, bound
/// sqrt(B + e^{-2c}). Coset: k >= n (ln n + ln(1/p_min - 1) + c)/(2m),
/// bound 2 sqrt(B + e^{-c}).
ContractionBound contraction_bound(ChainFamily family, int n, double p_min, double m, double c, double B);

struct SizeUniformity {
  bool size_uniform = false;
  std::vector<double> f;  // f[l] = probability that the included set has l points
};

/// Whether the included set, given its size, is uniform over subsets of that size.
SizeUniformity size_uniform_check(const AugmentedMeasure& qhat, double tol = 1e-12);

/// A step count together with a distance envelope known only up to a
/// universal constant, which defaults to 1.
struct Envelope {
  double k = 0;
  double value = 0;
  std::string note = "up to universal constant";
};

/// Wreath chain with random transpositions: k = n ln n / 2 + n ln(1/p_min - 1)/4 + cn/2,
/// envelope constant * e^{-c}.
Envelope transposition_envelope(int n, double p_min, double c, double constant = 1.0);
/// Coset chain with the Bernoulli-Laplace steps: k = n (ln n + ln(1/p_min - 1) + c)/4,
/// envelope constant * e^{-c/2}.
Envelope bernoulli_laplace_envelope(int n, double p_min, double c, double constant = 1.0);

/// Reference curves for the unlabelled and uniformly labelled walks.
Envelope random_transposition_curve(int n, double c, double constant = 1.0);
Envelope uniform_label_transposition_curve(int n, int alphabet_size, double c, double constant = 1.0);
Envelope bernoulli_laplace_curve(int n, double c, double constant = 1.0);
Envelope binary_label_bernoulli_laplace_curve(int n, double c, double constant = 1.0);

/// Single aggregated term of the second sum at |J| = n - 1 when mu = (|J|/n)^2:
/// n^2 (1/p_min - 1)(1 - 1/n)^{4k} for the wreath chain, 2n (...) for the coset chain.
double lower_indicator(ChainFamily family, int n, double p_min, int k);

}  // namespace wreathmix
