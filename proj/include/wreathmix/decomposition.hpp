#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include <json.hpp>

#include "wreathmix/measures.hpp"

namespace wreathmix {

inline constexpr int kDefaultSubwalkCap = 8;
inline constexpr int kMaxDecompositionDegree = 12;

/// Distances of the conditional sub-walks, memoised per subset across k.
///
/// For a subset J the walk uses the steps with pi in S_(J) (extra set inside
/// J), renormalised. Plain mode returns |J|! * sum (nu_k - 1/|J|!)^2 over
/// S_(J). Coset mode pushes the walk forward to the image of J ∩ [r] and
/// returns C(|J|, |J ∩ [r]|) * sum (nu_k - 1/C)^2. Both are the chi-square
/// distance of the sub-walk to its uniform law.
class SubWalkCache {
 public:
  explicit SubWalkCache(const AugmentedMeasure& qhat, int capacity = kDefaultSubwalkCap);

  /// Throws CapacityError when |J| exceeds the capacity, and
  /// UnconditionableError when no step lies in S_(J).
  double distance(IndexSet J, int k);
  /// True when no step lies in S_(J), so the sub-walk is undefined.
  bool is_null(IndexSet J) const;

  const AugmentedMeasure& measure() const { return qhat_; }

 private:
  struct Walk {
    int size = 0;
    int rack = 0;  // |J ∩ [r]| in coset mode
    std::vector<std::vector<std::uint32_t>> compose;  // per step: g -> g * h
    std::vector<double> weights;
    std::vector<std::uint32_t> coset_of;  // coset mode: colex rank of g(J ∩ [r])
    std::vector<double> current;
    std::vector<double> history;
  };
  Walk& walk_for(IndexSet J);
  double distance_of(const Walk& w) const;

  const AugmentedMeasure& qhat_;
  int capacity_;
  std::map<std::uint32_t, Walk> walks_;
};

double subwalk_l2(const AugmentedMeasure& qhat, IndexSet J, int k, int capacity = kDefaultSubwalkCap);

struct SubsetTerm {
  IndexSet J;
  double mu = 0;
  double weight = 0;        // product over i outside J of (1/p_{x0_i} - 1)
  double multiplicity = 0;  // n!/|J|! or C(n,r)/C(|J|, |J ∩ [r]|)
  double d = 0;
  double term1 = 0;
  double term2 = 0;
  bool null_subwalk = false;
};

struct DecompositionReport {
  ChainMode mode = ChainMode::plain();
  int n = 0;
  int k = 0;
  std::vector<SubsetTerm> terms;  // indexed by subset mask
  double first_sum = 0;
  double second_sum = 0;
  bool has_null_subwalk = false;

  double l2_squared() const { return first_sum + second_sum; }
  double l2() const;

  nlohmann::json to_json() const;
  /// One row per subset: J, mask, mu, weight, d, term1, term2.
  void write_csv(std::ostream& out) const;
};

/// Squared L2 distance of the wreath chain from (x0; e) after k steps as the
/// sum over subsets. x0 holds 0-based symbols. Requires k >= 1.
DecompositionReport decompose_wreath(const AugmentedMeasure& qhat, const AlphabetMeasure& p,
                                     const std::vector<int>& x0, int k, SubWalkCache* cache = nullptr);
/// Coset-chain counterpart, started from (x0; base coset).
DecompositionReport decompose_coset(const AugmentedMeasure& qhat, const AlphabetMeasure& p,
                                    const std::vector<int>& x0, int k, SubWalkCache* cache = nullptr);

/// The same sum with subsets grouped by size (coset mode: by the sizes of
/// J ∩ [r] and J \ [r]), evaluating mu and d once per class. Only valid when
/// mu and d are constant on each class, as for the transposition and
/// Bernoulli-Laplace measures.
double decompose_by_size(const AugmentedMeasure& qhat, const AlphabetMeasure& p, const std::vector<int>& x0, int k);

/// f(C) = sum_{J ⊆ C} (-1)^{|C|-|J|} g(J).
std::vector<double> mobius_invert(std::span<const double> g, int n);
/// g(J) = sum_{C ⊆ J} f(C).
std::vector<double> zeta_transform(std::span<const double> f, int n);

/// e_0..e_len of the given values.
std::vector<double> elementary_symmetric(std::span<const double> values);

}  // namespace wreathmix
