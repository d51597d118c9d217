#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>
#include <json.hpp>

#include "wreathmix/perm.hpp"

namespace wreathmix {

using Rational = boost::rational<std::int64_t>;

inline constexpr double kMassTolerance = 1e-12;

/// Probability law P on the label alphabet G = {g_1, ..., g_m}.
class AlphabetMeasure {
 public:
  /// Throws DomainError unless every entry is positive and they sum to 1.
  explicit AlphabetMeasure(std::vector<double> probs);
  static AlphabetMeasure uniform(int m);
  /// "0.7,0.3" or "uniform"; the latter needs alphabet_size.
  static AlphabetMeasure parse(std::string_view text, int alphabet_size = 0);

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int i) const { return probs_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& probs() const { return probs_; }
  double p_min() const { return probs_[static_cast<std::size_t>(argmin_)]; }
  /// First symbol attaining p_min.
  int argmin() const { return argmin_; }
  std::string to_string() const;

 private:
  std::vector<double> probs_;
  int argmin_ = 0;
};

struct Atom {
  AugmentedPermutation step;
  double weight;
  std::optional<Rational> exact;
};

/// Finitely supported probability measure on augmented permutations.
class AugmentedMeasure {
 public:
  /// Merges repeated atoms, drops nothing, and throws DomainError if a weight
  /// is not positive, an atom disagrees with (n, mode) or the mass is not 1.
  AugmentedMeasure(int n, ChainMode mode, std::vector<Atom> atoms);

  int degree() const { return n_; }
  ChainMode mode() const { return mode_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  /// True when every atom carries an exact rational weight.
  bool is_exact() const { return exact_; }

 private:
  int n_;
  ChainMode mode_;
  std::vector<Atom> atoms_;
  bool exact_ = false;
};

/// Measure on permutations with support inside S_(support).
struct GroupMeasure {
  int n = 0;
  IndexSet support;
  std::map<Permutation, double> mass;

  double total() const;
  double at(const Permutation& p) const;
};

AugmentedMeasure build_transposition_measure(int n);
AugmentedMeasure build_bernoulli_laplace_measure(int n, int r);

bool is_augmented_symmetric(const AugmentedMeasure& qhat, double tol = kMassTolerance);

GroupMeasure induced_measure(const AugmentedMeasure& qhat);

/// Mass of atoms whose mode-dependent included set lies inside J.
double inclusion_probability(const AugmentedMeasure& qhat, IndexSet J);
std::optional<Rational> inclusion_probability_exact(const AugmentedMeasure& qhat, IndexSet J);

/// Mass of atoms with moved points and extra set inside J, i.e. with pi in S_(J).
double subgroup_probability(const AugmentedMeasure& qhat, IndexSet J);

struct ConditionalMeasure {
  AugmentedMeasure steps;
  GroupMeasure induced;
};

/// Conditions on pi in S_(J) together with the extra set inside J, and
/// renormalises. In plain mode this is the event I ⊆ J. Throws
/// UnconditionableError when the event has zero mass.
ConditionalMeasure conditional_measure(const AugmentedMeasure& qhat, IndexSet J);

/// Random augmented-symmetric measure on S_n: lazy atom, single-site
/// refreshes, weighted transpositions and `extra` random pairs (pi, J),
/// (pi^-1, J) sharing a weight.
AugmentedMeasure random_symmetric_measure(int n, std::mt19937_64& rng, int extra = 3);

/// Random coset-mode measure that is invariant under S_r x S_{n-r} on both
/// sides: weights of (kappa, A) depend only on A and weights of the other
/// steps only on how many labels change rack.
AugmentedMeasure random_bi_invariant_coset_measure(int n, int r, std::mt19937_64& rng);

/// Random augmented-symmetric coset-mode measure with no invariance beyond
/// (2.0)-style symmetry.
AugmentedMeasure random_generic_coset_measure(int n, int r, std::mt19937_64& rng);

nlohmann::json measure_to_json(const AugmentedMeasure& qhat);
AugmentedMeasure measure_from_json(const nlohmann::json& doc);

}  // namespace wreathmix
