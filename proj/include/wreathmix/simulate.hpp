#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <json.hpp>

#include "wreathmix/exact.hpp"
#include "wreathmix/measures.hpp"
#include "wreathmix/state.hpp"

namespace wreathmix {

/// Counter-based generator: the stream for (seed, replica, step) does not
/// depend on how many numbers other replicas or steps consumed.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t replica, std::uint64_t step);
  std::uint64_t next();
  /// Uniform on [0, 1).
  double uniform();

 private:
  std::uint64_t state_;
};

/// Vose alias table for O(1) sampling from a finite distribution.
class AliasTable {
 public:
  explicit AliasTable(std::span<const double> weights);
  std::size_t sample(CounterRng& rng) const;
  std::size_t size() const { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

struct SimConfig {
  const AugmentedMeasure* qhat = nullptr;
  AlphabetMeasure p = AlphabetMeasure::uniform(1);
  std::vector<int> x0;  // 0-based start labels
  int steps = 0;
  std::uint64_t replicas = 1;
  std::uint64_t seed = 0;
  CosetLabelRule rule = CosetLabelRule::tracked;
};

/// End states and included-set unions of every replica. In plain mode
/// `tracked` and `group` both hold the union of I; in coset mode `tracked`
/// holds the union of the coset included sets and `group` the union of I.
struct SimResult {
  StateSpace space;
  std::vector<std::uint64_t> end_state;
  std::vector<std::uint32_t> tracked;
  std::vector<std::uint32_t> group;

  std::uint64_t replicas() const { return end_state.size(); }
  std::map<std::uint64_t, std::uint64_t> counts() const;
  /// Empirical law as a dense vector; needs space.size() <= kMaxStates.
  DistVector empirical() const;
  /// Fraction of replicas whose tracked union lies inside J.
  double containment_frequency(IndexSet J) const;
};

/// The chain family follows the measure mode.
SimResult run_trajectories(const SimConfig& cfg);

struct TvEstimate {
  double tv = 0;
  double se = 0;
  int resamples = 0;
};

/// Plug-in TV between the empirical law and `target`, with a bootstrap
/// standard error over `resamples` multinomial resamples of the end states.
TvEstimate estimate_tv(const SimResult& sim, const DistVector& target, std::uint64_t seed = 0, int resamples = 200);
/// Plug-in TV of two laws given as dense vectors, without an error estimate.
double estimate_tv(const DistVector& empirical, const DistVector& target);

struct GoodnessOfFit {
  std::uint64_t sample_size = 0;
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
};

/// Chi-square test that, among replicas with tracked union equal to C, the
/// labels at the positions in C are i.i.d. from P.
GoodnessOfFit label_law_test(const SimResult& sim, const AlphabetMeasure& p, IndexSet C);

nlohmann::json summary_json(const SimResult& sim, const TvEstimate& tv, std::uint64_t seed);

}  // namespace wreathmix
