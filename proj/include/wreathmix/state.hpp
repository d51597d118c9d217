#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wreathmix/perm.hpp"

namespace wreathmix {

enum class ChainFamily { wreath, coset };

/// Labels are 0-based symbol indices into the alphabet G.
struct WreathState {
  std::vector<int> labels;
  Permutation perm;
  friend bool operator==(const WreathState&, const WreathState&) = default;
};

struct CosetState {
  std::vector<int> labels;
  IndexSet subset;  // the coset is identified with the r-subset it sends [r] to
  friend bool operator==(const CosetState&, const CosetState&) = default;
};

/// Ranked state space of either chain family.
///
/// rank = label_index * arrangement_count + arrangement_index, where the label
/// vector is read as a base-|G| number with the first label most significant
/// and the arrangement index is the Lehmer rank of the permutation (wreath) or
/// the colex rank of the r-subset (coset).
class StateSpace {
 public:
  static StateSpace wreath(int n, int alphabet_size);
  static StateSpace coset(int n, int r, int alphabet_size);

  ChainFamily family() const { return family_; }
  int degree() const { return n_; }
  int rack_size() const { return r_; }
  int alphabet_size() const { return m_; }
  std::uint64_t label_count() const { return label_count_; }
  std::uint64_t arrangement_count() const { return arrangement_count_; }
  std::uint64_t size() const { return label_count_ * arrangement_count_; }

  std::uint64_t label_index(const std::vector<int>& labels) const;
  std::vector<int> labels_at(std::uint64_t label_index) const;

  std::uint64_t rank(const WreathState& s) const;
  std::uint64_t rank(const CosetState& s) const;
  WreathState unrank_wreath(std::uint64_t rank) const;
  CosetState unrank_coset(std::uint64_t rank) const;

  /// Rank of (x0; e) or (x0; base coset).
  std::uint64_t start_rank(const std::vector<int>& x0) const;

  /// "(1,2,1; (1 2))" for the wreath chain, "(1,2,1; {2})" for the coset chain.
  std::string format(std::uint64_t rank) const;

 private:
  StateSpace(ChainFamily family, int n, int r, int m);
  ChainFamily family_;
  int n_;
  int r_;
  int m_;
  std::uint64_t label_count_;
  std::uint64_t arrangement_count_;
};

}  // namespace wreathmix
