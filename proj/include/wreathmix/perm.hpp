#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wreathmix {

/// Largest degree accepted anywhere in the library (n! must fit in 64 bits).
inline constexpr int kMaxDegree = 20;

std::uint64_t factorial(int n);
std::uint64_t binomial(int n, int k);

/// Subset of {0, ..., n-1} stored as a bitmask. Printed 1-based: "{2,4,8}".
class IndexSet {
 public:
  constexpr IndexSet() = default;
  constexpr explicit IndexSet(std::uint32_t mask) : mask_(mask) {}

  static IndexSet full(int n);
  static IndexSet of(std::initializer_list<int> zero_based);
  /// Builds from 1-based indices; every index must lie in [1, n].
  static IndexSet from_one_based(std::span<const int> indices, int n);
  /// Parses "{2,4,8}" or "{}" (1-based).
  static IndexSet parse(std::string_view text, int n);

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr bool contains(int i) const { return (mask_ >> i) & 1u; }
  constexpr bool empty() const { return mask_ == 0; }
  int size() const;
  constexpr bool subset_of(IndexSet other) const { return (mask_ & ~other.mask_) == 0; }

  IndexSet with(int i) const { return IndexSet(mask_ | (1u << i)); }
  IndexSet without(int i) const { return IndexSet(mask_ & ~(1u << i)); }
  IndexSet complement(int n) const;

  friend constexpr IndexSet operator|(IndexSet a, IndexSet b) { return IndexSet(a.mask_ | b.mask_); }
  friend constexpr IndexSet operator&(IndexSet a, IndexSet b) { return IndexSet(a.mask_ & b.mask_); }
  friend constexpr IndexSet operator^(IndexSet a, IndexSet b) { return IndexSet(a.mask_ ^ b.mask_); }
  friend constexpr IndexSet operator-(IndexSet a, IndexSet b) { return IndexSet(a.mask_ & ~b.mask_); }
  friend constexpr auto operator<=>(IndexSet, IndexSet) = default;

  /// Members in increasing order, 0-based.
  std::vector<int> elements() const;
  std::vector<int> one_based() const;
  std::string to_string() const;

 private:
  std::uint32_t mask_ = 0;
};

/// Permutation of {0, ..., n-1} in one-line notation.
///
/// Composition follows function notation: (a * b)(i) = a(b(i)), so b acts
/// first. Cycle text is 1-based, e.g. "(1 4)(3 8)"; the identity prints as
/// "e".
class Permutation {
 public:
  Permutation() = default;

  static Permutation identity(int n);
  /// 0-based images; throws DomainError unless they form a bijection.
  static Permutation from_images(std::vector<int> images);
  /// 1-based one-line notation, e.g. {8,2,4,6,7,1,5,3}.
  static Permutation from_one_line(std::span<const int> one_based);
  /// Transposition of the 0-based points a and b.
  static Permutation transposition(int n, int a, int b);
  /// Parses cycle notation over [n]. Accepts "e", "()", "(1 4)(3 8)",
  /// "(1,4)" and, when every label is a single digit, "(12)(34)".
  static Permutation parse_cycles(std::string_view text, int n);

  int degree() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
  std::span<const int> images() const { return images_; }

  Permutation inverse() const;
  bool is_identity() const;
  bool is_involution() const;
  IndexSet fixed_points() const;
  IndexSet moved_points() const;
  /// Image of a subset: { p(i) : i in s }.
  IndexSet image(IndexSet s) const;

  std::string to_cycle_string() const;

  friend Permutation operator*(const Permutation& a, const Permutation& b);
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {}
  std::vector<int> images_;
};

IndexSet fixed_points(const Permutation& p);

/// Rank in lexicographic order of one-line notation (Lehmer code); identity is 0.
std::uint64_t lehmer_rank(const Permutation& p);
Permutation lehmer_unrank(std::uint64_t rank, int n);

/// Colexicographic rank of a subset among all subsets of its size; {0..r-1} is 0.
std::uint64_t colex_rank(IndexSet s);
IndexSet colex_unrank(std::uint64_t rank, int n, int r);

/// Canonical representative of a left coset of S_r x S_{n-r}: the r-subset a
/// permutation sends [r] to, together with the involution that swaps the
/// out-of-place labels pairwise in increasing order.
class CosetRep {
 public:
  /// Throws DomainError unless 1 <= r <= n/2 and |subset| == r.
  static CosetRep from_subset(IndexSet subset, int n, int r);
  static CosetRep base(int n, int r);

  IndexSet subset() const { return subset_; }
  const Permutation& involution() const { return involution_; }
  int degree() const { return n_; }
  int rack_size() const { return r_; }
  bool is_base() const { return involution_.is_identity(); }

  friend bool operator==(const CosetRep& a, const CosetRep& b) {
    return a.n_ == b.n_ && a.r_ == b.r_ && a.subset_ == b.subset_;
  }

 private:
  CosetRep(IndexSet subset, Permutation involution, int n, int r)
      : subset_(subset), involution_(std::move(involution)), n_(n), r_(r) {}
  IndexSet subset_;
  Permutation involution_;
  int n_ = 0;
  int r_ = 0;
};

/// The canonical coset representative of p: subset p([r]) and its involution.
CosetRep coset_reduce(const Permutation& p, int r);

/// Whether augmented steps are read on the group (plain) or on the coset
/// space of S_r x S_{n-r} (coset).
class ChainMode {
 public:
  static ChainMode plain() { return ChainMode(0); }
  static ChainMode coset(int r);

  bool is_coset() const { return r_ > 0; }
  int rack_size() const { return r_; }
  std::string to_string() const;

  friend bool operator==(ChainMode, ChainMode) = default;

 private:
  explicit ChainMode(int r) : r_(r) {}
  int r_ = 0;
};

/// A permutation together with a set of extra refreshed indices. In plain mode
/// the extra set must lie inside F(pi); in coset mode inside F(R(pi)).
class AugmentedPermutation {
 public:
  AugmentedPermutation(Permutation pi, IndexSet aug, ChainMode mode);

  const Permutation& pi() const { return pi_; }
  IndexSet aug() const { return aug_; }
  ChainMode mode() const { return mode_; }

  /// Moved points of pi together with aug; the positions whose labels the
  /// group chain refreshes.
  IndexSet moved_included() const { return pi_.moved_points() | aug_; }
  /// Mode-dependent included set: moved_included() in plain mode, the moved
  /// points of R(pi) together with aug in coset mode.
  IndexSet included() const;

 private:
  Permutation pi_;
  IndexSet aug_;
  ChainMode mode_;
};

IndexSet included_indices(const AugmentedPermutation& ap);

}  // namespace wreathmix
