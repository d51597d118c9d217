#include "wreathmix/state.hpp"

#include <limits>

#include "wreathmix/errors.hpp"

namespace wreathmix {

namespace {

std::uint64_t checked_power(int base, int exp) {
  std::uint64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(base))
      throw CapacityError("state space size overflows 64 bits");
    v *= static_cast<std::uint64_t>(base);
  }
  return v;
}

}  // namespace

StateSpace::StateSpace(ChainFamily family, int n, int r, int m)
    : family_(family), n_(n), r_(r), m_(m) {
  if (n < 1 || n > kMaxDegree) throw DomainError("n must lie in [1, " + std::to_string(kMaxDegree) + "]");
  if (m < 1) throw DomainError("alphabet must have at least one symbol");
  label_count_ = checked_power(m, n);
  arrangement_count_ = family == ChainFamily::wreath ? factorial(n) : binomial(n, r);
  if (arrangement_count_ != 0 && label_count_ > std::numeric_limits<std::uint64_t>::max() / arrangement_count_)
    throw CapacityError("state space size overflows 64 bits");
}

StateSpace StateSpace::wreath(int n, int alphabet_size) { return StateSpace(ChainFamily::wreath, n, 0, alphabet_size); }

StateSpace StateSpace::coset(int n, int r, int alphabet_size) {
  if (r < 1 || 2 * r > n) throw DomainError("rack size r must satisfy 1 <= r <= n/2");
  return StateSpace(ChainFamily::coset, n, r, alphabet_size);
}

std::uint64_t StateSpace::label_index(const std::vector<int>& labels) const {
  if (static_cast<int>(labels.size()) != n_) throw DomainError("label vector has wrong length");
  std::uint64_t idx = 0;
  for (int x : labels) {
    if (x < 0 || x >= m_) throw DomainError("label outside the alphabet");
    idx = idx * static_cast<std::uint64_t>(m_) + static_cast<std::uint64_t>(x);
  }
  return idx;
}

std::vector<int> StateSpace::labels_at(std::uint64_t label_index) const {
  if (label_index >= label_count_) throw DomainError("label index out of range");
  std::vector<int> labels(static_cast<std::size_t>(n_));
  for (int i = n_ - 1; i >= 0; --i) {
    labels[static_cast<std::size_t>(i)] = static_cast<int>(label_index % static_cast<std::uint64_t>(m_));
    label_index /= static_cast<std::uint64_t>(m_);
  }
  return labels;
}

std::uint64_t StateSpace::rank(const WreathState& s) const {
  if (family_ != ChainFamily::wreath) throw DomainError("not a wreath state space");
  if (s.perm.degree() != n_) throw DomainError("permutation has wrong degree");
  return label_index(s.labels) * arrangement_count_ + lehmer_rank(s.perm);
}

std::uint64_t StateSpace::rank(const CosetState& s) const {
  if (family_ != ChainFamily::coset) throw DomainError("not a coset state space");
  if (s.subset.size() != r_ || !s.subset.subset_of(IndexSet::full(n_))) throw DomainError("subset has wrong size");
  return label_index(s.labels) * arrangement_count_ + colex_rank(s.subset);
}

WreathState StateSpace::unrank_wreath(std::uint64_t rank) const {
  if (family_ != ChainFamily::wreath) throw DomainError("not a wreath state space");
  if (rank >= size()) throw DomainError("state rank out of range");
  return {labels_at(rank / arrangement_count_), lehmer_unrank(rank % arrangement_count_, n_)};
}

CosetState StateSpace::unrank_coset(std::uint64_t rank) const {
  if (family_ != ChainFamily::coset) throw DomainError("not a coset state space");
  if (rank >= size()) throw DomainError("state rank out of range");
  return {labels_at(rank / arrangement_count_), colex_unrank(rank % arrangement_count_, n_, r_)};
}

std::uint64_t StateSpace::start_rank(const std::vector<int>& x0) const {
  // Both the identity and the base subset have arrangement index 0.
  return label_index(x0) * arrangement_count_;
}

std::string StateSpace::format(std::uint64_t rank) const {
  if (rank >= size()) throw DomainError("state rank out of range");
  std::string out = "(";
  auto labels = labels_at(rank / arrangement_count_);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(labels[i] + 1);
  }
  out += "; ";
  std::uint64_t a = rank % arrangement_count_;
  out += family_ == ChainFamily::wreath ? lehmer_unrank(a, n_).to_cycle_string() : colex_unrank(a, n_, r_).to_string();
  return out + ")";
}

}  // namespace wreathmix
