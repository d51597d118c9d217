#include "wreathmix/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <queue>
#include <unordered_map>

#include "wreathmix/errors.hpp"

namespace wreathmix {

std::span<const std::uint32_t> Kernel::columns(std::size_t row) const {
  return {cols_.data() + row_start_[row], row_start_[row + 1] - row_start_[row]};
}

std::span<const double> Kernel::values(std::size_t row) const {
  return {vals_.data() + row_start_[row], row_start_[row + 1] - row_start_[row]};
}

double Kernel::entry(std::size_t from, std::size_t to) const {
  auto cols = columns(from);
  auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<std::uint32_t>(to));
  if (it == cols.end() || *it != to) return 0.0;
  return values(from)[static_cast<std::size_t>(it - cols.begin())];
}

DistVector Kernel::apply(const DistVector& v) const {
  if (v.size() != size()) throw DomainError("distribution length does not match the kernel");
  DistVector out(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) continue;
    auto cols = columns(i);
    auto vals = values(i);
    for (std::size_t e = 0; e < cols.size(); ++e) out[cols[e]] += v[i] * vals[e];
  }
  return out;
}

double Kernel::max_row_sum_error() const {
  double worst = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    auto vals = values(i);
    worst = std::max(worst, std::abs(std::accumulate(vals.begin(), vals.end(), 0.0) - 1.0));
  }
  return worst;
}

double Kernel::stationarity_error() const {
  auto next = apply(stationary_);
  double worst = 0;
  for (std::size_t i = 0; i < next.size(); ++i) worst = std::max(worst, std::abs(next[i] - stationary_[i]));
  return worst;
}

// Where one atom sends one arrangement, and which label slots it refreshes.
struct Move {
  std::uint64_t arrangement;
  IndexSet refresh;
};

class KernelBuilder {
 public:
  KernelBuilder(StateSpace space, const AugmentedMeasure& qhat, const AlphabetMeasure& p)
      : kernel_(std::move(space)), qhat_(qhat), p_(p) {
    if (p.size() != kernel_.space().alphabet_size()) throw DomainError("alphabet measure size mismatch");
    if (kernel_.space().size() > kMaxStates)
      throw CapacityError("state space has " + std::to_string(kernel_.space().size()) + " states; the cap is " +
                          std::to_string(kMaxStates));
    if (!is_augmented_symmetric(qhat))
      kernel_.warnings_.push_back("measure is not augmented symmetric; reversibility is not guaranteed");
  }

  template <class MoveFn>
  Kernel build(MoveFn&& move_of) {
    const auto& space = kernel_.space();
    const std::uint64_t arrangements = space.arrangement_count();
    const auto& atoms = qhat_.atoms();
    std::vector<Move> moves(arrangements * atoms.size());
    for (std::uint64_t a = 0; a < arrangements; ++a)
      for (std::size_t t = 0; t < atoms.size(); ++t) moves[a * atoms.size() + t] = move_of(a, atoms[t].step);

    const int n = space.degree();
    const int m = space.alphabet_size();
    std::vector<std::uint64_t> place(static_cast<std::size_t>(n));
    for (int i = n - 1, w = 1; i >= 0; --i, w *= m) place[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(w);

    std::vector<std::pair<std::uint32_t, double>> row;
    kernel_.row_start_.assign(1, 0);
    for (std::uint64_t L = 0; L < space.label_count(); ++L) {
      auto labels = space.labels_at(L);
      for (std::uint64_t a = 0; a < arrangements; ++a) {
        row.clear();
        for (std::size_t t = 0; t < atoms.size(); ++t) {
          const Move& mv = moves[a * atoms.size() + t];
          std::uint64_t cleared = L;
          for (int i : mv.refresh.elements())
            cleared -= static_cast<std::uint64_t>(labels[static_cast<std::size_t>(i)]) * place[static_cast<std::size_t>(i)];
          for (const auto& [offset, prob] : outcomes(mv.refresh, place)) {
            std::uint64_t to = (cleared + offset) * arrangements + mv.arrangement;
            row.emplace_back(static_cast<std::uint32_t>(to), atoms[t].weight * prob);
          }
        }
        std::sort(row.begin(), row.end());
        for (std::size_t e = 0; e < row.size(); ++e) {
          if (!kernel_.cols_.empty() && kernel_.row_start_.back() < kernel_.cols_.size() &&
              kernel_.cols_.back() == row[e].first) {
            kernel_.vals_.back() += row[e].second;
          } else {
            kernel_.cols_.push_back(row[e].first);
            kernel_.vals_.push_back(row[e].second);
          }
        }
        kernel_.row_start_.push_back(kernel_.cols_.size());
      }
    }

    kernel_.stationary_.resize(space.size());
    const double share = 1.0 / static_cast<double>(arrangements);
    for (std::uint64_t L = 0; L < space.label_count(); ++L) {
      double w = share;
      for (int x : space.labels_at(L)) w *= p_[x];
      for (std::uint64_t a = 0; a < arrangements; ++a) kernel_.stationary_[L * arrangements + a] = w;
    }
    return std::move(kernel_);
  }

 private:
  // Label-index offsets and probabilities of every fresh assignment to `refresh`.
  const std::vector<std::pair<std::uint64_t, double>>& outcomes(IndexSet refresh,
                                                                const std::vector<std::uint64_t>& place) {
    auto it = outcome_cache_.find(refresh.mask());
    if (it != outcome_cache_.end()) return it->second;
    std::vector<std::pair<std::uint64_t, double>> out{{0, 1.0}};
    for (int i : refresh.elements()) {
      std::vector<std::pair<std::uint64_t, double>> next;
      next.reserve(out.size() * static_cast<std::size_t>(p_.size()));
      for (const auto& [off, pr] : out)
        for (int x = 0; x < p_.size(); ++x)
          next.emplace_back(off + static_cast<std::uint64_t>(x) * place[static_cast<std::size_t>(i)], pr * p_[x]);
      out = std::move(next);
    }
    return outcome_cache_.emplace(refresh.mask(), std::move(out)).first->second;
  }

  Kernel kernel_;
  const AugmentedMeasure& qhat_;
  const AlphabetMeasure& p_;
  std::unordered_map<std::uint32_t, std::vector<std::pair<std::uint64_t, double>>> outcome_cache_;
};

Kernel build_wreath_kernel(const AugmentedMeasure& qhat, const AlphabetMeasure& p) {
  if (qhat.mode().is_coset()) throw DomainError("wreath kernel needs a plain-mode measure");
  const int n = qhat.degree();
  KernelBuilder builder(StateSpace::wreath(n, p.size()), qhat, p);
  return builder.build([n](std::uint64_t a, const AugmentedPermutation& step) {
    auto current = lehmer_unrank(a, n);
    return Move{lehmer_rank(current * step.pi()), step.moved_included()};
  });
}

Kernel build_coset_kernel(const AugmentedMeasure& qhat, const AlphabetMeasure& p, CosetLabelRule rule) {
  if (!qhat.mode().is_coset()) throw DomainError("coset kernel needs a coset-mode measure");
  const int n = qhat.degree();
  const int r = qhat.mode().rack_size();
  const IndexSet first = IndexSet::full(r);
  KernelBuilder builder(StateSpace::coset(n, r, p.size()), qhat, p);
  return builder.build([=](std::uint64_t a, const AugmentedPermutation& step) {
    IndexSet subset = colex_unrank(a, n, r);
    if (rule == CosetLabelRule::literal_included)
      return Move{colex_rank(step.pi().image(subset)), step.moved_included()};
    const auto rep = CosetRep::from_subset(subset, n, r);
    const auto& inv = rep.involution();
    return Move{colex_rank(inv.image(step.pi().image(first))), inv.image(step.included())};
  });
}

DistVector point_mass(std::size_t size, std::size_t at) {
  if (at >= size) throw DomainError("point mass outside the state space");
  DistVector v(size, 0.0);
  v[at] = 1.0;
  return v;
}

DistVector kstep(const Kernel& kernel, std::size_t start, int k) {
  if (k < 0) throw DomainError("k must be nonnegative");
  auto v = point_mass(kernel.size(), start);
  for (int i = 0; i < k; ++i) v = kernel.apply(v);
  return v;
}

double lp_distance(const DistVector& nu, const DistVector& rho, const DistVector& reference, double p) {
  if (nu.size() != rho.size() || nu.size() != reference.size()) throw DomainError("distribution lengths differ");
  if (!(p >= 1)) throw DomainError("p must be at least 1");
  double total = 0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (!(reference[i] > 0)) throw DomainError("reference distribution must be strictly positive");
    total += std::pow(std::abs(nu[i] - rho[i]), p) / std::pow(reference[i], p - 1);
  }
  return std::pow(total, 1.0 / p);
}

double tv_distance(const DistVector& nu, const DistVector& rho) {
  if (nu.size() != rho.size()) throw DomainError("distribution lengths differ");
  double up = 0;
  for (std::size_t i = 0; i < nu.size(); ++i)
    if (nu[i] > rho[i]) up += nu[i] - rho[i];
  return up;
}

double l1_distance(const DistVector& nu, const DistVector& rho) {
  if (nu.size() != rho.size()) throw DomainError("distribution lengths differ");
  double total = 0;
  for (std::size_t i = 0; i < nu.size(); ++i) total += std::abs(nu[i] - rho[i]);
  return total;
}

double detailed_balance_violation(const Kernel& kernel) {
  const auto& pi = kernel.stationary();
  double worst = 0;
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    auto cols = kernel.columns(i);
    auto vals = kernel.values(i);
    for (std::size_t e = 0; e < cols.size(); ++e) {
      std::size_t j = cols[e];
      worst = std::max(worst, std::abs(pi[i] * vals[e] - pi[j] * kernel.entry(j, i)));
    }
  }
  return worst;
}

double chi_square_identity(const Kernel& kernel, std::size_t g0, int k) {
  if (double v = detailed_balance_violation(kernel); v > 1e-9)
    throw NonReversibleError("kernel violates detailed balance by " + std::to_string(v));
  auto v = kstep(kernel, g0, 2 * k);
  return v[g0] / kernel.stationary()[g0] - 1.0;
}

Diagnosis diagnose(const Kernel& kernel, std::size_t start) {
  const std::size_t N = kernel.size();
  std::vector<std::int64_t> depth(N, -1);
  std::queue<std::size_t> todo;
  depth[start] = 0;
  todo.push(start);
  Diagnosis d;
  std::uint64_t g = 0;
  while (!todo.empty()) {
    auto i = todo.front();
    todo.pop();
    ++d.reachable;
    auto cols = kernel.columns(i);
    auto vals = kernel.values(i);
    for (std::size_t e = 0; e < cols.size(); ++e) {
      if (vals[e] <= 0) continue;
      std::size_t j = cols[e];
      if (depth[j] < 0) {
        depth[j] = depth[i] + 1;
        todo.push(j);
      } else {
        g = std::gcd(g, static_cast<std::uint64_t>(std::abs(depth[i] + 1 - depth[j])));
      }
    }
  }
  d.irreducible = d.reachable == N;
  d.period = g;
  return d;
}

void write_kernel_csv(std::ostream& out, const Kernel& kernel) {
  out << "from,to,probability\n";
  out.precision(17);
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    auto cols = kernel.columns(i);
    auto vals = kernel.values(i);
    for (std::size_t e = 0; e < cols.size(); ++e) out << i << ',' << cols[e] << ',' << vals[e] << '\n';
  }
}

void write_dist_csv(std::ostream& out, const StateSpace& space, const DistVector& v) {
  out << "rank,state,probability\n";
  out.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) out << i << ",\"" << space.format(i) << "\"," << v[i] << '\n';
}

}  // namespace wreathmix
