#include "wreathmix/simulate.hpp"

#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "wreathmix/errors.hpp"

namespace wreathmix {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t replica, std::uint64_t step)
    : state_(splitmix64(splitmix64(splitmix64(seed) ^ replica) ^ step)) {}

std::uint64_t CounterRng::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return splitmix64(state_);
}

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

AliasTable::AliasTable(std::span<const double> weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw DomainError("alias table needs at least one weight");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0)) throw DomainError("alias table needs positive total weight");
  prob_.assign(n, 1.0);
  alias_.resize(n);
  std::iota(alias_.begin(), alias_.end(), std::size_t{0});
  std::vector<double> scaled(n);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] < 0) throw DomainError("alias table weights must be nonnegative");
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    auto s = small.back();
    small.pop_back();
    auto l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
}

std::size_t AliasTable::sample(CounterRng& rng) const {
  const double u = rng.uniform() * static_cast<double>(prob_.size());
  auto column = static_cast<std::size_t>(u);
  if (column >= prob_.size()) column = prob_.size() - 1;
  return (u - static_cast<double>(column)) < prob_[column] ? column : alias_[column];
}

std::map<std::uint64_t, std::uint64_t> SimResult::counts() const {
  std::map<std::uint64_t, std::uint64_t> c;
  for (auto s : end_state) ++c[s];
  return c;
}

DistVector SimResult::empirical() const {
  if (space.size() > kMaxStates) throw CapacityError("state space too large for a dense empirical law");
  DistVector v(space.size(), 0.0);
  for (const auto& [s, c] : counts()) v[s] = static_cast<double>(c) / static_cast<double>(replicas());
  return v;
}

double SimResult::containment_frequency(IndexSet J) const {
  std::uint64_t hits = 0;
  for (auto h : tracked)
    if (IndexSet(h).subset_of(J)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(replicas());
}

SimResult run_trajectories(const SimConfig& cfg) {
  if (!cfg.qhat) throw DomainError("simulation needs a measure");
  if (cfg.replicas < 1) throw DomainError("at least one replica is required");
  if (cfg.steps < 0) throw DomainError("steps must be nonnegative");
  const auto& qhat = *cfg.qhat;
  const int n = qhat.degree();
  const bool coset = qhat.mode().is_coset();
  const int r = qhat.mode().rack_size();
  StateSpace space = coset ? StateSpace::coset(n, r, cfg.p.size()) : StateSpace::wreath(n, cfg.p.size());
  space.label_index(cfg.x0);  // validates the start labels

  std::vector<double> weights;
  for (const auto& a : qhat.atoms()) weights.push_back(a.weight);
  const AliasTable steps(weights);
  const AliasTable symbols(cfg.p.probs());
  const IndexSet first = IndexSet::full(r);

  SimResult out{space, {}, {}, {}};
  out.end_state.resize(cfg.replicas);
  out.tracked.resize(cfg.replicas);
  out.group.resize(cfg.replicas);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::vector<int> scratch(static_cast<std::size_t>(n));
  for (std::uint64_t rep = 0; rep < cfg.replicas; ++rep) {
    auto labels = cfg.x0;
    std::iota(perm.begin(), perm.end(), 0);
    IndexSet subset = first;
    IndexSet tracked, group;
    for (int k = 0; k < cfg.steps; ++k) {
      CounterRng rng(cfg.seed, rep, static_cast<std::uint64_t>(k));
      const auto& step = qhat.atoms()[steps.sample(rng)].step;
      IndexSet refresh;
      if (!coset) {
        for (int i = 0; i < n; ++i) scratch[static_cast<std::size_t>(i)] = perm[static_cast<std::size_t>(step.pi()(i))];
        perm.swap(scratch);
        refresh = step.moved_included();
      } else if (cfg.rule == CosetLabelRule::literal_included) {
        subset = step.pi().image(subset);
        refresh = step.moved_included();
      } else {
        const auto rep_inv = CosetRep::from_subset(subset, n, r);
        subset = rep_inv.involution().image(step.pi().image(first));
        refresh = rep_inv.involution().image(step.included());
      }
      for (int i : refresh.elements()) labels[static_cast<std::size_t>(i)] = static_cast<int>(symbols.sample(rng));
      tracked = tracked | step.included();
      group = group | step.moved_included();
    }
    out.end_state[rep] = coset ? space.rank(CosetState{labels, subset})
                               : space.rank(WreathState{labels, Permutation::from_images(perm)});
    out.tracked[rep] = tracked.mask();
    out.group[rep] = group.mask();
  }
  return out;
}

double estimate_tv(const DistVector& empirical, const DistVector& target) { return tv_distance(empirical, target); }

TvEstimate estimate_tv(const SimResult& sim, const DistVector& target, std::uint64_t seed, int resamples) {
  if (target.size() != sim.space.size()) throw DomainError("target law has the wrong length");
  TvEstimate est;
  est.tv = tv_distance(sim.empirical(), target);
  est.resamples = resamples;
  if (resamples < 2) return est;
  const std::uint64_t N = sim.replicas();
  std::vector<double> stats;
  DistVector boot(target.size());
  const double unit = 1.0 / static_cast<double>(N);
  for (int b = 0; b < resamples; ++b) {
    std::fill(boot.begin(), boot.end(), 0.0);
    CounterRng rng(seed ^ 0xb0075eedULL, static_cast<std::uint64_t>(b), 0);
    for (std::uint64_t i = 0; i < N; ++i) boot[sim.end_state[rng.next() % N]] += unit;
    stats.push_back(tv_distance(boot, target));
  }
  const double mean = std::accumulate(stats.begin(), stats.end(), 0.0) / resamples;
  double var = 0;
  for (double s : stats) var += (s - mean) * (s - mean);
  est.se = std::sqrt(var / (resamples - 1));
  return est;
}

GoodnessOfFit label_law_test(const SimResult& sim, const AlphabetMeasure& p, IndexSet C) {
  const int m = p.size();
  const auto positions = C.elements();
  std::uint64_t cells = 1;
  for (std::size_t i = 0; i < positions.size(); ++i) cells *= static_cast<std::uint64_t>(m);
  std::vector<double> observed(cells, 0.0);
  GoodnessOfFit g;
  for (std::uint64_t rep = 0; rep < sim.replicas(); ++rep) {
    if (sim.tracked[rep] != C.mask()) continue;
    auto labels = sim.space.labels_at(sim.end_state[rep] / sim.space.arrangement_count());
    std::uint64_t cell = 0;
    for (int i : positions) cell = cell * static_cast<std::uint64_t>(m) + static_cast<std::uint64_t>(labels[static_cast<std::size_t>(i)]);
    observed[cell] += 1;
    ++g.sample_size;
  }
  if (g.sample_size == 0 || cells < 2) return g;
  for (std::uint64_t cell = 0; cell < cells; ++cell) {
    double expected = static_cast<double>(g.sample_size);
    std::uint64_t c = cell;
    for (std::size_t i = 0; i < positions.size(); ++i) {
      expected *= p[static_cast<int>(c % static_cast<std::uint64_t>(m))];
      c /= static_cast<std::uint64_t>(m);
    }
    g.statistic += (observed[cell] - expected) * (observed[cell] - expected) / expected;
  }
  g.dof = static_cast<int>(cells) - 1;
  boost::math::chi_squared dist(g.dof);
  g.p_value = boost::math::cdf(boost::math::complement(dist, g.statistic));
  return g;
}

nlohmann::json summary_json(const SimResult& sim, const TvEstimate& tv, std::uint64_t seed) {
  return {{"tv", tv.tv}, {"se", tv.se}, {"n_replicas", sim.replicas()}, {"seed", seed}};
}

}  // namespace wreathmix
