#include "wreathmix/decomposition.hpp"

#include <cmath>
#include <ostream>

#include "wreathmix/errors.hpp"

namespace wreathmix {

SubWalkCache::SubWalkCache(const AugmentedMeasure& qhat, int capacity) : qhat_(qhat), capacity_(capacity) {}

bool SubWalkCache::is_null(IndexSet J) const { return !(subgroup_probability(qhat_, J) > 0); }

SubWalkCache::Walk& SubWalkCache::walk_for(IndexSet J) {
  auto it = walks_.find(J.mask());
  if (it != walks_.end()) return it->second;

  const int j = J.size();
  if (j > capacity_)
    throw CapacityError("sub-walk on " + std::to_string(j) + " points exceeds the cap of " + std::to_string(capacity_));
  auto conditioned = conditional_measure(qhat_, J);

  const auto members = J.elements();
  std::vector<int> local_of(static_cast<std::size_t>(qhat_.degree()), -1);
  for (int a = 0; a < j; ++a) local_of[static_cast<std::size_t>(members[static_cast<std::size_t>(a)])] = a;

  Walk w;
  w.size = j;
  if (qhat_.mode().is_coset()) w.rack = (J & IndexSet::full(qhat_.mode().rack_size())).size();
  const std::uint64_t order = factorial(j);
  std::vector<Permutation> all;
  all.reserve(order);
  for (std::uint64_t g = 0; g < order; ++g) all.push_back(lehmer_unrank(g, j));

  for (const auto& [pi, mass] : conditioned.induced.mass) {
    std::vector<int> local(static_cast<std::size_t>(j));
    for (int a = 0; a < j; ++a) local[static_cast<std::size_t>(a)] = local_of[static_cast<std::size_t>(pi(members[static_cast<std::size_t>(a)]))];
    auto h = Permutation::from_images(std::move(local));
    std::vector<std::uint32_t> table(order);
    for (std::uint64_t g = 0; g < order; ++g) table[g] = static_cast<std::uint32_t>(lehmer_rank(all[g] * h));
    w.compose.push_back(std::move(table));
    w.weights.push_back(mass);
  }
  if (qhat_.mode().is_coset()) {
    const IndexSet side = IndexSet::full(w.rack);
    for (const auto& g : all) w.coset_of.push_back(static_cast<std::uint32_t>(colex_rank(g.image(side))));
  }
  w.current.assign(order, 0.0);
  w.current[0] = 1.0;
  w.history.push_back(distance_of(w));
  return walks_.emplace(J.mask(), std::move(w)).first->second;
}

double SubWalkCache::distance_of(const Walk& w) const {
  const std::size_t order = w.current.size();
  if (!qhat_.mode().is_coset()) {
    const double u = 1.0 / static_cast<double>(order);
    double s = 0;
    for (double v : w.current) s += (v - u) * (v - u);
    return static_cast<double>(order) * s;
  }
  const std::uint64_t cosets = binomial(w.size, w.rack);
  std::vector<double> projected(cosets, 0.0);
  for (std::size_t g = 0; g < order; ++g) projected[w.coset_of[g]] += w.current[g];
  const double u = 1.0 / static_cast<double>(cosets);
  double s = 0;
  for (double v : projected) s += (v - u) * (v - u);
  return static_cast<double>(cosets) * s;
}

double SubWalkCache::distance(IndexSet J, int k) {
  if (k < 0) throw DomainError("k must be nonnegative");
  Walk& w = walk_for(J);
  while (static_cast<int>(w.history.size()) <= k) {
    std::vector<double> next(w.current.size(), 0.0);
    for (std::size_t g = 0; g < w.current.size(); ++g) {
      const double v = w.current[g];
      if (v == 0.0) continue;
      for (std::size_t s = 0; s < w.compose.size(); ++s) next[w.compose[s][g]] += v * w.weights[s];
    }
    w.current = std::move(next);
    w.history.push_back(distance_of(w));
  }
  return w.history[static_cast<std::size_t>(k)];
}

double subwalk_l2(const AugmentedMeasure& qhat, IndexSet J, int k, int capacity) {
  if (!(inclusion_probability(qhat, J) > 0)) return 0.0;
  SubWalkCache cache(qhat, capacity);
  if (cache.is_null(J)) return 0.0;
  return cache.distance(J, k);
}

double DecompositionReport::l2() const { return std::sqrt(std::max(0.0, l2_squared())); }

nlohmann::json DecompositionReport::to_json() const {
  nlohmann::json doc;
  doc["mode"] = mode.to_string();
  doc["n"] = n;
  doc["k"] = k;
  doc["first_sum"] = first_sum;
  doc["second_sum"] = second_sum;
  doc["l2_squared"] = l2_squared();
  doc["l2"] = l2();
  doc["null_subwalk"] = has_null_subwalk;
  auto& rows = doc["terms"] = nlohmann::json::array();
  for (const auto& t : terms)
    rows.push_back({{"J", t.J.one_based()},
                    {"mu", t.mu},
                    {"weight", t.weight},
                    {"multiplicity", t.multiplicity},
                    {"d", t.d},
                    {"term1", t.term1},
                    {"term2", t.term2},
                    {"null_subwalk", t.null_subwalk}});
  return doc;
}

void DecompositionReport::write_csv(std::ostream& out) const {
  out << "J,mask,mu,weight,multiplicity,d,term1,term2\n";
  out.precision(17);
  for (const auto& t : terms)
    out << '"' << t.J.to_string() << "\"," << t.J.mask() << ',' << t.mu << ',' << t.weight << ',' << t.multiplicity
        << ',' << t.d << ',' << t.term1 << ',' << t.term2 << '\n';
}

namespace {

std::vector<double> excess_weights(const AlphabetMeasure& p, const std::vector<int>& x0, int n) {
  if (static_cast<int>(x0.size()) != n) throw DomainError("start labels must have length n");
  std::vector<double> w;
  for (int x : x0) {
    if (x < 0 || x >= p.size()) throw DomainError("start label outside the alphabet");
    w.push_back(1.0 / p[x] - 1.0);
  }
  return w;
}

DecompositionReport decompose(const AugmentedMeasure& qhat, const AlphabetMeasure& p, const std::vector<int>& x0,
                              int k, SubWalkCache* cache) {
  if (k < 1) throw DomainError("k >= 1 required");
  const int n = qhat.degree();
  if (n > kMaxDecompositionDegree)
    throw CapacityError("subset enumeration is capped at n = " + std::to_string(kMaxDecompositionDegree));
  const auto w = excess_weights(p, x0, n);
  SubWalkCache local(qhat);
  SubWalkCache& walks = cache ? *cache : local;
  if (&walks.measure() != &qhat) throw DomainError("sub-walk cache belongs to another measure");

  DecompositionReport report;
  report.mode = qhat.mode();
  report.n = n;
  report.k = k;
  const IndexSet full = IndexSet::full(n);
  const IndexSet first = IndexSet::full(qhat.mode().rack_size());
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    SubsetTerm t;
    t.J = IndexSet(mask);
    t.mu = inclusion_probability(qhat, t.J);
    t.weight = 1.0;
    for (int i : t.J.complement(n).elements()) t.weight *= w[static_cast<std::size_t>(i)];
    const int j = t.J.size();
    if (qhat.mode().is_coset())
      t.multiplicity = static_cast<double>(binomial(n, qhat.mode().rack_size())) /
                       static_cast<double>(binomial(j, (t.J & first).size()));
    else
      t.multiplicity = static_cast<double>(factorial(n)) / static_cast<double>(factorial(j));
    if (t.mu > 0) {
      if (walks.is_null(t.J)) {
        t.null_subwalk = true;
        report.has_null_subwalk = true;
      } else {
        t.d = walks.distance(t.J, k);
      }
    }
    const double scale = t.multiplicity * t.weight * std::pow(t.mu, 2 * k);
    t.term1 = scale * t.d;
    t.term2 = t.J == full ? 0.0 : scale;
    report.first_sum += t.term1;
    report.second_sum += t.term2;
    report.terms.push_back(t);
  }
  return report;
}

}  // namespace

DecompositionReport decompose_wreath(const AugmentedMeasure& qhat, const AlphabetMeasure& p,
                                     const std::vector<int>& x0, int k, SubWalkCache* cache) {
  if (qhat.mode().is_coset()) throw DomainError("wreath decomposition needs a plain-mode measure");
  return decompose(qhat, p, x0, k, cache);
}

DecompositionReport decompose_coset(const AugmentedMeasure& qhat, const AlphabetMeasure& p,
                                    const std::vector<int>& x0, int k, SubWalkCache* cache) {
  if (!qhat.mode().is_coset()) throw DomainError("coset decomposition needs a coset-mode measure");
  return decompose(qhat, p, x0, k, cache);
}

std::vector<double> elementary_symmetric(std::span<const double> values) {
  std::vector<double> e(values.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t d = i + 1; d >= 1; --d) e[d] += e[d - 1] * values[i];
  return e;
}

double decompose_by_size(const AugmentedMeasure& qhat, const AlphabetMeasure& p, const std::vector<int>& x0, int k) {
  if (k < 1) throw DomainError("k >= 1 required");
  const int n = qhat.degree();
  const auto w = excess_weights(p, x0, n);
  SubWalkCache walks(qhat);
  const int r = qhat.mode().rack_size();  // 0 in plain mode: a single class per size
  const std::span<const double> all(w);
  const auto e_first = elementary_symmetric(all.subspan(0, static_cast<std::size_t>(r)));
  const auto e_rest = elementary_symmetric(all.subspan(static_cast<std::size_t>(r)));
  double total = 0;
  for (int i = 0; i <= r; ++i) {
    for (int l = 0; l <= n - r; ++l) {
      IndexSet rep = IndexSet::full(i) | IndexSet(((1u << l) - 1u) << r);
      const double mu = inclusion_probability(qhat, rep);
      if (!(mu > 0)) continue;
      const double d = walks.is_null(rep) ? 0.0 : walks.distance(rep, k);
      const double mult = qhat.mode().is_coset()
                              ? static_cast<double>(binomial(n, r)) / static_cast<double>(binomial(i + l, i))
                              : static_cast<double>(factorial(n)) / static_cast<double>(factorial(l));
      const double weight = e_first[static_cast<std::size_t>(r - i)] * e_rest[static_cast<std::size_t>(n - r - l)];
      total += mult * weight * std::pow(mu, 2 * k) * (d + (i + l == n ? 0.0 : 1.0));
    }
  }
  return total;
}

std::vector<double> mobius_invert(std::span<const double> g, int n) {
  if (n < 0 || n > 30 || g.size() != (std::size_t{1} << n)) throw DomainError("table must have 2^n entries");
  std::vector<double> f(g.begin(), g.end());
  for (int bit = 0; bit < n; ++bit)
    for (std::size_t s = 0; s < f.size(); ++s)
      if (s >> bit & 1u) f[s] -= f[s ^ (std::size_t{1} << bit)];
  return f;
}

std::vector<double> zeta_transform(std::span<const double> f, int n) {
  if (n < 0 || n > 30 || f.size() != (std::size_t{1} << n)) throw DomainError("table must have 2^n entries");
  std::vector<double> g(f.begin(), f.end());
  for (int bit = 0; bit < n; ++bit)
    for (std::size_t s = 0; s < g.size(); ++s)
      if (s >> bit & 1u) g[s] += g[s ^ (std::size_t{1} << bit)];
  return g;
}

}  // namespace wreathmix
