#include "wreathmix/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wreathmix/errors.hpp"

namespace wreathmix {

AlphabetMeasure::AlphabetMeasure(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw DomainError("alphabet measure needs at least one symbol");
  double total = 0;
  for (double p : probs_) {
    if (!(p > 0)) throw DomainError("alphabet probabilities must be strictly positive");
    total += p;
  }
  if (std::abs(total - 1.0) > kMassTolerance) throw DomainError("alphabet probabilities must sum to 1");
  argmin_ = static_cast<int>(std::min_element(probs_.begin(), probs_.end()) - probs_.begin());
}

AlphabetMeasure AlphabetMeasure::uniform(int m) {
  if (m < 1) throw DomainError("alphabet must have at least one symbol");
  return AlphabetMeasure(std::vector<double>(static_cast<std::size_t>(m), 1.0 / m));
}

AlphabetMeasure AlphabetMeasure::parse(std::string_view text, int alphabet_size) {
  if (text == "uniform") {
    if (alphabet_size < 1) throw DomainError("uniform alphabet needs an alphabet size");
    return uniform(alphabet_size);
  }
  std::vector<double> probs;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      probs.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw DomainError("");
    } catch (const std::exception&) {
      throw DomainError("malformed probability '" + item + "'");
    }
  }
  if (alphabet_size > 0 && static_cast<int>(probs.size()) != alphabet_size)
    throw DomainError("probability list length does not match the alphabet size");
  return AlphabetMeasure(std::move(probs));
}

std::string AlphabetMeasure::to_string() const {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < probs_.size(); ++i) out << (i ? "," : "") << probs_[i];
  return out.str();
}

AugmentedMeasure::AugmentedMeasure(int n, ChainMode mode, std::vector<Atom> atoms) : n_(n), mode_(mode) {
  if (n < 1 || n > kMaxDegree) throw DomainError("measure degree out of range");
  if (mode.is_coset() && 2 * mode.rack_size() > n) throw DomainError("rack size r must satisfy 1 <= r <= n/2");
  std::map<std::pair<Permutation, std::uint32_t>, std::size_t> index;
  for (auto& a : atoms) {
    if (a.step.pi().degree() != n) throw DomainError("atom degree differs from the measure degree");
    if (!(a.step.mode() == mode)) throw DomainError("atom mode differs from the measure mode");
    if (!(a.weight > 0)) throw DomainError("atom weights must be positive");
    auto key = std::make_pair(a.step.pi(), a.step.aug().mask());
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, atoms_.size());
      atoms_.push_back(std::move(a));
      continue;
    }
    Atom& kept = atoms_[it->second];
    kept.weight += a.weight;
    if (kept.exact && a.exact)
      kept.exact = *kept.exact + *a.exact;
    else
      kept.exact.reset();
  }
  if (atoms_.empty()) throw DomainError("measure has no atoms");
  double total = 0;
  exact_ = true;
  Rational exact_total(0);
  for (const auto& a : atoms_) {
    total += a.weight;
    if (a.exact)
      exact_total += *a.exact;
    else
      exact_ = false;
  }
  if (std::abs(total - 1.0) > kMassTolerance)
    throw DomainError("measure mass is " + std::to_string(total) + ", expected 1");
  if (exact_ && exact_total != Rational(1)) throw DomainError("exact measure mass differs from 1");
}

double GroupMeasure::total() const {
  double t = 0;
  for (const auto& [p, w] : mass) t += w;
  return t;
}

double GroupMeasure::at(const Permutation& p) const {
  auto it = mass.find(p);
  return it == mass.end() ? 0.0 : it->second;
}

namespace {

Atom make_atom(Permutation pi, IndexSet aug, ChainMode mode, Rational w) {
  return Atom{AugmentedPermutation(std::move(pi), aug, mode), boost::rational_cast<double>(w), w};
}

// Permutations preserving {0..r-1}, i.e. S_r x S_{n-r}.
std::vector<Permutation> rack_stabilizer(int n, int r) {
  std::vector<Permutation> out;
  const IndexSet first = IndexSet::full(r);
  for (std::uint64_t i = 0; i < factorial(n); ++i) {
    auto p = lehmer_unrank(i, n);
    if (p.image(first) == first) out.push_back(std::move(p));
  }
  return out;
}

std::vector<Atom> normalised(std::vector<Atom> atoms) {
  double total = 0;
  for (const auto& a : atoms) total += a.weight;
  for (auto& a : atoms) {
    a.weight /= total;
    a.exact.reset();
  }
  return atoms;
}

}  // namespace

AugmentedMeasure build_transposition_measure(int n) {
  if (n < 2) throw DomainError("transposition measure needs n >= 2");
  const auto mode = ChainMode::plain();
  const std::int64_t n2 = static_cast<std::int64_t>(n) * n;
  std::vector<Atom> atoms;
  for (int j = 0; j < n; ++j) atoms.push_back(make_atom(Permutation::identity(n), IndexSet::of({j}), mode, Rational(1, n2)));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      atoms.push_back(make_atom(Permutation::transposition(n, a, b), IndexSet(), mode, Rational(2, n2)));
  return AugmentedMeasure(n, mode, std::move(atoms));
}

AugmentedMeasure build_bernoulli_laplace_measure(int n, int r) {
  if (r < 1 || 2 * r > n) throw DomainError("rack size r must satisfy 1 <= r <= n/2");
  const auto mode = ChainMode::coset(r);
  const auto K = rack_stabilizer(n, r);
  const Rational unit(1, static_cast<std::int64_t>(n) * n * static_cast<std::int64_t>(K.size()));
  std::vector<Atom> atoms;
  for (const auto& kappa : K) {
    for (int j = 0; j < n; ++j) atoms.push_back(make_atom(kappa, IndexSet::of({j}), mode, unit));
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if ((a < r) == (b < r))
          atoms.push_back(make_atom(kappa, IndexSet::of({a, b}), mode, 2 * unit));
        else
          atoms.push_back(make_atom(Permutation::transposition(n, a, b) * kappa, IndexSet(), mode, 2 * unit));
      }
    }
  }
  return AugmentedMeasure(n, mode, std::move(atoms));
}

bool is_augmented_symmetric(const AugmentedMeasure& qhat, double tol) {
  std::map<std::pair<Permutation, std::uint32_t>, double> w;
  for (const auto& a : qhat.atoms()) w[{a.step.pi(), a.step.aug().mask()}] += a.weight;
  for (const auto& [key, weight] : w) {
    auto it = w.find({key.first.inverse(), key.second});
    double mirror = it == w.end() ? 0.0 : it->second;
    if (std::abs(weight - mirror) > tol) return false;
  }
  return true;
}

GroupMeasure induced_measure(const AugmentedMeasure& qhat) {
  GroupMeasure g;
  g.n = qhat.degree();
  g.support = IndexSet::full(g.n);
  for (const auto& a : qhat.atoms()) g.mass[a.step.pi()] += a.weight;
  return g;
}

double inclusion_probability(const AugmentedMeasure& qhat, IndexSet J) {
  double mu = 0;
  for (const auto& a : qhat.atoms())
    if (a.step.included().subset_of(J)) mu += a.weight;
  return mu;
}

std::optional<Rational> inclusion_probability_exact(const AugmentedMeasure& qhat, IndexSet J) {
  if (!qhat.is_exact()) return std::nullopt;
  Rational mu(0);
  for (const auto& a : qhat.atoms())
    if (a.step.included().subset_of(J)) mu += *a.exact;
  return mu;
}

double subgroup_probability(const AugmentedMeasure& qhat, IndexSet J) {
  double mass = 0;
  for (const auto& a : qhat.atoms())
    if (a.step.moved_included().subset_of(J)) mass += a.weight;
  return mass;
}

ConditionalMeasure conditional_measure(const AugmentedMeasure& qhat, IndexSet J) {
  std::vector<Atom> kept;
  double mass = 0;
  Rational exact_mass(0);
  for (const auto& a : qhat.atoms()) {
    if (!a.step.moved_included().subset_of(J)) continue;
    kept.push_back(a);
    mass += a.weight;
    if (qhat.is_exact()) exact_mass += *a.exact;
  }
  if (kept.empty() || !(mass > 0))
    throw UnconditionableError("conditioning event for " + J.to_string() + " has zero probability");
  for (auto& a : kept) {
    a.weight /= mass;
    if (qhat.is_exact()) {
      a.exact = *a.exact / exact_mass;
      a.weight = boost::rational_cast<double>(*a.exact);
    }
  }
  if (!qhat.is_exact()) {
    // Renormalise once more so the mass check sees an exact 1 up to rounding.
    double total = 0;
    for (const auto& a : kept) total += a.weight;
    for (auto& a : kept) a.weight /= total;
  }
  AugmentedMeasure steps(qhat.degree(), qhat.mode(), std::move(kept));
  GroupMeasure induced = induced_measure(steps);
  induced.support = J;
  return {std::move(steps), std::move(induced)};
}

AugmentedMeasure random_symmetric_measure(int n, std::mt19937_64& rng, int extra) {
  if (n < 1) throw DomainError("n must be positive");
  std::uniform_real_distribution<double> weight(0.2, 1.0);
  const auto mode = ChainMode::plain();
  std::vector<Atom> atoms;
  auto add = [&](const Permutation& p, IndexSet aug, double w) {
    atoms.push_back(Atom{AugmentedPermutation(p, aug, mode), w, std::nullopt});
  };
  const auto e = Permutation::identity(n);
  add(e, IndexSet(), weight(rng));
  for (int j = 0; j < n; ++j) add(e, IndexSet::of({j}), weight(rng));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) add(Permutation::transposition(n, a, b), IndexSet(), weight(rng));
  std::vector<int> images(static_cast<std::size_t>(n));
  for (int t = 0; t < extra; ++t) {
    std::iota(images.begin(), images.end(), 0);
    std::shuffle(images.begin(), images.end(), rng);
    auto pi = Permutation::from_images(images);
    IndexSet aug;
    for (int i : pi.fixed_points().elements())
      if (rng() & 1u) aug = aug.with(i);
    double w = weight(rng);
    add(pi, aug, w);
    add(pi.inverse(), aug, w);
  }
  return AugmentedMeasure(n, mode, normalised(std::move(atoms)));
}

AugmentedMeasure random_bi_invariant_coset_measure(int n, int r, std::mt19937_64& rng) {
  if (r < 1 || 2 * r > n) throw DomainError("rack size r must satisfy 1 <= r <= n/2");
  std::uniform_real_distribution<double> weight(0.2, 1.0);
  const auto mode = ChainMode::coset(r);
  const auto K = rack_stabilizer(n, r);
  const double k_size = static_cast<double>(K.size());
  std::vector<Atom> atoms;
  // Extra-refresh atoms: a random family of subsets A, each spread over K.
  const std::uint32_t subsets = 1u << n;
  bool any = false;
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    if ((rng() & 1u) == 0 && !(mask + 1 == subsets && !any)) continue;
    any = true;
    double w = weight(rng);
    for (const auto& kappa : K) atoms.push_back(Atom{AugmentedPermutation(kappa, IndexSet(mask), mode), w / k_size, std::nullopt});
  }
  // Rack-crossing atoms: weight depends only on the number d of crossings.
  const IndexSet first = IndexSet::full(r);
  std::vector<double> b(static_cast<std::size_t>(r) + 1);
  for (auto& x : b) x = weight(rng);
  for (std::uint64_t i = 0; i < factorial(n); ++i) {
    auto rho = lehmer_unrank(i, n);
    int d = (rho.image(first) - first).size();
    if (d == 0) continue;
    double w = b[static_cast<std::size_t>(d)] /
               (k_size * static_cast<double>(binomial(r, d)) * static_cast<double>(binomial(n - r, d)));
    atoms.push_back(Atom{AugmentedPermutation(rho, IndexSet(), mode), w, std::nullopt});
  }
  return AugmentedMeasure(n, mode, normalised(std::move(atoms)));
}

AugmentedMeasure random_generic_coset_measure(int n, int r, std::mt19937_64& rng) {
  if (r < 1 || 2 * r > n) throw DomainError("rack size r must satisfy 1 <= r <= n/2");
  std::uniform_real_distribution<double> weight(0.2, 1.0);
  std::bernoulli_distribution pick(0.3);
  const auto mode = ChainMode::coset(r);
  std::vector<Atom> atoms;
  auto add_pair = [&](const Permutation& rho) {
    auto inv = rho.inverse();
    IndexSet free = coset_reduce(rho, r).involution().fixed_points() & coset_reduce(inv, r).involution().fixed_points();
    IndexSet aug;
    for (int i : free.elements())
      if (rng() & 1u) aug = aug.with(i);
    double w = weight(rng);
    atoms.push_back(Atom{AugmentedPermutation(rho, aug, mode), w, std::nullopt});
    atoms.push_back(Atom{AugmentedPermutation(inv, aug, mode), w, std::nullopt});
  };
  for (std::uint64_t i = 0; i < factorial(n); ++i)
    if (pick(rng)) add_pair(lehmer_unrank(i, n));
  // Always include one cross-rack transposition so the rack walk is connected.
  add_pair(Permutation::transposition(n, 0, r));
  return AugmentedMeasure(n, mode, normalised(std::move(atoms)));
}

nlohmann::json measure_to_json(const AugmentedMeasure& qhat) {
  nlohmann::json doc;
  doc["n"] = qhat.degree();
  if (qhat.mode().is_coset())
    doc["mode"] = {{"coset", qhat.mode().rack_size()}};
  else
    doc["mode"] = "plain";
  auto& atoms = doc["atoms"] = nlohmann::json::array();
  for (const auto& a : qhat.atoms()) {
    nlohmann::json item{{"pi", a.step.pi().to_cycle_string()}, {"J", a.step.aug().one_based()}, {"w", a.weight}};
    if (a.exact) item["w_exact"] = std::to_string(a.exact->numerator()) + "/" + std::to_string(a.exact->denominator());
    atoms.push_back(std::move(item));
  }
  return doc;
}

namespace {

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(text));
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  } catch (const std::exception&) {
    throw DomainError("malformed rational '" + text + "'");
  }
}

}  // namespace

AugmentedMeasure measure_from_json(const nlohmann::json& doc) {
  try {
    const int n = doc.at("n").get<int>();
    ChainMode mode = ChainMode::plain();
    const auto& m = doc.at("mode");
    if (m.is_string()) {
      if (m.get<std::string>() != "plain") throw DomainError("mode must be \"plain\" or {\"coset\": r}");
    } else {
      mode = ChainMode::coset(m.at("coset").get<int>());
    }
    std::vector<Atom> atoms;
    bool all_exact = true;
    for (const auto& item : doc.at("atoms")) {
      auto pi = Permutation::parse_cycles(item.at("pi").get<std::string>(), n);
      auto aug = IndexSet::from_one_based(item.at("J").get<std::vector<int>>(), n);
      Atom a{AugmentedPermutation(pi, aug, mode), item.at("w").get<double>(), std::nullopt};
      if (item.contains("w_exact")) {
        a.exact = parse_rational(item.at("w_exact").get<std::string>());
        a.weight = boost::rational_cast<double>(*a.exact);
      } else {
        all_exact = false;
      }
      atoms.push_back(std::move(a));
    }
    if (!all_exact)
      for (auto& a : atoms) a.exact.reset();
    return AugmentedMeasure(n, mode, std::move(atoms));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed measure file: ") + e.what());
  }
}

}  // namespace wreathmix
