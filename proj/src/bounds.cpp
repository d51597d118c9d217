#include "wreathmix/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wreathmix/errors.hpp"

namespace wreathmix {

BoundInputs aggregate_tables(const AugmentedMeasure& qhat, int k, SubWalkCache* cache) {
  const int n = qhat.degree();
  if (n > kMaxDecompositionDegree)
    throw CapacityError("subset enumeration is capped at n = " + std::to_string(kMaxDecompositionDegree));
  SubWalkCache local(qhat);
  SubWalkCache& walks = cache ? *cache : local;
  BoundInputs in;
  in.n = n;
  in.r = qhat.mode().rack_size();
  in.k = k;
  in.M.assign(static_cast<std::size_t>(n) + 1, 0.0);
  in.D.assign(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const IndexSet J(mask);
    const auto j = static_cast<std::size_t>(J.size());
    const double mu = inclusion_probability(qhat, J);
    in.M[j] = std::max(in.M[j], mu);
    if (mu > 0 && !walks.is_null(J)) in.D[j] = std::max(in.D[j], walks.distance(J, k));
  }
  in.B = *std::max_element(in.D.begin(), in.D.end());
  return in;
}

double subset_sum_bound(const BoundInputs& in, double p_min) {
  if (!(p_min > 0 && p_min <= 1)) throw DomainError("p_min must lie in (0, 1]");
  const double excess = 1.0 / p_min - 1.0;
  const int n = in.n;
  double first = 0;
  double second = 0;
  if (in.family() == ChainFamily::wreath) {
    for (int j = 0; j <= n; ++j) {
      const double term = static_cast<double>(binomial(n, j)) * static_cast<double>(factorial(n)) /
                          static_cast<double>(factorial(j)) * std::pow(excess, n - j) *
                          std::pow(in.M[static_cast<std::size_t>(j)], 2 * in.k);
      first += term;
      if (j < n) second += term;
    }
  } else {
    const int r = in.r;
    for (int i = 0; i <= r; ++i) {
      for (int j = 0; j <= n - r; ++j) {
        const double term = static_cast<double>(binomial(r, i)) * static_cast<double>(binomial(n - r, j)) *
                            static_cast<double>(binomial(n, r)) / static_cast<double>(binomial(i + j, i)) *
                            std::pow(excess, n - i - j) * std::pow(in.M[static_cast<std::size_t>(i + j)], 2 * in.k);
        first += term;
        if (i != r || j != n - r) second += term;
      }
    }
  }
  return in.B * first + second;
}

double contraction_exponent(const std::vector<double>& M) {
  const int n = static_cast<int>(M.size()) - 1;
  if (n < 1 || M[0] > 0) return 0.0;
  double m = std::numeric_limits<double>::infinity();
  for (int j = 1; j < n; ++j) {
    const double mj = M[static_cast<std::size_t>(j)];
    if (mj <= 0) continue;
    if (mj >= 1) return 0.0;
    m = std::min(m, std::log(mj) / std::log(static_cast<double>(j) / n));
  }
  return m;
}

ContractionBound contraction_bound(ChainFamily family, int n, double p_min, double m, double c, double B) {
  if (!(c > 0)) throw DomainError("c must be positive");
  if (!(m > 0)) throw DomainError("contraction exponent m must be positive");
  if (!(p_min > 0 && p_min < 1)) throw DomainError("p_min must lie in (0, 1); a one-symbol alphabet has no bound");
  const double nn = n;
  const double log_excess = std::log(1.0 / p_min - 1.0);
  ContractionBound out;
  if (family == ChainFamily::wreath) {
    out.threshold = nn * std::log(nn) / m + nn * log_excess / (2 * m) + c * nn / m;
    out.bound = std::sqrt(B + std::exp(-2 * c));
  } else {
    out.threshold = nn * (std::log(nn) + log_excess + c) / (2 * m);
    out.bound = 2 * std::sqrt(B + std::exp(-c));
  }
  return out;
}

SizeUniformity size_uniform_check(const AugmentedMeasure& qhat, double tol) {
  const int n = qhat.degree();
  std::vector<double> by_set(std::size_t{1} << n, 0.0);
  for (const auto& a : qhat.atoms()) by_set[a.step.included().mask()] += a.weight;
  SizeUniformity out;
  out.f.assign(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::uint32_t mask = 0; mask < by_set.size(); ++mask) out.f[static_cast<std::size_t>(IndexSet(mask).size())] += by_set[mask];
  out.size_uniform = out.f[0] <= tol;
  for (std::uint32_t mask = 0; mask < by_set.size() && out.size_uniform; ++mask) {
    const int l = IndexSet(mask).size();
    const double expected = out.f[static_cast<std::size_t>(l)] / static_cast<double>(binomial(n, l));
    if (std::abs(by_set[mask] - expected) > tol) out.size_uniform = false;
  }
  return out;
}

namespace {

void check_envelope_args(int n, double c) {
  if (n < 1) throw DomainError("n must be positive");
  if (!(c > 0)) throw DomainError("c must be positive");
}

double log_excess(double p_min) {
  if (!(p_min > 0 && p_min < 1)) throw DomainError("p_min must lie in (0, 1)");
  return std::log(1.0 / p_min - 1.0);
}

}  // namespace

Envelope transposition_envelope(int n, double p_min, double c, double constant) {
  check_envelope_args(n, c);
  const double nn = n;
  return {0.5 * nn * std::log(nn) + 0.25 * nn * log_excess(p_min) + 0.5 * c * nn, constant * std::exp(-c)};
}

Envelope bernoulli_laplace_envelope(int n, double p_min, double c, double constant) {
  check_envelope_args(n, c);
  const double nn = n;
  return {0.25 * nn * (std::log(nn) + log_excess(p_min) + c), constant * std::exp(-c / 2)};
}

Envelope random_transposition_curve(int n, double c, double constant) {
  check_envelope_args(n, c);
  const double nn = n;
  return {0.5 * nn * std::log(nn) + c * nn, constant * std::exp(-2 * c)};
}

Envelope uniform_label_transposition_curve(int n, int alphabet_size, double c, double constant) {
  check_envelope_args(n, c);
  if (alphabet_size < 2) throw DomainError("alphabet needs at least two symbols");
  const double nn = n;
  return {0.5 * nn * std::log(nn) + 0.25 * nn * std::log(alphabet_size - 1.0) + c * nn, constant * std::exp(-2 * c)};
}

Envelope bernoulli_laplace_curve(int n, double c, double constant) {
  check_envelope_args(n, c);
  const double nn = n;
  return {0.25 * nn * (std::log(nn) + c), constant * std::exp(-2 * c)};
}

Envelope binary_label_bernoulli_laplace_curve(int n, double c, double constant) {
  check_envelope_args(n, c);
  const double nn = n;
  return {0.25 * nn * (std::log(nn) + c), constant * std::exp(-c / 2)};
}

double lower_indicator(ChainFamily family, int n, double p_min, int k) {
  if (k < 1) throw DomainError("k >= 1 required");
  if (n < 1) throw DomainError("n must be positive");
  if (!(p_min > 0 && p_min <= 1)) throw DomainError("p_min must lie in (0, 1]");
  const double nn = n;
  const double coefficient = family == ChainFamily::wreath ? nn * nn : 2 * nn;
  return coefficient * (1.0 / p_min - 1.0) * std::pow(1.0 - 1.0 / nn, 4 * k);
}

}  // namespace wreathmix
