#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wreathmix/measures.hpp"
#include "wreathmix/state.hpp"

namespace wreathmix {

inline constexpr std::uint64_t kMaxStates = 200000;

using DistVector = std::vector<double>;

/// Which balls get fresh labels in the coset chain.
///
/// tracked: the balls that changed rack plus the balls named by the extra
/// set, both carried through the current coset representative. This is the
/// reading under which the subset decomposition is exact.
/// literal_included: rack update S' = rho(S) with the positions I(rho, A)
/// refreshed as written. Reversible, but the decomposition does not hold.
enum class CosetLabelRule { tracked, literal_included };

/// Row-stochastic transition matrix in compressed sparse rows, together with
/// its analytic stationary vector.
class Kernel {
 public:
  const StateSpace& space() const { return space_; }
  std::size_t size() const { return row_start_.size() - 1; }
  std::span<const std::uint32_t> columns(std::size_t row) const;
  std::span<const double> values(std::size_t row) const;
  double entry(std::size_t from, std::size_t to) const;
  std::size_t nonzeros() const { return cols_.size(); }

  const DistVector& stationary() const { return stationary_; }
  /// v * P.
  DistVector apply(const DistVector& v) const;

  double max_row_sum_error() const;
  double stationarity_error() const;
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  friend class KernelBuilder;
  explicit Kernel(StateSpace space) : space_(std::move(space)) {}
  StateSpace space_;
  std::vector<std::size_t> row_start_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> vals_;
  DistVector stationary_;
  std::vector<std::string> warnings_;
};

/// Throws DomainError on a coset-mode measure and CapacityError beyond
/// kMaxStates states. A measure without augmented symmetry is accepted with a
/// warning recorded on the kernel.
Kernel build_wreath_kernel(const AugmentedMeasure& qhat, const AlphabetMeasure& p);
Kernel build_coset_kernel(const AugmentedMeasure& qhat, const AlphabetMeasure& p,
                          CosetLabelRule rule = CosetLabelRule::tracked);

DistVector point_mass(std::size_t size, std::size_t at);
/// Row `start` of P^k.
DistVector kstep(const Kernel& kernel, std::size_t start, int k);

/// (sum |nu - rho|^p / reference^(p-1))^(1/p). Throws DomainError on a
/// non-positive reference entry or mismatched lengths.
double lp_distance(const DistVector& nu, const DistVector& rho, const DistVector& reference, double p);
/// max over events A of |nu(A) - rho(A)|, evaluated on the event {nu > rho}.
double tv_distance(const DistVector& nu, const DistVector& rho);
double l1_distance(const DistVector& nu, const DistVector& rho);

double detailed_balance_violation(const Kernel& kernel);

/// P^{2k}(g0, g0) / P_inf(g0) - 1. Throws NonReversibleError when detailed
/// balance fails by more than 1e-9.
double chi_square_identity(const Kernel& kernel, std::size_t g0, int k);

struct Diagnosis {
  std::size_t reachable = 0;
  bool irreducible = false;
  std::uint64_t period = 0;  // gcd of cycle lengths through reachable states
  bool aperiodic() const { return period == 1; }
};

Diagnosis diagnose(const Kernel& kernel, std::size_t start);

void write_kernel_csv(std::ostream& out, const Kernel& kernel);
void write_dist_csv(std::ostream& out, const StateSpace& space, const DistVector& v);

}  // namespace wreathmix
