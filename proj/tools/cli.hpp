#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace wreathmix::cli {

enum ExitCode : int { ok = 0, usage = 1, capacity = 2, verification_failure = 3 };

/// Runs one command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct VerifyResult {
  int instances = 0;
  double max_relative_deviation = 0;
  std::string worst;
};

/// Subset decomposition against the brute-force chi-square identity on the
/// built-in grid: n up to n_max, alphabets of size 2 and 3, uniform and
/// skewed label laws, the named measures plus seeded random ones, k = 1..8.
VerifyResult verify_grid(int n_max, std::uint64_t seed);

}  // namespace wreathmix::cli
