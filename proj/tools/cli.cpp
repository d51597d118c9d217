#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "wreathmix/bounds.hpp"
#include "wreathmix/decomposition.hpp"
#include "wreathmix/errors.hpp"
#include "wreathmix/exact.hpp"
#include "wreathmix/measures.hpp"
#include "wreathmix/simulate.hpp"

namespace wreathmix::cli {

namespace {

struct RunSpec {
  std::string family = "wreath";
  int n = 3;
  int r = 0;
  int alphabet = 2;
  std::string p = "uniform";
  std::string measure;
  std::string x0 = "1";
  int k = 0;
  int k_max = 10;
  std::string c = "1";
  double constant = 1.0;
  std::uint64_t replicas = 10000;
  std::uint64_t seed = 0;
  std::string out;
  bool json = false;
  int n_max = 4;
};

struct Setup {
  AugmentedMeasure qhat;
  AlphabetMeasure p;
  std::vector<int> x0;
};

bool is_coset(const RunSpec& s) { return s.family == "coset"; }

Setup setup(const RunSpec& s) {
  if (s.family != "wreath" && s.family != "coset") throw DomainError("--family must be wreath or coset");
  if (is_coset(s) && s.r < 1) throw DomainError("the coset family needs --r");
  if (!is_coset(s) && s.r != 0) throw DomainError("--r only applies to the coset family");
  auto p = AlphabetMeasure::parse(s.p, s.p == "uniform" ? s.alphabet : 0);

  std::string source = s.measure.empty() ? (is_coset(s) ? "bernoulli-laplace" : "transposition") : s.measure;
  std::optional<AugmentedMeasure> qhat;
  if (source == "transposition") {
    if (is_coset(s)) throw DomainError("the transposition measure drives the wreath family");
    qhat = build_transposition_measure(s.n);
  } else if (source == "bernoulli-laplace") {
    if (!is_coset(s)) throw DomainError("the bernoulli-laplace measure drives the coset family");
    qhat = build_bernoulli_laplace_measure(s.n, s.r);
  } else {
    std::ifstream in(source);
    if (!in) throw DomainError("cannot open measure file '" + source + "'");
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw DomainError(std::string("malformed measure file: ") + e.what());
    }
    qhat = measure_from_json(doc);
    if (qhat->mode().is_coset() != is_coset(s)) throw DomainError("measure file mode does not match --family");
    if (is_coset(s) && qhat->mode().rack_size() != s.r) throw DomainError("measure file rack size does not match --r");
  }

  std::vector<int> x0;
  std::stringstream ss(s.x0);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      x0.push_back(std::stoi(item) - 1);
    } catch (const std::exception&) {
      throw DomainError("malformed --x0 entry '" + item + "'");
    }
  }
  const int n = qhat->degree();
  if (x0.size() == 1) x0.assign(static_cast<std::size_t>(n), x0[0]);
  if (static_cast<int>(x0.size()) != n) throw DomainError("--x0 needs one symbol or n symbols");
  for (int x : x0)
    if (x < 0 || x >= p.size()) throw DomainError("--x0 symbol outside the alphabet");
  return {std::move(*qhat), std::move(p), std::move(x0)};
}

Kernel kernel_for(const Setup& st) {
  return st.qhat.mode().is_coset() ? build_coset_kernel(st.qhat, st.p) : build_wreath_kernel(st.qhat, st.p);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw DomainError("malformed number '" + item + "'");
    }
  }
  return out;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream o;
  o.precision(17);
  o << v;
  return o.str();
}

// Writes to --out when given, otherwise to the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw DomainError("cannot open output file '" + path + "'");
    }
    stream_ = file_ ? file_.get() : &fallback;
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

int cmd_exact(const RunSpec& s, std::ostream& out, std::ostream& err) {
  auto st = setup(s);
  auto kernel = kernel_for(st);
  for (const auto& w : kernel.warnings()) err << "warning: " << w << '\n';
  const auto g0 = static_cast<std::size_t>(kernel.space().start_rank(st.x0));
  auto diag = diagnose(kernel, g0);
  if (!diag.irreducible || !diag.aperiodic())
    err << "warning: chain from the start state reaches " << diag.reachable << " of " << kernel.size()
        << " states with period " << diag.period << '\n';
  const bool reversible = detailed_balance_violation(kernel) <= 1e-9;
  Sink sink(s.out, out);
  nlohmann::json rows = nlohmann::json::array();
  if (!s.json) *sink << "k,l2,tv,chi2_identity\n";
  auto v = point_mass(kernel.size(), g0);
  for (int k = 0; k <= s.k_max; ++k) {
    const double l2 = lp_distance(v, kernel.stationary(), kernel.stationary(), 2);
    const double tv = tv_distance(v, kernel.stationary());
    const double chi2 = reversible ? chi_square_identity(kernel, g0, k) : std::nan("");
    if (s.json)
      rows.push_back({{"k", k}, {"l2", l2}, {"tv", tv}, {"chi2_identity", reversible ? nlohmann::json(chi2) : nlohmann::json()}});
    else
      *sink << k << ',' << fmt(l2) << ',' << fmt(tv) << ',' << fmt(chi2) << '\n';
    v = kernel.apply(v);
  }
  if (s.json) *sink << nlohmann::json{{"states", kernel.size()}, {"series", rows}}.dump(2) << '\n';
  return ok;
}

int cmd_decompose(const RunSpec& s, std::ostream& out, std::ostream&) {
  if (s.k < 1) throw DomainError("k ≥ 1 required");
  auto st = setup(s);
  auto report = st.qhat.mode().is_coset() ? decompose_coset(st.qhat, st.p, st.x0, s.k)
                                          : decompose_wreath(st.qhat, st.p, st.x0, s.k);
  Sink sink(s.out, out);
  if (s.json)
    *sink << report.to_json().dump(2) << '\n';
  else
    report.write_csv(*sink);
  return ok;
}

int cmd_bounds(const RunSpec& s, std::ostream& out, std::ostream&) {
  auto st = setup(s);
  const auto family = st.qhat.mode().is_coset() ? ChainFamily::coset : ChainFamily::wreath;
  const int n = st.qhat.degree();
  const double p_min = st.p.p_min();
  const bool named = s.measure.empty() || s.measure == "transposition" || s.measure == "bernoulli-laplace";
  SubWalkCache walks(st.qhat);
  Sink sink(s.out, out);
  const int k_lo = s.k > 0 ? s.k : 1;
  const int k_hi = s.k > 0 ? s.k : s.k_max;
  nlohmann::json rows = nlohmann::json::array();
  if (!s.json) *sink << "n,r,p_min,c,k,exact_L2," << "cor24,cor25," << (family == ChainFamily::wreath ? "cor28" : "cor38") << ",lower_indicator\n";
  for (double c : parse_list(s.c)) {
    for (int k = k_lo; k <= k_hi; ++k) {
      auto report = family == ChainFamily::wreath ? decompose_wreath(st.qhat, st.p, st.x0, k, &walks)
                                                  : decompose_coset(st.qhat, st.p, st.x0, k, &walks);
      auto tables = aggregate_tables(st.qhat, k, &walks);
      const double cor24 = std::sqrt(subset_sum_bound(tables, p_min));
      double cor25 = std::nan("");
      double envelope = std::nan("");
      if (p_min < 1 && c > 0) {
        const double m = contraction_exponent(tables.M);
        if (m > 0 && std::isfinite(m)) {
          auto cb = contraction_bound(family, n, p_min, m, c, tables.B);
          if (k >= cb.threshold) cor25 = 2 * cb.bound;
        }
        if (named) {
          auto env = family == ChainFamily::wreath ? transposition_envelope(n, p_min, c, s.constant)
                                                   : bernoulli_laplace_envelope(n, p_min, c, s.constant);
          if (k >= env.k) envelope = 2 * env.value;
        }
      }
      const double lower = named ? lower_indicator(family, n, p_min, k) : std::nan("");
      if (s.json) {
        auto num = [](double v) { return std::isnan(v) ? nlohmann::json() : nlohmann::json(v); };
        rows.push_back({{"n", n}, {"r", s.r}, {"p_min", p_min}, {"c", c}, {"k", k}, {"exact_L2", report.l2()},
                        {"cor24", cor24}, {"cor25", num(cor25)},
                        {family == ChainFamily::wreath ? "cor28" : "cor38", num(envelope)},
                        {"lower_indicator", num(lower)}});
      } else {
        *sink << n << ',' << s.r << ',' << fmt(p_min) << ',' << fmt(c) << ',' << k << ',' << fmt(report.l2()) << ','
              << fmt(cor24) << ',' << fmt(cor25) << ',' << fmt(envelope) << ',' << fmt(lower) << '\n';
      }
    }
  }
  if (s.json) *sink << rows.dump(2) << '\n';
  return ok;
}

int cmd_simulate(const RunSpec& s, std::ostream& out, std::ostream&) {
  auto st = setup(s);
  SimConfig cfg;
  cfg.qhat = &st.qhat;
  cfg.p = st.p;
  cfg.x0 = st.x0;
  cfg.steps = s.k;
  cfg.replicas = s.replicas;
  cfg.seed = s.seed;
  if (s.k < 0) throw DomainError("k must be nonnegative");
  auto sim = run_trajectories(cfg);
  Sink sink(s.out, out);
  if (s.json) {
    nlohmann::json doc{{"n_replicas", sim.replicas()}, {"seed", s.seed}, {"k", s.k}};
    if (sim.space.size() <= kMaxStates) {
      auto kernel = kernel_for(st);
      auto tv = estimate_tv(sim, kernel.stationary(), s.seed);
      doc = summary_json(sim, tv, s.seed);
      doc["k"] = s.k;
      doc["exact_tv"] = tv_distance(kstep(kernel, static_cast<std::size_t>(sim.space.start_rank(st.x0)), s.k),
                                    kernel.stationary());
    }
    *sink << doc.dump(2) << '\n';
  } else {
    *sink << "rank,state,count\n";
    for (const auto& [state, count] : sim.counts()) *sink << state << ",\"" << sim.space.format(state) << "\"," << count << '\n';
  }
  return ok;
}

int cmd_verify(const RunSpec& s, std::ostream& out, std::ostream&) {
  auto result = verify_grid(s.n_max, s.seed);
  const bool pass = result.max_relative_deviation <= 1e-9;
  if (s.json)
    out << nlohmann::json{{"instances", result.instances},
                          {"max_relative_deviation", result.max_relative_deviation},
                          {"worst", result.worst},
                          {"pass", pass}}
               .dump(2)
        << '\n';
  else
    out << "instances " << result.instances << "\nmax_relative_deviation " << fmt(result.max_relative_deviation)
        << "\nworst " << result.worst << '\n'
        << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? ok : verification_failure;
}

int cmd_measure(const RunSpec& s, std::ostream& out, std::ostream&) {
  auto st = setup(s);
  Sink sink(s.out, out);
  *sink << measure_to_json(st.qhat).dump(2) << '\n';
  return ok;
}

}  // namespace

VerifyResult verify_grid(int n_max, std::uint64_t seed) {
  if (n_max < 1 || n_max > 5) throw DomainError("--n-max must lie in [1, 5]");
  VerifyResult result;
  const std::vector<AlphabetMeasure> laws{AlphabetMeasure::uniform(2), AlphabetMeasure({0.7, 0.3}),
                                          AlphabetMeasure::uniform(3), AlphabetMeasure({0.5, 0.3, 0.2})};
  std::mt19937_64 rng(seed);
  auto check = [&](const AugmentedMeasure& qhat, const std::string& name) {
    for (const auto& p : laws) {
      const int n = qhat.degree();
      std::vector<int> x0(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) x0[static_cast<std::size_t>(i)] = i % p.size();
      auto kernel = qhat.mode().is_coset() ? build_coset_kernel(qhat, p) : build_wreath_kernel(qhat, p);
      const auto g0 = static_cast<std::size_t>(kernel.space().start_rank(x0));
      SubWalkCache walks(qhat);
      auto v = point_mass(kernel.size(), g0);
      for (int k = 1; k <= 8; ++k) {
        v = kernel.apply(v);
        const double oracle = std::pow(lp_distance(v, kernel.stationary(), kernel.stationary(), 2), 2);
        auto report = qhat.mode().is_coset() ? decompose_coset(qhat, p, x0, k, &walks)
                                             : decompose_wreath(qhat, p, x0, k, &walks);
        const double dev = std::abs(report.l2_squared() - oracle) / (1 + oracle);
        ++result.instances;
        if (dev >= result.max_relative_deviation) {
          result.max_relative_deviation = dev;
          result.worst = name + " P=" + p.to_string() + " k=" + std::to_string(k);
        }
      }
    }
  };
  for (int n = 1; n <= n_max; ++n) {
    const std::string tag = "n=" + std::to_string(n);
    if (n >= 2) check(build_transposition_measure(n), "transposition " + tag);
    for (int t = 0; t < 2; ++t) check(random_symmetric_measure(n, rng), "random#" + std::to_string(t) + " " + tag);
    for (int r = 1; 2 * r <= n; ++r) {
      const std::string ctag = tag + " r=" + std::to_string(r);
      check(build_bernoulli_laplace_measure(n, r), "bernoulli-laplace " + ctag);
      check(random_bi_invariant_coset_measure(n, r, rng), "bi-invariant " + ctag);
    }
  }
  return result;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and simulated distances to stationarity for labelled card-shuffling chains"};
  app.require_subcommand(1);
  RunSpec s;

  auto add_common = [&s](CLI::App* sub) {
    sub->add_option("--family", s.family, "wreath or coset")->capture_default_str();
    sub->add_option("--n", s.n, "number of cards")->capture_default_str();
    sub->add_option("--r", s.r, "rack size (coset family)");
    sub->add_option("--alphabet", s.alphabet, "label alphabet size |G|")->capture_default_str();
    sub->add_option("--p", s.p, "label law: \"0.7,0.3\" or uniform")->capture_default_str();
    sub->add_option("--measure", s.measure, "transposition, bernoulli-laplace or a JSON file");
    sub->add_option("--x0", s.x0, "start labels, 1-based: one symbol or n symbols")->capture_default_str();
    sub->add_option("--seed", s.seed, "random seed")->capture_default_str();
    sub->add_option("--out", s.out, "output file (default stdout)");
    sub->add_flag("--json", s.json, "JSON instead of CSV");
  };

  auto* exact = app.add_subcommand("exact", "distance series from the full transition matrix");
  add_common(exact);
  exact->add_option("--k-max", s.k_max, "last step")->capture_default_str();

  auto* decompose = app.add_subcommand("decompose", "per-subset terms of the L2 decomposition");
  add_common(decompose);
  decompose->add_option("--k", s.k, "step count (k >= 1)")->required();

  auto* bounds = app.add_subcommand("bounds", "bound sweep against the exact L2 distance");
  add_common(bounds);
  bounds->add_option("--k", s.k, "single step count (overrides --k-max)");
  bounds->add_option("--k-max", s.k_max, "sweep k = 1..k-max")->capture_default_str();
  bounds->add_option("--c", s.c, "comma-separated c values")->capture_default_str();
  bounds->add_option("--constant", s.constant, "universal constant for the envelope columns")->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo end states");
  add_common(simulate);
  simulate->add_option("--k", s.k, "step count")->required();
  simulate->add_option("--replicas", s.replicas, "number of trajectories")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "decomposition against the exact oracle on the built-in grid");
  verify->add_option("--n-max", s.n_max, "largest n in the grid")->capture_default_str();
  verify->add_option("--seed", s.seed, "seed for the random measures")->capture_default_str();
  verify->add_flag("--json", s.json, "JSON instead of text");

  auto* measure = app.add_subcommand("measure", "write a measure as JSON");
  add_common(measure);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return usage;
  }

  try {
    if (exact->parsed()) return cmd_exact(s, out, err);
    if (decompose->parsed()) return cmd_decompose(s, out, err);
    if (bounds->parsed()) return cmd_bounds(s, out, err);
    if (simulate->parsed()) return cmd_simulate(s, out, err);
    if (verify->parsed()) return cmd_verify(s, out, err);
    if (measure->parsed()) return cmd_measure(s, out, err);
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return capacity;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  }
  return usage;
}

}  // namespace wreathmix::cli
