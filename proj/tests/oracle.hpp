#pragma once

// Independent brute-force reference implementations used by the tests. They
// share no code with the library beyond reading atoms off a measure: states
// are plain vectors, the matrix is dense and powers are explicit products.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "wreathmix/measures.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

struct RawAtom {
  std::vector<int> pi;  // 0-based images
  std::vector<int> aug;
  double w;
};

inline std::vector<RawAtom> raw_atoms(const wreathmix::AugmentedMeasure& q) {
  std::vector<RawAtom> out;
  for (const auto& a : q.atoms()) {
    auto im = a.step.pi().images();
    out.push_back({std::vector<int>(im.begin(), im.end()), a.step.aug().elements(), a.weight});
  }
  return out;
}

struct Chain {
  std::vector<std::pair<std::vector<int>, std::vector<int>>> states;  // (labels, arrangement)
  std::map<std::pair<std::vector<int>, std::vector<int>>, int> index;
  Matrix P;
  std::vector<double> stationary;

  int find(const std::vector<int>& labels, const std::vector<int>& arrangement) const {
    return index.at({labels, arrangement});
  }
};

inline std::vector<std::vector<int>> all_labels(int n, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> x(static_cast<std::size_t>(n), 0);
  while (true) {
    out.push_back(x);
    int i = n - 1;
    while (i >= 0 && ++x[static_cast<std::size_t>(i)] == m) x[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
  }
  return out;
}

// Adds the law of refreshing `slots` of `labels` to `row`, scaled by w.
inline void spread(Chain& c, std::vector<double>& row, std::vector<int> labels, const std::vector<int>& arrangement,
                   const std::vector<int>& slots, std::size_t at, double w, const std::vector<double>& p) {
  if (at == slots.size()) {
    row[static_cast<std::size_t>(c.find(labels, arrangement))] += w;
    return;
  }
  for (std::size_t x = 0; x < p.size(); ++x) {
    labels[static_cast<std::size_t>(slots[at])] = static_cast<int>(x);
    spread(c, row, labels, arrangement, slots, at + 1, w * p[x], p);
  }
}

inline void finish(Chain& c, const std::vector<double>& p, double arrangements) {
  for (std::size_t i = 0; i < c.states.size(); ++i) c.index[c.states[i]] = static_cast<int>(i);
  c.stationary.resize(c.states.size());
  for (std::size_t i = 0; i < c.states.size(); ++i) {
    double w = 1.0 / arrangements;
    for (int x : c.states[i].first) w *= p[static_cast<std::size_t>(x)];
    c.stationary[i] = w;
  }
  c.P.assign(c.states.size(), std::vector<double>(c.states.size(), 0.0));
}

// Cards at positions: state (x; pi), step (rho, A) gives (x'; pi o rho) with
// slots moved by rho or in A refreshed.
inline Chain wreath_chain(const wreathmix::AugmentedMeasure& q, const std::vector<double>& p) {
  const int n = q.degree();
  const int m = static_cast<int>(p.size());
  Chain c;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  for (const auto& x : all_labels(n, m))
    for (const auto& pi : perms) c.states.emplace_back(x, pi);
  double fact = static_cast<double>(perms.size());
  finish(c, p, fact);
  const auto atoms = raw_atoms(q);
  for (std::size_t s = 0; s < c.states.size(); ++s) {
    const auto& [x, pi] = c.states[s];
    for (const auto& a : atoms) {
      std::vector<int> next(static_cast<std::size_t>(n));
      std::vector<int> slots;
      for (int i = 0; i < n; ++i) {
        next[static_cast<std::size_t>(i)] = pi[static_cast<std::size_t>(a.pi[static_cast<std::size_t>(i)])];
        bool extra = std::find(a.aug.begin(), a.aug.end(), i) != a.aug.end();
        if (a.pi[static_cast<std::size_t>(i)] != i || extra) slots.push_back(i);
      }
      spread(c, c.P[s], x, next, slots, 0, a.w, p);
    }
  }
  return c;
}

// Canonical involution of the r-subset S (sorted): out-of-place labels on
// each side paired in increasing order.
inline std::vector<int> involution_of(const std::vector<int>& S, int n, int r) {
  std::vector<int> ins, outs;
  for (int s : S)
    if (s >= r) ins.push_back(s);
  for (int j = 0; j < r; ++j)
    if (std::find(S.begin(), S.end(), j) == S.end()) outs.push_back(j);
  std::vector<int> t(static_cast<std::size_t>(n));
  std::iota(t.begin(), t.end(), 0);
  for (std::size_t l = 0; l < ins.size(); ++l) std::swap(t[static_cast<std::size_t>(outs[l])], t[static_cast<std::size_t>(ins[l])]);
  return t;
}

// Coset chain: the rack becomes t(rho([r])) for the canonical involution t of
// the current rack, and the balls t(([r] xor rho([r])) u A) get fresh labels.
inline Chain coset_chain(const wreathmix::AugmentedMeasure& q, const std::vector<double>& p) {
  const int n = q.degree();
  const int r = q.mode().rack_size();
  const int m = static_cast<int>(p.size());
  Chain c;
  std::vector<std::vector<int>> subsets;
  std::vector<int> pick(static_cast<std::size_t>(n), 0);
  std::fill(pick.begin(), pick.begin() + r, 1);
  do {
    std::vector<int> S;
    for (int i = 0; i < n; ++i)
      if (pick[static_cast<std::size_t>(i)]) S.push_back(i);
    subsets.push_back(S);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  for (const auto& x : all_labels(n, m))
    for (const auto& S : subsets) c.states.emplace_back(x, S);
  finish(c, p, static_cast<double>(subsets.size()));
  const auto atoms = raw_atoms(q);
  for (std::size_t s = 0; s < c.states.size(); ++s) {
    const auto& [x, S] = c.states[s];
    const auto t = involution_of(S, n, r);
    for (const auto& a : atoms) {
      std::vector<int> next;
      std::vector<bool> image_first(static_cast<std::size_t>(n), false);
      for (int i = 0; i < r; ++i) {
        image_first[static_cast<std::size_t>(a.pi[static_cast<std::size_t>(i)])] = true;
        next.push_back(t[static_cast<std::size_t>(a.pi[static_cast<std::size_t>(i)])]);
      }
      std::sort(next.begin(), next.end());
      std::vector<int> slots;
      for (int i = 0; i < n; ++i) {
        bool crossed = image_first[static_cast<std::size_t>(i)] != (i < r);
        bool extra = std::find(a.aug.begin(), a.aug.end(), i) != a.aug.end();
        if (crossed || extra) slots.push_back(t[static_cast<std::size_t>(i)]);
      }
      spread(c, c.P[s], x, next, slots, 0, a.w, p);
    }
  }
  return c;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l) {
      if (a[i][l] == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

inline Matrix power(const Matrix& a, int k) {
  const std::size_t n = a.size();
  Matrix result(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) result[i][i] = 1.0;
  Matrix base = a;
  while (k > 0) {
    if (k & 1) result = multiply(result, base);
    base = multiply(base, base);
    k >>= 1;
  }
  return result;
}

// sum_w (row(w) - pi(w))^2 / pi(w)
inline double chi_square(const std::vector<double>& row, const std::vector<double>& pi) {
  double s = 0;
  for (std::size_t i = 0; i < row.size(); ++i) s += (row[i] - pi[i]) * (row[i] - pi[i]) / pi[i];
  return s;
}

// Chi-square distance after k steps from `start`, by explicit matrix power.
inline double chi_square_after(const Chain& c, int start, int k) {
  return chi_square(power(c.P, k)[static_cast<std::size_t>(start)], c.stationary);
}

}  // namespace oracle
