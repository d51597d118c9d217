#include "wreathmix/perm.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <numeric>
#include <sstream>

#include "wreathmix/errors.hpp"

namespace wreathmix {

std::uint64_t factorial(int n) {
  if (n < 0 || n > kMaxDegree) throw DomainError("factorial: argument out of range");
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t b = 1;
  for (int i = 1; i <= k; ++i) b = b * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return b;
}

// ---------------------------------------------------------------------------
// IndexSet

namespace {

void check_degree(int n) {
  if (n < 0 || n > 31) throw DomainError("index set degree must lie in [0, 31]");
}

std::vector<int> parse_int_list(std::string_view body) {
  std::vector<int> out;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    try {
      out.push_back(std::stoi(token));
    } catch (const std::exception&) {
      throw DomainError("malformed integer '" + token + "'");
    }
    token.clear();
  };
  for (char ch : body) {
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-') {
      token.push_back(ch);
    } else if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else {
      throw DomainError(std::string("unexpected character '") + ch + "'");
    }
  }
  flush();
  return out;
}

}  // namespace

IndexSet IndexSet::full(int n) {
  check_degree(n);
  return IndexSet(n == 32 ? ~0u : ((1u << n) - 1u));
}

IndexSet IndexSet::of(std::initializer_list<int> zero_based) {
  IndexSet s;
  for (int i : zero_based) {
    check_degree(i + 1);
    s = s.with(i);
  }
  return s;
}

IndexSet IndexSet::from_one_based(std::span<const int> indices, int n) {
  check_degree(n);
  IndexSet s;
  for (int i : indices) {
    if (i < 1 || i > n) throw DomainError("index " + std::to_string(i) + " outside [1, " + std::to_string(n) + "]");
    s = s.with(i - 1);
  }
  return s;
}

IndexSet IndexSet::parse(std::string_view text, int n) {
  auto first = text.find_first_not_of(" \t");
  auto last = text.find_last_not_of(" \t");
  if (first == std::string_view::npos || text[first] != '{' || text[last] != '}')
    throw DomainError("subset must be written as {i,j,...}");
  auto values = parse_int_list(text.substr(first + 1, last - first - 1));
  return from_one_based(values, n);
}

int IndexSet::size() const { return std::popcount(mask_); }

IndexSet IndexSet::complement(int n) const { return full(n) - *this; }

std::vector<int> IndexSet::elements() const {
  std::vector<int> out;
  for (std::uint32_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

std::vector<int> IndexSet::one_based() const {
  auto e = elements();
  for (int& i : e) ++i;
  return e;
}

std::string IndexSet::to_string() const {
  std::string s = "{";
  bool first = true;
  for (int i : elements()) {
    if (!first) s += ',';
    s += std::to_string(i + 1);
    first = false;
  }
  return s + "}";
}

// ---------------------------------------------------------------------------
// Permutation

Permutation Permutation::identity(int n) {
  if (n < 0 || n > kMaxDegree) throw DomainError("permutation degree out of range");
  std::vector<int> im(static_cast<std::size_t>(n));
  std::iota(im.begin(), im.end(), 0);
  return Permutation(std::move(im));
}

Permutation Permutation::from_images(std::vector<int> images) {
  const int n = static_cast<int>(images.size());
  if (n > kMaxDegree) throw DomainError("permutation degree out of range");
  std::vector<bool> seen(images.size(), false);
  for (int v : images) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
      throw DomainError("images do not form a bijection");
    seen[static_cast<std::size_t>(v)] = true;
  }
  return Permutation(std::move(images));
}

Permutation Permutation::from_one_line(std::span<const int> one_based) {
  std::vector<int> im(one_based.begin(), one_based.end());
  for (int& v : im) --v;
  return from_images(std::move(im));
}

Permutation Permutation::transposition(int n, int a, int b) {
  auto p = identity(n);
  if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw DomainError("bad transposition");
  std::swap(p.images_[static_cast<std::size_t>(a)], p.images_[static_cast<std::size_t>(b)]);
  return p;
}

Permutation Permutation::parse_cycles(std::string_view text, int n) {
  auto p = identity(n);
  std::string compact;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) compact.push_back(ch);
  if (compact == "e" || compact.empty()) return p;

  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto open = text.find('(', pos);
    if (open == std::string_view::npos) {
      if (text.substr(pos).find_first_not_of(" \t") != std::string_view::npos)
        throw DomainError("trailing characters in cycle notation");
      break;
    }
    if (text.substr(pos, open - pos).find_first_not_of(" \t") != std::string_view::npos)
      throw DomainError("unexpected characters in cycle notation");
    auto close = text.find(')', open);
    if (close == std::string_view::npos) throw DomainError("unbalanced parenthesis in cycle notation");
    std::string_view body = text.substr(open + 1, close - open - 1);
    std::vector<int> cycle;
    bool separated = body.find_first_of(" ,\t") != std::string_view::npos;
    if (!separated && body.size() > 1) {
      // "(12)" style: one digit per label.
      for (char ch : body) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) throw DomainError("bad cycle label");
        cycle.push_back(ch - '0');
      }
    } else {
      cycle = parse_int_list(body);
    }
    for (int v : cycle) {
      if (v < 1 || v > n) throw DomainError("cycle label " + std::to_string(v) + " outside [1, n]");
      if (used[static_cast<std::size_t>(v - 1)]) throw DomainError("cycles are not disjoint");
      used[static_cast<std::size_t>(v - 1)] = true;
    }
    for (std::size_t i = 0; i < cycle.size(); ++i)
      p.images_[static_cast<std::size_t>(cycle[i] - 1)] = cycle[(i + 1) % cycle.size()] - 1;
    pos = close + 1;
  }
  return p;
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) inv[static_cast<std::size_t>(images_[i])] = static_cast<int>(i);
  return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != static_cast<int>(i)) return false;
  return true;
}

bool Permutation::is_involution() const {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[static_cast<std::size_t>(images_[i])] != static_cast<int>(i)) return false;
  return true;
}

IndexSet Permutation::fixed_points() const { return moved_points().complement(degree()); }

IndexSet Permutation::moved_points() const {
  IndexSet s;
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != static_cast<int>(i)) s = s.with(static_cast<int>(i));
  return s;
}

IndexSet Permutation::image(IndexSet s) const {
  IndexSet out;
  for (int i : s.elements()) out = out.with(images_[static_cast<std::size_t>(i)]);
  return out;
}

std::string Permutation::to_cycle_string() const {
  std::string out;
  std::vector<bool> seen(images_.size(), false);
  for (std::size_t start = 0; start < images_.size(); ++start) {
    if (seen[start] || images_[start] == static_cast<int>(start)) continue;
    out += '(';
    std::size_t i = start;
    bool first = true;
    while (!seen[i]) {
      seen[i] = true;
      if (!first) out += ' ';
      out += std::to_string(i + 1);
      first = false;
      i = static_cast<std::size_t>(images_[i]);
    }
    out += ')';
  }
  return out.empty() ? "e" : out;
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  if (a.degree() != b.degree()) throw DomainError("composition of permutations of different degree");
  std::vector<int> im(b.images_.size());
  for (std::size_t i = 0; i < im.size(); ++i) im[i] = a.images_[static_cast<std::size_t>(b.images_[i])];
  return Permutation(std::move(im));
}

IndexSet fixed_points(const Permutation& p) { return p.fixed_points(); }

std::uint64_t lehmer_rank(const Permutation& p) {
  const int n = p.degree();
  std::uint64_t rank = 0;
  std::uint32_t used = 0;
  for (int i = 0; i < n; ++i) {
    int v = p(i);
    int smaller_unused = v - std::popcount(used & ((1u << v) - 1u));
    rank = rank * static_cast<std::uint64_t>(n - i) + static_cast<std::uint64_t>(smaller_unused);
    used |= 1u << v;
  }
  return rank;
}

Permutation lehmer_unrank(std::uint64_t rank, int n) {
  if (rank >= factorial(n)) throw DomainError("permutation rank out of range");
  std::vector<int> digits(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    auto base = static_cast<std::uint64_t>(n - i);
    digits[static_cast<std::size_t>(i)] = static_cast<int>(rank % base);
    rank /= base;
  }
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> im;
  im.reserve(static_cast<std::size_t>(n));
  for (int d : digits) {
    im.push_back(pool[static_cast<std::size_t>(d)]);
    pool.erase(pool.begin() + d);
  }
  return Permutation::from_images(std::move(im));
}

std::uint64_t colex_rank(IndexSet s) {
  std::uint64_t rank = 0;
  int idx = 1;
  for (int c : s.elements()) rank += binomial(c, idx++);
  return rank;
}

IndexSet colex_unrank(std::uint64_t rank, int n, int r) {
  if (r < 0 || r > n || rank >= binomial(n, r)) throw DomainError("subset rank out of range");
  IndexSet s;
  int upper = n;
  for (int idx = r; idx >= 1; --idx) {
    int c = idx - 1;
    while (c + 1 < upper && binomial(c + 1, idx) <= rank) ++c;
    rank -= binomial(c, idx);
    s = s.with(c);
    upper = c;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Cosets

CosetRep CosetRep::from_subset(IndexSet subset, int n, int r) {
  if (r < 1 || 2 * r > n) throw DomainError("rack size r must satisfy 1 <= r <= n/2");
  if (subset.size() != r || !subset.subset_of(IndexSet::full(n)))
    throw DomainError("coset subset must have exactly r elements of [n]");
  const IndexSet first_rack = IndexSet::full(r);
  auto incoming = (subset - first_rack).elements();  // labels > r now on the first rack
  auto outgoing = (first_rack - subset).elements();  // labels <= r now on the second rack
  auto inv = Permutation::identity(n);
  for (std::size_t l = 0; l < incoming.size(); ++l)
    inv = Permutation::transposition(n, outgoing[l], incoming[l]) * inv;
  return CosetRep(subset, std::move(inv), n, r);
}

CosetRep CosetRep::base(int n, int r) { return from_subset(IndexSet::full(r), n, r); }

CosetRep coset_reduce(const Permutation& p, int r) {
  const int n = p.degree();
  if (r < 1 || 2 * r > n) throw DomainError("rack size r must satisfy 1 <= r <= n/2");
  return CosetRep::from_subset(p.image(IndexSet::full(r)), n, r);
}

ChainMode ChainMode::coset(int r) {
  if (r < 1) throw DomainError("coset mode needs r >= 1");
  return ChainMode(r);
}

std::string ChainMode::to_string() const {
  return is_coset() ? "coset(" + std::to_string(r_) + ")" : "plain";
}

AugmentedPermutation::AugmentedPermutation(Permutation pi, IndexSet aug, ChainMode mode)
    : pi_(std::move(pi)), aug_(aug), mode_(mode) {
  const int n = pi_.degree();
  if (!aug_.subset_of(IndexSet::full(n))) throw DomainError("augmentation set exceeds [n]");
  if (mode_.is_coset()) {
    auto reduced = coset_reduce(pi_, mode_.rack_size());
    if (!aug_.subset_of(reduced.involution().fixed_points()))
      throw DomainError("augmentation " + aug_.to_string() + " not inside F(R(" + pi_.to_cycle_string() + "))");
  } else if (!aug_.subset_of(pi_.fixed_points())) {
    throw DomainError("augmentation " + aug_.to_string() + " not inside F(" + pi_.to_cycle_string() + ")");
  }
}

IndexSet AugmentedPermutation::included() const {
  if (!mode_.is_coset()) return moved_included();
  // R(pi) moves exactly the labels whose rack changed under pi.
  const IndexSet first_rack = IndexSet::full(mode_.rack_size());
  return (pi_.image(first_rack) ^ first_rack) | aug_;
}

IndexSet included_indices(const AugmentedPermutation& ap) { return ap.included(); }

}  // namespace wreathmix
