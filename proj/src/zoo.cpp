#include "rlcm/zoo.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <utility>

namespace rlcm {

namespace {

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::int64_t> parse_tuple(std::string_view text, const std::string& who) {
  std::vector<std::int64_t> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(',', start);
    auto v = parse_int(text.substr(start, pos - start));
    if (!v) throw ValidationError(who + ": cannot parse '" + std::string(text) + "'");
    out.push_back(*v);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string join_tuple(const std::vector<std::int64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

// eN with 1 ≤ N ≤ rank, returned zero-based.
std::optional<AtomId> parse_e_name(std::string_view s, int rank) {
  if (s.size() < 2 || s[0] != 'e') return std::nullopt;
  auto v = parse_int(s.substr(1));
  if (!v || *v < 1 || *v > rank) return std::nullopt;
  return *v - 1;
}

}  // namespace

// ---------------------------------------------------------------------------

NkMonoid::NkMonoid(int rank) : rank_(rank) {
  if (rank < 1) throw ValidationError("nk: rank must be positive");
}

Capabilities NkMonoid::capabilities() const {
  Capabilities c;
  c.enumerable = true;
  c.homogeneous = true;
  return c;
}

nlohmann::json NkMonoid::descriptor() const { return {{"kind", "nk"}, {"rank", rank_}}; }

std::string NkMonoid::name() const { return "nk(" + std::to_string(rank_) + ")"; }

Element NkMonoid::identity() const {
  return Element(std::vector<std::int64_t>(static_cast<std::size_t>(rank_), 0));
}

void NkMonoid::validate(const Element& x) const {
  if (!x.parts.empty() || x.payload.size() != static_cast<std::size_t>(rank_)) {
    throw ValidationError(name() + ": wrong number of coordinates");
  }
  for (auto c : x.payload) {
    if (c < 0) throw ValidationError(name() + ": negative coordinate");
  }
}

Element NkMonoid::multiply(const Element& x, const Element& y) const {
  Element out = x;
  for (std::size_t i = 0; i < out.payload.size(); ++i) out.payload[i] += y.payload[i];
  return out;
}

LcmOutcome NkMonoid::lcm(const Element& p, const Element& q) const {
  Element out = p;
  for (std::size_t i = 0; i < out.payload.size(); ++i) {
    out.payload[i] = std::max(p.payload[i], q.payload[i]);
  }
  return LcmOutcome::common(std::move(out));
}

std::optional<Element> NkMonoid::left_divide(const Element& p, const Element& r) const {
  Element out = r;
  for (std::size_t i = 0; i < out.payload.size(); ++i) {
    out.payload[i] -= p.payload[i];
    if (out.payload[i] < 0) return std::nullopt;
  }
  return out;
}

std::optional<std::int64_t> NkMonoid::length(const Element& x) const {
  return std::accumulate(x.payload.begin(), x.payload.end(), std::int64_t{0});
}

std::string NkMonoid::format(const Element& x) const { return join_tuple(x.payload); }

Element NkMonoid::parse(std::string_view text) const {
  if (auto e = parse_e_name(text, rank_)) return unit(static_cast<int>(*e));
  Element x(parse_tuple(text, name()));
  validate(x);
  return x;
}

Element NkMonoid::unit(int i) const {
  Element x = identity();
  x.payload[static_cast<std::size_t>(i)] = 1;
  return x;
}

std::vector<Element> NkMonoid::generators() const {
  std::vector<Element> out;
  for (int i = 0; i < rank_; ++i) out.push_back(unit(i));
  return out;
}

std::vector<std::string> NkMonoid::factor(const Element& x) const {
  std::vector<std::string> out;
  for (int i = 0; i < rank_; ++i) {
    for (std::int64_t c = 0; c < x.payload[static_cast<std::size_t>(i)]; ++c) {
      out.push_back("e" + std::to_string(i + 1));
    }
  }
  return out;
}

std::vector<Relation> NkMonoid::relations() const {
  std::vector<Relation> out;
  for (int i = 0; i < rank_; ++i) {
    for (int j = i + 1; j < rank_; ++j) {
      const std::string ei = "e" + std::to_string(i + 1);
      const std::string ej = "e" + std::to_string(j + 1);
      out.push_back({{ei, ej}, {ej, ei}});
    }
  }
  return out;
}

std::optional<std::int64_t> NkMonoid::lcm_extension_bound(const Element& p,
                                                         const Element& q) const {
  return std::max(*length(p), *length(q));
}

bool NkMonoid::in_minimal_set(const Element& x) const { return *length(x) == 1; }

std::optional<std::pair<Element, Element>> NkMonoid::split_first(const Element& x) const {
  for (int i = 0; i < rank_; ++i) {
    if (x.payload[static_cast<std::size_t>(i)] > 0) {
      Element rest = x;
      --rest.payload[static_cast<std::size_t>(i)];
      return std::make_pair(unit(i), rest);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

FreeMonoid::FreeMonoid(int rank) : rank_(rank) {
  if (rank < 1 || rank > 26) throw ValidationError("free: rank must be in 1..26");
}

Capabilities FreeMonoid::capabilities() const {
  Capabilities c;
  c.enumerable = true;
  c.homogeneous = true;
  return c;
}

nlohmann::json FreeMonoid::descriptor() const { return {{"kind", "free"}, {"rank", rank_}}; }

std::string FreeMonoid::name() const { return "free(" + std::to_string(rank_) + ")"; }

void FreeMonoid::validate(const Element& x) const {
  if (!x.parts.empty()) throw ValidationError(name() + ": unexpected nested payload");
  for (auto a : x.payload) {
    if (a < 0 || a >= rank_) throw ValidationError(name() + ": invalid letter");
  }
}

Element FreeMonoid::multiply(const Element& x, const Element& y) const {
  Element out = x;
  out.payload.insert(out.payload.end(), y.payload.begin(), y.payload.end());
  return out;
}

LcmOutcome FreeMonoid::lcm(const Element& p, const Element& q) const {
  const auto& shorter = p.payload.size() <= q.payload.size() ? p : q;
  const auto& longer = p.payload.size() <= q.payload.size() ? q : p;
  if (std::equal(shorter.payload.begin(), shorter.payload.end(), longer.payload.begin())) {
    return LcmOutcome::common(longer);
  }
  return LcmOutcome::disjoint();
}

std::optional<Element> FreeMonoid::left_divide(const Element& p, const Element& r) const {
  if (p.payload.size() > r.payload.size() ||
      !std::equal(p.payload.begin(), p.payload.end(), r.payload.begin())) {
    return std::nullopt;
  }
  return Element(Word(r.payload.begin() + static_cast<std::ptrdiff_t>(p.payload.size()),
                      r.payload.end()));
}

std::optional<std::int64_t> FreeMonoid::length(const Element& x) const {
  return static_cast<std::int64_t>(x.payload.size());
}

std::string FreeMonoid::letter(AtomId a) const { return std::string(1, static_cast<char>('a' + a)); }

std::string FreeMonoid::format(const Element& x) const {
  if (x.payload.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < x.payload.size(); ++i) {
    if (i) out += '.';
    out += letter(x.payload[i]);
  }
  return out;
}

Element FreeMonoid::parse(std::string_view text) const {
  if (text.empty() || text == "1") return identity();
  auto one = [&](std::string_view tok) -> AtomId {
    if (auto e = parse_e_name(tok, rank_)) return *e;
    if (tok.size() == 1 && tok[0] >= 'a' && tok[0] < 'a' + rank_) return tok[0] - 'a';
    throw ValidationError(name() + ": unknown letter '" + std::string(tok) + "'");
  };
  Word w;
  if (text.find('.') != std::string_view::npos || parse_e_name(text, rank_)) {
    std::size_t start = 0;
    while (true) {
      auto pos = text.find('.', start);
      w.push_back(one(text.substr(start, pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
  } else {
    for (std::size_t i = 0; i < text.size(); ++i) w.push_back(one(text.substr(i, 1)));
  }
  return Element(std::move(w));
}

std::vector<Element> FreeMonoid::generators() const {
  std::vector<Element> out;
  for (AtomId a = 0; a < rank_; ++a) out.emplace_back(Word{a});
  return out;
}

std::vector<std::string> FreeMonoid::factor(const Element& x) const {
  std::vector<std::string> out;
  for (auto a : x.payload) out.push_back(letter(a));
  return out;
}

std::optional<std::int64_t> FreeMonoid::lcm_extension_bound(const Element& p,
                                                           const Element& q) const {
  return static_cast<std::int64_t>(std::max(p.payload.size(), q.payload.size()));
}

bool FreeMonoid::in_minimal_set(const Element& x) const { return x.payload.size() == 1; }

std::optional<std::pair<Element, Element>> FreeMonoid::split_first(const Element& x) const {
  if (x.payload.empty()) return std::nullopt;
  return std::make_pair(Element(Word{x.payload.front()}),
                        Element(Word(x.payload.begin() + 1, x.payload.end())));
}

// ---------------------------------------------------------------------------

namespace {

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

// Inverse of a modulo n for gcd(a, n) = 1.
std::int64_t mod_inverse(std::int64_t a, std::int64_t n) {
  std::int64_t t = 0, new_t = 1, r = n, new_r = ((a % n) + n) % n;
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  return ((t % n) + n) % n;
}

}  // namespace

NxNMonoid::NxNMonoid(int prime_bound) : prime_bound_(prime_bound) {
  if (prime_bound < 2) throw ValidationError("nxn: prime bound must be at least 2");
  for (std::int64_t p = 2; p <= prime_bound; ++p) {
    if (is_prime(p)) primes_.push_back(p);
  }
}

Capabilities NxNMonoid::capabilities() const {
  Capabilities c;
  c.enumerable = false;
  c.homogeneous = false;
  return c;
}

nlohmann::json NxNMonoid::descriptor() const {
  return {{"kind", "nxn"}, {"prime_bound", prime_bound_}};
}

std::string NxNMonoid::name() const { return "nxn(" + std::to_string(prime_bound_) + ")"; }

void NxNMonoid::validate(const Element& x) const {
  if (!x.parts.empty() || x.payload.size() != 2 || x.payload[0] < 0 || x.payload[1] < 1) {
    throw ValidationError(name() + ": element must be (a, m) with a >= 0, m >= 1");
  }
}

Element NxNMonoid::multiply(const Element& x, const Element& y) const {
  return Element({x.payload[0] + x.payload[1] * y.payload[0], x.payload[1] * y.payload[1]});
}

LcmOutcome NxNMonoid::lcm(const Element& p, const Element& q) const {
  const std::int64_t a = p.payload[0], m = p.payload[1];
  const std::int64_t b = q.payload[0], n = q.payload[1];
  const std::int64_t g = std::gcd(m, n);
  if (((b - a) % g + g) % g != 0) return LcmOutcome::disjoint();
  const std::int64_t ng = n / g;
  const std::int64_t L = m / g * n;
  // x = a + m t with m t ≡ b − a (mod n).
  const auto rhs = static_cast<__int128>(((b - a) / g % ng + ng) % ng);
  const auto t = static_cast<std::int64_t>(rhs * mod_inverse(m / g, ng) % ng);
  std::int64_t x = a + m * t;
  const std::int64_t floor = std::max(a, b);
  if (x < floor) x += ((floor - x + L - 1) / L) * L;
  return LcmOutcome::common(Element({x, L}));
}

std::optional<Element> NxNMonoid::left_divide(const Element& p, const Element& r) const {
  const std::int64_t a = p.payload[0], m = p.payload[1];
  const std::int64_t c = r.payload[0], L = r.payload[1];
  if (c < a || (c - a) % m != 0 || L % m != 0) return std::nullopt;
  return Element({(c - a) / m, L / m});
}

std::string NxNMonoid::format(const Element& x) const { return join_tuple(x.payload); }

Element NxNMonoid::parse(std::string_view text) const {
  Element x(parse_tuple(text, name()));
  validate(x);
  return x;
}

std::vector<Element> NxNMonoid::generators() const {
  std::vector<Element> out{Element({1, 1})};
  for (auto p : primes_) out.push_back(Element({0, p}));
  return out;
}

std::vector<std::string> NxNMonoid::factor(const Element& x) const {
  std::vector<std::string> out(static_cast<std::size_t>(x.payload[0]), "1,1");
  std::int64_t m = x.payload[1];
  for (auto p : primes_) {
    while (m % p == 0) {
      out.push_back("0," + std::to_string(p));
      m /= p;
    }
  }
  if (m != 1) {
    throw CapabilityError(name() + ": " + format(x) + " has a prime factor above the bound " +
                          std::to_string(prime_bound_));
  }
  return out;
}

std::vector<Relation> NxNMonoid::relations() const {
  std::vector<Relation> out;
  for (auto p : primes_) {
    const std::string gp = "0," + std::to_string(p);
    Relation r;
    r.lhs = {gp, "1,1"};
    r.rhs.assign(static_cast<std::size_t>(p), "1,1");
    r.rhs.push_back(gp);
    out.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    for (std::size_t j = i + 1; j < primes_.size(); ++j) {
      const std::string gi = "0," + std::to_string(primes_[i]);
      const std::string gj = "0," + std::to_string(primes_[j]);
      out.push_back({{gi, gj}, {gj, gi}});
    }
  }
  return out;
}

bool NxNMonoid::in_minimal_set(const Element& x) const {
  const std::int64_t a = x.payload[0], m = x.payload[1];
  if (a == 1 && m == 1) return true;
  return is_prime(m) && a < m;
}

std::optional<std::pair<Element, Element>> NxNMonoid::split_first(const Element& x) const {
  const std::int64_t a = x.payload[0], m = x.payload[1];
  if (a > 0) return std::make_pair(Element({1, 1}), Element({a - 1, m}));
  if (m == 1) return std::nullopt;
  for (std::int64_t p = 2; p <= m; ++p) {
    if (m % p == 0) return std::make_pair(Element({0, p}), Element({0, m / p}));
  }
  return std::nullopt;
}

std::vector<Element> NxNMonoid::ball(std::int64_t L) const {
  std::vector<Element> out;
  for (std::int64_t m = 1; m <= std::max<std::int64_t>(L, 1); ++m) {
    std::int64_t r = m;
    for (auto p : primes_) {
      while (r % p == 0) r /= p;
    }
    if (r != 1) continue;
    for (std::int64_t a = 0; a <= L; ++a) out.push_back(Element({a, m}));
  }
  return out;
}

std::vector<Element> nxn_minimal_set(int prime_bound) {
  std::vector<Element> out{Element({1, 1})};
  for (std::int64_t p = 2; p <= prime_bound; ++p) {
    if (!is_prime(p)) continue;
    for (std::int64_t i = 0; i < p; ++i) out.push_back(Element({i, p}));
  }
  return out;
}

SemigroupHandle build_nk(int rank) { return std::make_shared<NkMonoid>(rank); }
SemigroupHandle build_free(int rank) { return std::make_shared<FreeMonoid>(rank); }
SemigroupHandle build_nxn(int prime_bound) { return std::make_shared<NxNMonoid>(prime_bound); }

}  // namespace rlcm
