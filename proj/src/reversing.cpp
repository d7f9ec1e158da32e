#include "rlcm/reversing.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <numbers>
#include <set>

namespace rlcm {

namespace {

struct Letter {
  AtomId atom;
  bool inverse;
};

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// ⟨x, y⟩_len: alternating word x y x … of the given length.
Word alternating(AtomId x, AtomId y, int len) {
  Word w;
  for (int i = 0; i < len; ++i) w.push_back(i % 2 == 0 ? x : y);
  return w;
}

}  // namespace

ReversingResult Presentation::reverse(const Word& u, const Word& v, bool record_trace) const {
  std::vector<Letter> w;
  w.reserve(u.size() + v.size());
  for (auto it = u.rbegin(); it != u.rend(); ++it) w.push_back({*it, true});
  for (AtomId a : v) w.push_back({a, false});

  ReversingResult res;
  std::size_t i = 0;
  while (i + 1 < w.size()) {
    if (!(w[i].inverse && !w[i + 1].inverse)) {
      ++i;
      continue;
    }
    if (res.steps >= budget_) {
      res.outcome = ReversingOutcome::BudgetExhausted;
      return res;
    }
    ++res.steps;
    const AtomId x = w[i].atom;
    const AtomId y = w[i + 1].atom;
    if (record_trace) res.trace.push_back({i, x, y});
    std::vector<Letter> repl;
    if (x != y) {
      auto right = theta_(x, y);
      auto left = theta_(y, x);
      if (!right || !left) {
        res.outcome = ReversingOutcome::NoCommonMultiple;
        return res;
      }
      for (AtomId a : *right) repl.push_back({a, false});
      for (auto it = left->rbegin(); it != left->rend(); ++it) repl.push_back({*it, true});
    }
    w.erase(w.begin() + static_cast<std::ptrdiff_t>(i),
            w.begin() + static_cast<std::ptrdiff_t>(i + 2));
    w.insert(w.begin() + static_cast<std::ptrdiff_t>(i), repl.begin(), repl.end());
    i = i > 0 ? i - 1 : 0;
  }
  for (const auto& l : w) {
    if (l.inverse) {
      res.u_prime.insert(res.u_prime.begin(), l.atom);
    } else {
      res.v_prime.push_back(l.atom);
    }
  }
  return res;
}

// ---------------------------------------------------------------------------

Capabilities PresentedMonoid::capabilities() const {
  Capabilities c;
  c.enumerable = true;
  c.homogeneous = true;
  return c;
}

void PresentedMonoid::validate(const Element& x) const {
  if (!x.parts.empty()) throw ValidationError(name() + ": unexpected nested payload");
  for (AtomId a : x.payload) {
    if (!valid_atom(a)) throw ValidationError(name() + ": invalid atom " + std::to_string(a));
  }
  if (normal_form(x.payload) != x) {
    throw ValidationError(name() + ": payload is not in normal form");
  }
}

Element PresentedMonoid::multiply(const Element& x, const Element& y) const {
  Word w = x.payload;
  w.insert(w.end(), y.payload.begin(), y.payload.end());
  return normal_form(w);
}

ReversingResult PresentedMonoid::checked_reverse(const Word& u, const Word& v) const {
  auto r = pres_.reverse(u, v);
  if (r.outcome == ReversingOutcome::BudgetExhausted) {
    throw DepthExhausted(name() + ": reversing budget of " + std::to_string(pres_.budget()) +
                         " steps exhausted");
  }
  return r;
}

LcmOutcome PresentedMonoid::lcm(const Element& p, const Element& q) const {
  auto r = checked_reverse(p.payload, q.payload);
  if (r.outcome == ReversingOutcome::NoCommonMultiple) return LcmOutcome::disjoint();
  Word w = p.payload;
  w.insert(w.end(), r.v_prime.begin(), r.v_prime.end());
  return LcmOutcome::common(normal_form(w));
}

std::optional<Element> PresentedMonoid::left_divide(const Element& p, const Element& r) const {
  auto rev = checked_reverse(p.payload, r.payload);
  if (rev.outcome == ReversingOutcome::NoCommonMultiple || !rev.u_prime.empty()) {
    return std::nullopt;
  }
  return normal_form(rev.v_prime);
}

std::optional<std::int64_t> PresentedMonoid::length(const Element& x) const {
  return static_cast<std::int64_t>(x.payload.size());
}

std::string PresentedMonoid::format(const Element& x) const {
  if (x.payload.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < x.payload.size(); ++i) {
    if (i) out += '.';
    out += atom_name(x.payload[i]);
  }
  return out;
}

Element PresentedMonoid::parse(std::string_view text) const {
  if (text.empty() || text == "1") return identity();
  Word w;
  for (auto tok : split(text, '.')) w.push_back(parse_atom(tok));
  return normal_form(w);
}

std::vector<std::string> PresentedMonoid::factor(const Element& x) const {
  std::vector<std::string> out;
  for (AtomId a : x.payload) out.push_back(atom_name(a));
  return out;
}

bool PresentedMonoid::in_minimal_set(const Element& x) const { return x.payload.size() == 1; }

std::optional<std::pair<Element, Element>> PresentedMonoid::split_first(const Element& x) const {
  if (x.payload.empty()) return std::nullopt;
  Word rest(x.payload.begin() + 1, x.payload.end());
  return std::make_pair(Element(Word{x.payload.front()}), normal_form(rest));
}

// ---------------------------------------------------------------------------

namespace {

// Number of positive roots of the Coxeter system, or nullopt if infinite.
std::optional<std::int64_t> count_positive_roots(const ArtinMonoid::Matrix& m) {
  const std::size_t n = m.size();
  std::vector<std::vector<double>> form(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      form[i][j] = (i == j) ? 1.0 : (m[i][j] == 0 ? -1.0 : -std::cos(std::numbers::pi / m[i][j]));
    }
  }
  auto key = [](const std::vector<double>& v) {
    std::vector<std::int64_t> k;
    for (double c : v) k.push_back(std::llround(c * 1e6));
    return k;
  };
  std::set<std::vector<std::int64_t>> seen;
  std::deque<std::vector<double>> queue;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    seen.insert(key(e));
    queue.push_back(e);
  }
  constexpr std::size_t kCap = 4000;
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < n; ++i) {
      double b = 0.0;
      for (std::size_t j = 0; j < n; ++j) b += form[i][j] * v[j];
      auto w = v;
      w[i] -= 2.0 * b;
      if (seen.insert(key(w)).second) {
        if (seen.size() > kCap) return std::nullopt;
        queue.push_back(std::move(w));
      }
    }
  }
  return static_cast<std::int64_t>(seen.size() / 2);
}

}  // namespace

ArtinMonoid::ArtinMonoid(Matrix m, std::size_t budget)
    : PresentedMonoid(Presentation(
          [m](AtomId x, AtomId y) -> std::optional<Word> {
            const int e = m[x][y];
            if (e == 0) return std::nullopt;
            return alternating(y, x, e - 1);
          },
          budget)),
      m_(std::move(m)) {
  const std::size_t n = m_.size();
  if (n == 0) throw ValidationError("artin: empty matrix");
  right_angled_ = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (m_[i].size() != n) throw ValidationError("artin: matrix is not square");
    for (std::size_t j = 0; j < n; ++j) {
      const int e = m_[i][j];
      if (i == j) {
        if (e != 1) throw ValidationError("artin: diagonal entries must be 1");
        continue;
      }
      if (e != m_[j][i]) throw ValidationError("artin: matrix is not symmetric");
      if (e != 0 && e < 2) throw ValidationError("artin: off-diagonal entries must be >= 2 or inf");
      if (e != 0 && e != 2) right_angled_ = false;
      if (e != 0 && i < j) {
        rel_words_.emplace_back(alternating(static_cast<AtomId>(i), static_cast<AtomId>(j), e),
                                alternating(static_cast<AtomId>(j), static_cast<AtomId>(i), e));
      }
    }
  }
  positive_roots_ = count_positive_roots(m_);
}

nlohmann::json ArtinMonoid::descriptor() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : m_) {
    nlohmann::json r = nlohmann::json::array();
    for (int e : row) {
      if (e == 0) {
        r.push_back("inf");
      } else {
        r.push_back(e);
      }
    }
    rows.push_back(r);
  }
  return {{"kind", "artin"}, {"matrix", rows}};
}

std::string ArtinMonoid::name() const { return "artin" + descriptor()["matrix"].dump(); }

std::string ArtinMonoid::atom_name(AtomId a) const { return "e" + std::to_string(a + 1); }

AtomId ArtinMonoid::parse_atom(std::string_view s) const {
  if (s.size() >= 2 && s[0] == 'e') {
    if (auto v = parse_int(s.substr(1)); v && *v >= 1 && *v <= static_cast<std::int64_t>(rank())) {
      return *v - 1;
    }
  }
  throw ValidationError(name() + ": unknown atom '" + std::string(s) + "'");
}

bool ArtinMonoid::valid_atom(AtomId a) const {
  return a >= 0 && a < static_cast<AtomId>(rank());
}

Word ArtinMonoid::exhaustive_normal_form(const Word& w) const {
  std::set<Word> seen{w};
  std::deque<Word> queue{w};
  while (!queue.empty()) {
    Word cur = queue.front();
    queue.pop_front();
    for (const auto& [lhs, rhs] : rel_words_) {
      for (int dir = 0; dir < 2; ++dir) {
        const Word& from = dir == 0 ? lhs : rhs;
        const Word& to = dir == 0 ? rhs : lhs;
        if (from.size() > cur.size()) continue;
        for (std::size_t pos = 0; pos + from.size() <= cur.size(); ++pos) {
          if (!std::equal(from.begin(), from.end(), cur.begin() + static_cast<std::ptrdiff_t>(pos))) {
            continue;
          }
          Word next = cur;
          std::copy(to.begin(), to.end(), next.begin() + static_cast<std::ptrdiff_t>(pos));
          if (seen.insert(next).second) queue.push_back(std::move(next));
        }
      }
    }
  }
  return *seen.begin();
}

Word ArtinMonoid::greedy_normal_form(const Word& w) const {
  Word out;
  Word rest = w;
  while (!rest.empty()) {
    bool found = false;
    for (AtomId a = 0; a < static_cast<AtomId>(rank()); ++a) {
      auto r = checked_reverse(Word{a}, rest);
      if (r.outcome == ReversingOutcome::Success && r.u_prime.empty()) {
        out.push_back(a);
        rest = std::move(r.v_prime);
        found = true;
        break;
      }
    }
    if (!found) throw Error(name() + ": no atom divides a nonempty word");
  }
  return out;
}

Element ArtinMonoid::normal_form(const Word& w) const {
  if (w.size() <= kExhaustiveLimit) return Element(exhaustive_normal_form(w));
  return Element(greedy_normal_form(w));
}

std::vector<Element> ArtinMonoid::generators() const {
  std::vector<Element> out;
  for (AtomId a = 0; a < static_cast<AtomId>(rank()); ++a) out.emplace_back(Word{a});
  return out;
}

std::vector<Relation> ArtinMonoid::relations() const {
  std::vector<Relation> out;
  for (const auto& [lhs, rhs] : rel_words_) {
    Relation r;
    for (AtomId a : lhs) r.lhs.push_back(atom_name(a));
    for (AtomId a : rhs) r.rhs.push_back(atom_name(a));
    out.push_back(std::move(r));
  }
  return out;
}

std::optional<std::int64_t> ArtinMonoid::lcm_extension_bound(const Element& p,
                                                             const Element& q) const {
  const auto longest = static_cast<std::int64_t>(std::max(p.payload.size(), q.payload.size()));
  // Right-angled: the reversing grid only has complements of length ≤ 1.
  if (right_angled_) return longest;
  // Finite type: both divide Δ^longest.
  if (positive_roots_) return *positive_roots_ * longest;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

ThompsonMonoid::ThompsonMonoid(int active, std::size_t budget)
    : PresentedMonoid(Presentation(
          [](AtomId x, AtomId y) -> std::optional<Word> {
            if (x < y) return Word{y + 1};
            return Word{y};
          },
          budget)),
      active_(active) {
  if (active < 1) throw ValidationError("thompson: need at least one active generator");
}

nlohmann::json ThompsonMonoid::descriptor() const {
  return {{"kind", "thompson"}, {"generators", active_}};
}

std::string ThompsonMonoid::name() const { return "thompson(" + std::to_string(active_) + ")"; }

Element ThompsonMonoid::normal_form(const Word& w) const {
  // Insert letters one by one; x_n x_k → x_k x_{n+1} for k < n bubbles the new
  // letter left while keeping the prefix nondecreasing.
  Word out;
  for (AtomId a : w) {
    out.push_back(a);
    for (std::size_t i = out.size() - 1; i > 0 && out[i - 1] > out[i]; --i) {
      const AtomId n = out[i - 1];
      out[i - 1] = out[i];
      out[i] = n + 1;
    }
  }
  return Element(std::move(out));
}

std::string ThompsonMonoid::atom_name(AtomId a) const { return "x" + std::to_string(a); }

AtomId ThompsonMonoid::parse_atom(std::string_view s) const {
  if (s.size() >= 2 && s[0] == 'x') {
    if (auto v = parse_int(s.substr(1)); v && *v >= 0) return *v;
  }
  throw ValidationError(name() + ": unknown atom '" + std::string(s) + "'");
}

std::vector<Element> ThompsonMonoid::generators() const {
  std::vector<Element> out;
  for (AtomId a = 0; a < active_; ++a) out.emplace_back(Word{a});
  return out;
}

std::vector<std::string> ThompsonMonoid::factor(const Element& x) const {
  const AtomId top = max_index(x);
  if (top >= active_) {
    throw CapabilityError(name() + ": evaluating " + format(x) + " needs at least " +
                          std::to_string(top + 1) + " active generators");
  }
  return PresentedMonoid::factor(x);
}

std::vector<Relation> ThompsonMonoid::relations() const {
  std::vector<Relation> out;
  for (AtomId n = 1; n + 1 < active_; ++n) {
    for (AtomId k = 0; k < n; ++k) {
      out.push_back({{atom_name(n), atom_name(k)}, {atom_name(k), atom_name(n + 1)}});
    }
  }
  return out;
}

AtomId ThompsonMonoid::max_index(const Element& x) {
  AtomId top = -1;
  for (AtomId a : x.payload) top = std::max(top, a);
  return top;
}

std::vector<Element> ThompsonMonoid::oracle_generators(const Element& p, const Element& q) const {
  const AtomId top = std::max({max_index(p), max_index(q), AtomId{0}});
  const AtomId limit = top + static_cast<AtomId>(p.payload.size() + q.payload.size());
  std::vector<Element> out;
  for (AtomId a = 0; a <= limit; ++a) out.emplace_back(Word{a});
  return out;
}

std::optional<std::int64_t> ThompsonMonoid::lcm_extension_bound(const Element& p,
                                                                const Element& q) const {
  // Every complement is a single letter, so the reversing grid keeps lengths.
  return static_cast<std::int64_t>(std::max(p.payload.size(), q.payload.size()));
}

std::vector<Element> ThompsonMonoid::ball(std::int64_t L) const {
  auto all = PresentedMonoid::ball(L);
  std::erase_if(all, [&](const Element& x) { return max_index(x) >= active_; });
  return all;
}

// ---------------------------------------------------------------------------

BaumslagSolitarMonoid::BaumslagSolitarMonoid(int n, int m, std::size_t budget)
    : PresentedMonoid(Presentation(
          [n, m](AtomId x, AtomId) -> std::optional<Word> {
            if (x == kA) return Word(static_cast<std::size_t>(n), kB);
            Word w(static_cast<std::size_t>(m - 1), kB);
            w.push_back(kA);
            return w;
          },
          budget)),
      n_(n),
      m_(m) {
  if (n < 1 || m < 1) throw ValidationError("bs: n and m must be positive");
}

Capabilities BaumslagSolitarMonoid::capabilities() const {
  Capabilities c;
  c.enumerable = true;
  c.homogeneous = (n_ == m_);
  return c;
}

nlohmann::json BaumslagSolitarMonoid::descriptor() const {
  return {{"kind", "bs"}, {"n", n_}, {"m", m_}};
}

std::string BaumslagSolitarMonoid::name() const {
  return "bs(" + std::to_string(n_) + "," + std::to_string(m_) + ")";
}

Element BaumslagSolitarMonoid::normal_form(const Word& w) const {
  // bᵏa = bʳ a b^{qn} with k = qm + r: each a fixes one syllable and pushes
  // the excess of b to the right.
  std::vector<std::int64_t> syl;
  std::int64_t k = 0;
  for (AtomId x : w) {
    if (x == kB) {
      ++k;
    } else {
      syl.push_back(k % m_);
      k = (k / m_) * n_;
    }
  }
  Word out;
  for (auto i : syl) {
    out.insert(out.end(), static_cast<std::size_t>(i), kB);
    out.push_back(kA);
  }
  out.insert(out.end(), static_cast<std::size_t>(k), kB);
  return Element(std::move(out));
}

std::pair<std::vector<std::int64_t>, std::int64_t> BaumslagSolitarMonoid::syllables(
    const Element& x) const {
  std::vector<std::int64_t> syl;
  std::int64_t k = 0;
  for (AtomId a : x.payload) {
    if (a == kB) {
      ++k;
    } else {
      syl.push_back(k);
      k = 0;
    }
  }
  return {syl, k};
}

std::string BaumslagSolitarMonoid::atom_name(AtomId a) const { return a == kA ? "a" : "b"; }

AtomId BaumslagSolitarMonoid::parse_atom(std::string_view s) const {
  if (s == "a") return kA;
  if (s == "b") return kB;
  throw ValidationError(name() + ": unknown atom '" + std::string(s) + "'");
}

std::optional<std::int64_t> BaumslagSolitarMonoid::length(const Element& x) const {
  auto [syl, k] = syllables(x);
  std::int64_t base = static_cast<std::int64_t>(syl.size()) + k;
  for (auto i : syl) base += i;
  if (m_ <= n_ || syl.empty()) return base;
  // Pull q_j blocks bᵐ back across the j-th a (each trades bⁿ on the right for
  // bᵐ on the left); the greedy choice from the right maximizes every q_j.
  std::int64_t q = k / n_;
  std::int64_t total = q;
  for (std::size_t j = syl.size() - 1; j > 0; --j) {
    q = (syl[j] + m_ * q) / n_;
    total += q;
  }
  return base + (m_ - n_) * total;
}

std::vector<Element> BaumslagSolitarMonoid::generators() const {
  return {Element(Word{kA}), Element(Word{kB})};
}

std::vector<Relation> BaumslagSolitarMonoid::relations() const {
  Relation r;
  r.lhs.push_back("a");
  for (int i = 0; i < n_; ++i) r.lhs.push_back("b");
  for (int i = 0; i < m_; ++i) r.rhs.push_back("b");
  r.rhs.push_back("a");
  return {r};
}

std::optional<std::int64_t> BaumslagSolitarMonoid::lcm_extension_bound(const Element& p,
                                                                       const Element& q) const {
  // Elements are u·bᵏ with u a word in the free syllables bⁱa (i < m).  A common
  // multiple exists only if one syllable word is a prefix of the other, and
  // then the lcm is u_long·b^K.  Walking b^{k_short} across the extra
  // syllables multiplies its exponent by at most n/m (rounded up), which
  // bounds K; each extra syllable costs at most m letters.
  auto [sp, kp] = syllables(p);
  auto [sq, kq] = syllables(q);
  const bool p_short = sp.size() <= sq.size();
  const std::int64_t extra =
      static_cast<std::int64_t>(p_short ? sq.size() - sp.size() : sp.size() - sq.size());
  std::int64_t kk = p_short ? kp : kq;
  for (std::int64_t i = 0; i < extra; ++i) kk = n_ * ((kk + m_ - 1) / m_);
  const std::int64_t K = std::max(kk, p_short ? kq : kp);
  return m_ * extra + K;
}

Element BaumslagSolitarMonoid::from_syllables(const std::vector<std::int64_t>& syl,
                                              std::int64_t k) const {
  Word out;
  for (auto i : syl) {
    out.insert(out.end(), static_cast<std::size_t>(i), kB);
    out.push_back(kA);
  }
  out.insert(out.end(), static_cast<std::size_t>(k), kB);
  return Element(std::move(out));
}

// Reversing need not terminate on disjoint pairs here (every pair of atoms has
// a complement), so lcm and division work on syllables directly.
LcmOutcome BaumslagSolitarMonoid::lcm(const Element& p, const Element& q) const {
  auto [sp, kp] = syllables(p);
  auto [sq, kq] = syllables(q);
  if (sp.size() > sq.size()) {
    std::swap(sp, sq);
    std::swap(kp, kq);
  }
  if (!std::equal(sp.begin(), sp.end(), sq.begin())) return LcmOutcome::disjoint();
  std::int64_t need = kp;
  for (std::size_t i = sp.size(); i < sq.size(); ++i) {
    need = n_ * std::max<std::int64_t>(0, (need - sq[i] + m_ - 1) / m_);
  }
  return LcmOutcome::common(from_syllables(sq, std::max(need, kq)));
}

std::optional<Element> BaumslagSolitarMonoid::left_divide(const Element& p,
                                                          const Element& r) const {
  auto [sp, kp] = syllables(p);
  auto [sr, kr] = syllables(r);
  if (sp.size() > sr.size() || !std::equal(sp.begin(), sp.end(), sr.begin())) return std::nullopt;
  // b^carry · b^j a = b^c a · b^{n·q} with c = (carry + j) mod m.
  std::vector<std::int64_t> quotient;
  std::int64_t carry = kp;
  for (std::size_t i = sp.size(); i < sr.size(); ++i) {
    const std::int64_t j = ((sr[i] - carry) % m_ + m_) % m_;
    quotient.push_back(j);
    carry = n_ * ((carry + j) / m_);
  }
  if (kr < carry) return std::nullopt;
  return from_syllables(quotient, kr - carry);
}

bool BaumslagSolitarMonoid::in_minimal_set(const Element& x) const {
  if (x.payload == Word{kB}) return true;
  auto [syl, k] = syllables(x);
  return syl.size() == 1 && k == 0;
}

std::vector<Element> BaumslagSolitarMonoid::reduced_minimal_set() const {
  std::vector<Element> out{Element(Word{kB})};
  for (int i = 0; i < m_; ++i) {
    Word w(static_cast<std::size_t>(i), kB);
    w.push_back(kA);
    out.emplace_back(std::move(w));
  }
  return out;
}

SemigroupHandle build_artin(ArtinMonoid::Matrix m, std::size_t budget) {
  return std::make_shared<ArtinMonoid>(std::move(m), budget);
}

SemigroupHandle build_thompson(int active, std::size_t budget) {
  return std::make_shared<ThompsonMonoid>(active, budget);
}

SemigroupHandle build_bs(int n, int m, std::size_t budget) {
  return std::make_shared<BaumslagSolitarMonoid>(n, m, budget);
}

}  // namespace rlcm
