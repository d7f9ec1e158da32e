#include "rlcm/semigroup.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace rlcm {

bool operator==(const Element& a, const Element& b) {
  return a.payload == b.payload && a.parts == b.parts;
}

std::strong_ordering operator<=>(const Element& a, const Element& b) {
  if (auto c = a.payload <=> b.payload; c != 0) return c;
  const std::size_t n = std::min(a.parts.size(), b.parts.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.parts[i] <=> b.parts[i]; c != 0) return c;
  }
  return a.parts.size() <=> b.parts.size();
}

const Element& LcmOutcome::element() const {
  if (!r_) throw Error("lcm outcome is Disjoint");
  return *r_;
}

std::string to_string(Kind k) {
  switch (k) {
    case Kind::Nk: return "nk";
    case Kind::Free: return "free";
    case Kind::Artin: return "artin";
    case Kind::Thompson: return "thompson";
    case Kind::BaumslagSolitar: return "bs";
    case Kind::NxN: return "nxn";
    case Kind::GraphProduct: return "graph_product";
  }
  return "unknown";
}

std::vector<Element> Semigroup::oracle_generators(const Element&, const Element&) const {
  if (!capabilities().enumerable) {
    throw CapabilityError(name() + " is not enumerable");
  }
  return generators();
}

std::optional<std::int64_t> Semigroup::lcm_extension_bound(const Element&,
                                                           const Element&) const {
  return std::nullopt;
}

std::vector<Element> Semigroup::ball(std::int64_t L) const {
  const auto gens = generators();
  std::set<Element> seen{identity()};
  std::deque<Element> queue{identity()};
  while (!queue.empty()) {
    Element x = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      Element y = multiply(x, g);
      auto len = length(y);
      if (!len) throw CapabilityError(name() + " has no length function");
      if (*len > L || seen.count(y)) continue;
      seen.insert(y);
      queue.push_back(std::move(y));
    }
  }
  std::vector<Element> out(seen.begin(), seen.end());
  std::stable_sort(out.begin(), out.end(), [&](const Element& a, const Element& b) {
    return *length(a) < *length(b);
  });
  return out;
}

std::string Semigroup::format_set(const std::vector<Element>& F) const {
  std::string out = "{";
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (i) out += ", ";
    out += format(F[i]);
  }
  return out + "}";
}

LcmOutcome lcm_set(const Semigroup& s, std::vector<Element> F) {
  if (F.empty()) throw ValidationError("lcm_set of an empty family");
  std::sort(F.begin(), F.end());
  Element acc = F.front();
  for (std::size_t i = 1; i < F.size(); ++i) {
    auto o = s.lcm(acc, F[i]);
    if (o.is_disjoint()) return o;
    acc = o.element();
  }
  return LcmOutcome::common(std::move(acc));
}

bool OracleResult::agrees_with(const LcmOutcome& o) const {
  switch (verdict) {
    case OracleVerdict::Common: return !o.is_disjoint() && o.element() == *element;
    case OracleVerdict::Disjoint: return o.is_disjoint();
    case OracleVerdict::Inconclusive: return false;
  }
  return false;
}

std::vector<Element> right_multiples(const Semigroup& s, const Element& p,
                                     const std::vector<Element>& gens, int depth) {
  std::set<Element> seen{p};
  std::vector<Element> frontier{p};
  for (int step = 0; step < depth && !frontier.empty(); ++step) {
    std::vector<Element> next;
    for (const auto& x : frontier) {
      for (const auto& g : gens) {
        Element y = s.multiply(x, g);
        if (seen.insert(y).second) next.push_back(std::move(y));
      }
    }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

OracleResult oracle_lcm(const Semigroup& s, const Element& p, const Element& q, int depth) {
  const auto caps = s.capabilities();
  if (!caps.enumerable) throw CapabilityError(s.name() + " is not enumerable");
  const auto bound = s.lcm_extension_bound(p, q);
  const bool certified = bound && depth >= *bound;
  const int effective = certified ? static_cast<int>(*bound) : depth;

  const auto gens = s.oracle_generators(p, q);
  const auto mp = right_multiples(s, p, gens, effective);
  const auto mq = right_multiples(s, q, gens, effective);
  std::vector<Element> common;
  std::set_intersection(mp.begin(), mp.end(), mq.begin(), mq.end(),
                        std::back_inserter(common));

  OracleResult res;
  res.explored = mp.size() + mq.size();
  if (common.empty()) {
    res.verdict = certified ? OracleVerdict::Disjoint : OracleVerdict::Inconclusive;
    return res;
  }
  // Every common multiple is r·w for the lcm r, and lengths are superadditive,
  // so the lcm is the unique common multiple of least length.
  if (!certified && !caps.homogeneous) return res;
  std::optional<std::int64_t> best_len;
  std::size_t ties = 0;
  for (const auto& c : common) {
    auto len = s.length(c);
    if (!len) throw CapabilityError(s.name() + " has no length function");
    if (!best_len || *len < *best_len) {
      best_len = len;
      res.element = c;
      ties = 1;
    } else if (*len == *best_len) {
      ++ties;
    }
  }
  if (ties != 1) {
    res.element.reset();
    return res;
  }
  res.verdict = OracleVerdict::Common;
  return res;
}

}  // namespace rlcm
