#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace rlcm {

using AtomId = std::int64_t;
using Word = std::vector<AtomId>;

/// Canonical element of a right LCM semigroup.
///
/// `payload` holds atom ids for presented monoids, coordinates for closed-form
/// ones and vertex ids for graph products.  `parts` is only used by graph
/// products, where `parts[i]` is the component element of syllable i.
struct Element {
  std::vector<std::int64_t> payload;
  std::vector<Element> parts;

  Element() = default;
  explicit Element(std::vector<std::int64_t> p) : payload(std::move(p)) {}
  Element(std::vector<std::int64_t> p, std::vector<Element> c)
      : payload(std::move(p)), parts(std::move(c)) {}

  bool empty() const { return payload.empty() && parts.empty(); }
};

bool operator==(const Element& a, const Element& b);
std::strong_ordering operator<=>(const Element& a, const Element& b);

/// Result of an lcm query: a canonical representative of p∨q, or Disjoint.
class LcmOutcome {
 public:
  static LcmOutcome common(Element r) { return LcmOutcome(std::move(r)); }
  static LcmOutcome disjoint() { return LcmOutcome(); }

  bool is_disjoint() const { return !r_.has_value(); }
  const Element& element() const;

  friend bool operator==(const LcmOutcome&, const LcmOutcome&) = default;

 private:
  LcmOutcome() = default;
  explicit LcmOutcome(Element r) : r_(std::move(r)) {}
  std::optional<Element> r_;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed element payload or descriptor.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A search or rewriting budget ran out before a conclusive answer.
class DepthExhausted : public Error {
 public:
  using Error::Error;
};

/// The handle cannot perform the requested operation.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

enum class Kind { Nk, Free, Artin, Thompson, BaumslagSolitar, NxN, GraphProduct };

std::string to_string(Kind k);

struct Capabilities {
  bool enumerable = false;  // finite generating set usable for BFS
  bool homogeneous = false;  // all words of an element have the same length
  bool nontrivial_units = false;
  bool dcc = true;
};

/// A defining relation lhs = rhs written over generator names.
struct Relation {
  std::vector<std::string> lhs;
  std::vector<std::string> rhs;
};

class Semigroup;
using SemigroupHandle = std::shared_ptr<const Semigroup>;

class Semigroup {
 public:
  virtual ~Semigroup() = default;

  virtual Kind kind() const = 0;
  virtual Capabilities capabilities() const = 0;
  virtual nlohmann::json descriptor() const = 0;
  virtual std::string name() const = 0;

  virtual Element identity() const = 0;
  /// Throws ValidationError if x is not a canonical element of this semigroup.
  virtual void validate(const Element& x) const = 0;
  virtual Element multiply(const Element& x, const Element& y) const = 0;
  /// Throws DepthExhausted when a budgeted backend cannot decide.
  virtual LcmOutcome lcm(const Element& p, const Element& q) const = 0;
  /// Returns x with p·x = r, or nullopt when p does not left-divide r.
  virtual std::optional<Element> left_divide(const Element& p, const Element& r) const = 0;
  virtual bool is_invertible(const Element& x) const { return x == identity(); }
  virtual std::optional<std::int64_t> length(const Element& x) const = 0;

  virtual std::string format(const Element& x) const = 0;
  virtual Element parse(std::string_view text) const = 0;

  /// Generators a representation must supply, in a fixed order.
  virtual std::vector<Element> generators() const = 0;
  /// Generator names whose product (left to right) is x.
  virtual std::vector<std::string> factor(const Element& x) const = 0;
  virtual std::vector<Relation> relations() const = 0;

  /// Generators used by the brute-force oracle when enumerating pP and qP.
  virtual std::vector<Element> oracle_generators(const Element& p, const Element& q) const;
  /// If p∨q exists, both p⁻¹(p∨q) and q⁻¹(p∨q) are products of at most this
  /// many oracle generators.  Derived from family structure, not from lcm().
  virtual std::optional<std::int64_t> lcm_extension_bound(const Element& p,
                                                          const Element& q) const;

  /// Membership in the minimal set used as leaves of reduction certificates.
  virtual bool in_minimal_set(const Element& x) const = 0;
  /// x = first · rest with first in the minimal set; nullopt for identity.
  virtual std::optional<std::pair<Element, Element>> split_first(const Element& x) const = 0;

  /// Elements of length ≤ L built from generators().  The default is a BFS
  /// that needs a length function.
  virtual std::vector<Element> ball(std::int64_t L) const;

  std::string format_set(const std::vector<Element>& F) const;
};

/// ∨F folded pairwise in ascending payload order.  Throws on empty F.
LcmOutcome lcm_set(const Semigroup& s, std::vector<Element> F);

enum class OracleVerdict { Common, Disjoint, Inconclusive };

struct OracleResult {
  OracleVerdict verdict = OracleVerdict::Inconclusive;
  std::optional<Element> element;
  std::size_t explored = 0;

  bool agrees_with(const LcmOutcome& o) const;
};

/// Independent lcm by enumerating right ideals.  Disjointness is certified only
/// when `depth` reaches the family bound from lcm_extension_bound.
OracleResult oracle_lcm(const Semigroup& s, const Element& p, const Element& q, int depth);

/// All right multiples p·w with w a product of at most `depth` generators.
std::vector<Element> right_multiples(const Semigroup& s, const Element& p,
                                     const std::vector<Element>& gens, int depth);

}  // namespace rlcm
