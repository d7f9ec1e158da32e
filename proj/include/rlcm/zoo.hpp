#pragma once

#include "rlcm/semigroup.hpp"

namespace rlcm {

/// ℕᵏ under addition; lcm is the componentwise max.
class NkMonoid : public Semigroup {
 public:
  explicit NkMonoid(int rank);

  Kind kind() const override { return Kind::Nk; }
  Capabilities capabilities() const override;
  nlohmann::json descriptor() const override;
  std::string name() const override;

  Element identity() const override;
  void validate(const Element& x) const override;
  Element multiply(const Element& x, const Element& y) const override;
  LcmOutcome lcm(const Element& p, const Element& q) const override;
  std::optional<Element> left_divide(const Element& p, const Element& r) const override;
  std::optional<std::int64_t> length(const Element& x) const override;
  std::string format(const Element& x) const override;
  Element parse(std::string_view text) const override;

  std::vector<Element> generators() const override;
  std::vector<std::string> factor(const Element& x) const override;
  std::vector<Relation> relations() const override;
  std::optional<std::int64_t> lcm_extension_bound(const Element& p,
                                                  const Element& q) const override;
  bool in_minimal_set(const Element& x) const override;
  std::optional<std::pair<Element, Element>> split_first(const Element& x) const override;

  int rank() const { return rank_; }
  Element unit(int i) const;

 private:
  int rank_;
};

/// Free monoid on k letters a, b, c, …; lcm exists only along prefixes.
class FreeMonoid : public Semigroup {
 public:
  explicit FreeMonoid(int rank);

  Kind kind() const override { return Kind::Free; }
  Capabilities capabilities() const override;
  nlohmann::json descriptor() const override;
  std::string name() const override;

  Element identity() const override { return Element{}; }
  void validate(const Element& x) const override;
  Element multiply(const Element& x, const Element& y) const override;
  LcmOutcome lcm(const Element& p, const Element& q) const override;
  std::optional<Element> left_divide(const Element& p, const Element& r) const override;
  std::optional<std::int64_t> length(const Element& x) const override;
  std::string format(const Element& x) const override;
  /// Accepts dotted names ("a.b"), undotted letters ("ab") and eN aliases.
  Element parse(std::string_view text) const override;

  std::vector<Element> generators() const override;
  std::vector<std::string> factor(const Element& x) const override;
  std::vector<Relation> relations() const override { return {}; }
  std::optional<std::int64_t> lcm_extension_bound(const Element& p,
                                                  const Element& q) const override;
  bool in_minimal_set(const Element& x) const override;
  std::optional<std::pair<Element, Element>> split_first(const Element& x) const override;

  int rank() const { return rank_; }
  std::string letter(AtomId a) const;

 private:
  int rank_;
};

/// ℕ ⋊ ℕˣ with (a,m)(b,n) = (a + m·b, m·n).  Generators are (1,1) and (0,p)
/// for primes p ≤ prime_bound.
class NxNMonoid : public Semigroup {
 public:
  explicit NxNMonoid(int prime_bound = 3);

  Kind kind() const override { return Kind::NxN; }
  Capabilities capabilities() const override;
  nlohmann::json descriptor() const override;
  std::string name() const override;

  Element identity() const override { return Element({0, 1}); }
  void validate(const Element& x) const override;
  Element multiply(const Element& x, const Element& y) const override;
  LcmOutcome lcm(const Element& p, const Element& q) const override;
  std::optional<Element> left_divide(const Element& p, const Element& r) const override;
  /// No length function: the relations are not length-preserving.
  std::optional<std::int64_t> length(const Element&) const override { return std::nullopt; }
  std::string format(const Element& x) const override;
  Element parse(std::string_view text) const override;

  std::vector<Element> generators() const override;
  std::vector<std::string> factor(const Element& x) const override;
  std::vector<Relation> relations() const override;
  bool in_minimal_set(const Element& x) const override;
  std::optional<std::pair<Element, Element>> split_first(const Element& x) const override;
  /// {(a, m) : a ≤ L, m ≤ L} filtered to factorizable m, ordered by (m, a).
  std::vector<Element> ball(std::int64_t L) const override;

  int prime_bound() const { return prime_bound_; }
  const std::vector<std::int64_t>& primes() const { return primes_; }

 private:
  int prime_bound_;
  std::vector<std::int64_t> primes_;
};

/// {(1,1)} ∪ {(i,p) : p prime ≤ B, 0 ≤ i < p}.
std::vector<Element> nxn_minimal_set(int prime_bound);

SemigroupHandle build_nk(int rank);
SemigroupHandle build_free(int rank);
SemigroupHandle build_nxn(int prime_bound = 3);

}  // namespace rlcm
