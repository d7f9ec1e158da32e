#pragma once

#include <functional>

#include "rlcm/semigroup.hpp"

namespace rlcm {

inline constexpr std::size_t kDefaultReversingBudget = 10000;

enum class ReversingOutcome { Success, NoCommonMultiple, BudgetExhausted };

struct ReversingStep {
  std::size_t position;  // index of the negative letter in the signed word
  AtomId left;           // x in x⁻¹y
  AtomId right;          // y in x⁻¹y
};

/// u⁻¹v reversed to v'u'⁻¹, so that u·v' = v·u' is the right lcm.
struct ReversingResult {
  ReversingOutcome outcome = ReversingOutcome::Success;
  Word v_prime;
  Word u_prime;
  std::size_t steps = 0;
  std::vector<ReversingStep> trace;
};

/// Right complement θ: x·θ(x,y) = y·θ(y,x).  nullopt means xP ∩ yP = ∅.
using Complement = std::function<std::optional<Word>(AtomId, AtomId)>;

class Presentation {
 public:
  Presentation(Complement theta, std::size_t budget)
      : theta_(std::move(theta)), budget_(budget) {}

  ReversingResult reverse(const Word& u, const Word& v, bool record_trace = false) const;
  std::optional<Word> complement(AtomId x, AtomId y) const { return theta_(x, y); }
  std::size_t budget() const { return budget_; }

 private:
  Complement theta_;
  std::size_t budget_;
};

/// Shared machinery for monoids given by a complete right-complemented
/// presentation: products go through a normal form, lcm and division go
/// through reversing.
class PresentedMonoid : public Semigroup {
 public:
  explicit PresentedMonoid(Presentation pres) : pres_(std::move(pres)) {}

  const Presentation& presentation() const { return pres_; }
  virtual Element normal_form(const Word& w) const = 0;
  virtual std::string atom_name(AtomId a) const = 0;
  /// Throws ValidationError on unknown names.
  virtual AtomId parse_atom(std::string_view name) const = 0;
  virtual bool valid_atom(AtomId a) const = 0;

  Capabilities capabilities() const override;
  Element identity() const override { return Element{}; }
  void validate(const Element& x) const override;
  Element multiply(const Element& x, const Element& y) const override;
  LcmOutcome lcm(const Element& p, const Element& q) const override;
  std::optional<Element> left_divide(const Element& p, const Element& r) const override;
  std::optional<std::int64_t> length(const Element& x) const override;
  std::string format(const Element& x) const override;
  Element parse(std::string_view text) const override;
  std::vector<std::string> factor(const Element& x) const override;
  bool in_minimal_set(const Element& x) const override;
  std::optional<std::pair<Element, Element>> split_first(const Element& x) const override;

 protected:
  ReversingResult checked_reverse(const Word& u, const Word& v) const;
  Presentation pres_;
};

/// Artin monoid from a Coxeter-type matrix; 0 encodes m = ∞.
class ArtinMonoid : public PresentedMonoid {
 public:
  using Matrix = std::vector<std::vector<int>>;
  explicit ArtinMonoid(Matrix m, std::size_t budget = kDefaultReversingBudget);

  Kind kind() const override { return Kind::Artin; }
  nlohmann::json descriptor() const override;
  std::string name() const override;

  Element normal_form(const Word& w) const override;
  std::string atom_name(AtomId a) const override;
  AtomId parse_atom(std::string_view name) const override;
  bool valid_atom(AtomId a) const override;

  std::vector<Element> generators() const override;
  std::vector<Relation> relations() const override;
  std::optional<std::int64_t> lcm_extension_bound(const Element& p,
                                                  const Element& q) const override;

  /// ShortLex-least word of the class, by exhaustive application of the relations.
  Word exhaustive_normal_form(const Word& w) const;
  /// Same word built greedily: least atom dividing the rest, via reversing.
  Word greedy_normal_form(const Word& w) const;

  std::size_t rank() const { return m_.size(); }
  const Matrix& matrix() const { return m_; }
  bool right_angled() const { return right_angled_; }
  bool finite_type() const { return positive_roots_.has_value(); }
  /// Length of the Garside element; only for finite type.
  std::optional<std::int64_t> delta_length() const { return positive_roots_; }

  static constexpr std::size_t kExhaustiveLimit = 8;

 private:
  Matrix m_;
  std::vector<std::pair<Word, Word>> rel_words_;
  bool right_angled_ = false;
  std::optional<std::int64_t> positive_roots_;
};

/// Positive monoid of Thompson's group F with N active generators x0..x_{N-1}.
/// Elements may use any index; evaluation in a representation needs index < N.
class ThompsonMonoid : public PresentedMonoid {
 public:
  explicit ThompsonMonoid(int active, std::size_t budget = kDefaultReversingBudget);

  Kind kind() const override { return Kind::Thompson; }
  nlohmann::json descriptor() const override;
  std::string name() const override;

  Element normal_form(const Word& w) const override;
  std::string atom_name(AtomId a) const override;
  AtomId parse_atom(std::string_view name) const override;
  bool valid_atom(AtomId a) const override { return a >= 0; }

  std::vector<Element> generators() const override;
  std::vector<std::string> factor(const Element& x) const override;
  std::vector<Relation> relations() const override;
  std::vector<Element> oracle_generators(const Element& p, const Element& q) const override;
  std::optional<std::int64_t> lcm_extension_bound(const Element& p,
                                                  const Element& q) const override;
  std::vector<Element> ball(std::int64_t L) const override;

  int active() const { return active_; }
  /// Largest generator index in x, or -1 for the identity.
  static AtomId max_index(const Element& x);

 private:
  int active_;
};

/// Baumslag–Solitar monoid ⟨a, b | a bⁿ = bᵐ a⟩.  Atom 0 is a, atom 1 is b.
class BaumslagSolitarMonoid : public PresentedMonoid {
 public:
  BaumslagSolitarMonoid(int n, int m, std::size_t budget = kDefaultReversingBudget);

  static constexpr AtomId kA = 0;
  static constexpr AtomId kB = 1;

  Kind kind() const override { return Kind::BaumslagSolitar; }
  Capabilities capabilities() const override;
  nlohmann::json descriptor() const override;
  std::string name() const override;

  Element normal_form(const Word& w) const override;
  std::string atom_name(AtomId a) const override;
  AtomId parse_atom(std::string_view name) const override;
  bool valid_atom(AtomId a) const override { return a == kA || a == kB; }

  LcmOutcome lcm(const Element& p, const Element& q) const override;
  std::optional<Element> left_divide(const Element& p, const Element& r) const override;

  /// Largest length over all words of x (superadditive).
  std::optional<std::int64_t> length(const Element& x) const override;
  std::vector<Element> generators() const override;
  std::vector<Relation> relations() const override;
  std::optional<std::int64_t> lcm_extension_bound(const Element& p,
                                                  const Element& q) const override;
  bool in_minimal_set(const Element& x) const override;

  /// {b} ∪ {bⁱa : 0 ≤ i < m}.
  std::vector<Element> reduced_minimal_set() const;

  int n() const { return n_; }
  int m() const { return m_; }

  /// Normal form (b^{i1} a)…(b^{it} a) b^k as ({i1..it}, k).
  std::pair<std::vector<std::int64_t>, std::int64_t> syllables(const Element& x) const;
  Element from_syllables(const std::vector<std::int64_t>& syl, std::int64_t k) const;

 private:
  int n_;
  int m_;
};

SemigroupHandle build_artin(ArtinMonoid::Matrix m, std::size_t budget = kDefaultReversingBudget);
SemigroupHandle build_thompson(int active, std::size_t budget = kDefaultReversingBudget);
SemigroupHandle build_bs(int n, int m, std::size_t budget = kDefaultReversingBudget);

}  // namespace rlcm
