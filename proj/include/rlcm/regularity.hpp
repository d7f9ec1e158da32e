#pragma once

#include <cstdint>

#include "rlcm/representation.hpp"

namespace rlcm {

class GraphProduct;

struct ZTerm {
  std::uint64_t subset = 0;   // bitmask over F
  bool filtered = false;      // skipped because the support is not a clique
  bool disjoint = false;
  std::optional<Element> lcm;
  int sign = 1;
};

/// Z(F) = Σ_{U⊆F} (−1)^{|U|} T(∨U)T(∨U)*, with the empty U contributing I.
struct ZReport {
  std::vector<Element> F;
  std::vector<ZTerm> terms;  // empty when produced in bulk by check_star_regular
  CMatrix Z;
  double min_eigenvalue = 0.0;
  bool psd = false;
};

struct ZOptions {
  /// Graph products only: drop subsets whose support is not a clique
  /// without computing their lcm.
  bool clique_filter = false;
};

ZReport z_operator(const Representation& rep, std::vector<Element> F, const Tolerances& tol = {},
                   ZOptions opts = {});

enum class Completeness { Complete, NecessaryOnly };
std::string to_string(Completeness c);

struct Strategy {
  enum class Kind {
    ArtinGenerators,
    ThompsonGenerators,
    NxNMinimal,
    BSMinimal,
    GraphProductMinimal,
    GenericBounded,
  };
  Kind kind = Kind::ArtinGenerators;
  int parameter = 0;       // test generators (Thompson), prime bound (NxN), length bound (generic)
  int max_set_size = 3;    // generic only

  static Strategy artin_generators() { return {Kind::ArtinGenerators, 0, 0}; }
  static Strategy thompson_generators(int count) { return {Kind::ThompsonGenerators, count, 0}; }
  static Strategy nxn_minimal(int prime_bound) { return {Kind::NxNMinimal, prime_bound, 0}; }
  static Strategy bs_minimal() { return {Kind::BSMinimal, 0, 0}; }
  static Strategy graph_product_minimal() { return {Kind::GraphProductMinimal, 0, 0}; }
  static Strategy generic_bounded(int L, int max_set = 3) { return {Kind::GenericBounded, L, max_set}; }

  std::string label() const;
};

/// The covering strategy for a semigroup kind.
Strategy default_strategy(const Semigroup& s);
/// Finite family whose subsets are tested (for generic: the candidate pool).
std::vector<Element> strategy_family(const Semigroup& s, const Strategy& st);
Completeness strategy_completeness(const Semigroup& s, const Strategy& st);

struct StarRegularityReport {
  bool regular = true;
  Strategy strategy;
  Completeness completeness = Completeness::NecessaryOnly;
  std::vector<Element> family;
  std::vector<ZReport> reports;
  std::optional<std::size_t> witness;  // index into reports of the most negative failure
};

StarRegularityReport check_star_regular(const Representation& rep, const Strategy& st,
                                        const Tolerances& tol = {});

// --- reduction certificates ----------------------------------------------

struct ReductionSplit {
  std::vector<Element> kept;        // F with p₁q replaced by p₁
  std::vector<Element> conjugated;  // {q} ∪ {p₁⁻¹(p₁∨pᵢ)}, disjoint pairs dropped
};

/// The two families of the reduction identity for F[index] = p1·q.
ReductionSplit reduction_split(const Semigroup& s, const std::vector<Element>& F,
                               std::size_t index, const Element& p1, const Element& q);

enum class LeafKind { MinimalSet, ContainsInvertible, DuplicateIdealReduced };
std::string to_string(LeafKind k);

struct CertificateNode {
  std::vector<Element> F;
  bool leaf = false;
  LeafKind leaf_kind = LeafKind::MinimalSet;
  Element split_element;
  Element p1;
  Element q;
  int kept_child = -1;
  int conjugated_child = -1;
  Element conjugator;  // this node enters the root sum as T(w) Z(F) T(w)*
  CMatrix Z;
  double min_eigenvalue = 0.0;
  double identity_residual = 0.0;  // internal nodes only
};

struct Certificate {
  std::vector<CertificateNode> nodes;  // nodes[0] is the root
  double max_identity_residual = 0.0;
  double flattening_residual = 0.0;
  bool leaves_psd = true;
  double identity_tolerance = 1e-9;

  bool identities_hold() const {
    return max_identity_residual <= identity_tolerance && flattening_residual <= identity_tolerance;
  }
  bool valid() const { return leaves_psd && identities_hold(); }
  std::size_t leaf_count() const;
};

Certificate reduction_certificate(const Representation& rep, std::vector<Element> F,
                                  const Tolerances& tol = {}, std::size_t node_budget = 20000);

// --- doubly commuting graph products --------------------------------------

struct DoublyCommutingReport {
  bool doubly_commuting = false;
  double commutator_residual = 0.0;
  double factorization_residual = 0.0;
  std::size_t samples = 0;
};

/// Complete graphs only.  Each sample is a set of single-syllable elements;
/// Z of the whole set is compared with the product of the per-vertex Z.
DoublyCommutingReport doubly_commuting_check(const Representation& rep,
                                             const std::vector<std::vector<Element>>& samples,
                                             const Tolerances& tol = {});

/// Seeded random families: each vertex gets up to `per_vertex` elements of
/// component length ≤ max_len.
std::vector<std::vector<Element>> sample_vertex_families(const GraphProduct& g, std::uint64_t seed,
                                                         std::size_t count, std::int64_t max_len = 2,
                                                         std::size_t per_vertex = 2);

}  // namespace rlcm
