#pragma once

#include "rlcm/semigroup.hpp"

namespace rlcm {

struct GraphVertex {
  std::string name;
  SemigroupHandle semigroup;
};

struct Syllable {
  int vertex;
  Element element;
};

/// Graph product of right LCM semigroups.  An element is a sequence of
/// syllables (vertex, component element) in Green normal form: reduced, then
/// ordered by repeatedly taking the least-indexed vertex that can be shuffled
/// to the front.
class GraphProduct : public Semigroup {
 public:
  GraphProduct(std::vector<GraphVertex> vertices, std::vector<std::pair<int, int>> edges,
               std::size_t budget = 10000);

  Kind kind() const override { return Kind::GraphProduct; }
  Capabilities capabilities() const override;
  nlohmann::json descriptor() const override;
  std::string name() const override;

  Element identity() const override { return Element{}; }
  void validate(const Element& x) const override;
  Element multiply(const Element& x, const Element& y) const override;
  LcmOutcome lcm(const Element& p, const Element& q) const override;
  std::optional<Element> left_divide(const Element& p, const Element& r) const override;
  /// Sum of component lengths.
  std::optional<std::int64_t> length(const Element& x) const override;
  /// Syllables joined by '*', each written vertex:component ("u:e1.e1*v:2").
  std::string format(const Element& x) const override;
  Element parse(std::string_view text) const override;

  std::vector<Element> generators() const override;
  std::vector<std::string> factor(const Element& x) const override;
  std::vector<Relation> relations() const override;
  std::optional<std::int64_t> lcm_extension_bound(const Element& p,
                                                  const Element& q) const override;
  bool in_minimal_set(const Element& x) const override;
  std::optional<std::pair<Element, Element>> split_first(const Element& x) const override;

  std::size_t vertex_count() const { return vertices_.size(); }
  const GraphVertex& vertex(int v) const { return vertices_[static_cast<std::size_t>(v)]; }
  int vertex_index(std::string_view name) const;
  bool adjacent(int u, int v) const;
  bool complete() const;
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  /// Canonical element from an arbitrary syllable sequence.
  Element reduce(std::vector<Syllable> raw) const;
  std::vector<Syllable> syllables(const Element& x) const;
  Element single(int vertex, Element component) const;
  /// Vertices of syllables that can be shuffled to the front.
  std::vector<int> initial_vertices(const Element& x) const;
  std::size_t syllable_count(const Element& x) const { return x.payload.size(); }
  /// Vertex of a single-syllable element, nullopt otherwise.
  std::optional<int> support_vertex(const Element& x) const;
  bool is_clique(const std::vector<int>& vertices) const;
  /// Generator name as used by representations: "vertex:component-name".
  std::string generator_name(int vertex, const std::string& component_name) const;

 private:
  std::optional<Element> lcm_with_syllable(const Element& x, int v, const Element& s,
                                           std::size_t& calls) const;
  LcmOutcome lcm_impl(const Element& x, const Element& y, std::size_t& calls) const;
  void charge(std::size_t& calls) const;

  std::vector<GraphVertex> vertices_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<bool>> adj_;
  std::size_t budget_;
};

/// Subsets (as bitmasks over F) whose support vertices form a clique.  Every
/// element of F must be a single syllable.
std::vector<std::uint64_t> enumerate_clique_subsets(const GraphProduct& g,
                                                    const std::vector<Element>& F);

SemigroupHandle build_graph_product(std::vector<GraphVertex> vertices,
                                    std::vector<std::pair<int, int>> edges);

}  // namespace rlcm
