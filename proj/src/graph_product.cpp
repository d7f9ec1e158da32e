#include "rlcm/graph_product.hpp"

#include <algorithm>

namespace rlcm {

GraphProduct::GraphProduct(std::vector<GraphVertex> vertices,
                           std::vector<std::pair<int, int>> edges, std::size_t budget)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), budget_(budget) {
  const auto n = vertices_.size();
  if (n == 0) throw ValidationError("graph_product: no vertices");
  if (n > 63) throw ValidationError("graph_product: too many vertices");
  adj_.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    if (!vertices_[i].semigroup) throw ValidationError("graph_product: missing component");
    for (std::size_t j = 0; j < i; ++j) {
      if (vertices_[i].name == vertices_[j].name) {
        throw ValidationError("graph_product: duplicate vertex " + vertices_[i].name);
      }
    }
  }
  for (auto& [u, v] : edges_) {
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n ||
        u == v) {
      throw ValidationError("graph_product: invalid edge");
    }
    if (u > v) std::swap(u, v);
    adj_[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = true;
    adj_[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = true;
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

Capabilities GraphProduct::capabilities() const {
  Capabilities c;
  c.enumerable = true;
  c.homogeneous = true;
  for (const auto& v : vertices_) {
    const auto cc = v.semigroup->capabilities();
    c.enumerable = c.enumerable && cc.enumerable;
    c.homogeneous = c.homogeneous && cc.homogeneous;
    c.nontrivial_units = c.nontrivial_units || cc.nontrivial_units;
    c.dcc = c.dcc && cc.dcc;
  }
  return c;
}

nlohmann::json GraphProduct::descriptor() const {
  nlohmann::json verts = nlohmann::json::array();
  for (const auto& v : vertices_) {
    verts.push_back({{"name", v.name}, {"semigroup", v.semigroup->descriptor()}});
  }
  nlohmann::json es = nlohmann::json::array();
  for (auto [u, v] : edges_) {
    es.push_back({vertices_[static_cast<std::size_t>(u)].name,
                  vertices_[static_cast<std::size_t>(v)].name});
  }
  return {{"kind", "graph_product"}, {"vertices", verts}, {"edges", es}};
}

std::string GraphProduct::name() const {
  std::string out = "graph_product(";
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (i) out += ",";
    out += vertices_[i].name + "=" + vertices_[i].semigroup->name();
  }
  out += ";";
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (i) out += ",";
    out += vertices_[static_cast<std::size_t>(edges_[i].first)].name + "-" +
           vertices_[static_cast<std::size_t>(edges_[i].second)].name;
  }
  return out + ")";
}

int GraphProduct::vertex_index(std::string_view name) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i].name == name) return static_cast<int>(i);
  }
  throw ValidationError("graph_product: unknown vertex '" + std::string(name) + "'");
}

bool GraphProduct::adjacent(int u, int v) const {
  return adj_[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
}

bool GraphProduct::complete() const {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
      if (!adj_[i][j]) return false;
    }
  }
  return true;
}

std::vector<Syllable> GraphProduct::syllables(const Element& x) const {
  std::vector<Syllable> out;
  for (std::size_t i = 0; i < x.payload.size(); ++i) {
    out.push_back({static_cast<int>(x.payload[i]), x.parts[i]});
  }
  return out;
}

Element GraphProduct::single(int vertex, Element component) const {
  return reduce({{vertex, std::move(component)}});
}

Element GraphProduct::reduce(std::vector<Syllable> s) const {
  auto comp = [&](int v) -> const Semigroup& { return *vertices_[static_cast<std::size_t>(v)].semigroup; };
  std::erase_if(s, [&](const Syllable& y) { return comp(y.vertex).is_invertible(y.element); });

  // Amalgamate a syllable with an earlier one at the same vertex whenever
  // everything in between commutes with it.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t j = 1; j < s.size() && !changed; ++j) {
      for (std::size_t i = j; i-- > 0;) {
        if (s[i].vertex == s[j].vertex) {
          s[i].element = comp(s[i].vertex).multiply(s[i].element, s[j].element);
          s.erase(s.begin() + static_cast<std::ptrdiff_t>(j));
          if (comp(s[i].vertex).is_invertible(s[i].element)) {
            s.erase(s.begin() + static_cast<std::ptrdiff_t>(i));
          }
          changed = true;
          break;
        }
        if (!adjacent(s[i].vertex, s[j].vertex)) break;
      }
    }
  }

  Element out;
  while (!s.empty()) {
    std::size_t best = s.size();
    for (std::size_t k = 0; k < s.size(); ++k) {
      bool front = true;
      for (std::size_t i = 0; i < k && front; ++i) front = adjacent(s[i].vertex, s[k].vertex);
      if (front && (best == s.size() || s[k].vertex < s[best].vertex)) best = k;
    }
    out.payload.push_back(s[best].vertex);
    out.parts.push_back(std::move(s[best].element));
    s.erase(s.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

void GraphProduct::validate(const Element& x) const {
  if (x.payload.size() != x.parts.size()) throw ValidationError(name() + ": malformed syllables");
  for (std::size_t i = 0; i < x.payload.size(); ++i) {
    const auto v = x.payload[i];
    if (v < 0 || static_cast<std::size_t>(v) >= vertices_.size()) {
      throw ValidationError(name() + ": invalid vertex");
    }
    vertices_[static_cast<std::size_t>(v)].semigroup->validate(x.parts[i]);
  }
  if (reduce(syllables(x)) != x) throw ValidationError(name() + ": element is not canonical");
}

Element GraphProduct::multiply(const Element& x, const Element& y) const {
  auto s = syllables(x);
  auto t = syllables(y);
  s.insert(s.end(), t.begin(), t.end());
  return reduce(std::move(s));
}

std::vector<int> GraphProduct::initial_vertices(const Element& x) const {
  std::vector<int> out;
  for (std::size_t k = 0; k < x.payload.size(); ++k) {
    bool front = true;
    for (std::size_t i = 0; i < k && front; ++i) {
      front = adjacent(static_cast<int>(x.payload[i]), static_cast<int>(x.payload[k]));
    }
    if (front) out.push_back(static_cast<int>(x.payload[k]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Element> GraphProduct::left_divide(const Element& p, const Element& r) const {
  Element cur = r;
  for (std::size_t i = 0; i < p.payload.size(); ++i) {
    const int v = static_cast<int>(p.payload[i]);
    auto s = syllables(cur);
    std::optional<std::size_t> at;
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s[k].vertex == v) {
        at = k;
        break;
      }
      if (!adjacent(s[k].vertex, v)) break;
    }
    if (!at) return std::nullopt;
    const auto& comp = *vertices_[static_cast<std::size_t>(v)].semigroup;
    auto rest = comp.left_divide(p.parts[i], s[*at].element);
    if (!rest) return std::nullopt;
    s[*at].element = std::move(*rest);
    cur = reduce(std::move(s));
  }
  return cur;
}

void GraphProduct::charge(std::size_t& calls) const {
  if (++calls > budget_) {
    throw DepthExhausted(name() + ": lcm recursion budget exhausted");
  }
}

std::optional<Element> GraphProduct::lcm_with_syllable(const Element& x, int v, const Element& s,
                                                       std::size_t& calls) const {
  charge(calls);
  if (x.payload.empty()) return single(v, s);
  const int u = static_cast<int>(x.payload.front());
  const Element head = single(u, x.parts.front());
  auto tail_syl = syllables(x);
  tail_syl.erase(tail_syl.begin());
  const Element tail = reduce(std::move(tail_syl));

  if (u == v) {
    const auto& comp = *vertices_[static_cast<std::size_t>(v)].semigroup;
    auto c = comp.lcm(x.parts.front(), s);
    if (c.is_disjoint()) return std::nullopt;
    auto q = comp.left_divide(x.parts.front(), c.element());
    if (!q) throw Error(name() + ": component lcm is not a right multiple");
    if (comp.is_invertible(*q)) return x;
    auto r = lcm_with_syllable(tail, v, *q, calls);
    if (!r) return std::nullopt;
    return multiply(head, *r);
  }
  if (adjacent(u, v)) {
    auto r = lcm_with_syllable(tail, v, s, calls);
    if (!r) return std::nullopt;
    return multiply(head, *r);
  }
  // u is initial in x and v would be initial in any common multiple.
  return std::nullopt;
}

LcmOutcome GraphProduct::lcm_impl(const Element& x, const Element& y, std::size_t& calls) const {
  charge(calls);
  if (y.payload.empty()) return LcmOutcome::common(x);
  if (x.payload.empty()) return LcmOutcome::common(y);
  const int v = static_cast<int>(y.payload.front());
  const Element head = single(v, y.parts.front());
  auto tail_syl = syllables(y);
  tail_syl.erase(tail_syl.begin());
  const Element tail = reduce(std::move(tail_syl));

  // x ∨ (head·tail) = head · ((head⁻¹(x ∨ head)) ∨ tail)
  auto z = lcm_with_syllable(x, v, y.parts.front(), calls);
  if (!z) return LcmOutcome::disjoint();
  auto w = left_divide(head, *z);
  if (!w) throw Error(name() + ": syllable lcm is not a right multiple");
  auto r = lcm_impl(*w, tail, calls);
  if (r.is_disjoint()) return r;
  return LcmOutcome::common(multiply(head, r.element()));
}

LcmOutcome GraphProduct::lcm(const Element& p, const Element& q) const {
  std::size_t calls = 0;
  return lcm_impl(p, q, calls);
}

std::optional<std::int64_t> GraphProduct::length(const Element& x) const {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < x.payload.size(); ++i) {
    auto len = vertices_[static_cast<std::size_t>(x.payload[i])].semigroup->length(x.parts[i]);
    if (!len) return std::nullopt;
    total += *len;
  }
  return total;
}

std::string GraphProduct::format(const Element& x) const {
  if (x.payload.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < x.payload.size(); ++i) {
    if (i) out += '*';
    const auto& vx = vertices_[static_cast<std::size_t>(x.payload[i])];
    out += vx.name + ":" + vx.semigroup->format(x.parts[i]);
  }
  return out;
}

Element GraphProduct::parse(std::string_view text) const {
  if (text.empty() || text == "1") return identity();
  std::vector<Syllable> raw;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find('*', start);
    auto tok = text.substr(start, pos - start);
    auto colon = tok.find(':');
    if (colon == std::string_view::npos) {
      throw ValidationError(name() + ": syllable '" + std::string(tok) + "' lacks a vertex");
    }
    const int v = vertex_index(tok.substr(0, colon));
    raw.push_back({v, vertices_[static_cast<std::size_t>(v)].semigroup->parse(tok.substr(colon + 1))});
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return reduce(std::move(raw));
}

std::string GraphProduct::generator_name(int vertex, const std::string& component_name) const {
  return vertices_[static_cast<std::size_t>(vertex)].name + ":" + component_name;
}

std::vector<Element> GraphProduct::generators() const {
  std::vector<Element> out;
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    for (auto& g : vertices_[v].semigroup->generators()) {
      out.push_back(single(static_cast<int>(v), std::move(g)));
    }
  }
  return out;
}

std::vector<std::string> GraphProduct::factor(const Element& x) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < x.payload.size(); ++i) {
    const int v = static_cast<int>(x.payload[i]);
    for (auto& n : vertices_[static_cast<std::size_t>(v)].semigroup->factor(x.parts[i])) {
      out.push_back(generator_name(v, n));
    }
  }
  return out;
}

std::vector<Relation> GraphProduct::relations() const {
  std::vector<Relation> out;
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    for (auto r : vertices_[v].semigroup->relations()) {
      for (auto& n : r.lhs) n = generator_name(static_cast<int>(v), n);
      for (auto& n : r.rhs) n = generator_name(static_cast<int>(v), n);
      out.push_back(std::move(r));
    }
  }
  auto names = [&](int v) {
    std::vector<std::string> ns;
    const auto& comp = *vertices_[static_cast<std::size_t>(v)].semigroup;
    for (const auto& g : comp.generators()) ns.push_back(generator_name(v, comp.factor(g).front()));
    return ns;
  };
  for (auto [u, v] : edges_) {
    for (const auto& a : names(u)) {
      for (const auto& b : names(v)) out.push_back({{a, b}, {b, a}});
    }
  }
  return out;
}

std::optional<std::int64_t> GraphProduct::lcm_extension_bound(const Element& p,
                                                             const Element& q) const {
  // With ℕᵏ and free components every complement in the reversing grid is a
  // single generator, as in right-angled Artin monoids.
  for (const auto& v : vertices_) {
    const auto k = v.semigroup->kind();
    if (k != Kind::Nk && k != Kind::Free) return std::nullopt;
  }
  return std::max(*length(p), *length(q));
}

std::optional<int> GraphProduct::support_vertex(const Element& x) const {
  if (x.payload.size() != 1) return std::nullopt;
  return static_cast<int>(x.payload.front());
}

bool GraphProduct::in_minimal_set(const Element& x) const {
  auto v = support_vertex(x);
  return v && vertices_[static_cast<std::size_t>(*v)].semigroup->in_minimal_set(x.parts.front());
}

std::optional<std::pair<Element, Element>> GraphProduct::split_first(const Element& x) const {
  if (x.payload.empty()) return std::nullopt;
  const int v = static_cast<int>(x.payload.front());
  auto s = vertices_[static_cast<std::size_t>(v)].semigroup->split_first(x.parts.front());
  if (!s) return std::nullopt;
  auto rest = syllables(x);
  rest.front().element = s->second;
  return std::make_pair(single(v, s->first), reduce(std::move(rest)));
}

bool GraphProduct::is_clique(const std::vector<int>& vs) const {
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      if (vs[i] != vs[j] && !adjacent(vs[i], vs[j])) return false;
    }
  }
  return true;
}

std::vector<std::uint64_t> enumerate_clique_subsets(const GraphProduct& g,
                                                    const std::vector<Element>& F) {
  if (F.size() > 20) throw ValidationError("enumerate_clique_subsets: family too large");
  std::vector<int> vert;
  for (const auto& x : F) {
    auto v = g.support_vertex(x);
    if (!v) throw ValidationError("enumerate_clique_subsets: element is not a single syllable");
    vert.push_back(*v);
  }
  std::vector<std::uint64_t> out;
  const std::uint64_t total = std::uint64_t{1} << F.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::vector<int> vs;
    for (std::size_t i = 0; i < F.size(); ++i) {
      if (mask >> i & 1U) vs.push_back(vert[i]);
    }
    if (g.is_clique(vs)) out.push_back(mask);
  }
  return out;
}

SemigroupHandle build_graph_product(std::vector<GraphVertex> vertices,
                                    std::vector<std::pair<int, int>> edges) {
  return std::make_shared<GraphProduct>(std::move(vertices), std::move(edges));
}

}  // namespace rlcm
