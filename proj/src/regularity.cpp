#include "rlcm/regularity.hpp"

#include <algorithm>
#include <bit>
#include <random>

#include "rlcm/graph_product.hpp"
#include "rlcm/reversing.hpp"
#include "rlcm/zoo.hpp"

namespace rlcm {

namespace {

constexpr std::size_t kMaxFamily = 20;

void normalize(std::vector<Element>& F) {
  std::sort(F.begin(), F.end());
  F.erase(std::unique(F.begin(), F.end()), F.end());
}

int parity_sign(std::uint64_t mask) { return std::popcount(mask) % 2 == 0 ? 1 : -1; }

std::vector<int> support(const GraphProduct& gp, const std::vector<Element>& F) {
  std::vector<int> out;
  for (const auto& x : F) {
    auto v = gp.support_vertex(x);
    if (!v) throw ValidationError("clique filter: element " + gp.format(x) + " is not a single syllable");
    out.push_back(*v);
  }
  return out;
}

bool mask_is_clique(const GraphProduct& gp, const std::vector<int>& vert, std::uint64_t mask) {
  std::vector<int> vs;
  for (std::size_t i = 0; i < vert.size(); ++i) {
    if (mask >> i & 1U) vs.push_back(vert[i]);
  }
  return gp.is_clique(vs);
}

// lcm of every subset of F, built from the subset without its lowest element.
std::vector<ZTerm> subset_terms(const Semigroup& s, const std::vector<Element>& F,
                                const GraphProduct* filter) {
  const std::size_t n = F.size();
  if (n > kMaxFamily) throw ValidationError("z_operator: family too large for subset expansion");
  std::vector<int> vert;
  if (filter) vert = support(*filter, F);
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<ZTerm> terms(total);
  terms[0].lcm = s.identity();
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    auto& t = terms[mask];
    t.subset = mask;
    t.sign = parity_sign(mask);
    const int low = std::countr_zero(mask);
    const std::uint64_t rest = mask & (mask - 1);
    if (filter && !mask_is_clique(*filter, vert, mask)) {
      t.filtered = true;
      continue;
    }
    if (rest == 0) {
      t.lcm = F[static_cast<std::size_t>(low)];
      continue;
    }
    const auto& prev = terms[rest];
    if (prev.disjoint) {
      t.disjoint = true;
      continue;
    }
    auto o = s.lcm(*prev.lcm, F[static_cast<std::size_t>(low)]);
    if (o.is_disjoint()) {
      t.disjoint = true;
    } else {
      t.lcm = o.element();
    }
  }
  return terms;
}

CMatrix term_value(const Representation& rep, const ZTerm& t) {
  if (t.filtered || t.disjoint) return zero_matrix(rep.dimension());
  return static_cast<double>(t.sign) * rep.tt_star(LcmOutcome::common(*t.lcm));
}

ZReport finish(std::vector<Element> F, CMatrix Z, const Tolerances& tol) {
  ZReport r;
  r.F = std::move(F);
  r.Z = std::move(Z);
  auto v = is_psd(r.Z, tol);
  r.psd = v.psd;
  r.min_eigenvalue = v.min_eigenvalue;
  return r;
}

const GraphProduct* as_graph_product(const Semigroup& s) {
  return dynamic_cast<const GraphProduct*>(&s);
}

}  // namespace

ZReport z_operator(const Representation& rep, std::vector<Element> F, const Tolerances& tol,
                   ZOptions opts) {
  normalize(F);
  for (const auto& x : F) rep.semigroup().validate(x);
  const GraphProduct* filter = nullptr;
  if (opts.clique_filter) {
    filter = as_graph_product(rep.semigroup());
    if (!filter) throw CapabilityError("clique filter needs a graph product");
  }
  auto terms = subset_terms(rep.semigroup(), F, filter);
  CMatrix Z = zero_matrix(rep.dimension());
  for (const auto& t : terms) Z += term_value(rep, t);
  auto r = finish(std::move(F), std::move(Z), tol);
  r.terms = std::move(terms);
  return r;
}

std::string to_string(Completeness c) {
  return c == Completeness::Complete ? "complete" : "necessary-only";
}

std::string Strategy::label() const {
  switch (kind) {
    case Kind::ArtinGenerators: return "artin-generators";
    case Kind::ThompsonGenerators: return "thompson-generators(" + std::to_string(parameter) + ")";
    case Kind::NxNMinimal: return "nxn-minimal(" + std::to_string(parameter) + ")";
    case Kind::BSMinimal: return "bs-minimal";
    case Kind::GraphProductMinimal: return "graph-product-minimal";
    case Kind::GenericBounded:
      return "generic-bounded(" + std::to_string(parameter) + "," + std::to_string(max_set_size) + ")";
  }
  return "unknown";
}

Strategy default_strategy(const Semigroup& s) {
  switch (s.kind()) {
    case Kind::Nk:
    case Kind::Free:
    case Kind::Artin: return Strategy::artin_generators();
    case Kind::Thompson: {
      const int n = dynamic_cast<const ThompsonMonoid&>(s).active();
      return Strategy::thompson_generators((n + 1) / 2);
    }
    case Kind::NxN: return Strategy::nxn_minimal(dynamic_cast<const NxNMonoid&>(s).prime_bound());
    case Kind::BaumslagSolitar: return Strategy::bs_minimal();
    case Kind::GraphProduct: return Strategy::graph_product_minimal();
  }
  throw CapabilityError("no default strategy");
}

namespace {

void require_kind(const Semigroup& s, const Strategy& st, std::initializer_list<Kind> ok) {
  if (std::find(ok.begin(), ok.end(), s.kind()) == ok.end()) {
    throw CapabilityError("strategy " + st.label() + " does not apply to " + s.name());
  }
}

}  // namespace

std::vector<Element> strategy_family(const Semigroup& s, const Strategy& st) {
  using K = Strategy::Kind;
  switch (st.kind) {
    case K::ArtinGenerators:
      require_kind(s, st, {Kind::Nk, Kind::Free, Kind::Artin});
      return s.generators();
    case K::ThompsonGenerators: {
      require_kind(s, st, {Kind::Thompson});
      const auto& t = dynamic_cast<const ThompsonMonoid&>(s);
      // ∨{x0..x_{M-1}} has normal form x0 x2 x4 … x_{2M-2}.
      const int needed = 2 * st.parameter - 1;
      if (st.parameter < 1) throw ValidationError("thompson strategy needs at least one generator");
      if (needed > t.active()) {
        throw CapabilityError("thompson strategy with " + std::to_string(st.parameter) +
                              " test generators needs at least " + std::to_string(needed) +
                              " active generators, representation has " +
                              std::to_string(t.active()));
      }
      std::vector<Element> out;
      for (AtomId a = 0; a < st.parameter; ++a) out.emplace_back(Word{a});
      return out;
    }
    case K::NxNMinimal:
      require_kind(s, st, {Kind::NxN});
      return nxn_minimal_set(st.parameter);
    case K::BSMinimal:
      require_kind(s, st, {Kind::BaumslagSolitar});
      return dynamic_cast<const BaumslagSolitarMonoid&>(s).reduced_minimal_set();
    case K::GraphProductMinimal: {
      require_kind(s, st, {Kind::GraphProduct});
      const auto& gp = dynamic_cast<const GraphProduct&>(s);
      std::vector<Element> out;
      for (std::size_t v = 0; v < gp.vertex_count(); ++v) {
        const auto& comp = *gp.vertex(static_cast<int>(v)).semigroup;
        for (auto& x : strategy_family(comp, default_strategy(comp))) {
          out.push_back(gp.single(static_cast<int>(v), std::move(x)));
        }
      }
      normalize(out);
      return out;
    }
    case K::GenericBounded: {
      auto ball = s.ball(st.parameter);
      std::erase_if(ball, [&](const Element& x) { return s.is_invertible(x); });
      return ball;
    }
  }
  return {};
}

Completeness strategy_completeness(const Semigroup& s, const Strategy& st) {
  using K = Strategy::Kind;
  switch (st.kind) {
    case K::ArtinGenerators: {
      if (s.kind() != Kind::Artin) return Completeness::Complete;
      const auto& a = dynamic_cast<const ArtinMonoid&>(s);
      return (a.right_angled() || a.finite_type()) ? Completeness::Complete
                                                   : Completeness::NecessaryOnly;
    }
    case K::BSMinimal: return Completeness::Complete;
    case K::GraphProductMinimal: {
      const auto& gp = dynamic_cast<const GraphProduct&>(s);
      for (std::size_t v = 0; v < gp.vertex_count(); ++v) {
        const auto& comp = *gp.vertex(static_cast<int>(v)).semigroup;
        if (strategy_completeness(comp, default_strategy(comp)) != Completeness::Complete) {
          return Completeness::NecessaryOnly;
        }
      }
      return Completeness::Complete;
    }
    default: return Completeness::NecessaryOnly;
  }
}

StarRegularityReport check_star_regular(const Representation& rep, const Strategy& st,
                                        const Tolerances& tol) {
  const auto& s = rep.semigroup();
  StarRegularityReport out;
  out.strategy = st;
  out.completeness = strategy_completeness(s, st);
  out.family = strategy_family(s, st);
  const auto& fam = out.family;
  const std::size_t d = rep.dimension();

  if (st.kind == Strategy::Kind::GenericBounded) {
    // All subsets of the pool of size ≤ max_set_size, by size then index.
    const std::size_t n = fam.size();
    std::vector<std::vector<std::size_t>> chosen{{}};
    for (int size = 1; size <= st.max_set_size; ++size) {
      std::vector<std::size_t> idx(static_cast<std::size_t>(size));
      std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t from) {
        if (pos == idx.size()) {
          chosen.push_back(idx);
          return;
        }
        for (std::size_t i = from; i < n; ++i) {
          idx[pos] = i;
          rec(pos + 1, i + 1);
        }
      };
      rec(0, 0);
    }
    for (const auto& c : chosen) {
      std::vector<Element> F;
      for (auto i : c) F.push_back(fam[i]);
      auto r = z_operator(rep, F, tol);
      r.terms.clear();
      out.reports.push_back(std::move(r));
    }
  } else {
    const GraphProduct* filter =
        st.kind == Strategy::Kind::GraphProductMinimal ? as_graph_product(s) : nullptr;
    auto terms = subset_terms(s, fam, filter);
    // Z for every F at once: sum of signed terms over all subsets of F.
    std::vector<CMatrix> acc(terms.size());
    for (std::size_t m = 0; m < terms.size(); ++m) acc[m] = term_value(rep, terms[m]);
    for (std::size_t i = 0; i < fam.size(); ++i) {
      const std::size_t bit = std::size_t{1} << i;
      for (std::size_t m = 0; m < acc.size(); ++m) {
        if (m & bit) acc[m] += acc[m ^ bit];
      }
    }
    for (std::size_t m = 0; m < acc.size(); ++m) {
      std::vector<Element> F;
      for (std::size_t i = 0; i < fam.size(); ++i) {
        if (m >> i & 1U) F.push_back(fam[i]);
      }
      out.reports.push_back(finish(std::move(F), std::move(acc[m]), tol));
    }
  }
  (void)d;

  for (std::size_t i = 0; i < out.reports.size(); ++i) {
    const auto& r = out.reports[i];
    if (r.psd) continue;
    out.regular = false;
    if (!out.witness || r.min_eigenvalue < out.reports[*out.witness].min_eigenvalue) out.witness = i;
  }
  return out;
}

// ---------------------------------------------------------------------------

ReductionSplit reduction_split(const Semigroup& s, const std::vector<Element>& F,
                               std::size_t index, const Element& p1, const Element& q) {
  if (index >= F.size() || s.multiply(p1, q) != F[index]) {
    throw ValidationError("reduction_split: F[index] is not p1·q");
  }
  ReductionSplit out;
  out.kept = F;
  out.kept[index] = p1;
  out.conjugated.push_back(q);
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (i == index) continue;
    auto o = s.lcm(p1, F[i]);
    if (o.is_disjoint()) continue;
    auto rest = s.left_divide(p1, o.element());
    if (!rest) throw Error("reduction_split: lcm is not a right multiple of p1");
    out.conjugated.push_back(*rest);
  }
  normalize(out.kept);
  normalize(out.conjugated);
  return out;
}

std::string to_string(LeafKind k) {
  switch (k) {
    case LeafKind::MinimalSet: return "minimal-set";
    case LeafKind::ContainsInvertible: return "contains-invertible";
    case LeafKind::DuplicateIdealReduced: return "duplicate-ideal-reduced";
  }
  return "unknown";
}

std::size_t Certificate::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const CertificateNode& n) { return n.leaf; }));
}

Certificate reduction_certificate(const Representation& rep, std::vector<Element> F,
                                  const Tolerances& tol, std::size_t node_budget) {
  const auto& s = rep.semigroup();
  if (!s.capabilities().dcc) throw CapabilityError(s.name() + " does not satisfy DCC");
  Certificate cert;
  cert.identity_tolerance = 10 * tol.identity_eps;

  struct Pending {
    std::vector<Element> F;
    Element conjugator;
    int parent;
    bool kept_side;
  };
  std::vector<Pending> stack{{std::move(F), s.identity(), -1, true}};
  while (!stack.empty()) {
    auto item = std::move(stack.back());
    stack.pop_back();
    if (cert.nodes.size() >= node_budget) {
      throw DepthExhausted("reduction_certificate: more than " + std::to_string(node_budget) +
                           " nodes");
    }
    const int id = static_cast<int>(cert.nodes.size());
    if (item.parent >= 0) {
      auto& parent = cert.nodes[static_cast<std::size_t>(item.parent)];
      (item.kept_side ? parent.kept_child : parent.conjugated_child) = id;
    }
    CertificateNode node;
    const std::size_t raw = item.F.size();
    normalize(item.F);
    const bool deduplicated = item.F.size() != raw;
    node.F = item.F;
    node.conjugator = item.conjugator;
    node.Z = z_operator(rep, node.F, tol).Z;
    node.min_eigenvalue = is_psd(node.Z, tol).min_eigenvalue;

    const bool has_unit = std::any_of(node.F.begin(), node.F.end(),
                                      [&](const Element& x) { return s.is_invertible(x); });
    auto split_at = std::find_if(node.F.begin(), node.F.end(),
                                 [&](const Element& x) { return !s.in_minimal_set(x); });
    if (has_unit) {
      node.leaf = true;
      node.leaf_kind = LeafKind::ContainsInvertible;
    } else if (split_at == node.F.end()) {
      node.leaf = true;
      node.leaf_kind = deduplicated ? LeafKind::DuplicateIdealReduced : LeafKind::MinimalSet;
    } else {
      const auto index = static_cast<std::size_t>(split_at - node.F.begin());
      auto sp = s.split_first(*split_at);
      if (!sp) throw Error("reduction_certificate: cannot split " + s.format(*split_at));
      node.split_element = *split_at;
      node.p1 = sp->first;
      node.q = sp->second;
      auto parts = reduction_split(s, node.F, index, node.p1, node.q);
      // Children are pushed so the kept side is processed first.
      stack.push_back({std::move(parts.conjugated), s.multiply(item.conjugator, node.p1), id, false});
      stack.push_back({std::move(parts.kept), item.conjugator, id, true});
    }
    cert.nodes.push_back(std::move(node));
  }

  const std::size_t d = rep.dimension();
  CMatrix flat = zero_matrix(d);
  for (auto& node : cert.nodes) {
    if (node.leaf) {
      if (node.min_eigenvalue < -tol.psd_eps) cert.leaves_psd = false;
      const CMatrix t = rep.evaluate(node.conjugator);
      flat += t * node.Z * t.adjoint();
      continue;
    }
    const auto& kept = cert.nodes[static_cast<std::size_t>(node.kept_child)];
    const auto& conj = cert.nodes[static_cast<std::size_t>(node.conjugated_child)];
    const CMatrix t = rep.evaluate(node.p1);
    node.identity_residual = relative_residual(node.Z, kept.Z + t * conj.Z * t.adjoint());
    cert.max_identity_residual = std::max(cert.max_identity_residual, node.identity_residual);
  }
  cert.flattening_residual = relative_residual(cert.nodes.front().Z, flat);
  return cert;
}

// ---------------------------------------------------------------------------

DoublyCommutingReport doubly_commuting_check(const Representation& rep,
                                             const std::vector<std::vector<Element>>& samples,
                                             const Tolerances& tol) {
  const auto* gp = as_graph_product(rep.semigroup());
  if (!gp) throw CapabilityError("doubly_commuting_check needs a graph product");
  if (!gp->complete()) throw CapabilityError("doubly_commuting_check needs a complete graph");

  DoublyCommutingReport out;
  auto names = [&](int v) {
    std::vector<std::string> ns;
    const auto& comp = *gp->vertex(v).semigroup;
    for (const auto& g : comp.generators()) ns.push_back(gp->generator_name(v, comp.factor(g).front()));
    return ns;
  };
  const int n = static_cast<int>(gp->vertex_count());
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      for (const auto& a : names(u)) {
        for (const auto& b : names(v)) {
          const CMatrix& A = rep.image(a);
          const CMatrix& B = rep.image(b);
          out.commutator_residual = std::max(
              {out.commutator_residual, operator_norm(A * B - B * A),
               operator_norm(A * B.adjoint() - B.adjoint() * A)});
        }
      }
    }
  }
  out.doubly_commuting = out.commutator_residual <= tol.identity_eps;

  std::vector<Representation> parts;
  for (int v = 0; v < n; ++v) parts.push_back(rep.restrict_to_vertex(v));
  for (const auto& F : samples) {
    std::vector<std::vector<Element>> by_vertex(static_cast<std::size_t>(n));
    for (const auto& x : F) {
      auto v = gp->support_vertex(x);
      if (!v) throw ValidationError("doubly_commuting_check: " + gp->format(x) + " is not a single syllable");
      by_vertex[static_cast<std::size_t>(*v)].push_back(x.parts.front());
    }
    const CMatrix joint = z_operator(rep, F, tol).Z;
    CMatrix product = identity_matrix(rep.dimension());
    for (int v = 0; v < n; ++v) {
      product = product * z_operator(parts[static_cast<std::size_t>(v)],
                                     by_vertex[static_cast<std::size_t>(v)], tol).Z;
    }
    out.factorization_residual = std::max(out.factorization_residual, relative_residual(joint, product));
    ++out.samples;
  }
  return out;
}

std::vector<std::vector<Element>> sample_vertex_families(const GraphProduct& g, std::uint64_t seed,
                                                         std::size_t count, std::int64_t max_len,
                                                         std::size_t per_vertex) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Element>> pools;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const auto& comp = *g.vertex(static_cast<int>(v)).semigroup;
    auto ball = comp.ball(max_len);
    std::erase_if(ball, [&](const Element& x) { return comp.is_invertible(x); });
    pools.push_back(std::move(ball));
  }
  std::vector<std::vector<Element>> out;
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<Element> F;
    for (std::size_t v = 0; v < pools.size(); ++v) {
      auto pool = pools[v];
      std::shuffle(pool.begin(), pool.end(), rng);
      std::uniform_int_distribution<std::size_t> take(0, std::min(per_vertex, pool.size()));
      const std::size_t t = take(rng);
      for (std::size_t i = 0; i < t; ++i) F.push_back(g.single(static_cast<int>(v), pool[i]));
    }
    out.push_back(std::move(F));
  }
  return out;
}

}  // namespace rlcm
