#include "rlcm/representation.hpp"

#include <algorithm>

#include "rlcm/graph_product.hpp"

namespace rlcm {

bool RelationReport::ok() const {
  auto good = [](const RelationCheck& c) { return c.ok; };
  return std::all_of(relations.begin(), relations.end(), good) &&
         std::all_of(contractions.begin(), contractions.end(), good);
}

double RelationReport::max_residual() const {
  double m = 0.0;
  for (const auto& c : relations) m = std::max(m, c.residual);
  return m;
}

std::string RelationReport::first_failure() const {
  for (const auto& c : relations) {
    if (!c.ok) return "relation " + c.label + " fails (residual " + std::to_string(c.residual) + ")";
  }
  for (const auto& c : contractions) {
    if (!c.ok) return "generator " + c.label + " is not a contraction (norm " +
                      std::to_string(c.residual) + ")";
  }
  return {};
}

Representation::Representation(SemigroupHandle s, std::size_t dimension,
                               std::map<std::string, CMatrix> images)
    : semigroup_(std::move(s)), dim_(dimension) {
  if (!semigroup_) throw ValidationError("representation: missing semigroup");
  if (dim_ == 0) throw ValidationError("representation: dimension must be positive");
  std::vector<std::string> wanted;
  for (const auto& g : semigroup_->generators()) wanted.push_back(semigroup_->factor(g).front());
  for (auto& [key, m] : images) {
    std::string canon = key;
    if (std::find(wanted.begin(), wanted.end(), key) == wanted.end()) {
      auto f = semigroup_->factor(semigroup_->parse(key));
      if (f.size() != 1) {
        throw ValidationError("representation: '" + key + "' is not a generator of " +
                              semigroup_->name());
      }
      canon = f.front();
    }
    if (std::find(wanted.begin(), wanted.end(), canon) == wanted.end()) {
      throw ValidationError("representation: '" + key + "' is not an active generator of " +
                            semigroup_->name());
    }
    if (static_cast<std::size_t>(m.rows()) != dim_ || static_cast<std::size_t>(m.cols()) != dim_) {
      throw ValidationError("representation: image of " + key + " has the wrong shape");
    }
    if (!images_.emplace(canon, std::move(m)).second) {
      throw ValidationError("representation: generator " + canon + " given twice");
    }
  }
  for (const auto& w : wanted) {
    if (!images_.count(w)) throw ValidationError("representation: no image for generator " + w);
  }
}

Representation Representation::verified(SemigroupHandle s, std::size_t dimension,
                                         std::map<std::string, CMatrix> images,
                                         const Tolerances& tol) {
  Representation rep(std::move(s), dimension, std::move(images));
  auto report = rep.verify(tol);
  if (!report.ok()) throw RelationError("representation: " + report.first_failure(), report);
  return rep;
}

const CMatrix& Representation::image(const std::string& generator) const {
  auto it = images_.find(generator);
  if (it == images_.end()) throw ValidationError("representation: no image for " + generator);
  return it->second;
}

namespace {

std::string join(const std::vector<std::string>& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += w[i];
  }
  return out.empty() ? "1" : out;
}

}  // namespace

RelationReport Representation::verify(const Tolerances& tol) const {
  RelationReport report;
  auto product = [&](const std::vector<std::string>& w) {
    CMatrix m = identity_matrix(dim_);
    for (const auto& g : w) m = m * image(g);
    return m;
  };
  for (const auto& r : semigroup_->relations()) {
    RelationCheck c;
    c.label = join(r.lhs) + " = " + join(r.rhs);
    c.residual = operator_norm(product(r.lhs) - product(r.rhs));
    const double len = static_cast<double>(std::max(r.lhs.size(), r.rhs.size()));
    c.ok = c.residual <= tol.identity_eps * std::max(1.0, len);
    report.relations.push_back(std::move(c));
  }
  for (const auto& [name, m] : images_) {
    RelationCheck c;
    c.label = name;
    c.residual = operator_norm(m);
    c.ok = c.residual <= 1.0 + tol.identity_eps;
    report.contractions.push_back(std::move(c));
  }
  return report;
}

CMatrix Representation::evaluate(const Element& x) const {
  CMatrix m = identity_matrix(dim_);
  for (const auto& g : semigroup_->factor(x)) m = m * image(g);
  return m;
}

CMatrix Representation::tt_star(const LcmOutcome& o) const {
  if (o.is_disjoint()) return zero_matrix(dim_);
  CMatrix t = evaluate(o.element());
  return t * t.adjoint();
}

Representation Representation::restrict_to_vertex(int vertex) const {
  const auto* gp = dynamic_cast<const GraphProduct*>(semigroup_.get());
  if (!gp) throw CapabilityError("restrict_to_vertex: not a graph product");
  const auto& comp = gp->vertex(vertex).semigroup;
  std::map<std::string, CMatrix> sub;
  for (const auto& g : comp->generators()) {
    const auto n = comp->factor(g).front();
    sub.emplace(n, image(gp->generator_name(vertex, n)));
  }
  return Representation(comp, dim_, std::move(sub));
}

}  // namespace rlcm
