#pragma once

#include <map>

#include "rlcm/linalg.hpp"
#include "rlcm/semigroup.hpp"

namespace rlcm {

struct RelationCheck {
  std::string label;
  double residual = 0.0;
  bool ok = true;
};

struct RelationReport {
  std::vector<RelationCheck> relations;
  std::vector<RelationCheck> contractions;
  bool ok() const;
  double max_residual() const;
  /// First failing check, empty when everything passes.
  std::string first_failure() const;
};

/// Relation or contractivity check failed where it was required.
class RelationError : public Error {
 public:
  RelationError(const std::string& what, RelationReport report)
      : Error(what), report_(std::move(report)) {}
  const RelationReport& report() const { return report_; }

 private:
  RelationReport report_;
};

/// Assignment of d×d matrices to the generators of a semigroup.
class Representation {
 public:
  /// Keys may be any spelling the semigroup parses to a generator; they are
  /// stored under the canonical generator name.  Throws ValidationError on
  /// unknown or missing generators and wrong shapes.
  Representation(SemigroupHandle s, std::size_t dimension, std::map<std::string, CMatrix> images);

  /// Construct and require verify() to pass.
  static Representation verified(SemigroupHandle s, std::size_t dimension,
                                 std::map<std::string, CMatrix> images, const Tolerances& tol = {});

  const Semigroup& semigroup() const { return *semigroup_; }
  const SemigroupHandle& handle() const { return semigroup_; }
  std::size_t dimension() const { return dim_; }
  const std::map<std::string, CMatrix>& images() const { return images_; }
  const CMatrix& image(const std::string& generator) const;

  /// Defining relations (residual ≤ identity_eps · relation length) and
  /// contractivity ‖T(g)‖ ≤ 1 + identity_eps.
  RelationReport verify(const Tolerances& tol = {}) const;

  /// Product of generator images along the factorization of x.
  CMatrix evaluate(const Element& x) const;
  /// T(r)T(r)* for Common(r); 0 for Disjoint.
  CMatrix tt_star(const LcmOutcome& o) const;

  /// Graph products only: the component representation at a vertex.
  Representation restrict_to_vertex(int vertex) const;

 private:
  SemigroupHandle semigroup_;
  std::size_t dim_;
  std::map<std::string, CMatrix> images_;
};

}  // namespace rlcm
