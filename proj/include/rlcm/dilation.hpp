#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>

#include "rlcm/representation.hpp"

namespace rlcm {

/// K(p,q) = T(p⁻¹s)T(q⁻¹s)* for s = p∨q, zero when p and q are disjoint.
class Kernel {
 public:
  explicit Kernel(Representation rep);

  const Representation& representation() const { return rep_; }
  const Semigroup& semigroup() const { return rep_.semigroup(); }
  std::size_t dimension() const { return rep_.dimension(); }

  /// Memoized; safe to call from several threads.
  CMatrix operator()(const Element& p, const Element& q) const;

 private:
  Representation rep_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<Element, Element>, CMatrix> cache_;
};

CMatrix kernel_eval(const Kernel& k, const Element& p, const Element& q);

/// Block (i,j) is K(S[i], S[j]), so that h*Gh = Σ⟨K(p,q)h_q, h_p⟩.
struct GramMatrix {
  std::vector<Element> S;
  std::size_t block = 0;
  CMatrix G;
};

GramMatrix gram(const Kernel& k, std::vector<Element> S);

struct Truncation {
  std::vector<Element> S;
  /// Ball elements left out because some kernel value with them needs a
  /// generator the representation does not define (Thompson).
  std::size_t dropped = 0;
};

/// Ball of radius L with the identity first, kept greedily while every kernel
/// value against the elements kept so far can be evaluated.
Truncation default_truncation(const Kernel& k, std::int64_t L);

/// V(g) on the span of the columns Φ_p with g·p ∈ S.
struct Shift {
  Element g;
  std::vector<std::size_t> domain;  // indices p into S
  std::vector<std::size_t> image;   // indices of g·p
  CMatrix V;                        // rank × rank, zero off the domain
  double isometry_residual = 0.0;   // ‖(VA)*(VA) − A*A‖, relative
  double consistency_residual = 0.0;  // ‖VA − B‖, relative
};

/// Finite section of the minimal isometric dilation built from the Gram matrix
/// of K on a truncation S.  The quotient space is ℂ^rank with δ_p⊗h ↦ Φ_p h.
class TruncatedDilation {
 public:
  TruncatedDilation(std::shared_ptr<const Kernel> kernel, std::vector<Element> S, CMatrix Phi,
                    double gram_min_eigenvalue, std::size_t borderline);

  const Kernel& kernel() const { return *kernel_; }
  const std::vector<Element>& truncation() const { return S_; }
  std::size_t rank() const { return static_cast<std::size_t>(Phi_.rows()); }
  std::size_t base_dimension() const { return kernel_->dimension(); }
  std::optional<std::size_t> index_of(const Element& x) const;

  /// Φ_p: rank × d.
  CMatrix column(std::size_t index) const;
  /// Isometric embedding of H as δ_e⊗H.
  CMatrix embedding() const { return column(0); }
  const CMatrix& factor() const { return Phi_; }

  /// nullptr when no p ∈ S has g·p ∈ S.
  const Shift* shift(const Element& g) const;

  double gram_min_eigenvalue() const { return gram_min_; }
  /// Eigenvalues within a factor 10 of the null cutoff.
  std::size_t borderline_eigenvalues() const { return borderline_; }

 private:
  std::shared_ptr<const Kernel> kernel_;
  std::vector<Element> S_;
  std::map<Element, std::size_t> index_;
  CMatrix Phi_;
  double gram_min_;
  std::size_t borderline_;
  mutable std::mutex mu_;
  mutable std::map<Element, std::unique_ptr<Shift>> shifts_;
};

/// Throws NotPsdError with λ_min when the Gram matrix on S is not PSD.
TruncatedDilation naimark_truncated(std::shared_ptr<const Kernel> kernel, std::vector<Element> S,
                                    const Tolerances& tol = {});

struct DilationPropertyReport {
  double compression_residual = 0.0;  // max over p ∈ S of ‖Φ_e* V(p) Φ_e − T(p)‖
  double isometry_residual = 0.0;     // max over generators and S
  double consistency_residual = 0.0;
  std::size_t compressions_checked = 0;
  std::size_t shifts_checked = 0;
};

DilationPropertyReport check_dilation_properties(const TruncatedDilation& D);

struct CovarianceOptions {
  /// Element pairs from S checked in addition to all generator pairs.
  std::size_t sampled_pairs = 32;
  std::uint64_t seed = 1;
};

struct CovariancePair {
  Element p;
  Element q;
  bool disjoint = false;
  double residual = 0.0;
  std::size_t blocks = 0;  // applicable (t, r) blocks
};

struct CovarianceReport {
  double max_residual = 0.0;
  std::size_t pairs_checked = 0;
  std::size_t blocks_checked = 0;
  std::size_t blocks_total = 0;
  double coverage() const {
    return blocks_total == 0 ? 0.0
                             : static_cast<double>(blocks_checked) / static_cast<double>(blocks_total);
  }
  std::vector<CovariancePair> pairs;
};

/// V(p)*V(q) against V(p⁻¹s)V(q⁻¹s)* (or 0) tested on ⟨V(q)Φ_t h, V(p)Φ_r k⟩
/// for the t, r ∈ S where both sides are determined by the truncation.
/// Throws Error("truncation insufficient") when no block applies.
CovarianceReport verify_nica_covariance(const TruncatedDilation& D, CovarianceOptions opts = {});

/// Φ_e* Π_{p∈F}(I − V(p)V(p)*) Φ_e.  Exact for the truncation when S holds
/// every ∨U, U ⊆ F.
CMatrix compressed_defect_product(const TruncatedDilation& D, const std::vector<Element>& F);

/// Z(F_A) not PSD during cholesky_factor.
class ZNotPsdError : public NotPsdError {
 public:
  ZNotPsdError(const std::string& what, double min_eigenvalue, std::vector<Element> family)
      : NotPsdError(what, min_eigenvalue), family_(std::move(family)) {}
  const std::vector<Element>& family() const { return family_; }

 private:
  std::vector<Element> family_;
};

struct CholeskyFactor {
  std::vector<Element> F0;
  /// Subsets of F0 (bitmasks) with a common multiple, by decreasing size.
  std::vector<std::uint64_t> subsets;
  std::vector<Element> representatives;  // s_A
  CMatrix K;  // K[F₁], assembled by kernel_eval
  CMatrix R;
  double residual = 0.0;               // ‖K − RR*‖ / ‖K‖
  double z_crosscheck_residual = 0.0;  // Z(F_A) from the subset sum vs z_operator
  bool lower_triangular = true;

  bool identity_holds(double tol = 1e-9) const { return residual <= tol; }
};

CholeskyFactor cholesky_factor(const Representation& rep, std::vector<Element> F0,
                               const Tolerances& tol = {});

}  // namespace rlcm
