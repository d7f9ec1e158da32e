#pragma once

#include <complex>

#include <Eigen/Dense>

#include "rlcm/semigroup.hpp"

namespace rlcm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

struct Tolerances {
  double psd_eps = 1e-9;       // λ_min ≥ −psd_eps counts as PSD
  double null_eps = 1e-8;      // relative eigenvalue cutoff for null spaces
  double identity_eps = 1e-10; // relation and identity residuals
};

/// A matrix required to be PSD has an eigenvalue below −psd_eps.
class NotPsdError : public Error {
 public:
  NotPsdError(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

struct PsdVerdict {
  bool psd = false;
  double min_eigenvalue = 0.0;
};

/// (M + M*) / 2.
CMatrix hermitize(const CMatrix& m);

/// Hermitian part's smallest eigenvalue against −psd_eps.
PsdVerdict is_psd(const CMatrix& m, const Tolerances& tol = {});

/// Eigenvalues of the Hermitian part, ascending.
Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m);

/// Unique PSD square root; eigenvalues in [−psd_eps, 0) are clamped to zero.
/// Throws NotPsdError below that.
CMatrix psd_sqrt(const CMatrix& m, const Tolerances& tol = {});

/// Largest singular value.
double operator_norm(const CMatrix& m);

/// ‖a − b‖ / max(1, ‖a‖, ‖b‖).
double relative_residual(const CMatrix& a, const CMatrix& b);

CMatrix identity_matrix(std::size_t d);
CMatrix zero_matrix(std::size_t d);

}  // namespace rlcm
