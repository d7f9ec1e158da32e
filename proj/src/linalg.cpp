#include "rlcm/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace rlcm {

CMatrix hermitize(const CMatrix& m) { return (m + m.adjoint()) / 2.0; }

Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m) {
  if (m.rows() == 0) return Eigen::VectorXd();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

PsdVerdict is_psd(const CMatrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols()) throw ValidationError("is_psd: matrix is not square");
  if (m.rows() == 0) return {true, 0.0};
  const double lo = hermitian_eigenvalues(m).minCoeff();
  return {lo >= -tol.psd_eps, lo};
}

CMatrix psd_sqrt(const CMatrix& m, const Tolerances& tol) {
  if (m.rows() == 0) return m;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(m));
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() < -tol.psd_eps) {
    throw NotPsdError("psd_sqrt: matrix is not positive semidefinite", ev.minCoeff());
  }
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = std::sqrt(std::max(ev(i), 0.0));
  const CMatrix& q = es.eigenvectors();
  return q * ev.cast<Complex>().asDiagonal() * q.adjoint();
}

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double relative_residual(const CMatrix& a, const CMatrix& b) {
  const double scale = std::max({1.0, operator_norm(a), operator_norm(b)});
  return operator_norm(a - b) / scale;
}

CMatrix identity_matrix(std::size_t d) {
  return CMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

CMatrix zero_matrix(std::size_t d) {
  return CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

}  // namespace rlcm
