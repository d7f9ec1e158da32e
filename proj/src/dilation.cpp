#include "rlcm/dilation.hpp"

#include <algorithm>
#include <bit>
#include <random>

#include "rlcm/regularity.hpp"

namespace rlcm {

Kernel::Kernel(Representation rep) : rep_(std::move(rep)) {}

CMatrix Kernel::operator()(const Element& p, const Element& q) const {
  auto key = std::make_pair(p, q);
  {
    std::lock_guard lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  const auto& s = rep_.semigroup();
  CMatrix value;
  auto o = s.lcm(p, q);
  if (o.is_disjoint()) {
    value = zero_matrix(rep_.dimension());
  } else {
    auto a = s.left_divide(p, o.element());
    auto b = s.left_divide(q, o.element());
    if (!a || !b) throw Error("kernel: lcm is not a common multiple");
    value = rep_.evaluate(*a) * rep_.evaluate(*b).adjoint();
  }
  std::lock_guard lock(mu_);
  return cache_.emplace(std::move(key), std::move(value)).first->second;
}

CMatrix kernel_eval(const Kernel& k, const Element& p, const Element& q) { return k(p, q); }

GramMatrix gram(const Kernel& k, std::vector<Element> S) {
  const auto d = static_cast<Eigen::Index>(k.dimension());
  const auto n = static_cast<Eigen::Index>(S.size());
  GramMatrix g;
  g.block = k.dimension();
  g.G = CMatrix::Zero(n * d, n * d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      g.G.block(i * d, j * d, d, d) =
          k(S[static_cast<std::size_t>(i)], S[static_cast<std::size_t>(j)]);
    }
  }
  g.S = std::move(S);
  return g;
}

Truncation default_truncation(const Kernel& k, std::int64_t L) {
  const auto& s = k.semigroup();
  const Element e = s.identity();
  Truncation out;
  out.S.push_back(e);
  for (const auto& x : s.ball(L)) {
    if (x == e) continue;
    try {
      k(x, x);
      for (const auto& y : out.S) {
        k(x, y);
        k(y, x);
      }
      out.S.push_back(x);
    } catch (const CapabilityError&) {
      ++out.dropped;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

TruncatedDilation::TruncatedDilation(std::shared_ptr<const Kernel> kernel, std::vector<Element> S,
                                     CMatrix Phi, double gram_min_eigenvalue,
                                     std::size_t borderline)
    : kernel_(std::move(kernel)),
      S_(std::move(S)),
      Phi_(std::move(Phi)),
      gram_min_(gram_min_eigenvalue),
      borderline_(borderline) {
  for (std::size_t i = 0; i < S_.size(); ++i) index_.emplace(S_[i], i);
}

std::optional<std::size_t> TruncatedDilation::index_of(const Element& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

CMatrix TruncatedDilation::column(std::size_t index) const {
  const auto d = static_cast<Eigen::Index>(base_dimension());
  return Phi_.middleCols(static_cast<Eigen::Index>(index) * d, d);
}

const Shift* TruncatedDilation::shift(const Element& g) const {
  {
    std::lock_guard lock(mu_);
    auto it = shifts_.find(g);
    if (it != shifts_.end()) return it->second.get();
  }
  const auto& s = kernel_->semigroup();
  auto sh = std::make_unique<Shift>();
  sh->g = g;
  for (std::size_t i = 0; i < S_.size(); ++i) {
    if (auto j = index_of(s.multiply(g, S_[i]))) {
      sh->domain.push_back(i);
      sh->image.push_back(*j);
    }
  }
  std::unique_ptr<Shift> result;
  if (!sh->domain.empty()) {
    const auto d = static_cast<Eigen::Index>(base_dimension());
    const auto k = static_cast<Eigen::Index>(sh->domain.size());
    CMatrix A(Phi_.rows(), k * d);
    CMatrix B(Phi_.rows(), k * d);
    for (Eigen::Index c = 0; c < k; ++c) {
      A.middleCols(c * d, d) = column(sh->domain[static_cast<std::size_t>(c)]);
      B.middleCols(c * d, d) = column(sh->image[static_cast<std::size_t>(c)]);
    }
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(A);
    cod.setThreshold(1e-10);
    sh->V = B * cod.pseudoInverse();
    const CMatrix VA = sh->V * A;
    sh->consistency_residual = relative_residual(VA, B);
    sh->isometry_residual = relative_residual(VA.adjoint() * VA, A.adjoint() * A);
    result = std::move(sh);
  }
  std::lock_guard lock(mu_);
  return shifts_.emplace(g, std::move(result)).first->second.get();
}

TruncatedDilation naimark_truncated(std::shared_ptr<const Kernel> kernel, std::vector<Element> S,
                                    const Tolerances& tol) {
  const auto& s = kernel->semigroup();
  if (S.empty() || S.front() != s.identity()) {
    throw ValidationError("naimark_truncated: the truncation must start with the identity");
  }
  auto g = gram(*kernel, S);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(g.G));
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double lmin = ev.minCoeff();
  if (lmin < -tol.psd_eps) {
    throw NotPsdError("Gram matrix on the truncation is not PSD, lambda_min = " +
                          std::to_string(lmin),
                      lmin);
  }
  const double cutoff = tol.null_eps * std::max(ev.maxCoeff(), 1e-300);
  std::vector<Eigen::Index> keep;
  std::size_t borderline = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff) keep.push_back(i);
    if (ev(i) > cutoff / 10 && ev(i) < cutoff * 10) ++borderline;
  }
  // G = Φ*Φ with Φ = Λ^{1/2} Q* restricted to the kept eigenvectors.
  CMatrix Phi(static_cast<Eigen::Index>(keep.size()), g.G.cols());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    const auto i = keep[r];
    Phi.row(static_cast<Eigen::Index>(r)) = std::sqrt(ev(i)) * es.eigenvectors().col(i).adjoint();
  }
  return TruncatedDilation(std::move(kernel), std::move(S), std::move(Phi), lmin, borderline);
}

DilationPropertyReport check_dilation_properties(const TruncatedDilation& D) {
  DilationPropertyReport out;
  const auto& rep = D.kernel().representation();
  const auto& s = rep.semigroup();
  const CMatrix J = D.embedding();
  auto elements = D.truncation();
  for (auto& g : s.generators()) {
    if (!D.index_of(g)) elements.push_back(g);
  }
  for (const auto& p : elements) {
    if (s.is_invertible(p)) continue;
    const Shift* sh = D.shift(p);
    if (!sh) continue;
    ++out.shifts_checked;
    out.isometry_residual = std::max(out.isometry_residual, sh->isometry_residual);
    out.consistency_residual = std::max(out.consistency_residual, sh->consistency_residual);
    if (D.index_of(p)) {
      out.compression_residual = std::max(
          out.compression_residual, relative_residual(J.adjoint() * sh->V * J, rep.evaluate(p)));
      ++out.compressions_checked;
    }
  }
  return out;
}

namespace {

// V(w)*Φ_t for the t where the truncation determines it.
std::optional<CMatrix> adjoint_shift_column(const TruncatedDilation& D, const Element& w,
                                            std::size_t t) {
  const auto& rep = D.kernel().representation();
  const auto& s = rep.semigroup();
  if (s.is_invertible(w)) return D.column(t);
  if (t == 0) {
    try {
      return CMatrix(D.embedding() * rep.evaluate(w).adjoint());
    } catch (const CapabilityError&) {
      return std::nullopt;
    }
  }
  auto rest = s.left_divide(w, D.truncation()[t]);
  if (!rest || !D.index_of(*rest)) return std::nullopt;
  const Shift* sh = D.shift(w);
  if (!sh) return std::nullopt;
  return CMatrix(sh->V.adjoint() * D.column(t));
}

std::optional<CovariancePair> check_pair(const TruncatedDilation& D, const Element& p,
                                         const Element& q, std::size_t& total) {
  const auto& s = D.kernel().semigroup();
  const Shift* vp = D.shift(p);
  const Shift* vq = D.shift(q);
  const std::size_t n = D.truncation().size();
  total += n * n;
  if (!vp || !vq) return std::nullopt;

  CovariancePair pair;
  pair.p = p;
  pair.q = q;
  auto o = s.lcm(p, q);
  pair.disjoint = o.is_disjoint();
  Element w, w2;
  if (!pair.disjoint) {
    w = *s.left_divide(p, o.element());
    w2 = *s.left_divide(q, o.element());
  }

  // Column t: V(q)Φ_t and V(q⁻¹s)*Φ_t; row r likewise with p.
  struct Side {
    std::vector<CMatrix> shifted;
    std::vector<CMatrix> adjoint;
  };
  auto side = [&](const Shift* v, const Element& quotient) {
    Side out;
    for (std::size_t t : v->domain) {
      std::optional<CMatrix> a;
      if (!pair.disjoint) {
        a = adjoint_shift_column(D, quotient, t);
        if (!a) continue;
      }
      out.shifted.push_back(v->V * D.column(t));
      out.adjoint.push_back(a ? *a : CMatrix());
    }
    return out;
  };
  const Side cols = side(vq, w2);
  const Side rows = side(vp, w);
  if (cols.shifted.empty() || rows.shifted.empty()) return std::nullopt;

  const auto d = static_cast<Eigen::Index>(D.base_dimension());
  const auto nr = static_cast<Eigen::Index>(rows.shifted.size());
  const auto nc = static_cast<Eigen::Index>(cols.shifted.size());
  CMatrix lhs(nr * d, nc * d);
  CMatrix rhs = CMatrix::Zero(nr * d, nc * d);
  for (Eigen::Index r = 0; r < nr; ++r) {
    for (Eigen::Index c = 0; c < nc; ++c) {
      const auto ri = static_cast<std::size_t>(r);
      const auto ci = static_cast<std::size_t>(c);
      lhs.block(r * d, c * d, d, d) = rows.shifted[ri].adjoint() * cols.shifted[ci];
      if (!pair.disjoint) rhs.block(r * d, c * d, d, d) = rows.adjoint[ri].adjoint() * cols.adjoint[ci];
    }
  }
  pair.residual = relative_residual(lhs, rhs);
  pair.blocks = static_cast<std::size_t>(nr * nc);
  return pair;
}

}  // namespace

CovarianceReport verify_nica_covariance(const TruncatedDilation& D, CovarianceOptions opts) {
  const auto& s = D.kernel().semigroup();
  std::vector<std::pair<Element, Element>> todo;
  const auto gens = s.generators();
  for (const auto& a : gens) {
    for (const auto& b : gens) todo.emplace_back(a, b);
  }
  std::vector<Element> pool;
  for (const auto& x : D.truncation()) {
    if (!s.is_invertible(x)) pool.push_back(x);
  }
  if (!pool.empty()) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (std::size_t i = 0; i < opts.sampled_pairs; ++i) todo.emplace_back(pool[pick(rng)], pool[pick(rng)]);
  }

  CovarianceReport out;
  for (const auto& [p, q] : todo) {
    auto r = check_pair(D, p, q, out.blocks_total);
    if (!r) continue;
    ++out.pairs_checked;
    out.blocks_checked += r->blocks;
    out.max_residual = std::max(out.max_residual, r->residual);
    out.pairs.push_back(std::move(*r));
  }
  if (out.blocks_checked == 0) throw Error("verify_nica_covariance: truncation insufficient");
  return out;
}

CMatrix compressed_defect_product(const TruncatedDilation& D, const std::vector<Element>& F) {
  const auto& s = D.kernel().semigroup();
  CMatrix X = D.embedding();
  for (const auto& p : F) {
    const Shift* sh = D.shift(p);
    if (!sh) throw Error("compressed_defect_product: no shift for " + s.format(p));
    X -= sh->V * (sh->V.adjoint() * X);
  }
  return D.embedding().adjoint() * X;
}

// ---------------------------------------------------------------------------

CholeskyFactor cholesky_factor(const Representation& rep, std::vector<Element> F0,
                               const Tolerances& tol) {
  const auto& s = rep.semigroup();
  std::sort(F0.begin(), F0.end());
  F0.erase(std::unique(F0.begin(), F0.end()), F0.end());
  if (F0.size() > 12) throw ValidationError("cholesky_factor: F0 too large");
  const std::size_t n = F0.size();
  const std::size_t total = std::size_t{1} << n;

  std::vector<std::optional<Element>> rep_of(total);
  rep_of[0] = s.identity();
  for (std::size_t mask = 1; mask < total; ++mask) {
    const std::size_t rest = mask & (mask - 1);
    const auto& add = F0[static_cast<std::size_t>(std::countr_zero(mask))];
    if (rest == 0) {
      rep_of[mask] = add;
    } else if (rep_of[rest]) {
      auto o = s.lcm(*rep_of[rest], add);
      if (!o.is_disjoint()) rep_of[mask] = o.element();
    }
  }

  CholeskyFactor out;
  out.F0 = F0;
  for (std::size_t mask = 0; mask < total; ++mask) {
    if (rep_of[mask]) out.subsets.push_back(mask);
  }
  std::stable_sort(out.subsets.begin(), out.subsets.end(), [](std::uint64_t a, std::uint64_t b) {
    return std::popcount(a) > std::popcount(b);
  });
  for (auto m : out.subsets) out.representatives.push_back(*rep_of[m]);

  const std::size_t live = out.subsets.size();
  const auto d = static_cast<Eigen::Index>(rep.dimension());
  const auto N = static_cast<Eigen::Index>(live) * d;
  Kernel kernel(rep);
  out.K = CMatrix::Zero(N, N);
  for (std::size_t i = 0; i < live; ++i) {
    for (std::size_t j = 0; j < live; ++j) {
      out.K.block(static_cast<Eigen::Index>(i) * d, static_cast<Eigen::Index>(j) * d, d, d) =
          kernel(out.representatives[i], out.representatives[j]);
    }
  }

  auto quotient = [&](const Element& a, const Element& b) {
    auto x = s.left_divide(a, b);
    if (!x) throw Error("cholesky_factor: " + s.format(a) + " does not divide " + s.format(b));
    return *x;
  };

  // Z(F_A)^{1/2} for each live A.
  std::vector<CMatrix> root(live);
  for (std::size_t j = 0; j < live; ++j) {
    const auto A = out.subsets[j];
    const Element& sA = out.representatives[j];
    CMatrix Z = zero_matrix(rep.dimension());
    for (std::size_t u = 0; u < live; ++u) {
      const auto U = out.subsets[u];
      if ((U & A) != A) continue;
      const double sign = std::popcount(U & ~A) % 2 == 0 ? 1.0 : -1.0;
      const CMatrix t = rep.evaluate(quotient(sA, out.representatives[u]));
      Z += sign * t * t.adjoint();
    }
    std::vector<Element> FA;
    for (std::size_t q = 0; q < n; ++q) {
      const auto bit = std::uint64_t{1} << q;
      if (A & bit || !rep_of[A | bit]) continue;
      FA.push_back(quotient(sA, *rep_of[A | bit]));
    }
    out.z_crosscheck_residual =
        std::max(out.z_crosscheck_residual, relative_residual(Z, z_operator(rep, FA, tol).Z));
    auto v = is_psd(Z, tol);
    if (!v.psd) {
      throw ZNotPsdError("cholesky_factor: Z(F_A) is not PSD for F_A = " + s.format_set(FA) +
                             ", lambda_min = " + std::to_string(v.min_eigenvalue),
                         v.min_eigenvalue, FA);
    }
    root[j] = psd_sqrt(Z, tol);
  }

  out.R = CMatrix::Zero(N, N);
  for (std::size_t i = 0; i < live; ++i) {
    for (std::size_t j = 0; j < live; ++j) {
      if ((out.subsets[i] & out.subsets[j]) != out.subsets[i]) continue;
      const CMatrix t = rep.evaluate(quotient(out.representatives[i], out.representatives[j]));
      out.R.block(static_cast<Eigen::Index>(i) * d, static_cast<Eigen::Index>(j) * d, d, d) =
          t * root[j];
      if (j > i && operator_norm(t * root[j]) > 0.0) out.lower_triangular = false;
    }
  }
  const double scale = std::max(operator_norm(out.K), 1e-300);
  out.residual = operator_norm(out.K - out.R * out.R.adjoint()) / scale;
  return out;
}

}  // namespace rlcm
