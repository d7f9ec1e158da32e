#pragma once

#include <cmath>
#include <random>

#include "rlcm/dilation.hpp"
#include "rlcm/graph_product.hpp"
#include "rlcm/io.hpp"
#include "rlcm/linalg.hpp"
#include "rlcm/regularity.hpp"
#include "rlcm/representation.hpp"
#include "rlcm/reversing.hpp"
#include "rlcm/semigroup.hpp"
#include "rlcm/zoo.hpp"

namespace support {

using namespace rlcm;
using Rng = std::mt19937_64;

inline CMatrix scalar(Complex v) {
  CMatrix m(1, 1);
  m(0, 0) = v;
  return m;
}

inline CMatrix diag(const std::vector<double>& v) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = v[i];
  return m;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline CMatrix random_matrix(Rng& rng, std::size_t d) {
  std::normal_distribution<double> g;
  CMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

/// Random matrix scaled to operator norm `norm`.
inline CMatrix random_contraction(Rng& rng, std::size_t d, double norm) {
  CMatrix m = random_matrix(rng, d);
  return m * (norm / operator_norm(m));
}

inline CMatrix random_unitary(Rng& rng, std::size_t d) {
  Eigen::HouseholderQR<CMatrix> qr(random_matrix(rng, d));
  return qr.householderQ() * CMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

inline CMatrix random_diag(Rng& rng, std::size_t d, double hi) {
  std::vector<double> v(d);
  for (auto& x : v) x = uniform(rng, 0.0, hi);
  return diag(v);
}

/// Random product of at most max_len generators.
inline Element random_element(const Semigroup& s, Rng& rng, int max_len, int min_len = 0) {
  const auto gens = s.generators();
  const int len = std::uniform_int_distribution<int>(min_len, max_len)(rng);
  Element x = s.identity();
  for (int i = 0; i < len; ++i) x = s.multiply(x, gens[pick(rng, gens.size())]);
  return x;
}

inline std::map<std::string, CMatrix> images_for(const Semigroup& s,
                                                 const std::vector<CMatrix>& per_generator) {
  std::map<std::string, CMatrix> out;
  const auto gens = s.generators();
  for (std::size_t i = 0; i < gens.size(); ++i) out.emplace(s.factor(gens[i]).front(), per_generator[i]);
  return out;
}

/// Diagonal contractions on ℕᵏ: commuting, hence a representation.
inline Representation diagonal_nk(int k, std::size_t d, Rng& rng, double hi = 0.9) {
  auto s = build_nk(k);
  std::vector<CMatrix> imgs;
  for (int i = 0; i < k; ++i) imgs.push_back(random_diag(rng, d, hi));
  return Representation::verified(s, d, images_for(*s, imgs));
}

/// B₃⁺ with T₁ = T₂ = C: the braid relation holds trivially.
inline Representation equal_braid(std::size_t d, Rng& rng, double norm) {
  auto s = build_artin({{1, 3}, {3, 1}});
  CMatrix c = random_contraction(rng, d, norm);
  return Representation::verified(s, d, images_for(*s, {c, c}));
}

/// Z(F) by folding lcm_set over every subset independently.
inline CMatrix brute_force_z(const Representation& rep, const std::vector<Element>& F) {
  const auto& s = rep.semigroup();
  CMatrix Z = identity_matrix(rep.dimension());
  const std::size_t n = F.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<Element> U;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1U) U.push_back(F[i]);
    }
    const double sign = U.size() % 2 == 0 ? 1.0 : -1.0;
    Z += sign * rep.tt_star(lcm_set(s, U));
  }
  return Z;
}

enum class Law { Holds, Fails, Inconclusive };

inline std::vector<Element> random_family(const Semigroup& s, Rng& rng, std::size_t max_size,
                                          int max_len) {
  const std::size_t n = 1 + pick(rng, max_size);
  std::vector<Element> F;
  for (std::size_t i = 0; i < n; ++i) F.push_back(random_element(s, rng, max_len));
  return F;
}

inline LcmOutcome left_translate(const Semigroup& s, const Element& a, const LcmOutcome& o) {
  return o.is_disjoint() ? o : LcmOutcome::common(s.multiply(a, o.element()));
}

/// ∨(a·F) = a·∨F.
inline Law left_invariance_law(const Semigroup& s, Rng& rng, int max_len) {
  const auto F = random_family(s, rng, 3, max_len);
  const Element a = random_element(s, rng, max_len);
  try {
    std::vector<Element> aF;
    for (const auto& x : F) aF.push_back(s.multiply(a, x));
    return lcm_set(s, aF) == left_translate(s, a, lcm_set(s, F)) ? Law::Holds : Law::Fails;
  } catch (const DepthExhausted&) {
    return Law::Inconclusive;
  }
}

/// ∨(F₁ ∪ F₂) = (∨F₁) ∨ (∨F₂).
inline Law union_law(const Semigroup& s, Rng& rng, int max_len) {
  const auto F1 = random_family(s, rng, 2, max_len);
  const auto F2 = random_family(s, rng, 2, max_len);
  try {
    auto all = F1;
    all.insert(all.end(), F2.begin(), F2.end());
    const auto a = lcm_set(s, F1);
    const auto b = lcm_set(s, F2);
    const auto joined = a.is_disjoint() || b.is_disjoint() ? LcmOutcome::disjoint()
                                                           : s.lcm(a.element(), b.element());
    return lcm_set(s, all) == joined ? Law::Holds : Law::Fails;
  } catch (const DepthExhausted&) {
    return Law::Inconclusive;
  }
}

/// ∨{p₁a, p₂, …} = p₁·∨{a, p₁⁻¹(p₁∨p₂), …}.
inline Law pull_law(const Semigroup& s, Rng& rng, int max_len) {
  const auto rest = random_family(s, rng, 2, max_len);
  const Element p1 = random_element(s, rng, max_len);
  const Element a = random_element(s, rng, max_len);
  try {
    std::vector<Element> lhs_family{s.multiply(p1, a)};
    lhs_family.insert(lhs_family.end(), rest.begin(), rest.end());
    const auto lhs = lcm_set(s, lhs_family);
    std::vector<Element> pulled{a};
    bool disjoint = false;
    for (const auto& p : rest) {
      const auto o = s.lcm(p1, p);
      if (o.is_disjoint()) {
        disjoint = true;
        break;
      }
      const auto quotient = s.left_divide(p1, o.element());
      if (!quotient) return Law::Fails;
      pulled.push_back(*quotient);
    }
    const auto rhs = disjoint ? LcmOutcome::disjoint() : left_translate(s, p1, lcm_set(s, pulled));
    return lhs == rhs ? Law::Holds : Law::Fails;
  } catch (const DepthExhausted&) {
    return Law::Inconclusive;
  }
}

inline double abs_residual(const CMatrix& a, const CMatrix& b) { return operator_norm(a - b); }

}  // namespace support
