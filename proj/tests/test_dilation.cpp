#include <doctest.h>

#include <set>

#include "support.hpp"

using namespace support;

namespace {

Representation scalar_rep(const SemigroupHandle& s, const std::vector<Complex>& values) {
  std::vector<CMatrix> imgs;
  for (auto v : values) imgs.push_back(scalar(v));
  return Representation::verified(s, 1, images_for(*s, imgs));
}

std::shared_ptr<const Kernel> kernel_of(const Representation& rep) { return std::make_shared<const Kernel>(rep); }

Representation row_contraction(Rng& rng, std::size_t d, double norm) {
  auto s = build_free(2);
  const CMatrix a = random_matrix(rng, d);
  const CMatrix b = random_matrix(rng, d);
  CMatrix row(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(2 * d));
  row << a, b;
  const double scale = norm / operator_norm(row);
  return Representation::verified(s, d, images_for(*s, {a * scale, b * scale}));
}

/// {e} ∪ {∨U : U ⊆ F with a common multiple}.
std::vector<Element> lcm_closure(const Semigroup& s, const std::vector<Element>& F) {
  std::set<Element> out{s.identity()};
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << F.size()); ++mask) {
    std::vector<Element> U;
    for (std::size_t i = 0; i < F.size(); ++i) {
      if (mask >> i & 1U) U.push_back(F[i]);
    }
    const auto o = lcm_set(s, U);
    if (!o.is_disjoint()) out.insert(o.element());
  }
  std::vector<Element> v(out.begin(), out.end());
  std::stable_partition(v.begin(), v.end(), [&](const Element& x) { return x == s.identity(); });
  return v;
}

}  // namespace

TEST_CASE("kernel examples") {
  Rng rng(61);
  const Representation rep = equal_braid(2, rng, 0.8);
  const auto& s = rep.semigroup();
  const Kernel k(rep);
  const Element p = s.parse("e1.e2.e2");
  CHECK(abs_residual(k(s.identity(), p), rep.evaluate(p)) < 1e-15);

  auto n1 = build_nk(1);
  const Kernel kt(scalar_rep(n1, {0.7}));
  CHECK(std::abs(kernel_eval(kt, n1->parse("2"), n1->parse("5"))(0, 0) - Complex(0.343)) < 1e-15);

  auto f2 = build_free(2);
  const Kernel kf(scalar_rep(f2, {0.5, 0.5}));
  CHECK(operator_norm(kf(f2->parse("a"), f2->parse("b"))) == 0.0);
}

TEST_CASE("kernel is left invariant") {
  Rng rng(62);
  std::vector<Representation> reps{equal_braid(2, rng, 0.8), diagonal_nk(3, 2, rng), row_contraction(rng, 2, 0.9)};
  for (const auto& rep : reps) {
    const Kernel k(rep);
    const auto& s = rep.semigroup();
    for (int i = 0; i < 60; ++i) {
      const Element a = random_element(s, rng, 3);
      const Element p = random_element(s, rng, 3);
      const Element q = random_element(s, rng, 3);
      CHECK(abs_residual(k(s.multiply(a, p), s.multiply(a, q)), k(p, q)) < 1e-12);
    }
  }
}

TEST_CASE("gram examples") {
  auto n1 = build_nk(1);
  const Kernel zero(scalar_rep(n1, {0.0}));
  const auto S = std::vector<Element>{n1->parse("0"), n1->parse("1"), n1->parse("2")};
  CHECK(abs_residual(gram(zero, S).G, identity_matrix(3)) == 0.0);

  const Complex u = std::polar(1.0, 0.3);
  const Kernel unit(scalar_rep(n1, {u}));
  const auto G = gram(unit, {n1->parse("0"), n1->parse("1")}).G;
  CHECK(std::abs(G(0, 1) - u) < 1e-15);
  CHECK(std::abs(G(1, 0) - std::conj(u)) < 1e-15);
  CHECK(std::abs(G(0, 0) - Complex(1.0)) < 1e-15);
  const auto ev = hermitian_eigenvalues(G);
  CHECK(ev(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ev(1) == doctest::Approx(2.0));

  auto f2 = build_free(2);
  const Kernel one(scalar_rep(f2, {1.0, 1.0}));
  const auto W = gram(one, {f2->identity(), f2->parse("a"), f2->parse("b")}).G;
  CMatrix expected(3, 3);
  expected << 1, 1, 1, 1, 1, 0, 1, 0, 1;
  CHECK(abs_residual(W, expected) == 0.0);
  CHECK_FALSE(is_psd(W).psd);
}

TEST_CASE("naimark on the zero contraction gives the truncated shift") {
  auto n1 = build_nk(1);
  const std::vector<Element> S{n1->parse("0"), n1->parse("1"), n1->parse("2")};
  const auto D = naimark_truncated(kernel_of(scalar_rep(n1, {0.0})), S);
  CHECK(D.rank() == 3);
  const Shift* V = D.shift(n1->parse("1"));
  REQUIRE(V != nullptr);
  CHECK(V->domain.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) CHECK(abs_residual(V->V * D.column(i), D.column(i + 1)) < 1e-12);
  const CMatrix compressed = D.embedding().adjoint() * V->V * D.embedding();
  CHECK(operator_norm(compressed) < 1e-12);
}

TEST_CASE("unitaries dilate to themselves") {
  auto n1 = build_nk(1);
  const Complex u = std::polar(1.0, 1.1);
  auto k = kernel_of(scalar_rep(n1, {u}));
  for (std::int64_t L : {1, 2, 4}) {
    const auto D = naimark_truncated(k, default_truncation(*k, L).S);
    CHECK(D.rank() == 1);
    const Shift* V = D.shift(n1->parse("1"));
    REQUIRE(V != nullptr);
    CHECK(std::abs((D.embedding().adjoint() * V->V * D.embedding())(0, 0) - u) < 1e-12);
    CHECK(verify_nica_covariance(D).max_residual < 1e-12);
  }
}

TEST_CASE("row contraction dilates to isometries with orthogonal ranges") {
  Rng rng(63);
  const Representation rep = row_contraction(rng, 2, 1.0);
  auto k = kernel_of(rep);
  const auto D = naimark_truncated(k, default_truncation(*k, 2).S);
  const auto cov = verify_nica_covariance(D);
  CHECK(cov.max_residual <= 1e-8);
  CHECK(cov.blocks_checked > 0);
  bool saw_disjoint = false;
  for (const auto& p : cov.pairs) saw_disjoint = saw_disjoint || p.disjoint;
  CHECK(saw_disjoint);
  const auto props = check_dilation_properties(D);
  CHECK(props.compression_residual <= 1e-9);
  CHECK(props.isometry_residual <= 1e-9);
}

TEST_CASE("covariance on a commuting diagonal pair over the grid") {
  Rng rng(64);
  const Representation rep = diagonal_nk(2, 2, rng);
  auto k = kernel_of(rep);
  std::vector<Element> S;
  for (int i = 0; i <= 2; ++i) {
    for (int j = 0; j <= 2; ++j) S.push_back(Element({i, j}));
  }
  const auto D = naimark_truncated(k, S);
  CHECK(verify_nica_covariance(D).max_residual <= 1e-8);
  const auto props = check_dilation_properties(D);
  CHECK(props.compression_residual <= 1e-9);
  CHECK(props.compressions_checked == S.size() - 1);  // identity skipped
}

TEST_CASE("compressed defect product reproduces Z") {
  Rng rng(65);
  std::vector<Representation> reps{diagonal_nk(2, 2, rng), row_contraction(rng, 2, 0.8), equal_braid(2, rng, 0.3)};
  for (const auto& rep : reps) {
    const auto& s = rep.semigroup();
    auto k = kernel_of(rep);
    const auto D = naimark_truncated(k, default_truncation(*k, 3).S);
    const auto F = s.generators();
    CHECK(abs_residual(compressed_defect_product(D, F), z_operator(rep, F).Z) < 1e-9);
  }
}

TEST_CASE("quotient rank equals the numerical rank of the Gram matrix") {
  Rng rng(66);
  const Representation rep = diagonal_nk(2, 2, rng);
  auto k = kernel_of(rep);
  const auto S = default_truncation(*k, 2).S;
  const auto D = naimark_truncated(k, S);
  const auto ev = hermitian_eigenvalues(gram(*k, S).G);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) rank += ev(i) > 1e-8 * ev(ev.size() - 1) ? 1 : 0;
  CHECK(D.rank() == rank);
  CHECK(D.rank() <= S.size() * rep.dimension());
  CHECK(abs_residual(D.embedding().adjoint() * D.embedding(), identity_matrix(2)) < 1e-10);
}

TEST_CASE("non-PSD Gram matrices are reported with their eigenvalue") {
  auto f2 = build_free(2);
  auto k = kernel_of(scalar_rep(f2, {1.0, 1.0}));
  try {
    naimark_truncated(k, {f2->identity(), f2->parse("a"), f2->parse("b")});
    FAIL("expected NotPsdError");
  } catch (const NotPsdError& e) {
    CHECK(e.min_eigenvalue() == doctest::Approx(1 - std::sqrt(2.0)));
  }
}

TEST_CASE("truncations start at the identity and skip unevaluable Thompson elements") {
  auto th = build_thompson(3);
  auto k = kernel_of(scalar_rep(th, {0.5, 0.5, 0.5}));
  const auto t = default_truncation(*k, 2);
  REQUIRE_FALSE(t.S.empty());
  CHECK(t.S.front() == th->identity());
  for (const auto& p : t.S) {
    for (const auto& q : t.S) CHECK_NOTHROW(kernel_eval(*k, p, q));
  }
}

TEST_CASE("cholesky examples") {
  auto n2 = build_nk(2);
  const Representation rep = Representation::verified(n2, 1, images_for(*n2, {scalar(0.5), scalar(0.6)}));
  const auto cf = cholesky_factor(rep, n2->generators());
  CHECK(cf.subsets.size() == 4);
  CHECK(cf.R.rows() == 4);
  CHECK(cf.lower_triangular);
  CHECK(cf.identity_holds());
  CHECK(operator_norm(cf.K - cf.R * cf.R.adjoint()) <= 1e-12 * operator_norm(cf.K));

  const auto single = cholesky_factor(rep, {n2->parse("1,2")});
  CHECK(single.subsets.size() == 2);
  CHECK(single.identity_holds());
  CHECK(single.z_crosscheck_residual < 1e-12);
}

TEST_CASE("cholesky on co-isometric reps") {
  Rng rng(67);
  for (int k = 1; k <= 3; ++k) {
    auto s = build_nk(k);
    std::vector<Complex> vals;
    for (int i = 0; i < k; ++i) vals.push_back(std::polar(1.0, uniform(rng, 0, 6.28)));
    const Representation rep = scalar_rep(s, vals);
    const auto cf = cholesky_factor(rep, s->generators());
    CHECK(operator_norm(cf.K - cf.R * cf.R.adjoint()) < 1e-12);
  }
}

TEST_CASE("failing Z yields a non-PSD Gram matrix on the lcm closure") {
  auto f2 = build_free(2);
  auto n2 = build_nk(2);
  const CMatrix shift = (CMatrix(2, 2) << 0, 1, 0, 0).finished();
  const std::vector<Representation> reps{
      scalar_rep(f2, {0.9, 0.9}),
      Representation::verified(n2, 2, images_for(*n2, {shift, shift})),
  };
  for (const auto& rep : reps) {
    const auto& s = rep.semigroup();
    const auto report = check_star_regular(rep, default_strategy(s));
    REQUIRE_FALSE(report.regular);
    const auto& F = report.reports[*report.witness].F;
    CHECK_THROWS_AS(cholesky_factor(rep, F), ZNotPsdError);
    const Kernel k(rep);
    CHECK_FALSE(is_psd(gram(k, lcm_closure(s, F)).G).psd);
  }
}

TEST_CASE("passing reps give PSD Gram matrices on balls") {
  Rng rng(68);
  std::vector<Representation> reps{diagonal_nk(2, 2, rng), row_contraction(rng, 2, 1.0), equal_braid(2, rng, 0.3)};
  for (const auto& rep : reps) {
    REQUIRE(check_star_regular(rep, default_strategy(rep.semigroup())).regular);
    const Kernel k(rep);
    CHECK(is_psd(gram(k, default_truncation(k, 3).S).G).psd);
  }
}
