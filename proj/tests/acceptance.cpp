// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "support.hpp"

using namespace support;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

// --- 1 ---------------------------------------------------------------------

Verdict oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  struct Case {
    std::string label;
    SemigroupHandle s;
  };
  const std::vector<Case> cases{
      {"B3+", build_artin({{1, 3}, {3, 1}})},
      {"thompson(4)", build_thompson(4)},
      {"bs(2,3)", build_bs(2, 3)},
      {"N^2", build_nk(2)},
      {"F2+", build_free(2)},
  };
  Verdict v;
  std::size_t pairs = 0;
  std::size_t mismatches = 0;
  for (const auto& c : cases) {
    const auto ball = c.s->ball(3);
    for (std::size_t i = 0; i < ball.size(); ++i) {
      for (std::size_t j = i; j < ball.size(); ++j) {
        const auto bound = c.s->lcm_extension_bound(ball[i], ball[j]);
        const int depth = std::max<int>(6, bound ? static_cast<int>(*bound) : 6);
        const auto oracle = oracle_lcm(*c.s, ball[i], ball[j], depth);
        ++pairs;
        if (!oracle.agrees_with(c.s->lcm(ball[i], ball[j]))) {
          if (mismatches++ == 0) {
            v.detail += "first mismatch " + c.label + " " + c.s->format(ball[i]) + " v " +
                        c.s->format(ball[j]) + "; ";
          }
        }
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.pass = mismatches == 0 && secs < 60.0;
  v.detail += std::to_string(pairs) + " pairs, " + std::to_string(mismatches) + " mismatches, " +
              fmt(secs) + " s";
  return v;
}

// --- 2 ---------------------------------------------------------------------

std::vector<std::pair<std::string, SemigroupHandle>> builtins() {
  return {
      {"nk:3", build_nk(3)},
      {"free:2", build_free(2)},
      {"B3+", build_artin({{1, 3}, {3, 1}})},
      {"artin-ra", build_artin({{1, 2, 0}, {2, 1, 2}, {0, 2, 1}})},
      {"thompson:4", build_thompson(4)},
      {"bs:2,3", build_bs(2, 3)},
      {"nxn:3", build_nxn(3)},
  };
}

Verdict algebraic_laws() {
  Verdict v;
  using LawFn = std::function<Law(const Semigroup&, Rng&, int)>;
  const std::vector<std::pair<std::string, LawFn>> laws{
      {"left-invariance", left_invariance_law},
      {"union", union_law},
      {"pull", pull_law},
  };
  std::size_t failures = 0;
  std::size_t skipped = 0;
  for (const auto& [name, s] : builtins()) {
    for (const auto& [law_name, law] : laws) {
      Rng rng(0xC0FFEE);
      std::size_t conclusive = 0;
      std::size_t attempts = 0;
      while (conclusive < 1000 && attempts < 5000) {
        ++attempts;
        switch (law(*s, rng, 3)) {
          case Law::Holds: ++conclusive; break;
          case Law::Fails:
            ++conclusive;
            if (failures++ == 0) v.detail += "first failure " + law_name + " on " + name + "; ";
            break;
          case Law::Inconclusive: ++skipped; break;
        }
      }
      if (conclusive < 1000) {
        ++failures;
        v.detail += law_name + " on " + name + " only " + std::to_string(conclusive) + " conclusive; ";
      }
    }
  }
  v.pass = failures == 0;
  v.detail += std::to_string(builtins().size()) + " semigroups x 3 laws x 1000, " +
              std::to_string(failures) + " failures, " + std::to_string(skipped) + " inconclusive skipped";
  return v;
}

// --- 3 ---------------------------------------------------------------------

/// Commuting contractions on ℕ³: diagonal, or powers of one random contraction.
Representation nk3_rep(Rng& rng, std::size_t d, bool diagonal) {
  if (diagonal) return diagonal_nk(3, d, rng, 1.0);
  auto s = build_nk(3);
  const CMatrix a = random_contraction(rng, d, uniform(rng, 0.3, 1.0));
  return Representation::verified(s, d, images_for(*s, {a, a * a, 0.5 * a}));
}

Element prefix_of(const Semigroup& s, const Element& x, std::size_t k) {
  Element p = s.identity();
  const auto names = s.factor(x);
  for (std::size_t i = 0; i < k; ++i) p = s.multiply(p, s.parse(names[i]));
  return p;
}

Verdict reduction_identity() {
  Rng rng(314);
  Verdict v;
  double worst = 0.0;
  std::size_t done = 0;
  while (done < 200) {
    const bool braid = done % 2 == 1;
    const std::size_t d = 1 + pick(rng, 8);
    const Representation rep =
        braid ? equal_braid(d, rng, uniform(rng, 0.2, 1.0)) : nk3_rep(rng, d, done % 4 == 0);
    const auto& s = rep.semigroup();
    auto F = random_family(s, rng, 3, 3);
    const std::size_t index = pick(rng, F.size());
    F[index] = s.multiply(F[index], random_element(s, rng, 2, 1));
    const auto len = s.factor(F[index]).size();
    if (len < 2) continue;
    const Element p1 = prefix_of(s, F[index], 1 + pick(rng, len - 1));
    const auto q = s.left_divide(p1, F[index]);
    if (!q) return {false, "prefix does not divide"};
    const auto split = reduction_split(s, F, index, p1, *q);
    const CMatrix T = rep.evaluate(p1);
    const CMatrix rhs = z_operator(rep, split.kept).Z + T * z_operator(rep, split.conjugated).Z * T.adjoint();
    worst = std::max(worst, relative_residual(z_operator(rep, F).Z, rhs));
    ++done;
  }
  v.pass = worst <= 1e-10;
  v.detail = "200 splits on N^3 and B3+, max relative residual " + fmt(worst);
  return v;
}

// --- 4 ---------------------------------------------------------------------

std::vector<Element> bounded_family(const Semigroup& s, Rng& rng, std::size_t total) {
  std::vector<Element> F;
  std::size_t used = 0;
  const std::size_t n = 1 + pick(rng, 3);
  for (std::size_t i = 0; i < n && used < total; ++i) {
    const int len = 1 + static_cast<int>(pick(rng, std::min<std::size_t>(3, total - used)));
    F.push_back(random_element(s, rng, len, len));
    used += s.factor(F.back()).size();
  }
  return F;
}

Verdict certificate_flattening() {
  Rng rng(2718);
  Verdict v;
  double worst = 0.0;
  std::size_t nodes = 0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t d = 1 + pick(rng, 4);
    const Representation rep = i % 2 == 0 ? nk3_rep(rng, d, i % 4 == 0) : equal_braid(d, rng, 0.6);
    const auto F = bounded_family(rep.semigroup(), rng, 6);
    const auto cert = reduction_certificate(rep, F);
    nodes += cert.nodes.size();
    CMatrix flat = zero_matrix(rep.dimension());
    for (const auto& n : cert.nodes) {
      if (!n.leaf) continue;
      const CMatrix W = rep.evaluate(n.conjugator);
      flat += W * brute_force_z(rep, n.F) * W.adjoint();
    }
    worst = std::max(worst, abs_residual(brute_force_z(rep, F), flat));
    if (!cert.identities_hold()) {
      v.pass = false;
      v.detail += "certificate reports broken identity; ";
    }
  }
  v.pass = v.pass && worst <= 1e-9;
  v.detail += "50 families, " + std::to_string(nodes) + " nodes, max flattening residual " + fmt(worst);
  return v;
}

// --- 5 ---------------------------------------------------------------------

Verdict cholesky_identity() {
  Rng rng(1618);
  Verdict v;
  double worst = 0.0;
  double worst_gram = 0.0;
  int done = 0;
  int attempts = 0;
  while (done < 60 && attempts < 600) {
    ++attempts;
    const std::size_t d = 1 + pick(rng, 3);
    const Representation rep =
        done % 2 == 0 ? nk3_rep(rng, d, true) : equal_braid(d, rng, uniform(rng, 0.1, 0.5));
    const auto& s = rep.semigroup();
    if (!check_star_regular(rep, default_strategy(s)).regular) continue;
    std::vector<Element> F0;
    const std::size_t n = 1 + pick(rng, 3);
    for (std::size_t i = 0; i < n; ++i) F0.push_back(random_element(s, rng, 2, 1));
    const auto cf = cholesky_factor(rep, F0);
    const double normK = operator_norm(cf.K);
    worst = std::max(worst, operator_norm(cf.K - cf.R * cf.R.adjoint()) / std::max(normK, 1e-300));
    Kernel k(rep);
    worst_gram = std::max(worst_gram, abs_residual(gram(k, cf.representatives).G, cf.K));
    ++done;
  }
  v.pass = done == 60 && worst <= 1e-9 && worst_gram <= 1e-12;
  v.detail = std::to_string(done) + " factorizations, max ||K-RR*||/||K|| " + fmt(worst) +
             ", K vs independent Gram " + fmt(worst_gram);
  return v;
}

// --- 6 ---------------------------------------------------------------------

Representation row_contraction(Rng& rng, std::size_t d) {
  auto s = build_free(2);
  CMatrix a = random_matrix(rng, d);
  CMatrix b = random_matrix(rng, d);
  CMatrix row(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(2 * d));
  row << a, b;
  const double scale = uniform(rng, 0.5, 1.0) / operator_norm(row);
  return Representation::verified(s, d, images_for(*s, {a * scale, b * scale}));
}

Representation bs_scalar(double a) {
  auto s = build_bs(2, 3);
  return Representation::verified(s, 1, images_for(*s, {scalar(a), scalar(1.0)}));
}

Verdict equivalence_witnesses() {
  Verdict v;
  Rng rng(577);
  std::vector<Representation> reps;
  for (int i = 0; i < 3; ++i) reps.push_back(diagonal_nk(2, 2, rng));
  for (int i = 0; i < 2; ++i) reps.push_back(diagonal_nk(3, 1, rng));
  for (int i = 0; i < 3; ++i) reps.push_back(row_contraction(rng, 2));
  for (int i = 0; i < 2; ++i) reps.push_back(equal_braid(2, rng, 0.3));
  reps.push_back(bs_scalar(0.5));
  reps.push_back(bs_scalar(0.0));

  std::size_t passing = 0;
  double worst_cov = 0.0;
  double worst_comp = 0.0;
  for (const auto& rep : reps) {
    const auto st = default_strategy(rep.semigroup());
    const auto report = check_star_regular(rep, st);
    if (!report.regular || report.completeness != Completeness::Complete) continue;
    ++passing;
    try {
      auto k = std::make_shared<const Kernel>(rep);
      const auto S = default_truncation(*k, 3).S;
      const auto D = naimark_truncated(k, S);
      worst_comp = std::max(worst_comp, check_dilation_properties(D).compression_residual);
      worst_cov = std::max(worst_cov, verify_nica_covariance(D).max_residual);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail += rep.semigroup().name() + ": " + e.what() + "; ";
    }
  }
  const bool part_a = v.pass && passing >= 8 && worst_cov <= 1e-8 && worst_comp <= 1e-8;
  v.detail += "(a) " + std::to_string(passing) + " passing reps, covariance " + fmt(worst_cov) +
              ", compression " + fmt(worst_comp);

  bool part_b = true;
  auto free2 = build_free(2);
  for (double t : {0.71, 0.75, 0.9, 1.0}) {
    const Representation rep = Representation::verified(free2, 1, images_for(*free2, {scalar(t), scalar(t)}));
    const bool z_fails = !check_star_regular(rep, default_strategy(*free2)).regular;
    auto k = std::make_shared<const Kernel>(rep);
    const std::vector<Element> S{free2->identity(), free2->parse("a"), free2->parse("b")};
    const auto G = gram(*k, S).G;
    const double lmin = hermitian_eigenvalues(G)(0);
    bool naimark_fails = false;
    try {
      naimark_truncated(k, S);
    } catch (const NotPsdError& e) {
      naimark_fails = e.min_eigenvalue() < 0;
    }
    part_b = part_b && z_fails && lmin < 0 && naimark_fails;
    if (t == 1.0) {
      const CMatrix Z = z_operator(rep, {S[1], S[2]}).Z;
      const double z_err = std::abs(Z(0, 0) - Complex(-1.0));
      const double det_err = std::abs(G.determinant() - Complex(-1.0));
      part_b = part_b && z_err <= 1e-12 && det_err <= 1e-12;
      v.detail += "; (b) t=1: Z err " + fmt(z_err) + ", det err " + fmt(det_err) + ", lambda_min " + fmt(lmin);
    }
  }
  v.pass = part_a && part_b;
  return v;
}

// --- 7 ---------------------------------------------------------------------

Verdict coisometric_vanishing() {
  Rng rng(4242);
  double worst = 0.0;
  std::size_t families = 0;
  for (int k = 1; k <= 4; ++k) {
    for (int trial = 0; trial < 10; ++trial) {
      auto s = build_nk(k);
      std::vector<CMatrix> imgs;
      for (int i = 0; i < k; ++i) imgs.push_back(scalar(std::polar(1.0, uniform(rng, 0.0, 2 * M_PI))));
      const Representation rep = Representation::verified(s, 1, images_for(*s, imgs));
      const auto gens = s->generators();
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << gens.size()); ++mask) {
        std::vector<Element> F;
        for (std::size_t i = 0; i < gens.size(); ++i) {
          if (mask >> i & 1U) F.push_back(gens[i]);
        }
        worst = std::max(worst, operator_norm(z_operator(rep, F).Z));
        ++families;
      }
    }
  }
  return {worst <= 1e-12, std::to_string(families) + " generator families, max ||Z|| " + fmt(worst)};
}

// --- 8 ---------------------------------------------------------------------

Verdict braid_formula() {
  double worst = 0.0;
  auto s = build_artin({{1, 3}, {3, 1}});
  const std::vector<Element> F{s->parse("e1"), s->parse("e2")};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const std::size_t d = 1 + pick(rng, 6);
    const CMatrix C = random_contraction(rng, d, uniform(rng, 0.05, 1.0));
    const Representation rep = Representation::verified(s, d, images_for(*s, {C, C}));
    const CMatrix C3 = C * C * C;
    const CMatrix explicit_z =
        identity_matrix(d) - 2.0 * C * C.adjoint() + C3 * C3.adjoint();
    worst = std::max(worst, abs_residual(z_operator(rep, F).Z, explicit_z));
  }
  return {worst <= 1e-12, "100 seeds, max deviation " + fmt(worst)};
}

// --- 9 ---------------------------------------------------------------------

Verdict bs_completeness() {
  auto s = build_bs(2, 3);
  const Representation rep = bs_scalar(0.5);
  const auto report = check_star_regular(rep, default_strategy(*s));
  std::vector<Element> expected{s->parse("b"), s->parse("a"), s->parse("b.a"), s->parse("b.b.a")};
  auto family = report.family;
  std::sort(expected.begin(), expected.end());
  std::sort(family.begin(), family.end());
  const bool ok = report.reports.size() == 16 && family == expected &&
                  to_string(report.completeness) == "complete" && report.regular;
  return {ok, std::to_string(report.reports.size()) + " subsets of " + s->format_set(report.family) +
                  ", tag " + to_string(report.completeness)};
}

// --- 10 --------------------------------------------------------------------

Verdict doubly_commuting() {
  auto nat = build_nk(1);
  auto free2 = build_free(2);
  auto g = std::static_pointer_cast<const GraphProduct>(
      build_graph_product({{"u", nat}, {"v", free2}}, {{0, 1}}));
  Rng rng(99);
  double worst = 0.0;
  double reported = 0.0;
  std::size_t verdict_mismatch = 0;
  std::size_t failing_reps = 0;
  for (int r = 0; r < 10; ++r) {
    const std::size_t d = 1 + pick(rng, 3);
    std::map<std::string, CMatrix> imgs;
    imgs.emplace(g->generator_name(0, "e1"), random_diag(rng, d, 1.0));
    imgs.emplace(g->generator_name(1, "a"), random_diag(rng, d, 0.95));
    imgs.emplace(g->generator_name(1, "b"), random_diag(rng, d, 0.95));
    const Representation rep = Representation::verified(g, d, imgs);

    const auto samples = sample_vertex_families(*g, 1000 + static_cast<std::uint64_t>(r), 10, 2, 2);
    reported = std::max(reported, doubly_commuting_check(rep, samples).factorization_residual);
    for (const auto& F : samples) {
      CMatrix product = identity_matrix(d);
      for (int v = 0; v < 2; ++v) {
        std::vector<Element> Fv;
        for (const auto& x : F) {
          if (g->support_vertex(x) == v) Fv.push_back(g->syllables(x).front().element);
        }
        if (!Fv.empty()) product = product * brute_force_z(rep.restrict_to_vertex(v), Fv);
      }
      worst = std::max(worst, abs_residual(brute_force_z(rep, F), product));
    }

    const bool joint = check_star_regular(rep, default_strategy(*g)).regular;
    bool components = true;
    for (int v = 0; v < 2; ++v) {
      const auto comp = rep.restrict_to_vertex(v);
      components = components && check_star_regular(comp, default_strategy(comp.semigroup())).regular;
    }
    if (!components) ++failing_reps;
    if (joint != components) ++verdict_mismatch;
  }
  const bool ok = worst <= 1e-10 && reported <= 1e-10 && verdict_mismatch == 0;
  return {ok, "100 families, max ||Z - prod Z_v|| " + fmt(worst) + " (library " + fmt(reported) +
                  "), verdict mismatches " + std::to_string(verdict_mismatch) + " over 10 reps (" +
                  std::to_string(failing_reps) + " non-regular)"};
}

// --- 11 --------------------------------------------------------------------

CMatrix block_diag(const CMatrix& a, Complex tail) {
  CMatrix m = CMatrix::Zero(a.rows() + 1, a.cols() + 1);
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m(a.rows(), a.cols()) = tail;
  return m;
}

Verdict clique_filter() {
  auto nat = build_nk(1);
  auto g = std::static_pointer_cast<const GraphProduct>(
      build_graph_product({{"u", nat}, {"v", nat}, {"w", nat}}, {{0, 1}, {1, 2}}));
  Rng rng(7);
  double worst = 0.0;
  std::size_t families = 0;
  for (int trial = 0; trial < 20; ++trial) {
    // The middle vertex is scalar on each block, so it commutes with both ends.
    const double alpha = uniform(rng, 0.0, 1.0);
    std::map<std::string, CMatrix> imgs;
    imgs.emplace(g->generator_name(0, "e1"),
                 block_diag(random_contraction(rng, 2, uniform(rng, 0.1, 1.0)), uniform(rng, 0, 1)));
    imgs.emplace(g->generator_name(1, "e1"), diag({alpha, alpha, uniform(rng, 0.0, 1.0)}));
    imgs.emplace(g->generator_name(2, "e1"),
                 block_diag(random_contraction(rng, 2, uniform(rng, 0.1, 1.0)), uniform(rng, 0, 1)));
    const Representation rep = Representation::verified(g, 3, imgs);

    std::vector<Element> pool;
    for (int v = 0; v < 3; ++v) {
      for (int power = 1; power <= 2; ++power) pool.push_back(g->single(v, Element({power})));
    }
    const auto gens = g->generators();
    std::vector<std::vector<Element>> families_here;
    for (std::uint64_t mask = 1; mask < 8; ++mask) {
      std::vector<Element> F;
      for (std::size_t i = 0; i < 3; ++i) {
        if (mask >> i & 1U) F.push_back(gens[i]);
      }
      families_here.push_back(F);
    }
    for (int extra = 0; extra < 10; ++extra) {
      std::vector<Element> F;
      for (const auto& x : pool) {
        if (pick(rng, 2) == 1) F.push_back(x);
      }
      if (!F.empty()) families_here.push_back(F);
    }
    for (const auto& F : families_here) {
      const CMatrix filtered = z_operator(rep, F, {}, {.clique_filter = true}).Z;
      const CMatrix full = z_operator(rep, F).Z;
      worst = std::max(worst, abs_residual(filtered, full));
      ++families;
    }
  }
  return {worst <= 1e-12, std::to_string(families) + " families on the path u-v-w, max deviation " + fmt(worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"lcm oracle equivalence", oracle_equivalence},
      {"algebraic laws", algebraic_laws},
      {"reduction identity", reduction_identity},
      {"certificate flattening", certificate_flattening},
      {"cholesky identity", cholesky_identity},
      {"equivalence witnesses", equivalence_witnesses},
      {"co-isometric reps give Z = 0", coisometric_vanishing},
      {"B3+ formula", braid_formula},
      {"BS completeness", bs_completeness},
      {"doubly-commuting factorization", doubly_commuting},
      {"clique filter", clique_filter},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << " (" << criteria[i].first
              << "): " << v.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
