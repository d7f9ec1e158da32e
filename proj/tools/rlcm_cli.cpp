#include <cmath>
#include <iostream>

#include <CLI11.hpp>

#include "rlcm/io.hpp"

using nlohmann::json;
using namespace rlcm;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kDepthExhausted = 2;
constexpr int kInconclusive = 3;
constexpr int kRelationFailure = 4;
constexpr int kBadInput = 64;

struct Common {
  std::string semigroup;
  std::string rep_file;
  std::string out;
  bool json_output = false;
  std::optional<int> prime_bound;
  std::size_t depth = kDefaultReversingBudget;
  Tolerances tol;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, Common& c, bool with_rep) {
  cmd->add_option("-s,--semigroup", c.semigroup,
                  "nk:k, free:k, artin:[[..]], thompson:N, bs:n,m, nxn[:B], JSON or @file");
  if (with_rep) cmd->add_option("-r,--rep", c.rep_file, "representation JSON file")->required();
  cmd->add_option("--out", c.out, "write the JSON report here");
  cmd->add_flag("--json", c.json_output, "print the JSON report instead of text");
  cmd->add_option("--prime-bound", c.prime_bound, "prime bound for nxn")->check(CLI::Range(2, 1000));
  cmd->add_option("--depth", c.depth, "reversing / lcm step budget")->check(CLI::PositiveNumber);
  cmd->add_option("--tol-psd", c.tol.psd_eps, "PSD tolerance")->check(CLI::NonNegativeNumber);
  cmd->add_option("--tol-null", c.tol.null_eps, "relative null-space cutoff")->check(CLI::NonNegativeNumber);
  cmd->add_option("--tol-identity", c.tol.identity_eps, "identity residual tolerance")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", c.seed, "seed for sampled checks");
}

DescriptorOptions descriptor_options(const Common& c) { return {c.prime_bound, c.depth}; }

SemigroupHandle semigroup_of(const Common& c) {
  if (c.semigroup.empty()) throw ValidationError("--semigroup is required");
  return parse_semigroup(c.semigroup, descriptor_options(c));
}

Representation load_rep(const Common& c) {
  SemigroupHandle s = c.semigroup.empty() ? nullptr : semigroup_of(c);
  return representation_from_json(read_json_file(c.rep_file), s, descriptor_options(c));
}

void emit(const Common& c, const json& report, const std::string& text) {
  if (!c.out.empty()) write_json_file(c.out, report);
  if (c.json_output) {
    std::cout << report.dump(2) << '\n';
  } else {
    std::cout << text;
  }
}

/// Relation failures stop every representation command with exit 4.
std::optional<int> relation_gate(const Common& c, const Representation& rep, json& report) {
  auto rel = rep.verify(c.tol);
  report["relations"] = to_json(rel);
  if (rel.ok()) return std::nullopt;
  report["exit_code"] = kRelationFailure;
  emit(c, report, "relation check failed: " + rel.first_failure() + "\n");
  return kRelationFailure;
}

json header(const char* command, const Common& c, const Representation& rep) {
  return {{"command", command},
          {"semigroup", rep.semigroup().descriptor()},
          {"representation", representation_to_json(rep)},
          {"tolerances", tolerances_to_json(c.tol)}};
}

// --- commands ---------------------------------------------------------------

int run_lcm(const Common& c, const std::string& p_text, const std::string& q_text) {
  auto s = semigroup_of(c);
  const Element p = s->parse(p_text);
  const Element q = s->parse(q_text);
  json report = {{"command", "lcm"}, {"semigroup", s->descriptor()},
                 {"p", s->format(p)}, {"q", s->format(q)}};
  try {
    auto o = s->lcm(p, q);
    report["disjoint"] = o.is_disjoint();
    report["lcm"] = o.is_disjoint() ? json(nullptr) : json(s->format(o.element()));
    report["exit_code"] = kOk;
    emit(c, report, (o.is_disjoint() ? std::string("DISJOINT") : s->format(o.element())) + "\n");
    return kOk;
  } catch (const DepthExhausted& e) {
    report["inconclusive"] = e.what();
    report["exit_code"] = kDepthExhausted;
    emit(c, report, std::string("INCONCLUSIVE: ") + e.what() + "\n");
    return kDepthExhausted;
  }
}

int run_check(const Common& c, const std::string& strategy_text) {
  auto rep = load_rep(c);
  json report = header("check", c, rep);
  if (auto code = relation_gate(c, rep, report)) return *code;
  const auto& s = rep.semigroup();
  const Strategy st = parse_strategy(strategy_text, s);
  try {
    auto r = check_star_regular(rep, st, c.tol);
    report["result"] = to_json(s, r);
    std::ostringstream text;
    text << "strategy: " << st.label() << " (" << to_string(r.completeness) << ")\n"
         << "subsets tested: " << r.reports.size() << "\n";
    int code = kOk;
    if (r.regular) {
      text << "regular: yes\n";
    } else {
      const auto& w = r.reports[*r.witness];
      text << "regular: no\nwitness F = " << s.format_set(w.F) << "\nlambda_min = " << w.min_eigenvalue
           << "\n";
      code = kFailure;
    }
    report["exit_code"] = code;
    emit(c, report, text.str());
    return code;
  } catch (const DepthExhausted& e) {
    report["inconclusive"] = e.what();
    report["exit_code"] = kInconclusive;
    emit(c, report, std::string("INCONCLUSIVE: ") + e.what() + "\n");
    return kInconclusive;
  }
}

json shifts_json(const TruncatedDilation& D) {
  json out = json::object();
  const auto& s = D.kernel().semigroup();
  for (const auto& g : s.generators()) {
    if (const Shift* sh = D.shift(g)) {
      out[s.factor(g).front()] = {{"domain", sh->domain.size()}, {"matrix", matrix_to_json(sh->V)}};
    }
  }
  return out;
}

int run_dilate(const Common& c, int length_bound, std::size_t samples) {
  auto rep = load_rep(c);
  json report = header("dilate", c, rep);
  report["length_bound"] = length_bound;
  if (auto code = relation_gate(c, rep, report)) return *code;
  const auto& s = rep.semigroup();
  auto kernel = std::make_shared<const Kernel>(rep);
  auto trunc = default_truncation(*kernel, length_bound);
  report["truncation"] = element_list(s, trunc.S);
  report["dropped"] = trunc.dropped;
  std::ostringstream text;
  text << "truncation: " << trunc.S.size() << " elements of length <= " << length_bound;
  if (trunc.dropped) text << " (" << trunc.dropped << " not evaluable, dropped)";
  text << "\n";
  try {
    auto D = naimark_truncated(kernel, trunc.S, c.tol);
    report["gram_psd"] = true;
    report["gram_min_eigenvalue"] = D.gram_min_eigenvalue();
    report["rank"] = D.rank();
    report["borderline_eigenvalues"] = D.borderline_eigenvalues();
    report["embedding"] = matrix_to_json(D.embedding());
    report["shifts"] = shifts_json(D);
    auto props = check_dilation_properties(D);
    report["properties"] = to_json(props);
    text << "Gram lambda_min = " << D.gram_min_eigenvalue() << ", dilation space dimension " << D.rank()
         << "\n"
         << "compression residual " << props.compression_residual << ", isometry residual "
         << props.isometry_residual << "\n";
    if (D.borderline_eigenvalues()) {
      text << "warning: " << D.borderline_eigenvalues() << " Gram eigenvalues near the null cutoff\n";
    }
    try {
      auto cov = verify_nica_covariance(D, {samples, c.seed});
      report["covariance"] = to_json(s, cov);
      text << "covariance: " << cov.pairs_checked << " pairs, max residual " << cov.max_residual
           << ", coverage " << cov.coverage() << "\n";
      for (const auto& p : cov.pairs) {
        text << "  " << s.format(p.p) << " / " << s.format(p.q) << (p.disjoint ? " (disjoint)" : "")
             << "  residual " << p.residual << "  blocks " << p.blocks << "\n";
      }
    } catch (const Error& e) {
      report["covariance"] = {{"error", e.what()}};
      report["exit_code"] = kInconclusive;
      emit(c, report, text.str() + e.what() + "\n");
      return kInconclusive;
    }
    report["exit_code"] = kOk;
    emit(c, report, text.str());
    return kOk;
  } catch (const NotPsdError& e) {
    report["gram_psd"] = false;
    report["gram_min_eigenvalue"] = e.min_eigenvalue();
    report["exit_code"] = kFailure;
    text << "Gram not PSD, lambda_min = " << e.min_eigenvalue() << "\n";
    emit(c, report, text.str());
    return kFailure;
  }
}

int run_certify(const Common& c, const std::vector<std::string>& family, std::size_t budget) {
  auto rep = load_rep(c);
  json report = header("certify", c, rep);
  if (auto code = relation_gate(c, rep, report)) return *code;
  const auto& s = rep.semigroup();
  std::vector<Element> F;
  for (const auto& t : family) F.push_back(s.parse(t));
  report["F"] = element_list(s, F);
  report["node_budget"] = budget;
  auto cert = reduction_certificate(rep, F, c.tol, budget);
  report["certificate"] = to_json(s, cert);
  const int code = cert.valid() ? kOk : kFailure;
  report["exit_code"] = code;
  std::ostringstream text;
  text << "nodes " << cert.nodes.size() << ", leaves " << cert.leaf_count() << "\n"
       << "max node identity residual " << cert.max_identity_residual << "\n"
       << "flattening residual " << cert.flattening_residual << "\n"
       << "leaves PSD: " << (cert.leaves_psd ? "yes" : "no") << "\n"
       << "certificate " << (cert.valid() ? "valid" : "invalid") << "\n";
  emit(c, report, text.str());
  return code;
}

// --- re-verification -----------------------------------------------------

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Re-runs a saved report and lists the fields that do not reproduce.
std::vector<std::string> reverify(const json& r) {
  constexpr double tol = 1e-9;
  std::vector<std::string> diffs;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) diffs.push_back(what);
  };
  const auto command = r.at("command").get<std::string>();
  if (command == "lcm") {
    auto s = semigroup_from_json(r.at("semigroup"));
    if (r.value("exit_code", 0) == kDepthExhausted) return diffs;
    auto o = s->lcm(s->parse(r.at("p").get<std::string>()), s->parse(r.at("q").get<std::string>()));
    expect(o.is_disjoint() == r.at("disjoint").get<bool>(), "disjoint");
    if (!o.is_disjoint()) expect(s->format(o.element()) == r.at("lcm").get<std::string>(), "lcm");
    return diffs;
  }

  const Tolerances t = tolerances_from_json(r.at("tolerances"));
  auto rep = representation_from_json(r.at("representation"), semigroup_from_json(r.at("semigroup")));
  const auto& s = rep.semigroup();
  auto rel = rep.verify(t);
  expect(rel.ok() == r.at("relations").at("ok").get<bool>(), "relations.ok");
  if (!rel.ok()) return diffs;

  if (command == "check") {
    if (!r.contains("result")) return diffs;
    const auto& saved = r.at("result");
    auto res = check_star_regular(rep, strategy_from_json(saved.at("strategy")), t);
    expect(res.regular == saved.at("regular").get<bool>(), "regular");
    expect(to_string(res.completeness) == saved.at("completeness").get<std::string>(), "completeness");
    expect(res.reports.size() == saved.at("subsets_tested").get<std::size_t>(), "subsets_tested");
    const auto& zs = saved.at("reports");
    for (std::size_t i = 0; i < std::min(zs.size(), res.reports.size()); ++i) {
      expect(element_list(s, res.reports[i].F) == zs[i].at("F"), "reports[" + std::to_string(i) + "].F");
      expect(close(res.reports[i].min_eigenvalue, zs[i].at("min_eigenvalue").get<double>(), tol),
             "reports[" + std::to_string(i) + "].min_eigenvalue");
    }
  } else if (command == "certify") {
    auto cert = reduction_certificate(rep, parse_element_list(s, r.at("F")), t,
                                      r.value("node_budget", std::size_t{20000}));
    const auto& saved = r.at("certificate");
    expect(cert.valid() == saved.at("valid").get<bool>(), "valid");
    expect(cert.nodes.size() == saved.at("nodes").size(), "node count");
    expect(cert.identities_hold() == saved.at("identities_hold").get<bool>(), "identities_hold");
    for (std::size_t i = 0; i < std::min(cert.nodes.size(), saved.at("nodes").size()); ++i) {
      const auto& n = saved.at("nodes")[i];
      expect(element_list(s, cert.nodes[i].F) == n.at("F"), "nodes[" + std::to_string(i) + "].F");
      expect(close(cert.nodes[i].min_eigenvalue, n.at("min_eigenvalue").get<double>(), tol),
             "nodes[" + std::to_string(i) + "].min_eigenvalue");
    }
  } else if (command == "dilate") {
    auto kernel = std::make_shared<const Kernel>(rep);
    auto S = parse_element_list(s, r.at("truncation"));
    try {
      auto D = naimark_truncated(kernel, S, t);
      expect(r.at("gram_psd").get<bool>(), "gram_psd");
      if (!r.at("gram_psd").get<bool>()) return diffs;
      expect(D.rank() == r.at("rank").get<std::size_t>(), "rank");
      expect(close(D.gram_min_eigenvalue(), r.at("gram_min_eigenvalue").get<double>(), tol),
             "gram_min_eigenvalue");
      auto props = check_dilation_properties(D);
      const auto& sp = r.at("properties");
      expect(props.compression_residual <= std::max(tol, 10 * sp.at("compression_residual").get<double>()),
             "compression_residual");
      expect(props.isometry_residual <= std::max(tol, 10 * sp.at("isometry_residual").get<double>()),
             "isometry_residual");
    } catch (const NotPsdError& e) {
      expect(!r.at("gram_psd").get<bool>(), "gram_psd");
      expect(close(e.min_eigenvalue(), r.at("gram_min_eigenvalue").get<double>(), tol),
             "gram_min_eigenvalue");
    }
  } else {
    throw ValidationError("verify-report: unknown command '" + command + "'");
  }
  return diffs;
}

int run_verify(const std::string& path, bool json_output) {
  json report = read_json_file(path);
  std::vector<std::string> diffs;
  try {
    diffs = reverify(report);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("verify-report: malformed report: ") + e.what());
  }
  if (json_output) {
    std::cout << json{{"reproduced", diffs.empty()}, {"mismatches", diffs}}.dump(2) << '\n';
  } else if (diffs.empty()) {
    std::cout << "report reproduces\n";
  } else {
    for (const auto& d : diffs) std::cout << "mismatch: " << d << '\n';
  }
  return diffs.empty() ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Right LCM semigroups: lcm, *-regularity checks, dilations and certificates"};
  app.require_subcommand(1);

  Common lcm_opts, check_opts, dilate_opts, certify_opts;
  std::string p_text, q_text;
  auto* lcm = app.add_subcommand("lcm", "right lcm of two elements");
  add_common(lcm, lcm_opts, false);
  lcm->add_option("p", p_text, "first element")->required();
  lcm->add_option("q", q_text, "second element")->required();

  std::string strategy = "default";
  auto* check = app.add_subcommand("check", "*-regularity over a covering strategy");
  add_common(check, check_opts, true);
  check->add_option("--strategy", strategy,
                    "default, artin, thompson:M, nxn:B, bs, gp, generic:L[,k]");

  int length_bound = 3;
  std::size_t samples = 32;
  auto* dilate = app.add_subcommand("dilate", "truncated minimal isometric dilation");
  add_common(dilate, dilate_opts, true);
  dilate->add_option("-L,--length-bound", length_bound, "truncation length")->check(CLI::Range(0, 8));
  dilate->add_option("--samples", samples, "sampled element pairs for the covariance check");

  std::vector<std::string> family;
  std::size_t node_budget = 20000;
  auto* certify = app.add_subcommand("certify", "reduction certificate for Z(F)");
  add_common(certify, certify_opts, true);
  certify->add_option("F", family, "elements of F")->required();
  certify->add_option("--node-budget", node_budget, "maximum certificate nodes");

  std::string report_path;
  bool verify_json = false;
  auto* verify = app.add_subcommand("verify-report", "re-run a saved report and compare");
  verify->add_option("report", report_path, "report JSON file")->required();
  verify->add_flag("--json", verify_json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  try {
    if (*lcm) return run_lcm(lcm_opts, p_text, q_text);
    if (*check) return run_check(check_opts, strategy);
    if (*dilate) return run_dilate(dilate_opts, length_bound, samples);
    if (*certify) return run_certify(certify_opts, family, node_budget);
    if (*verify) return run_verify(report_path, verify_json);
  } catch (const RelationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRelationFailure;
  } catch (const DepthExhausted& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return kInconclusive;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const CapabilityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}
