#include "rlcm/io.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include "rlcm/graph_product.hpp"
#include "rlcm/zoo.hpp"

namespace rlcm {

using nlohmann::json;

namespace {

int to_int(std::string_view s, const char* what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(std::string(s), &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ValidationError(std::string("descriptor: bad ") + what + " '" + std::string(s) + "'");
  }
}

int artin_entry(const json& v) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_string()) {
    auto s = v.get<std::string>();
    if (s == "inf" || s == "∞") return 0;
  }
  throw ValidationError("artin: matrix entries must be integers or \"inf\"");
}

ArtinMonoid::Matrix artin_matrix(const json& j) {
  if (!j.is_array()) throw ValidationError("artin: matrix must be an array of rows");
  ArtinMonoid::Matrix m;
  for (const auto& row : j) {
    if (!row.is_array()) throw ValidationError("artin: matrix must be an array of rows");
    std::vector<int> r;
    for (const auto& v : row) r.push_back(artin_entry(v));
    m.push_back(std::move(r));
  }
  return m;
}

json parse_json_text(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

SemigroupHandle semigroup_from_json(const json& j, const DescriptorOptions& opts) {
  if (!j.is_object() || !j.contains("kind")) throw ValidationError("descriptor: missing \"kind\"");
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "nk") return build_nk(j.at("rank").get<int>());
    if (kind == "free") return build_free(j.at("rank").get<int>());
    if (kind == "artin") return build_artin(artin_matrix(j.at("matrix")), opts.budget);
    if (kind == "thompson") return build_thompson(j.at("generators").get<int>(), opts.budget);
    if (kind == "bs") return build_bs(j.at("n").get<int>(), j.at("m").get<int>(), opts.budget);
    if (kind == "nxn") {
      return build_nxn(j.contains("prime_bound") ? j.at("prime_bound").get<int>()
                                                 : opts.prime_bound.value_or(3));
    }
    if (kind == "graph_product") {
      std::vector<GraphVertex> vs;
      for (const auto& v : j.at("vertices")) {
        vs.push_back({v.at("name").get<std::string>(), semigroup_from_json(v.at("semigroup"), opts)});
      }
      auto index = [&](const std::string& name) {
        for (std::size_t i = 0; i < vs.size(); ++i) {
          if (vs[i].name == name) return static_cast<int>(i);
        }
        throw ValidationError("graph_product: unknown vertex in edge: " + name);
      };
      std::vector<std::pair<int, int>> es;
      for (const auto& e : j.value("edges", json::array())) {
        if (!e.is_array() || e.size() != 2) throw ValidationError("graph_product: edges are pairs");
        es.emplace_back(index(e[0].get<std::string>()), index(e[1].get<std::string>()));
      }
      return std::make_shared<GraphProduct>(std::move(vs), std::move(es), opts.budget);
    }
  } catch (const json::exception& e) {
    throw ValidationError("descriptor (" + kind + "): " + e.what());
  }
  throw ValidationError("descriptor: unknown kind '" + kind + "'");
}

SemigroupHandle parse_semigroup(std::string_view text, const DescriptorOptions& opts) {
  if (text.empty()) throw ValidationError("descriptor: empty");
  if (text.front() == '@') return semigroup_from_json(read_json_file(std::string(text.substr(1))), opts);
  if (text.front() == '{') return semigroup_from_json(parse_json_text(text, "descriptor"), opts);

  const auto colon = text.find(':');
  const auto kind = text.substr(0, colon);
  const auto arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (kind == "nxn") {
    return build_nxn(arg.empty() ? opts.prime_bound.value_or(3) : to_int(arg, "prime bound"));
  }
  if (arg.empty()) throw ValidationError("descriptor: '" + std::string(kind) + "' needs a parameter");
  if (kind == "nk") return build_nk(to_int(arg, "rank"));
  if (kind == "free") return build_free(to_int(arg, "rank"));
  if (kind == "thompson") return build_thompson(to_int(arg, "generator count"), opts.budget);
  if (kind == "bs") {
    const auto comma = arg.find(',');
    if (comma == std::string_view::npos) throw ValidationError("descriptor: bs needs n,m");
    return build_bs(to_int(arg.substr(0, comma), "n"), to_int(arg.substr(comma + 1), "m"),
                    opts.budget);
  }
  if (kind == "artin") {
    // Bare inf / ∞ are accepted in place of the quoted form.
    const std::string quoted =
        std::regex_replace(std::string(arg), std::regex("(inf|∞)"), "\"inf\"");
    const std::string fixed = std::regex_replace(quoted, std::regex("\"\"inf\"\""), "\"inf\"");
    return build_artin(artin_matrix(parse_json_text(fixed, "artin matrix")), opts.budget);
  }
  throw ValidationError("descriptor: unknown kind '" + std::string(kind) + "'");
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw ValidationError("matrix: expected a nonempty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ValidationError("matrix: ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& z = row[static_cast<std::size_t>(c)];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        throw ValidationError("matrix: entries must be [re, im] pairs");
      }
      m(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  return m;
}

json representation_to_json(const Representation& rep) {
  json gens = json::object();
  for (const auto& [name, m] : rep.images()) gens[name] = matrix_to_json(m);
  return {{"semigroup", rep.semigroup().descriptor()},
          {"dimension", rep.dimension()},
          {"generators", gens}};
}

Representation representation_from_json(const json& j, SemigroupHandle semigroup,
                                        const DescriptorOptions& opts) {
  if (!j.is_object()) throw ValidationError("representation: expected a JSON object");
  if (j.contains("semigroup")) {
    auto own = semigroup_from_json(j.at("semigroup"), opts);
    if (semigroup && semigroup->descriptor() != own->descriptor()) {
      throw ValidationError("representation: file is for " + own->name() + ", not " +
                            semigroup->name());
    }
    if (!semigroup) semigroup = own;
  }
  if (!semigroup) throw ValidationError("representation: no semigroup given");
  if (!j.contains("dimension") || !j.at("dimension").is_number_integer()) {
    throw ValidationError("representation: missing integer \"dimension\"");
  }
  const auto d = j.at("dimension").get<std::int64_t>();
  if (d < 1) throw ValidationError("representation: dimension must be positive");
  if (!j.contains("generators") || !j.at("generators").is_object()) {
    throw ValidationError("representation: missing \"generators\" object");
  }
  std::map<std::string, CMatrix> images;
  for (const auto& [name, m] : j.at("generators").items()) images.emplace(name, matrix_from_json(m));
  return Representation(std::move(semigroup), static_cast<std::size_t>(d), std::move(images));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path.c_str());
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
}

Strategy parse_strategy(std::string_view text, const Semigroup& s) {
  const auto colon = text.find(':');
  const auto kind = text.substr(0, colon);
  const auto arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (kind == "default") return default_strategy(s);
  if (kind == "artin") return Strategy::artin_generators();
  if (kind == "bs") return Strategy::bs_minimal();
  if (kind == "gp") return Strategy::graph_product_minimal();
  if (kind == "thompson") {
    if (arg.empty()) return default_strategy(s);
    return Strategy::thompson_generators(to_int(arg, "test generator count"));
  }
  if (kind == "nxn") {
    if (arg.empty()) return default_strategy(s);
    return Strategy::nxn_minimal(to_int(arg, "prime bound"));
  }
  if (kind == "generic") {
    if (arg.empty()) throw ValidationError("strategy: generic needs a length bound");
    const auto comma = arg.find(',');
    if (comma == std::string_view::npos) return Strategy::generic_bounded(to_int(arg, "length bound"));
    return Strategy::generic_bounded(to_int(arg.substr(0, comma), "length bound"),
                                     to_int(arg.substr(comma + 1), "set size"));
  }
  throw ValidationError("strategy: unknown '" + std::string(text) + "'");
}

namespace {

const char* strategy_kind_name(Strategy::Kind k) {
  switch (k) {
    case Strategy::Kind::ArtinGenerators: return "artin_generators";
    case Strategy::Kind::ThompsonGenerators: return "thompson_generators";
    case Strategy::Kind::NxNMinimal: return "nxn_minimal";
    case Strategy::Kind::BSMinimal: return "bs_minimal";
    case Strategy::Kind::GraphProductMinimal: return "graph_product_minimal";
    case Strategy::Kind::GenericBounded: return "generic_bounded";
  }
  return "unknown";
}

}  // namespace

json strategy_to_json(const Strategy& st) {
  return {{"kind", strategy_kind_name(st.kind)},
          {"parameter", st.parameter},
          {"max_set_size", st.max_set_size},
          {"label", st.label()}};
}

Strategy strategy_from_json(const json& j) {
  const auto name = j.at("kind").get<std::string>();
  for (auto k : {Strategy::Kind::ArtinGenerators, Strategy::Kind::ThompsonGenerators,
                 Strategy::Kind::NxNMinimal, Strategy::Kind::BSMinimal,
                 Strategy::Kind::GraphProductMinimal, Strategy::Kind::GenericBounded}) {
    if (name == strategy_kind_name(k)) {
      return Strategy{k, j.value("parameter", 0), j.value("max_set_size", 0)};
    }
  }
  throw ValidationError("strategy: unknown kind '" + name + "'");
}

json tolerances_to_json(const Tolerances& tol) {
  return {{"psd", tol.psd_eps}, {"null", tol.null_eps}, {"identity", tol.identity_eps}};
}

Tolerances tolerances_from_json(const json& j) {
  Tolerances t;
  t.psd_eps = j.value("psd", t.psd_eps);
  t.null_eps = j.value("null", t.null_eps);
  t.identity_eps = j.value("identity", t.identity_eps);
  return t;
}

json element_list(const Semigroup& s, const std::vector<Element>& F) {
  json out = json::array();
  for (const auto& x : F) out.push_back(s.format(x));
  return out;
}

std::vector<Element> parse_element_list(const Semigroup& s, const json& j) {
  std::vector<Element> out;
  for (const auto& v : j) out.push_back(s.parse(v.get<std::string>()));
  return out;
}

json to_json(const RelationReport& r) {
  auto list = [](const std::vector<RelationCheck>& cs) {
    json a = json::array();
    for (const auto& c : cs) a.push_back({{"label", c.label}, {"residual", c.residual}, {"ok", c.ok}});
    return a;
  };
  return {{"ok", r.ok()},
          {"max_residual", r.max_residual()},
          {"first_failure", r.first_failure()},
          {"relations", list(r.relations)},
          {"contractions", list(r.contractions)}};
}

json to_json(const Semigroup& s, const StarRegularityReport& r) {
  json reports = json::array();
  for (const auto& z : r.reports) {
    reports.push_back({{"F", element_list(s, z.F)}, {"min_eigenvalue", z.min_eigenvalue}, {"psd", z.psd}});
  }
  json witness = nullptr;
  if (r.witness) {
    const auto& w = r.reports[*r.witness];
    witness = {{"F", element_list(s, w.F)}, {"min_eigenvalue", w.min_eigenvalue}};
  }
  return {{"regular", r.regular},
          {"strategy", strategy_to_json(r.strategy)},
          {"completeness", to_string(r.completeness)},
          {"family", element_list(s, r.family)},
          {"subsets_tested", r.reports.size()},
          {"witness", witness},
          {"reports", reports}};
}

json to_json(const Semigroup& s, const Certificate& c) {
  json nodes = json::array();
  for (const auto& n : c.nodes) {
    json node = {{"F", element_list(s, n.F)},
                 {"conjugator", s.format(n.conjugator)},
                 {"min_eigenvalue", n.min_eigenvalue},
                 {"leaf", n.leaf}};
    if (n.leaf) {
      node["leaf_kind"] = to_string(n.leaf_kind);
    } else {
      node["split"] = s.format(n.split_element);
      node["p1"] = s.format(n.p1);
      node["q"] = s.format(n.q);
      node["kept_child"] = n.kept_child;
      node["conjugated_child"] = n.conjugated_child;
      node["identity_residual"] = n.identity_residual;
    }
    nodes.push_back(std::move(node));
  }
  return {{"valid", c.valid()},
          {"leaves_psd", c.leaves_psd},
          {"identities_hold", c.identities_hold()},
          {"max_identity_residual", c.max_identity_residual},
          {"flattening_residual", c.flattening_residual},
          {"identity_tolerance", c.identity_tolerance},
          {"leaf_count", c.leaf_count()},
          {"nodes", nodes}};
}

json to_json(const DilationPropertyReport& r) {
  return {{"compression_residual", r.compression_residual},
          {"isometry_residual", r.isometry_residual},
          {"consistency_residual", r.consistency_residual},
          {"compressions_checked", r.compressions_checked},
          {"shifts_checked", r.shifts_checked}};
}

json to_json(const Semigroup& s, const CovarianceReport& r) {
  json pairs = json::array();
  for (const auto& p : r.pairs) {
    pairs.push_back({{"p", s.format(p.p)},
                     {"q", s.format(p.q)},
                     {"disjoint", p.disjoint},
                     {"residual", p.residual},
                     {"blocks", p.blocks}});
  }
  return {{"max_residual", r.max_residual},
          {"pairs_checked", r.pairs_checked},
          {"blocks_checked", r.blocks_checked},
          {"blocks_total", r.blocks_total},
          {"coverage", r.coverage()},
          {"pairs", pairs}};
}

}  // namespace rlcm
