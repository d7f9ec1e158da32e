#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "rlcm/dilation.hpp"
#include "rlcm/regularity.hpp"
#include "rlcm/reversing.hpp"

namespace rlcm {

struct DescriptorOptions {
  std::optional<int> prime_bound;  // nxn without an explicit bound
  std::size_t budget = kDefaultReversingBudget;
};

/// Shorthand ("nk:2", "free:2", "artin:[[1,3],[3,1]]", "thompson:4", "bs:2,3",
/// "nxn", "nxn:5"), inline JSON ("{...}") or "@path" to a JSON file.
SemigroupHandle parse_semigroup(std::string_view text, const DescriptorOptions& opts = {});
SemigroupHandle semigroup_from_json(const nlohmann::json& j, const DescriptorOptions& opts = {});

/// Rows of [re, im] pairs.
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json representation_to_json(const Representation& rep);
/// {"semigroup": {...}, "dimension": d, "generators": {name: matrix}}.  When
/// `semigroup` is given it must agree with the file's own descriptor, if any.
Representation representation_from_json(const nlohmann::json& j, SemigroupHandle semigroup = nullptr,
                                        const DescriptorOptions& opts = {});

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

/// "default", "artin", "thompson:M", "nxn:B", "bs", "gp", "generic:L" or
/// "generic:L,k".
Strategy parse_strategy(std::string_view text, const Semigroup& s);
nlohmann::json strategy_to_json(const Strategy& st);
Strategy strategy_from_json(const nlohmann::json& j);

nlohmann::json tolerances_to_json(const Tolerances& tol);
Tolerances tolerances_from_json(const nlohmann::json& j);

nlohmann::json element_list(const Semigroup& s, const std::vector<Element>& F);
std::vector<Element> parse_element_list(const Semigroup& s, const nlohmann::json& j);

nlohmann::json to_json(const RelationReport& r);
nlohmann::json to_json(const Semigroup& s, const StarRegularityReport& r);
nlohmann::json to_json(const Semigroup& s, const Certificate& c);
nlohmann::json to_json(const DilationPropertyReport& r);
nlohmann::json to_json(const Semigroup& s, const CovarianceReport& r);

}  // namespace rlcm
