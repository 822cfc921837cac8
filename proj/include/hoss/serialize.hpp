#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "hoss/estimates.hpp"
#include "hoss/ssm.hpp"

namespace hoss {

using Json = nlohmann::ordered_json;

/// {"n_vars": n, "terms": [{"k": [...], "re": x, "im": y}, ...]} in term order.
Json to_json(const MultiPoly& f);
MultiPoly multipoly_from_json(const Json& j);

/// Term coordinates are written one-based: [[j, i], ...].
Json to_json(const DerivTermSpec& term);
DerivTermSpec term_from_json(const Json& j);

Json to_json(const MomentTable& table);
MomentTable moment_table_from_json(const Json& j);

Json to_json(const EnsembleSpec& spec);
EnsembleSpec ensemble_spec_from_json(const Json& j);

Json to_json(const SweepCase& c);
Json to_json(const SweepReport& report);

Json to_json(const RemainderReport& r);
Json to_json(const TraceFormulaReport& r);
Json to_json(const ReductionReport& r);

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace hoss
