#include "hoss/serialize.hpp"

#include <fstream>
#include <system_error>

namespace hoss {

namespace {

MultiIndex read_index(const Json& j) {
  if (!j.is_array()) throw StructuralError("expected an array of exponents");
  MultiIndex k;
  for (const auto& e : j) {
    if (!e.is_number_integer()) throw StructuralError("exponents must be integers");
    k.push_back(e.get<int>());
  }
  return k;
}

Json complex_fields(Json obj, Complex c) {
  obj["re"] = c.real();
  obj["im"] = c.imag();
  return obj;
}

Complex read_complex(const Json& j) {
  return {j.at("re").get<double>(), j.value("im", 0.0)};
}

}  // namespace

Json to_json(const MultiPoly& f) {
  Json terms = Json::array();
  for (const auto& [k, c] : f.terms()) terms.push_back(complex_fields(Json{{"k", k}}, c));
  return Json{{"n_vars", f.n_vars()}, {"terms", std::move(terms)}};
}

MultiPoly multipoly_from_json(const Json& j) {
  try {
    MultiPoly f(j.at("n_vars").get<int>());
    for (const auto& t : j.at("terms")) f.add_term(read_index(t.at("k")), read_complex(t));
    return f;
  } catch (const Json::exception& e) {
    throw StructuralError(std::string("MultiPoly JSON: ") + e.what());
  }
}

Json to_json(const DerivTermSpec& term) {
  Json out = Json::array();
  for (const auto& c : term.coords) out.push_back(Json::array({c.var + 1, c.order}));
  return out;
}

DerivTermSpec term_from_json(const Json& j) {
  if (!j.is_array()) throw StructuralError("term JSON must be [[j, i], ...]");
  DerivTermSpec term;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer())
      throw StructuralError("term JSON must be [[j, i], ...]");
    term.coords.push_back({pair[0].get<int>() - 1, pair[1].get<int>()});
  }
  return term;
}

Json to_json(const MomentTable& table) {
  Json entries = Json::array();
  for (const auto& [a, c] : table.entries) entries.push_back(complex_fields(Json{{"a", a}}, c));
  return Json{{"term", to_json(table.term)},
              {"m", table.m},
              {"tv_bound", table.tv_bound},
              {"entries", std::move(entries)}};
}

MomentTable moment_table_from_json(const Json& j) {
  try {
    MomentTable table;
    table.term = term_from_json(j.at("term"));
    table.m = j.at("m").get<int>();
    table.tv_bound = j.at("tv_bound").get<double>();
    for (const auto& e : j.at("entries")) table.entries[read_index(e.at("a"))] = read_complex(e);
    return table;
  } catch (const Json::exception& e) {
    throw StructuralError(std::string("MomentTable JSON: ") + e.what());
  }
}

Json to_json(const EnsembleSpec& spec) {
  return Json{{"kind", to_string(spec.kind)},
              {"n", spec.n},
              {"dim", spec.dim},
              {"v_scale", spec.v_scale},
              {"seed", spec.seed}};
}

EnsembleSpec ensemble_spec_from_json(const Json& j) {
  if (!j.is_object()) throw StructuralError("EnsembleSpec JSON must be an object");
  try {
    EnsembleSpec spec;
    if (j.contains("kind")) spec.kind = parse_ensemble_kind(j["kind"].get<std::string>());
    spec.n = j.value("n", spec.n);
    spec.dim = j.value("dim", spec.dim);
    spec.v_scale = j.value("v_scale", spec.v_scale);
    spec.seed = j.value("seed", spec.seed);
    if (spec.n < 1 || spec.dim < 1 || !(spec.v_scale >= 0.0))
      throw StructuralError("EnsembleSpec: need n >= 1, dim >= 1, v_scale >= 0");
    return spec;
  } catch (const Json::exception& e) {
    throw StructuralError(std::string("EnsembleSpec JSON: ") + e.what());
  }
}

Json to_json(const SweepCase& c) {
  return Json{{"seed", c.seed},       {"ensemble", c.ensemble},
              {"term", c.term},       {"m", c.m},
              {"t", c.t},             {"lhs", c.lhs},
              {"sound_bound", c.sound_bound}, {"ratio", c.ratio},
              {"pass_sound", c.pass_sound},   {"pass_strict", c.pass_strict},
              {"in_hypothesis", c.in_hypothesis}, {"theorem_backed", c.theorem_backed}};
}

Json to_json(const SweepReport& report) {
  Json failures = Json::array();
  for (const auto& c : report.failures) failures.push_back(to_json(c));
  return Json{{"schema", 1},
              {"total", report.total},
              {"passed_sound", report.passed_sound},
              {"passed_strict", report.passed_strict},
              {"max_ratio", report.max_ratio},
              {"failures", std::move(failures)},
              {"out_of_hypothesis",
               {{"cases", report.out_of_hypothesis},
                {"sound_violations", report.out_of_hypothesis_sound_violations}}}};
}

Json to_json(const RemainderReport& r) {
  return Json{{"m", r.m},
              {"lhs", {{"re", r.lhs_trace.real()}, {"im", r.lhs_trace.imag()}}},
              {"rhs", {{"re", r.rhs_integral.real()}, {"im", r.rhs_integral.imag()}}},
              {"abs_gap", r.abs_gap},
              {"quadrature_nodes", r.quadrature_nodes},
              {"in_hypothesis", r.in_hypothesis},
              {"passed", r.passed}};
}

Json to_json(const TraceFormulaReport& r) {
  return Json{{"m", r.m},
              {"lhs", {{"re", r.lhs.real()}, {"im", r.lhs.imag()}}},
              {"rhs", {{"re", r.rhs.real()}, {"im", r.rhs.imag()}}},
              {"abs_gap", r.abs_gap},
              {"terms", r.terms},
              {"in_hypothesis", r.in_hypothesis},
              {"passed", r.passed}};
}

Json to_json(const ReductionReport& r) {
  return Json{{"phi", {{"re", r.phi_value.real()}, {"im", r.phi_value.imag()}}},
              {"remainder_trace", {{"re", r.remainder_trace.real()}, {"im", r.remainder_trace.imag()}}},
              {"abs_gap", r.abs_gap},
              {"passed", r.passed}};
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("rename to " + path.string() + " failed: " + ec.message());
  }
}

}  // namespace hoss
