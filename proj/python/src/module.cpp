#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "itsmrules/fines.hpp"
#include "itsmrules/harness.hpp"
#include "itsmrules/ontology.hpp"
#include "itsmrules/schema.hpp"
#include "itsmrules/tree_format.hpp"
#include "itsmrules/trigger.hpp"
#include "itsmrules/vocabulary.hpp"

namespace py = pybind11;
using namespace itsm;

namespace {

std::vector<std::pair<int, std::string>> diagnostic_pairs(const Diagnostics& diags) {
  std::vector<std::pair<int, std::string>> out;
  for (const auto& d : diags) out.emplace_back(d.line, d.message);
  return out;
}

std::string compile_source(const std::string& source, const std::string& emit) {
  const auto v = parse_vocabulary_or_throw(source);
  if (emit == "ddl") return emit_ddl(derive_schema(v));
  if (emit == "triggers") return compile_triggers(v);
  if (emit == "all") return compile_all(v);
  throw py::value_error("emit must be 'ddl', 'triggers' or 'all'");
}

std::vector<std::string> run_scenario_text(const std::string& vocabulary, const std::string& scenario) {
  auto s = load_scenario(scenario);
  s.vocabulary_source = vocabulary;
  const auto r = run_scenario(s);
  if (!r.ok()) throw DiagnosticError(r.diagnostics);
  std::vector<std::string> out;
  for (const auto& o : r.outcomes) out.push_back(format_outcome(o));
  return out;
}

ServiceTree tree_from_json(const std::string& text) {
  auto r = load_tree(text);
  if (!r.ok()) throw DiagnosticError(r.diagnostics);
  return std::move(*r.tree);
}

py::dict resolve(const ServiceTree& t, const std::vector<std::string>& path) {
  const Occurrence o{path};
  const auto sla = effective_sla(t, o);
  const auto mtc = accumulated_mtc(t, o);
  py::dict d;
  static constexpr const char* status[] = {"none", "resolved", "priority_tie"};
  d["status"] = status[static_cast<int>(sla.status)];
  d["sla"] = sla.status == SlaResolution::Status::Resolved ? py::object(py::str(sla.sla_id)) : py::none();
  d["tied"] = sla.tied;
  d["mtcs"] = std::vector<std::string>(mtc.mtcs.begin(), mtc.mtcs.end());
  d["liability"] = mtc.total_liability.str();
  return d;
}

py::dict fines_for(const ServiceTree& t, const std::string& sla_id,
                   const std::vector<std::pair<std::string, std::string>>& outages,
                   const std::pair<std::string, std::string>& horizon) {
  const auto& item = t.at(sla_id);
  if (!item.sla) throw py::value_error(sla_id + " is not an SLA");
  std::vector<OutageEvent> events;
  for (const auto& [a, b] : outages) events.push_back({parse_timestamp(a), parse_timestamp(b)});
  const auto r = compute_fines(*item.sla, events,
                               {parse_timestamp(horizon.first), parse_timestamp(horizon.second)});
  py::dict d;
  d["first_failure"] = r.first_failure_total.str();
  d["concurrent_failure"] = r.concurrent_failure_total.str();
  d["availability"] = r.availability_total.str();
  d["total"] = r.grand_total.str();
  return d;
}

std::string optimal_for(const ServiceTree& t, const std::vector<std::string>& sla_ids,
                        const std::string& forecast_json) {
  const auto doc = load_forecast(forecast_json);
  std::vector<SlaCandidate> candidates;
  for (const auto& id : sla_ids) {
    const auto& item = t.at(id);
    if (!item.sla) throw py::value_error(id + " is not an SLA");
    candidates.emplace_back(id, *item.sla);
  }
  return optimal_sla(candidates, doc.forecast, doc.horizon_years);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Structured-English rule compiler and ITSM service tree engine";

  py::register_exception<DiagnosticError>(m, "DiagnosticError", PyExc_ValueError);

  m.def("check_vocabulary",
        [](const std::string& source) { return diagnostic_pairs(parse_vocabulary(source).diagnostics); },
        py::arg("source"), "Diagnostics for a vocabulary as (line, message) pairs; empty when valid.");
  m.def("canonical_render",
        [](const std::string& source) { return canonical_render(parse_vocabulary_or_throw(source)); },
        py::arg("source"), "Re-render a vocabulary in canonical form.");
  m.def("compile", &compile_source, py::arg("source"), py::arg("emit") = "all",
        "Compile a vocabulary to SQL: 'ddl', 'triggers' or 'all'.");
  m.def("run_scenario", &run_scenario_text, py::arg("vocabulary"), py::arg("scenario_json"),
        "Run a scenario document against the compiled vocabulary; one outcome line per action.");

  py::class_<ServiceTree>(m, "ServiceTree")
      .def_static("from_json", &tree_from_json, py::arg("text"))
      .def("to_json", [](const ServiceTree& t) { return dump_tree(t); })
      .def("item_ids",
           [](const ServiceTree& t) {
             std::vector<std::string> ids;
             for (const auto& item : t.items()) ids.push_back(item.id);
             return ids;
           })
      .def("validate", [](const ServiceTree& t) { return diagnostic_pairs(validate_tree(t)); })
      .def(
          "occurrences",
          [](const ServiceTree& t, const std::string& id) {
            std::vector<std::vector<std::string>> out;
            for (const auto& o : occurrences(t, id)) out.push_back(o.path);
            return out;
          },
          py::arg("item_id"))
      .def("resolve", &resolve, py::arg("path"),
           "Effective SLA and accumulated MTCs for one root-to-item path.")
      .def("redundant_mtcs",
           [](const ServiceTree& t) {
             std::vector<std::pair<std::string, std::string>> out;
             for (const auto& r : find_redundant_mtcs(t)) out.emplace_back(r.mtc_id, r.reason);
             return out;
           })
      .def("compute_fines", &fines_for, py::arg("sla_id"), py::arg("outages"), py::arg("horizon"),
           "Fines for ISO-8601 (start, end) outages over a (start, end) horizon.")
      .def("optimal_sla", &optimal_for, py::arg("sla_ids"), py::arg("forecast_json"))
      .def("to_dot", [](const ServiceTree& t) { return to_dot(t); })
      .def("triples", [](const ServiceTree& t) {
        std::vector<std::tuple<std::string, std::string, std::string>> out;
        for (const auto& tr : to_triples(t)) out.emplace_back(tr.subject, tr.predicate, tr.object);
        return out;
      });
}
