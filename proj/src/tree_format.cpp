#include "itsmrules/tree_format.hpp"

#include <nlohmann/json.hpp>

namespace itsm {

namespace {

using Json = nlohmann::ordered_json;

struct FormatError {
  std::string message;
};

Money money_field(const Json& obj, const char* key, const std::string& owner) {
  if (!obj.contains(key)) throw FormatError{owner + ": missing '" + key + "'"};
  const auto& v = obj.at(key);
  std::optional<Money> m;
  if (v.is_string())
    m = Money::parse(v.get<std::string>());
  else if (v.is_number())
    m = Money::from_double(v.get<double>());
  if (!m) throw FormatError{owner + ": '" + key + "' is not a decimal amount: " + v.dump()};
  return *m;
}

std::string string_field(const Json& obj, const char* key, const std::string& owner) {
  if (!obj.contains(key) || !obj.at(key).is_string())
    throw FormatError{owner + ": missing string '" + key + "'"};
  return obj.at(key).get<std::string>();
}

double number_field(const Json& obj, const char* key, const std::string& owner) {
  if (!obj.contains(key) || !obj.at(key).is_number())
    throw FormatError{owner + ": missing number '" + key + "'"};
  return obj.at(key).get<double>();
}

SlaTerms parse_sla(const Json& j, const std::string& owner) {
  if (!j.is_object()) throw FormatError{owner + ": 'sla' must be an object"};
  SlaTerms s;
  if (!j.contains("priority") || !j.at("priority").is_number_integer())
    throw FormatError{owner + ": missing integer 'priority'"};
  s.priority = j.at("priority").get<int>();
  s.first_failure_fine = money_field(j, "first_failure_fine", owner);
  s.concurrent_failure_fine = money_field(j, "concurrent_failure_fine", owner);
  for (const auto& c : j.value("availability_clauses", Json::array())) {
    AvailabilityClause clause;
    auto period = period_from_string(string_field(c, "period", owner));
    if (!period) throw FormatError{owner + ": period must be Day, Month or Year"};
    clause.period = *period;
    clause.min_percent = number_field(c, "min_percent", owner);
    clause.fine = money_field(c, "fine", owner);
    s.availability_clauses.push_back(clause);
  }
  return s;
}

Json sla_json(const SlaTerms& s) {
  Json clauses = Json::array();
  for (const auto& c : s.availability_clauses)
    clauses.push_back({{"period", std::string(to_string(c.period))},
                       {"min_percent", c.min_percent},
                       {"fine", c.fine.str()}});
  return {{"priority", s.priority},
          {"first_failure_fine", s.first_failure_fine.str()},
          {"concurrent_failure_fine", s.concurrent_failure_fine.str()},
          {"availability_clauses", clauses}};
}

}  // namespace

TreeLoadResult load_tree(std::string_view json_text) {
  TreeLoadResult result;
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    result.diagnostics.push_back(error(0, std::string("tree is not valid JSON: ") + e.what()));
    return result;
  }

  std::vector<ConfigItem> items;
  std::vector<Edge> edges;
  try {
    if (!doc.is_object() || !doc.contains("items") || !doc.at("items").is_array())
      throw FormatError{"tree document needs an 'items' array"};
    for (std::size_t i = 0; i < doc.at("items").size(); ++i) {
      const auto& j = doc.at("items")[i];
      const std::string owner = "item " + std::to_string(i);
      ConfigItem item;
      item.id = string_field(j, "id", owner);
      const std::string who = "item " + item.id;
      auto kind = ci_kind_from_string(string_field(j, "kind", who));
      if (!kind) throw FormatError{who + ": kind must be one of RFC, SVC, HOS, SLA, MTC"};
      item.kind = *kind;
      item.label = j.value("label", item.id);
      if (j.contains("sla")) item.sla = parse_sla(j.at("sla"), who);
      if (j.contains("mtc")) item.mtc = MtcTerms{money_field(j.at("mtc"), "liability", who)};
      items.push_back(std::move(item));
    }
    for (const auto& e : doc.value("edges", Json::array()))
      edges.push_back({string_field(e, "parent", "edge"), string_field(e, "child", "edge")});
  } catch (const FormatError& e) {
    result.diagnostics.push_back(error(0, e.message));
    return result;
  } catch (const Json::exception& e) {
    result.diagnostics.push_back(error(0, std::string("malformed tree: ") + e.what()));
    return result;
  }

  result.diagnostics = check_structure(items, edges);
  if (!has_errors(result.diagnostics))
    result.tree = ServiceTree::create(std::move(items), std::move(edges));
  return result;
}

std::string dump_tree(const ServiceTree& t) {
  Json items = Json::array();
  for (const auto& item : t.items()) {
    Json j = {{"id", item.id}, {"kind", std::string(to_string(item.kind))}, {"label", item.label}};
    if (item.sla) j["sla"] = sla_json(*item.sla);
    if (item.mtc) j["mtc"] = {{"liability", item.mtc->liability.str()}};
    items.push_back(std::move(j));
  }
  Json edges = Json::array();
  for (const auto& e : t.edges()) edges.push_back({{"parent", e.parent}, {"child", e.child}});
  return Json{{"items", items}, {"edges", edges}}.dump(2) + "\n";
}

ForecastDocument load_forecast(std::string_view json_text) {
  try {
    const auto doc = Json::parse(json_text);
    ForecastDocument out;
    out.forecast.expected_failures_per_year =
        number_field(doc, "expected_failures_per_year", "forecast");
    if (out.forecast.expected_failures_per_year < 0)
      throw FormatError{"forecast: expected_failures_per_year must be >= 0"};
    const auto percents = doc.value("expected_availability_percent", Json::object());
    for (const auto& [key, value] : percents.items()) {
      auto period = period_from_string(key);
      if (!period || !value.is_number())
        throw FormatError{"forecast: bad availability entry '" + key + "'"};
      const double p = value.get<double>();
      if (p < 0 || p > 100) throw FormatError{"forecast: availability outside 0..100"};
      out.forecast.expected_availability_percent[*period] = p;
    }
    if (doc.contains("horizon_years")) out.horizon_years = number_field(doc, "horizon_years", "forecast");
    if (!(out.horizon_years > 0)) throw FormatError{"forecast: horizon_years must be positive"};
    return out;
  } catch (const FormatError& e) {
    throw DiagnosticError({error(0, e.message)});
  } catch (const Json::exception& e) {
    throw DiagnosticError({error(0, std::string("malformed forecast: ") + e.what())});
  }
}

}  // namespace itsm
