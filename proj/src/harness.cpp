#include "itsmrules/harness.hpp"

#include <nlohmann/json.hpp>

#include "itsmrules/schema.hpp"
#include "itsmrules/trigger.hpp"
#include "itsmrules/vocabulary.hpp"

namespace itsm {

namespace {

std::string render_row(const Row& row) {
  std::string out;
  for (const auto& v : row) {
    if (!out.empty()) out += '|';
    out += std::to_string(v.index()) + ":" + to_sql_text(v);
  }
  return out;
}

void check_columns(const SchemaModel& schema, const std::string& table,
                   const ColumnValues& values, const std::string& where, Diagnostics& diags) {
  const auto* t = schema.find_table(table);
  if (!t) {
    diags.push_back(error(0, where + ": unknown table '" + table + "'"));
    return;
  }
  for (const auto& [column, value] : values) {
    if (!t->find_column(column))
      diags.push_back(error(0, where + ": unknown column '" + column + "' in '" + table + "'"));
  }
}

}  // namespace

std::optional<EngineError> apply_script(Engine& engine, std::string_view sql) {
  return engine.execute_script(sql);
}

Snapshot snapshot(Engine& engine) {
  Snapshot snap;
  for (const auto& table : engine.table_names()) {
    auto& rows = snap[table];
    for (const auto& row : engine.query("SELECT * FROM " + quote_identifier(table) +
                                        " ORDER BY rowid"))
      rows.push_back(render_row(row));
  }
  return snap;
}

ScenarioResult run_scenario(const Scenario& s) {
  SqliteEngine engine;
  return run_scenario(s, engine);
}

ScenarioResult run_scenario(const Scenario& s, Engine& engine) {
  ScenarioResult result;
  auto& diags = result.diagnostics;

  auto parsed = parse_vocabulary(s.vocabulary_source);
  if (!parsed.ok()) {
    diags = std::move(parsed.diagnostics);
    return result;
  }
  const auto& vocab = *parsed.vocabulary;
  const auto schema = derive_schema(vocab);

  for (std::size_t i = 0; i < s.seed_rows.size(); ++i)
    check_columns(schema, s.seed_rows[i].table, s.seed_rows[i].values,
                  "seed row " + std::to_string(i), diags);
  for (std::size_t i = 0; i < s.actions.size(); ++i) {
    const auto& a = s.actions[i];
    check_columns(schema, a.table, a.set, "action " + std::to_string(i), diags);
    check_columns(schema, a.table, {{a.where_column, {}}}, "action " + std::to_string(i), diags);
    if (a.set.empty()) diags.push_back(error(0, "action " + std::to_string(i) + ": empty SET"));
  }
  for (const auto& e : s.expectations) {
    if (e.action >= s.actions.size())
      diags.push_back(error(0, "expectation refers to missing action " + std::to_string(e.action)));
  }
  if (has_errors(diags)) return result;

  if (auto err = apply_script(engine, compile_all(vocab))) {
    diags.push_back(error(0, "setup statement " + std::to_string(err->statement_index) +
                                 " failed: " + err->message));
    return result;
  }

  for (std::size_t i = 0; i < s.seed_rows.size(); ++i) {
    const auto& seed = s.seed_rows[i];
    std::string columns, placeholders;
    std::vector<SqlValue> params;
    for (const auto& [column, value] : seed.values) {
      if (!columns.empty()) {
        columns += ", ";
        placeholders += ", ";
      }
      columns += quote_identifier(column);
      placeholders += "?";
      params.push_back(value);
    }
    std::string sql = "INSERT INTO " + quote_identifier(seed.table);
    sql += seed.values.empty() ? " DEFAULT VALUES"
                               : " (" + columns + ") VALUES (" + placeholders + ")";
    if (auto err = engine.execute(sql, params)) {
      diags.push_back(error(0, "seed row " + std::to_string(i) + " failed: " + err->message));
      return result;
    }
  }

  for (std::size_t i = 0; i < s.actions.size(); ++i) {
    const auto& a = s.actions[i];
    std::string sql = "UPDATE " + quote_identifier(a.table) + " SET ";
    std::vector<SqlValue> params;
    for (std::size_t c = 0; c < a.set.size(); ++c) {
      sql += (c ? ", " : "") + quote_identifier(a.set[c].first) + " = ?";
      params.push_back(a.set[c].second);
    }
    sql += " WHERE " + quote_identifier(a.where_column) + " = ?";
    params.push_back(a.where_value);

    const auto before = snapshot(engine);
    ActionOutcome outcome;
    outcome.index = i;
    if (auto err = engine.execute(sql, params)) {
      outcome.outcome = Outcome::Aborts;
      outcome.message = err->message;
      outcome.state_preserved = snapshot(engine) == before;
      if (!outcome.state_preserved)
        diags.push_back(error(0, "action " + std::to_string(i) + " aborted but changed state"));
    }
    result.outcomes.push_back(std::move(outcome));
  }

  for (const auto& e : s.expectations) {
    const auto& got = result.outcomes[e.action];
    const bool matches =
        got.outcome == e.outcome &&
        (e.outcome == Outcome::Succeeds || got.message.find(e.message) != std::string::npos);
    if (!matches) {
      diags.push_back(error(0, "action " + std::to_string(e.action) + " expected " +
                                   (e.outcome == Outcome::Succeeds
                                        ? std::string("success")
                                        : "abort with '" + e.message + "'") +
                                   ", got " + format_outcome(got)));
    }
  }
  return result;
}

namespace {

using Json = nlohmann::ordered_json;

SqlValue json_to_value(const Json& j) {
  if (j.is_null()) return std::monostate{};
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return static_cast<std::int64_t>(j.get<bool>());
  throw DiagnosticError({error(0, "unsupported value in scenario: " + j.dump())});
}

ColumnValues json_to_columns(const Json& j) {
  ColumnValues out;
  for (const auto& [key, value] : j.items()) out.emplace_back(key, json_to_value(value));
  return out;
}

}  // namespace

Scenario load_scenario(std::string_view json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw DiagnosticError({error(0, std::string("scenario is not valid JSON: ") + e.what())});
  }
  try {
    Scenario s;
    if (doc.contains("vocabulary")) s.vocabulary_source = doc.at("vocabulary").get<std::string>();
    for (const auto& r : doc.value("seed_rows", Json::array()))
      s.seed_rows.push_back({r.at("table").get<std::string>(), json_to_columns(r.at("values"))});
    for (const auto& a : doc.value("actions", Json::array())) {
      UpdateAction action;
      action.table = a.at("table").get<std::string>();
      action.set = json_to_columns(a.at("set"));
      const auto& where = a.at("where");
      if (where.size() != 1)
        throw DiagnosticError({error(0, "action 'where' must name exactly one column")});
      action.where_column = where.begin().key();
      action.where_value = json_to_value(where.begin().value());
      s.actions.push_back(std::move(action));
    }
    for (const auto& e : doc.value("expectations", Json::array())) {
      Expectation exp;
      exp.action = e.at("action").get<std::size_t>();
      const auto outcome = e.at("outcome").get<std::string>();
      if (outcome == "succeeds") {
        exp.outcome = Outcome::Succeeds;
      } else if (outcome == "aborts") {
        exp.outcome = Outcome::Aborts;
        exp.message = e.value("message", std::string());
      } else {
        throw DiagnosticError({error(0, "unknown outcome '" + outcome + "'")});
      }
      s.expectations.push_back(std::move(exp));
    }
    return s;
  } catch (const Json::exception& e) {
    throw DiagnosticError({error(0, std::string("malformed scenario: ") + e.what())});
  }
}

std::string format_outcome(const ActionOutcome& o) {
  std::string out = std::to_string(o.index);
  if (o.outcome == Outcome::Succeeds) return out + " SUCCEEDED";
  return out + " ABORTED " + o.message;
}

}  // namespace itsm
