#pragma once

// Runs compiled vocabularies against a live engine and records what the
// triggers did to each update.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "itsmrules/diagnostic.hpp"
#include "itsmrules/engine.hpp"

namespace itsm {

using ColumnValues = std::vector<std::pair<std::string, SqlValue>>;

struct SeedRow {
  std::string table;
  ColumnValues values;
};

/// `UPDATE <table> SET <set...> WHERE <where_column> = <where_value>`.
struct UpdateAction {
  std::string table;
  ColumnValues set;
  std::string where_column;
  SqlValue where_value;
};

enum class Outcome { Succeeds, Aborts };

struct Expectation {
  std::size_t action = 0;
  Outcome outcome = Outcome::Succeeds;
  std::string message;  // substring of the abort message, Aborts only
};

struct Scenario {
  std::string vocabulary_source;
  std::vector<SeedRow> seed_rows;
  std::vector<UpdateAction> actions;
  std::vector<Expectation> expectations;
};

struct ActionOutcome {
  std::size_t index = 0;
  Outcome outcome = Outcome::Succeeds;
  std::string message;
  bool state_preserved = true;  // for aborted actions: tables unchanged
};

struct ScenarioResult {
  std::vector<ActionOutcome> outcomes;
  /// Setup failures, invariant breaches and unmet expectations.
  Diagnostics diagnostics;

  bool ok() const { return !has_errors(diagnostics); }
};

/// Table name to ordered, rendered rows.
using Snapshot = std::map<std::string, std::vector<std::string>>;

std::optional<EngineError> apply_script(Engine& engine, std::string_view sql);

Snapshot snapshot(Engine& engine);

/// Runs on a fresh in-memory SQLite database.
ScenarioResult run_scenario(const Scenario& s);

/// Runs on `engine`, which must hold an empty database.
ScenarioResult run_scenario(const Scenario& s, Engine& engine);

/// Parses the JSON scenario format. `vocabulary_source` is filled from the
/// document's optional "vocabulary" field. Throws DiagnosticError.
Scenario load_scenario(std::string_view json_text);

/// `<index> <SUCCEEDED|ABORTED> [message]`
std::string format_outcome(const ActionOutcome& o);

}  // namespace itsm
