#pragma once

// Compilation of normative rules into BEFORE UPDATE guard triggers.

#include <string>

#include "itsmrules/schema.hpp"
#include "itsmrules/vocabulary.hpp"

namespace itsm {

/// A compiled Event-Condition-Action rule. The trigger aborts the update
/// when `condition_sql()` (the obligation) does not hold.
struct TriggerDef {
  std::string name;
  std::string update_column;
  std::string on_table;
  std::string lhs_sql;
  std::string operator_sql;
  std::string rhs_sql;
  std::string abort_message;

  std::string condition_sql() const { return lhs_sql + operator_sql + rhs_sql; }
  bool operator==(const TriggerDef&) const = default;
};

/// Throws DiagnosticError if the rule refers to tables or columns missing from `s`.
TriggerDef compile_rule(const NormativeRule& r, const SchemaModel& s);

std::string emit_trigger(const TriggerDef& t);

/// DDL followed by one trigger per rule, in rule order. Throws
/// DiagnosticError when the vocabulary is invalid.
std::string compile_all(const Vocabulary& v);

/// Triggers only, without the DDL.
std::string compile_triggers(const Vocabulary& v);

}  // namespace itsm
