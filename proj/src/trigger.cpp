#include "itsmrules/trigger.hpp"

#include <regex>

namespace itsm {

namespace {

// `new.SLA_id` stays bare when it is a plain identifier; anything else is quoted.
std::string row_reference(std::string_view row, std::string_view column) {
  static const std::regex plain(R"([A-Za-z_][A-Za-z0-9_]*)");
  std::string col(column);
  return std::string(row) + "." + (std::regex_match(col, plain) ? col : quote_identifier(col));
}

std::string attribute_lookup(const std::string& attribute, const std::string& table,
                             std::string_view row, const std::string& key) {
  return "(SELECT " + quote_identifier(attribute) + " from " + quote_identifier(table) +
         " where id=" + row_reference(row, key) + ")";
}

[[noreturn]] void missing(const NormativeRule& r, const std::string& what) {
  throw DiagnosticError({error(r.line, "rule " + r.name + " refers to " + what +
                                           " which is not in the schema")});
}

}  // namespace

TriggerDef compile_rule(const NormativeRule& r, const SchemaModel& s) {
  TriggerDef t;
  t.name = r.name;
  t.abort_message = "Requirement of " + r.name + " not met";
  t.operator_sql = comparison_operator(r.comparison);

  const auto& subject = r.subject();
  const TableDef* entity = s.find_table(subject);
  if (!entity || entity->kind != TableKind::EntityTable) missing(r, "table '" + subject + "'");
  const ColumnDef* attr = entity->find_column(r.attribute);
  if (!attr || attr->role != ColumnRole::AttributeColumn)
    missing(r, "column '" + r.attribute + "' of '" + subject + "'");

  const auto* literal = std::get_if<NumericLiteral>(&r.rhs);
  if (const auto* link = std::get_if<LinkScope>(&r.scope)) {
    t.on_table = link_table_name(link->subject, link->object);
    t.update_column = foreign_key_column(link->subject);
    const TableDef* link_table = s.find_table(t.on_table);
    if (!link_table || !link_table->find_column(t.update_column))
      missing(r, "link table '" + t.on_table + "'");
    t.lhs_sql = attribute_lookup(r.attribute, subject, "new", t.update_column);
    t.rhs_sql = literal ? literal->text
                        : attribute_lookup(r.attribute, subject, "old", t.update_column);
  } else {
    t.on_table = subject;
    t.update_column = r.attribute;
    t.lhs_sql = row_reference("new", r.attribute);
    t.rhs_sql = literal ? literal->text : row_reference("old", r.attribute);
  }
  return t;
}

std::string emit_trigger(const TriggerDef& t) {
  std::string out;
  out += "CREATE TRIGGER " + quote_identifier(t.name) + " BEFORE UPDATE OF " +
         quote_identifier(t.update_column) + "\n";
  out += "ON " + quote_identifier(t.on_table) + "\n";
  out += "WHEN NOT\n";
  const bool two_subqueries = t.lhs_sql.starts_with("(SELECT") && t.rhs_sql.starts_with("(SELECT");
  out += t.lhs_sql + t.operator_sql + (two_subqueries ? "\n" : "") + t.rhs_sql + "\n";
  out += "BEGIN\n";
  std::string message;
  for (char c : t.abort_message) {
    if (c == '\'') message += '\'';
    message += c;
  }
  out += "SELECT RAISE(ABORT, '" + message + "');\n";
  out += "END;\n";
  return out;
}

std::string compile_triggers(const Vocabulary& v) {
  auto diags = validate_vocabulary(v);
  if (has_errors(diags)) throw DiagnosticError(std::move(diags));
  const auto schema = derive_schema(v);
  std::string out;
  for (std::size_t i = 0; i < v.rules.size(); ++i) {
    if (i) out += "\n";
    out += emit_trigger(compile_rule(v.rules[i], schema));
  }
  return out;
}

std::string compile_all(const Vocabulary& v) {
  auto triggers = compile_triggers(v);
  auto out = emit_ddl(derive_schema(v));
  if (!triggers.empty()) out += "\n" + triggers;
  return out;
}

}  // namespace itsm
