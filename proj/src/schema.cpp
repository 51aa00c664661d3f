#include "itsmrules/schema.hpp"

namespace itsm {

const ColumnDef* TableDef::find_column(std::string_view column) const {
  for (const auto& c : columns)
    if (c.name == column) return &c;
  return nullptr;
}

const TableDef* SchemaModel::find_table(std::string_view name) const {
  for (const auto& t : tables)
    if (t.name == name) return &t;
  return nullptr;
}

std::string link_table_name(std::string_view subject, std::string_view object) {
  return std::string(subject) + "-is_linked_to-" + std::string(object);
}

std::string foreign_key_column(std::string_view term) { return std::string(term) + "_id"; }

std::string quote_identifier(std::string_view name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

SchemaModel derive_schema(const Vocabulary& v) {
  SchemaModel s;
  for (const auto& term : v.terms) {
    if (v.is_attribute_term(term.name)) continue;
    TableDef t;
    t.name = term.name;
    t.kind = TableKind::EntityTable;
    t.subject = term.name;
    t.columns.push_back({"id", SqlType::Integer, ColumnRole::IdColumn, {}});
    for (const auto& f : v.fact_types) {
      if (f.kind == FactKind::Attribute && f.subject == term.name)
        t.columns.push_back({f.object, SqlType::Numeric, ColumnRole::AttributeColumn, {}});
    }
    s.tables.push_back(std::move(t));
  }
  for (const auto& f : v.fact_types) {
    if (f.kind != FactKind::Link) continue;
    TableDef t;
    t.name = link_table_name(f.subject, f.object);
    t.kind = TableKind::LinkTable;
    t.subject = f.subject;
    t.object = f.object;
    t.columns.push_back(
        {foreign_key_column(f.subject), SqlType::Integer, ColumnRole::ForeignKey, f.subject});
    t.columns.push_back(
        {foreign_key_column(f.object), SqlType::Integer, ColumnRole::ForeignKey, f.object});
    s.tables.push_back(std::move(t));
  }
  return s;
}

namespace {

const char* type_name(SqlType t) {
  switch (t) {
    case SqlType::Integer: return "INTEGER";
    case SqlType::Numeric: return "NUMERIC";
    case SqlType::Text: return "TEXT";
  }
  return "";
}

}  // namespace

std::string emit_ddl(const SchemaModel& s) {
  std::string out;
  for (const auto& t : s.tables) {
    out += "CREATE TABLE " + quote_identifier(t.name) + " (\n";
    std::vector<std::string> lines;
    std::vector<std::string> keys;
    for (const auto& c : t.columns) {
      std::string line = "  " + quote_identifier(c.name) + " " + type_name(c.sql_type);
      if (c.role == ColumnRole::IdColumn) line += " PRIMARY KEY";
      if (c.role == ColumnRole::ForeignKey) {
        line += " NOT NULL REFERENCES " + quote_identifier(c.references) + "(\"id\")";
        keys.push_back(quote_identifier(c.name));
      }
      lines.push_back(std::move(line));
    }
    if (t.kind == TableKind::LinkTable && !keys.empty()) {
      std::string unique = "  UNIQUE (";
      for (std::size_t i = 0; i < keys.size(); ++i) unique += (i ? ", " : "") + keys[i];
      lines.push_back(unique + ")");
    }
    for (std::size_t i = 0; i < lines.size(); ++i)
      out += lines[i] + (i + 1 < lines.size() ? ",\n" : "\n");
    out += ");\n";
  }
  return out;
}

}  // namespace itsm
