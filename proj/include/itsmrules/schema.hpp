#pragma once

// Relational schema implied by a vocabulary: one entity table per
// non-attribute term, one link table per "is linked to" fact type.

#include <optional>
#include <string>
#include <vector>

#include "itsmrules/vocabulary.hpp"

namespace itsm {

enum class SqlType { Integer, Numeric, Text };

enum class ColumnRole { IdColumn, AttributeColumn, ForeignKey };

struct ColumnDef {
  std::string name;
  SqlType sql_type = SqlType::Integer;
  ColumnRole role = ColumnRole::IdColumn;
  std::string references;  // target table, ForeignKey only

  bool operator==(const ColumnDef&) const = default;
};

enum class TableKind { EntityTable, LinkTable };

struct TableDef {
  std::string name;
  TableKind kind = TableKind::EntityTable;
  std::string subject;  // the term, or the link's first term
  std::string object;   // link tables only
  std::vector<ColumnDef> columns;

  const ColumnDef* find_column(std::string_view column) const;
  bool operator==(const TableDef&) const = default;
};

struct SchemaModel {
  std::vector<TableDef> tables;

  const TableDef* find_table(std::string_view name) const;
  bool operator==(const SchemaModel&) const = default;
};

std::string link_table_name(std::string_view subject, std::string_view object);
std::string foreign_key_column(std::string_view term);

SchemaModel derive_schema(const Vocabulary& v);

/// `CREATE TABLE` statements, each terminated by ";\n".
std::string emit_ddl(const SchemaModel& s);

/// Double-quoted SQL identifier.
std::string quote_identifier(std::string_view name);

}  // namespace itsm
