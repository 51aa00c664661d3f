#pragma once

// Narrow adapter over an embedded relational engine. Any engine that accepts
// `WHEN` clauses and `RAISE(ABORT, ...)` in trigger bodies can implement it.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace itsm {

using SqlValue = std::variant<std::monostate, std::int64_t, double, std::string>;

std::string to_sql_text(const SqlValue& v);

struct EngineError {
  std::size_t statement_index = 0;  // 0-based within the script
  std::string message;
};

using Row = std::vector<SqlValue>;

class Engine {
 public:
  virtual ~Engine() = default;

  /// Executes every statement of `sql` in order, stopping at the first failure.
  virtual std::optional<EngineError> execute_script(std::string_view sql) = 0;

  /// Executes a single statement with positional `?` parameters.
  virtual std::optional<EngineError> execute(std::string_view sql,
                                             std::span<const SqlValue> params) = 0;

  virtual std::vector<Row> query(std::string_view sql) = 0;

  virtual std::vector<std::string> table_names() = 0;
};

/// SQLite in-memory database, one per instance.
class SqliteEngine final : public Engine {
 public:
  SqliteEngine();
  ~SqliteEngine() override;
  SqliteEngine(const SqliteEngine&) = delete;
  SqliteEngine& operator=(const SqliteEngine&) = delete;

  std::optional<EngineError> execute_script(std::string_view sql) override;
  std::optional<EngineError> execute(std::string_view sql,
                                     std::span<const SqlValue> params) override;
  std::vector<Row> query(std::string_view sql) override;
  std::vector<std::string> table_names() override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace itsm
