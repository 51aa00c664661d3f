#include <sqlite3.h>

#include <sstream>
#include <stdexcept>

#include "itsmrules/engine.hpp"

namespace itsm {

std::string to_sql_text(const SqlValue& v) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "NULL"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const {
      std::ostringstream os;
      os.precision(17);
      os << d;
      return os.str();
    }
    std::string operator()(const std::string& s) const { return "'" + s + "'"; }
  };
  return std::visit(Visitor{}, v);
}

namespace {

struct StatementCloser {
  void operator()(sqlite3_stmt* s) const { sqlite3_finalize(s); }
};
using StatementPtr = std::unique_ptr<sqlite3_stmt, StatementCloser>;

SqlValue column_value(sqlite3_stmt* stmt, int col) {
  switch (sqlite3_column_type(stmt, col)) {
    case SQLITE_INTEGER: return static_cast<std::int64_t>(sqlite3_column_int64(stmt, col));
    case SQLITE_FLOAT: return sqlite3_column_double(stmt, col);
    case SQLITE_NULL: return std::monostate{};
    default: {
      const auto* text = reinterpret_cast<const char*>(sqlite3_column_text(stmt, col));
      return std::string(text ? text : "");
    }
  }
}

void bind(sqlite3_stmt* stmt, int index, const SqlValue& v) {
  struct Binder {
    sqlite3_stmt* stmt;
    int index;
    void operator()(std::monostate) const { sqlite3_bind_null(stmt, index); }
    void operator()(std::int64_t i) const { sqlite3_bind_int64(stmt, index, i); }
    void operator()(double d) const { sqlite3_bind_double(stmt, index, d); }
    void operator()(const std::string& s) const {
      sqlite3_bind_text(stmt, index, s.data(), static_cast<int>(s.size()), SQLITE_TRANSIENT);
    }
  };
  std::visit(Binder{stmt, index}, v);
}

}  // namespace

struct SqliteEngine::Impl {
  sqlite3* db = nullptr;

  std::string last_error() const { return sqlite3_errmsg(db); }
};

SqliteEngine::SqliteEngine() : impl_(std::make_unique<Impl>()) {
  if (sqlite3_open(":memory:", &impl_->db) != SQLITE_OK) {
    std::string msg = impl_->db ? sqlite3_errmsg(impl_->db) : "out of memory";
    sqlite3_close(impl_->db);
    throw std::runtime_error("cannot open in-memory database: " + msg);
  }
}

SqliteEngine::~SqliteEngine() { sqlite3_close(impl_->db); }

std::optional<EngineError> SqliteEngine::execute_script(std::string_view sql) {
  const char* cursor = sql.data();
  const char* end = sql.data() + sql.size();
  std::size_t index = 0;
  while (cursor < end) {
    sqlite3_stmt* raw = nullptr;
    const char* tail = nullptr;
    int rc = sqlite3_prepare_v2(impl_->db, cursor, static_cast<int>(end - cursor), &raw, &tail);
    StatementPtr stmt(raw);
    if (rc != SQLITE_OK) return EngineError{index, impl_->last_error()};
    cursor = tail;
    if (!stmt) break;  // trailing whitespace or comments
    while ((rc = sqlite3_step(stmt.get())) == SQLITE_ROW) {
    }
    if (rc != SQLITE_DONE) return EngineError{index, impl_->last_error()};
    ++index;
  }
  return std::nullopt;
}

std::optional<EngineError> SqliteEngine::execute(std::string_view sql,
                                                 std::span<const SqlValue> params) {
  sqlite3_stmt* raw = nullptr;
  if (sqlite3_prepare_v2(impl_->db, sql.data(), static_cast<int>(sql.size()), &raw, nullptr) !=
      SQLITE_OK)
    return EngineError{0, impl_->last_error()};
  StatementPtr stmt(raw);
  for (std::size_t i = 0; i < params.size(); ++i)
    bind(stmt.get(), static_cast<int>(i + 1), params[i]);
  int rc;
  while ((rc = sqlite3_step(stmt.get())) == SQLITE_ROW) {
  }
  if (rc != SQLITE_DONE) return EngineError{0, impl_->last_error()};
  return std::nullopt;
}

std::vector<Row> SqliteEngine::query(std::string_view sql) {
  sqlite3_stmt* raw = nullptr;
  if (sqlite3_prepare_v2(impl_->db, sql.data(), static_cast<int>(sql.size()), &raw, nullptr) !=
      SQLITE_OK)
    throw std::runtime_error("query failed: " + impl_->last_error());
  StatementPtr stmt(raw);
  std::vector<Row> rows;
  const int columns = sqlite3_column_count(stmt.get());
  int rc;
  while ((rc = sqlite3_step(stmt.get())) == SQLITE_ROW) {
    Row row;
    row.reserve(columns);
    for (int c = 0; c < columns; ++c) row.push_back(column_value(stmt.get(), c));
    rows.push_back(std::move(row));
  }
  if (rc != SQLITE_DONE) throw std::runtime_error("query failed: " + impl_->last_error());
  return rows;
}

std::vector<std::string> SqliteEngine::table_names() {
  std::vector<std::string> names;
  for (const auto& row :
       query("SELECT name FROM sqlite_master WHERE type='table' ORDER BY name")) {
    names.push_back(std::get<std::string>(row.at(0)));
  }
  return names;
}

}  // namespace itsm
