#pragma once

#include <string>
#include <variant>

#include "sgdb/ast.hpp"
#include "sgdb/database.hpp"
#include "sgdb/ops.hpp"

namespace sgdb {

struct StatusResult {
  std::string message;
  std::size_t affected = 0;

  friend bool operator==(const StatusResult&, const StatusResult&) = default;
};

using EvalResult = std::variant<Relation, StatusResult>;

/// Folds the pipeline steps over the source table's snapshot.
inline Relation evaluate_query(const QueryAst& q, const Database& db) {
  Relation current = db.snapshot(q.source);
  for (const auto& step : q.steps) {
    current = std::visit(
        [&](const auto& s) -> Relation {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, SelectStep>) {
            return select(current, Condition{std::string(detail::trim(s.condition.field)),
                                             std::string(detail::trim(s.condition.value))});
          } else if constexpr (std::is_same_v<T, ProjectStep>) {
            return project(current, s.columns);
          } else if constexpr (std::is_same_v<T, RenameStep>) {
            return rename(current, s.from, s.to);
          } else if constexpr (std::is_same_v<T, JoinStep>) {
            return join(s.kind, current, db.snapshot(s.table), s.key);
          } else if constexpr (std::is_same_v<T, CrossStep>) {
            return cartesian(current, db.snapshot(s.table), s.nest_field);
          } else {
            return natural_join(current, db.snapshot(s.table));
          }
        },
        step);
  }
  return current;
}

inline Relation table_listing(const Database& db) {
  Relation out(Schema::make("table", {"table"}));
  for (const auto& name : db.table_names()) out.set_row(name, TupleRecord{{"table", Value(name)}});
  return out;
}

inline EvalResult evaluate(const Statement& stmt, const Database& db) {
  return std::visit(
      [&](const auto& s) -> EvalResult {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, QueryAst>) {
          return evaluate_query(s, db);
        } else if constexpr (std::is_same_v<T, CreateTableStmt>) {
          TableFile t = db.create_table(s.table, Schema::make(s.primary_key, s.fields));
          t.close();
          return StatusResult{"created table " + s.table, 0};
        } else if constexpr (std::is_same_v<T, DropTableStmt>) {
          db.drop_table(s.table);
          return StatusResult{"dropped table " + s.table, 0};
        } else if constexpr (std::is_same_v<T, InsertStmt>) {
          TableFile t = db.open_table(s.table);
          t.put(s.record);
          t.close();
          return StatusResult{"inserted 1 row into " + s.table, 1};
        } else if constexpr (std::is_same_v<T, DeleteStmt>) {
          TableFile t = db.open_table(s.table);
          std::size_t n = t.remove(s.key) ? 1 : 0;
          t.close();
          return StatusResult{"deleted " + std::to_string(n) + " row" + (n == 1 ? "" : "s") + " from " + s.table, n};
        } else {
          return table_listing(db);
        }
      },
      stmt);
}

}  // namespace sgdb
