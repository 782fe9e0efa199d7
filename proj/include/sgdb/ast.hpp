#pragma once

#include <string>
#include <variant>
#include <vector>

#include "sgdb/lexer.hpp"
#include "sgdb/ops.hpp"

namespace sgdb {

struct SelectStep {
  Condition condition;
  friend bool operator==(const SelectStep&, const SelectStep&) = default;
};

struct ProjectStep {
  Projection columns;
  friend bool operator==(const ProjectStep&, const ProjectStep&) = default;
};

struct RenameStep {
  FieldName from;
  FieldName to;
  friend bool operator==(const RenameStep&, const RenameStep&) = default;
};

struct JoinStep {
  JoinKind kind = JoinKind::Inner;
  std::string table;
  FieldName key;
  friend bool operator==(const JoinStep&, const JoinStep&) = default;
};

struct CrossStep {
  std::string table;
  FieldName nest_field;
  friend bool operator==(const CrossStep&, const CrossStep&) = default;
};

struct NaturalJoinStep {
  std::string table;
  friend bool operator==(const NaturalJoinStep&, const NaturalJoinStep&) = default;
};

using Step = std::variant<SelectStep, ProjectStep, RenameStep, JoinStep, CrossStep, NaturalJoinStep>;

/// `source | step | step ...`, evaluated left to right.
struct QueryAst {
  std::string source;
  std::vector<Step> steps;
  friend bool operator==(const QueryAst&, const QueryAst&) = default;
};

struct CreateTableStmt {
  std::string table;
  FieldName primary_key;
  std::vector<FieldName> fields;
  friend bool operator==(const CreateTableStmt&, const CreateTableStmt&) = default;
};

struct DropTableStmt {
  std::string table;
  friend bool operator==(const DropTableStmt&, const DropTableStmt&) = default;
};

struct InsertStmt {
  std::string table;
  TupleRecord record;
  friend bool operator==(const InsertStmt&, const InsertStmt&) = default;
};

struct DeleteStmt {
  std::string table;
  RowKey key;
  friend bool operator==(const DeleteStmt&, const DeleteStmt&) = default;
};

struct ShowTablesStmt {
  friend bool operator==(const ShowTablesStmt&, const ShowTablesStmt&) = default;
};

using Statement = std::variant<QueryAst, CreateTableStmt, DropTableStmt, InsertStmt, DeleteStmt, ShowTablesStmt>;

// ---------------------------------------------------------------------------
// Pretty-printing back to source text. Output re-parses to the same AST.

namespace detail {

inline bool is_bare_word(std::string_view s) {
  if (s.empty() || is_keyword(s)) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto u = static_cast<unsigned char>(s[i]);
    bool ok = u >= 0x80 || std::isalnum(u) || s[i] == '_' || s[i] == '.';
    if (s[i] == '-') ok = (i + 1 == s.size() || (s[i + 1] != '>' && s[i + 1] != '-')) && (i == 0 || s[i - 1] != '-');
    if (!ok) return false;
  }
  return true;
}

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

inline std::string ident(std::string_view s) { return is_bare_word(s) ? std::string(s) : quote(s); }

inline std::string join_idents(const std::vector<FieldName>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += ", ";
    out += ident(names[i]);
  }
  return out;
}

inline std::string_view join_keyword(JoinKind kind) {
  switch (kind) {
    case JoinKind::Inner: return "ijoin";
    case JoinKind::Left: return "ljoin";
    case JoinKind::Right: return "rjoin";
    case JoinKind::Outer: return "ojoin";
  }
  return "ijoin";
}

}  // namespace detail

inline std::string render_step(const Step& step) {
  using detail::ident;
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SelectStep>) {
          return "select " + ident(s.condition.field) + " = " + detail::quote(s.condition.value);
        } else if constexpr (std::is_same_v<T, ProjectStep>) {
          if (std::holds_alternative<AllColumns>(s.columns)) return "project *";
          return "project " + detail::join_idents(std::get<std::vector<FieldName>>(s.columns));
        } else if constexpr (std::is_same_v<T, RenameStep>) {
          return "rename " + ident(s.from) + " -> " + ident(s.to);
        } else if constexpr (std::is_same_v<T, JoinStep>) {
          return std::string(detail::join_keyword(s.kind)) + " " + ident(s.table) + " on " + ident(s.key);
        } else if constexpr (std::is_same_v<T, CrossStep>) {
          return "cross " + ident(s.table) + " as " + ident(s.nest_field);
        } else {
          return "njoin " + ident(s.table);
        }
      },
      step);
}

inline std::string render_statement(const Statement& stmt) {
  using detail::ident;
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, QueryAst>) {
          std::string out = ident(s.source);
          for (const auto& step : s.steps) out += " | " + render_step(step);
          return out;
        } else if constexpr (std::is_same_v<T, CreateTableStmt>) {
          return "create table " + ident(s.table) + " pk " + ident(s.primary_key) + " fields " +
                 detail::join_idents(s.fields);
        } else if constexpr (std::is_same_v<T, DropTableStmt>) {
          return "drop table " + ident(s.table);
        } else if constexpr (std::is_same_v<T, InsertStmt>) {
          std::string out = "insert " + ident(s.table) + " {";
          bool first = true;
          for (const auto& [f, v] : s.record) {
            out += first ? "" : ", ";
            out += ident(f) + ": " + detail::quote(v.is_text() ? v.text() : std::string());
            first = false;
          }
          return out + "}";
        } else if constexpr (std::is_same_v<T, DeleteStmt>) {
          return "delete " + ident(s.table) + " key " + detail::quote(s.key);
        } else {
          return "show tables";
        }
      },
      stmt);
}

}  // namespace sgdb
