#pragma once

// Hypergraph view of relational data: every tuple is a star graph whose center
// is the primary-key value and whose labeled edges lead to the field values;
// a relation is the keyed set of those star graphs.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sgdb/error.hpp"

namespace sgdb {

using FieldName = std::string;
using RowKey = std::string;

/// A cell: UTF-8 text or the explicit null left behind when an empty nested
/// record is flattened. Empty text and null are different values.
class Value {
 public:
  Value() = default;
  Value(std::string text) : text_(std::move(text)) {}
  Value(std::string_view text) : text_(std::string(text)) {}
  Value(const char* text) : text_(std::string(text)) {}

  static Value null() {
    Value v;
    v.text_.reset();
    return v;
  }

  bool is_null() const noexcept { return !text_.has_value(); }
  bool is_text() const noexcept { return text_.has_value(); }

  /// Precondition: is_text().
  const std::string& text() const { return *text_; }

  bool equals_text(std::string_view s) const noexcept { return text_ && *text_ == s; }

  friend bool operator==(const Value&, const Value&) = default;
  friend auto operator<=>(const Value&, const Value&) = default;

 private:
  std::optional<std::string> text_ = std::string();
};

using TupleRecord = std::map<FieldName, Value, std::less<>>;

inline bool is_valid_base_field_name(std::string_view name) {
  return !name.empty() && name.find_first_of(".,=") == std::string_view::npos;
}

class Schema {
 public:
  Schema() = default;

  /// Schema for a stored relation. Field names must be non-empty, unique and
  /// free of the reserved characters '.', ',' and '='.
  static Schema make(FieldName primary_key, std::vector<FieldName> fields) {
    if (fields.empty()) throw Error(ErrorCode::SchemaError, "schema has no fields");
    std::set<std::string_view> seen;
    for (const auto& f : fields) {
      if (!is_valid_base_field_name(f))
        throw Error(ErrorCode::SchemaError, "invalid field name '" + f + "'");
      if (!seen.insert(f).second)
        throw Error(ErrorCode::SchemaError, "duplicate field '" + f + "'");
    }
    if (!seen.contains(primary_key))
      throw Error(ErrorCode::SchemaError,
                  "primary key '" + primary_key + "' is not one of the fields");
    return Schema(std::move(primary_key), std::move(fields), false);
  }

  /// Schema of an operator result. No validation; the primary key may be
  /// empty when the result has no meaningful key field.
  static Schema derived(FieldName primary_key, std::vector<FieldName> fields) {
    return Schema(std::move(primary_key), std::move(fields), true);
  }

  const FieldName& primary_key() const noexcept { return primary_key_; }
  const std::vector<FieldName>& fields() const noexcept { return fields_; }
  bool is_derived() const noexcept { return derived_; }

  bool has_field(std::string_view name) const {
    return std::find(fields_.begin(), fields_.end(), name) != fields_.end();
  }

  Schema as_derived() const { return Schema(primary_key_, fields_, true); }

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  Schema(FieldName pk, std::vector<FieldName> fields, bool derived)
      : primary_key_(std::move(pk)), fields_(std::move(fields)), derived_(derived) {}

  FieldName primary_key_;
  std::vector<FieldName> fields_;
  bool derived_ = true;
};

/// A keyed set of tuples (hypernodes) plus the schema describing them.
class Relation {
 public:
  using RowMap = std::map<RowKey, TupleRecord, std::less<>>;

  Relation() = default;
  explicit Relation(Schema schema) : schema_(std::move(schema)) {}
  Relation(Schema schema, RowMap rows) : schema_(std::move(schema)), rows_(std::move(rows)) {}

  const Schema& schema() const noexcept { return schema_; }
  const RowMap& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }

  bool contains(std::string_view key) const { return rows_.find(key) != rows_.end(); }

  const TupleRecord* find(std::string_view key) const {
    auto it = rows_.find(key);
    return it == rows_.end() ? nullptr : &it->second;
  }

  // Building access, used while an operator assembles its result.
  void set_row(RowKey key, TupleRecord row) { rows_.insert_or_assign(std::move(key), std::move(row)); }
  bool erase_row(std::string_view key) {
    auto it = rows_.find(key);
    if (it == rows_.end()) return false;
    rows_.erase(it);
    return true;
  }
  void set_schema(Schema schema) { schema_ = std::move(schema); }

 private:
  Schema schema_;
  RowMap rows_;
};

struct StarGraphView {
  RowKey center;
  std::vector<std::pair<FieldName, Value>> edges;

  friend bool operator==(const StarGraphView&, const StarGraphView&) = default;
};

inline Relation create_relation(FieldName pk_field, std::vector<FieldName> fields) {
  return Relation(Schema::make(std::move(pk_field), std::move(fields)));
}

/// Throws SchemaError unless `t` can live in a relation with `schema`: the
/// primary key is present as non-empty text and every field is declared.
inline const std::string& check_tuple(const Schema& schema, const TupleRecord& t) {
  for (const auto& [field, _] : t) {
    if (!schema.has_field(field))
      throw Error(ErrorCode::SchemaError, "unknown field '" + field + "'");
  }
  auto pk = t.find(schema.primary_key());
  if (pk == t.end())
    throw Error(ErrorCode::SchemaError, "missing primary key '" + schema.primary_key() + "'");
  if (!pk->second.is_text() || pk->second.text().empty())
    throw Error(ErrorCode::SchemaError, "primary key '" + schema.primary_key() + "' must be non-empty text");
  return pk->second.text();
}

/// Returns `rel` with `t` stored under its primary-key value, replacing any
/// row with the same key.
inline Relation insert_tuple(const Relation& rel, TupleRecord t) {
  const RowKey key = check_tuple(rel.schema(), t);
  Relation out = rel;
  out.set_row(key, std::move(t));
  return out;
}

inline Relation delete_tuple(const Relation& rel, std::string_view key) {
  if (!rel.contains(key)) throw Error(ErrorCode::KeyNotFound, "no row '" + std::string(key) + "'");
  Relation out = rel;
  out.erase_row(key);
  return out;
}

inline const TupleRecord& get_tuple(const Relation& rel, std::string_view key) {
  const TupleRecord* row = rel.find(key);
  if (!row) throw Error(ErrorCode::KeyNotFound, "no row '" + std::string(key) + "'");
  return *row;
}

/// Star-graph view of one tuple. Edges follow schema field order; fields a
/// derived row carries beyond its schema come last, lexicographically.
inline StarGraphView as_star_graph(const Relation& rel, std::string_view key) {
  const TupleRecord& row = get_tuple(rel, key);
  const auto& pk = rel.schema().primary_key();
  StarGraphView view{RowKey(key), {}};
  for (const auto& f : rel.schema().fields()) {
    if (f == pk) continue;
    if (auto it = row.find(f); it != row.end()) view.edges.emplace_back(f, it->second);
  }
  for (const auto& [f, v] : row) {
    if (f != pk && !rel.schema().has_field(f)) view.edges.emplace_back(f, v);
  }
  return view;
}

/// Content equality: same row keys, and per key the same field/value map.
/// Schemas and field order are not compared.
inline bool relation_equal(const Relation& a, const Relation& b) { return a.rows() == b.rows(); }

}  // namespace sgdb
