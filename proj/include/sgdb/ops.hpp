#pragma once

// Relational operators over keyed star-graph relations. Every operator is a
// pure function: inputs are never modified and results carry derived schemas.
//
// Joins nest the matching right tuple under the join field of the left tuple
// and then flatten, so a join on `catalog` yields fields `catalog.catalog`,
// `catalog.description`, ...

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sgdb/model.hpp"

namespace sgdb {

// ---------------------------------------------------------------------------
// Conditions and projections

struct Condition {
  FieldName field;
  std::string value;

  friend bool operator==(const Condition&, const Condition&) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Parses `field=value`. Splits on the first '=' only, so values may contain
/// '='. Both sides are whitespace-trimmed. Empty text means "no condition".
inline std::optional<Condition> parse_condition(std::string_view text) {
  if (detail::trim(text).empty()) return std::nullopt;
  auto eq = text.find('=');
  if (eq == std::string_view::npos)
    throw Error(ErrorCode::SchemaError, "condition '" + std::string(text) + "' has no '='");
  return Condition{std::string(detail::trim(text.substr(0, eq))),
                   std::string(detail::trim(text.substr(eq + 1)))};
}

struct AllColumns {
  friend bool operator==(const AllColumns&, const AllColumns&) = default;
};

/// Either `*` or an explicit column list.
using Projection = std::variant<AllColumns, std::vector<FieldName>>;

/// Parses a comma-delimited column list; a leading `*` selects everything.
inline Projection parse_projection(std::string_view text) {
  std::vector<FieldName> cols;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    cols.emplace_back(detail::trim(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (cols.front() == "*") return AllColumns{};
  return cols;
}

// ---------------------------------------------------------------------------
// Nested records and flattening

/// A record whose entries are scalars or further records. Produced by joins
/// before flattening; entry order is insertion order.
struct NestedRecord {
  struct Entry;
  std::vector<Entry> entries;

  NestedRecord() = default;
  inline NestedRecord(std::initializer_list<Entry> init);

  /// Lifts a flat tuple to a one-level nested record.
  static inline NestedRecord from_tuple(const TupleRecord& t);

  inline void set(std::string_view name, Value v);
  inline void set(std::string_view name, NestedRecord r);
  bool empty() const noexcept { return entries.empty(); }
};

struct NestedRecord::Entry {
  FieldName name;
  std::variant<Value, NestedRecord> value;

  Entry(FieldName n, Value v) : name(std::move(n)), value(std::move(v)) {}
  Entry(FieldName n, const char* v) : name(std::move(n)), value(Value(v)) {}
  Entry(FieldName n, NestedRecord r) : name(std::move(n)), value(std::move(r)) {}
};

inline NestedRecord::NestedRecord(std::initializer_list<Entry> init) : entries(init) {}

inline NestedRecord NestedRecord::from_tuple(const TupleRecord& t) {
  NestedRecord r;
  r.entries.reserve(t.size());
  for (const auto& [k, v] : t) r.entries.emplace_back(k, v);
  return r;
}

inline void NestedRecord::set(std::string_view name, Value v) {
  for (auto& e : entries) {
    if (e.name == name) {
      e.value = std::move(v);
      return;
    }
  }
  entries.emplace_back(FieldName(name), std::move(v));
}

inline void NestedRecord::set(std::string_view name, NestedRecord r) {
  for (auto& e : entries) {
    if (e.name == name) {
      e.value = std::move(r);
      return;
    }
  }
  entries.emplace_back(FieldName(name), std::move(r));
}

namespace detail {

inline void flatten_into(const NestedRecord& r, const std::string& prefix, std::string_view sep,
                         TupleRecord& out) {
  for (const auto& e : r.entries) {
    std::string key = prefix.empty() ? e.name : prefix + std::string(sep) + e.name;
    if (const auto* nested = std::get_if<NestedRecord>(&e.value)) {
      if (!nested->empty()) {
        flatten_into(*nested, key, sep, out);
        continue;
      }
      if (!out.emplace(key, Value::null()).second)
        throw Error(ErrorCode::KeyCollision, "flattened key '" + key + "' produced twice");
      continue;
    }
    if (!out.emplace(key, std::get<Value>(e.value)).second)
      throw Error(ErrorCode::KeyCollision, "flattened key '" + key + "' produced twice");
  }
}

}  // namespace detail

/// Depth-first flattening: entry `q` nested under `p` becomes `p<sep>q`; an
/// empty nested record becomes null. Throws KeyCollision when two paths
/// flatten to the same name.
inline TupleRecord flatten(const NestedRecord& r, std::optional<std::string_view> prefix = std::nullopt,
                           std::string_view sep = ".") {
  TupleRecord out;
  detail::flatten_into(r, std::string(prefix.value_or("")), sep, out);
  return out;
}

// ---------------------------------------------------------------------------
// select / project / rename

inline Relation select(const Relation& rel, const std::optional<Condition>& cond = std::nullopt) {
  Relation out(rel.schema().as_derived());
  for (const auto& [key, row] : rel.rows()) {
    if (cond) {
      auto it = row.find(cond->field);
      if (it == row.end() || !it->second.equals_text(cond->value)) continue;
    }
    out.set_row(key, row);
  }
  return out;
}

/// Keeps the requested fields each row has; missing ones are skipped per row.
/// Row keys are preserved, so identical projected rows stay distinct.
inline Relation project(const Relation& rel, const Projection& columns) {
  if (std::holds_alternative<AllColumns>(columns)) return Relation(rel.schema().as_derived(), rel.rows());

  std::vector<FieldName> cols;
  for (const auto& c : std::get<std::vector<FieldName>>(columns)) {
    if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
  }
  const auto& pk = rel.schema().primary_key();
  bool keeps_pk = std::find(cols.begin(), cols.end(), pk) != cols.end();
  Relation out(Schema::derived(keeps_pk ? pk : FieldName(), cols));
  for (const auto& [key, row] : rel.rows()) {
    TupleRecord projected;
    for (const auto& c : cols) {
      if (auto it = row.find(c); it != row.end()) projected.emplace(c, it->second);
    }
    out.set_row(key, std::move(projected));
  }
  return out;
}

/// Relabels field `old_name` to `new_name` in every row that has it. Row keys
/// stay as they are even when the primary-key field is renamed.
inline Relation rename(const Relation& rel, std::string_view old_name, std::string_view new_name) {
  for (const auto& [key, row] : rel.rows()) {
    if (row.contains(new_name))
      throw Error(ErrorCode::FieldCollision,
                  "field '" + std::string(new_name) + "' already exists in row '" + key + "'");
  }

  std::vector<FieldName> fields;
  for (const auto& f : rel.schema().fields()) {
    if (f == old_name) {
      if (!rel.schema().has_field(new_name)) fields.emplace_back(new_name);
    } else {
      fields.push_back(f);
    }
  }
  FieldName pk = rel.schema().primary_key() == old_name ? FieldName(new_name) : rel.schema().primary_key();

  Relation out(Schema::derived(std::move(pk), std::move(fields)));
  for (const auto& [key, row] : rel.rows()) {
    auto it = row.find(old_name);
    if (it == row.end()) {
      out.set_row(key, row);
      continue;
    }
    TupleRecord renamed = row;
    auto node = renamed.extract(FieldName(old_name));
    node.key() = FieldName(new_name);
    renamed.insert(std::move(node));
    out.set_row(key, std::move(renamed));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Joins

enum class JoinKind { Inner, Left, Right, Outer };

inline std::string_view to_string(JoinKind kind) {
  switch (kind) {
    case JoinKind::Inner: return "inner";
    case JoinKind::Left: return "left";
    case JoinKind::Right: return "right";
    case JoinKind::Outer: return "outer";
  }
  return "?";
}

namespace detail {

/// The join field must be named and known to the left relation, either
/// through its schema or through at least one row.
inline void require_join_field(const Relation& left, std::string_view key) {
  if (key.empty()) throw Error(ErrorCode::MissingJoinKey, "no join field given");
  if (left.schema().has_field(key)) return;
  for (const auto& [_, row] : left.rows()) {
    if (row.contains(key)) return;
  }
  throw Error(ErrorCode::MissingJoinKey, "left relation has no field '" + std::string(key) + "'");
}

inline Schema joined_schema(const Relation& left, const Relation& right, std::string_view key,
                            FieldName pk) {
  std::vector<FieldName> fields;
  bool nested = false;
  for (const auto& f : left.schema().fields()) {
    if (f != key) {
      fields.push_back(f);
      continue;
    }
    nested = true;
    for (const auto& rf : right.schema().fields()) fields.push_back(f + "." + rf);
  }
  if (!nested) {
    for (const auto& rf : right.schema().fields()) fields.push_back(std::string(key) + "." + rf);
  }
  return Schema::derived(std::move(pk), std::move(fields));
}

/// Right tuple referenced by `row[key]`, if any.
inline const TupleRecord* lookup_right(const TupleRecord& row, std::string_view key, const Relation& right) {
  auto it = row.find(key);
  if (it == row.end() || !it->second.is_text()) return nullptr;
  return right.find(it->second.text());
}

inline TupleRecord nest_and_flatten(const TupleRecord& row, std::string_view key, const TupleRecord& inner) {
  NestedRecord nested = NestedRecord::from_tuple(row);
  nested.set(key, NestedRecord::from_tuple(inner));
  return flatten(nested);
}

inline void add_row_checked(Relation& out, RowKey key, TupleRecord row) {
  if (out.contains(key))
    throw Error(ErrorCode::KeyCollision, "result already has a row keyed '" + key + "'");
  out.set_row(std::move(key), std::move(row));
}

/// Rows for right tuples that no left row references: every left field is ""
/// except the join field, which holds the nested right tuple.
inline void add_unreferenced_right(Relation& out, const Relation& left, const Relation& right,
                                   std::string_view key) {
  std::set<std::string_view> referenced;
  for (const auto& [_, row] : left.rows()) {
    auto it = row.find(key);
    if (it != row.end() && it->second.is_text()) referenced.insert(it->second.text());
  }
  for (const auto& [rkey, rrow] : right.rows()) {
    if (referenced.contains(rkey)) continue;
    NestedRecord synthesized;
    bool placed = false;
    for (const auto& f : left.schema().fields()) {
      if (f == key) {
        synthesized.set(f, NestedRecord::from_tuple(rrow));
        placed = true;
      } else {
        synthesized.set(f, Value(""));
      }
    }
    if (!placed) synthesized.set(key, NestedRecord::from_tuple(rrow));
    add_row_checked(out, rkey, flatten(synthesized));
  }
}

}  // namespace detail

inline Relation inner_join(const Relation& left, const Relation& right, std::string_view key) {
  detail::require_join_field(left, key);
  Relation out(detail::joined_schema(left, right, key, left.schema().primary_key()));
  for (const auto& [lkey, lrow] : left.rows()) {
    const TupleRecord* match = detail::lookup_right(lrow, key, right);
    if (!match || match->empty()) continue;
    out.set_row(lkey, detail::nest_and_flatten(lrow, key, *match));
  }
  return out;
}

/// Every left row survives. Unmatched rows keep their scalar join field, so
/// the result may mix `key` and `key.*` rows. A match against an empty right
/// tuple nests nothing and flattens to `key = null`.
inline Relation left_join(const Relation& left, const Relation& right, std::string_view key) {
  detail::require_join_field(left, key);
  Relation out(detail::joined_schema(left, right, key, left.schema().primary_key()));
  for (const auto& [lkey, lrow] : left.rows()) {
    const TupleRecord* match = detail::lookup_right(lrow, key, right);
    out.set_row(lkey, match ? detail::nest_and_flatten(lrow, key, *match) : lrow);
  }
  return out;
}

inline Relation right_join(const Relation& left, const Relation& right, std::string_view key) {
  Relation out = inner_join(left, right, key);
  detail::add_unreferenced_right(out, left, right, key);
  return out;
}

inline Relation outer_join(const Relation& left, const Relation& right, std::string_view key) {
  Relation out = left_join(left, right, key);
  detail::add_unreferenced_right(out, left, right, key);
  return out;
}

inline Relation join(JoinKind kind, const Relation& left, const Relation& right, std::string_view key) {
  switch (kind) {
    case JoinKind::Inner: return inner_join(left, right, key);
    case JoinKind::Left: return left_join(left, right, key);
    case JoinKind::Right: return right_join(left, right, key);
    case JoinKind::Outer: return outer_join(left, right, key);
  }
  return {};
}

/// Cross product. Row `<l>_<r>` is a fresh copy of left row l with right row r
/// nested under `nest_field`, flattened.
inline Relation cartesian(const Relation& left, const Relation& right, std::string_view nest_field) {
  detail::require_join_field(left, nest_field);
  Relation out(detail::joined_schema(left, right, nest_field, FieldName()));
  for (const auto& [lkey, lrow] : left.rows()) {
    for (const auto& [rkey, rrow] : right.rows()) {
      detail::add_row_checked(out, lkey + "_" + rkey, detail::nest_and_flatten(lrow, nest_field, rrow));
    }
  }
  return out;
}

/// The field a natural join uses: the right primary key, which must also be a
/// field of the left relation.
inline FieldName natural_join_field(const Relation& left, const Relation& right) {
  bool any_common = false;
  for (const auto& f : left.schema().fields()) {
    if (right.schema().has_field(f)) {
      any_common = true;
      break;
    }
  }
  if (!any_common) throw Error(ErrorCode::NoCommonField, "relations share no field name");
  const auto& rpk = right.schema().primary_key();
  if (rpk.empty() || !left.schema().has_field(rpk) || !right.schema().has_field(rpk))
    throw Error(ErrorCode::NotJoinable, "shared fields do not include the right primary key");
  return rpk;
}

inline Relation natural_join(const Relation& left, const Relation& right) {
  return inner_join(left, right, natural_join_field(left, right));
}

}  // namespace sgdb
