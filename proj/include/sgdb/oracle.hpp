#pragma once

// A naive reference implementation of the relational operators written in
// the plain dictionary style: tables are JSON objects
// `{row key: {field: string|null}}` and every function works on its own deep
// copy. It shares no code with sgdb/ops.hpp and exists only to be compared
// against it.
//
// Behaviour beyond the plain loops:
//   * cartesian flattens every row and nests into a fresh copy of the left
//     row per pair. It synthesizes no rows for unreferenced right keys.
//   * natural_join joins on the right primary key when the left has it.
//   * select takes an already split (field, value) condition.
//   * a left row lacking the join field counts as unmatched.
//   * right/outer join synthesize rows from the left schema's field list.
//   * an empty or unknown join field is MissingJoinKey, a rename onto an
//     existing field is FieldCollision, and a result key written twice (or a
//     flattened name produced twice) is KeyCollision.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgdb/error.hpp"
#include "sgdb/model.hpp"
#include "sgdb/ops.hpp"

namespace sgdb::oracle {

using Dict = nlohmann::json;

/// A table as the oracle sees it: the row dictionary plus the schema facts the
/// row dictionary cannot recover from rows alone.
struct Table {
  Dict rows = Dict::object();
  std::string primary_key;
  std::vector<std::string> fields;
};

inline Table to_table(const Relation& rel) {
  Table t;
  for (const auto& [key, row] : rel.rows()) {
    Dict r = Dict::object();
    for (const auto& [f, v] : row) r[f] = v.is_null() ? Dict(nullptr) : Dict(v.text());
    t.rows[key] = std::move(r);
  }
  t.primary_key = rel.schema().primary_key();
  t.fields = rel.schema().fields();
  return t;
}

/// Back to engine rows for comparison. Nested objects must not survive.
inline Relation to_relation(const Dict& rows) {
  Relation out(Schema::derived("", {}));
  for (const auto& [key, row] : rows.items()) {
    TupleRecord t;
    for (const auto& [f, v] : row.items()) {
      if (v.is_object()) throw Error(ErrorCode::SchemaError, "oracle produced a nested record at " + key + "." + f);
      t.emplace(f, v.is_null() ? Value::null() : Value(v.get<std::string>()));
    }
    out.set_row(key, std::move(t));
  }
  return out;
}

inline Dict to_dict(const NestedRecord& r) {
  Dict d = Dict::object();
  for (const auto& e : r.entries) {
    if (const auto* nested = std::get_if<NestedRecord>(&e.value)) {
      d[e.name] = to_dict(*nested);
    } else {
      const auto& v = std::get<Value>(e.value);
      d[e.name] = v.is_null() ? Dict(nullptr) : Dict(v.text());
    }
  }
  return d;
}

namespace detail {

inline bool has_key(const Dict& d, const std::string& k) { return d.contains(k); }

inline std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

/// `left[k][key]` with a missing field or a null treated as "no value".
inline std::optional<std::string> join_value(const Dict& row, const std::string& key) {
  if (!row.contains(key) || !row[key].is_string()) return std::nullopt;
  return row[key].get<std::string>();
}

inline void check_join_field(const Table& left, const std::string& key) {
  if (key.empty()) throw Error(ErrorCode::MissingJoinKey, "no join field");
  if (std::find(left.fields.begin(), left.fields.end(), key) != left.fields.end()) return;
  for (const auto& [_, row] : left.rows.items()) {
    if (row.contains(key)) return;
  }
  throw Error(ErrorCode::MissingJoinKey, "left table has no field " + key);
}

inline void store_new(Dict& ret, const std::string& k, Dict value) {
  if (ret.contains(k)) throw Error(ErrorCode::KeyCollision, "row " + k + " written twice");
  ret[k] = std::move(value);
}

}  // namespace detail

inline Dict flatten(const Dict& d, std::optional<std::string> prefix = std::nullopt, const std::string& sep = ".") {
  Dict result = Dict::object();
  if (!prefix) prefix = "";
  for (const auto& [k, v] : d.items()) {
    std::string key;
    if (!prefix->empty())
      key = *prefix + sep + k;
    else
      key = k;
    if (v.is_object()) {
      if (!v.empty()) {
        Dict sub = flatten(v, key);
        for (const auto& [sk, sv] : sub.items()) detail::store_new(result, sk, sv);
      } else {
        detail::store_new(result, key, nullptr);
      }
    } else {
      detail::store_new(result, key, v);
    }
  }
  return result;
}

inline Dict rename(Dict dic, const std::string& old_key, const std::string& new_key) {
  for (const auto& [k, row] : dic.items()) {
    if (row.contains(new_key)) throw Error(ErrorCode::FieldCollision, new_key + " exists in " + k);
  }
  for (auto& [k, row] : dic.items()) {
    std::vector<std::string> keys;
    for (const auto& [kk, _] : row.items()) keys.push_back(kk);
    for (const auto& kk : keys) {
      if (kk == old_key) {
        row[new_key] = row[old_key];
        row.erase(old_key);
      }
    }
  }
  return dic;
}

/// `where` is the split condition: empty for "everything", else {field, value}.
inline Dict select(const Dict& db, const std::vector<std::string>& where = {}) {
  Dict ret = Dict::object();
  for (const auto& [k, row] : db.items()) {
    // try: ... except KeyError: pass
    Dict field = "";
    if (where.size() == 2) {
      if (!row.contains(where[0])) continue;
      field = row[where[0]];
    }
    if ((where.size() == 2 && field == Dict(where[1])) || where.empty()) ret[k] = row;
  }
  return ret;
}

inline Dict project(const std::string& columns_text, const Dict& db) {
  std::vector<std::string> columns;
  std::size_t start = 0;
  while (true) {
    auto comma = columns_text.find(',', start);
    columns.push_back(detail::strip(columns_text.substr(start, comma == std::string::npos ? comma : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  Dict ret = Dict::object();
  for (const auto& [k, row] : db.items()) {
    if (columns[0] == "*") {
      ret[k] = row;
    } else {
      ret[k] = Dict::object();
      for (const auto& kk : columns) {
        if (row.contains(kk)) ret[k][kk] = row[kk];
      }
    }
  }
  return ret;
}

inline Dict left_join(const Table& left, const Dict& right, const std::string& key) {
  detail::check_join_field(left, key);
  Dict ret = Dict::object();
  for (const auto& [k, row] : left.rows.items()) {
    ret[k] = row;
    auto v = detail::join_value(row, key);
    if (v && detail::has_key(right, *v)) ret[k][key] = right[*v];
    ret[k] = flatten(ret[k]);
  }
  return ret;
}

inline Dict inner_join(const Table& left, const Dict& right, const std::string& key) {
  detail::check_join_field(left, key);
  Dict ret = Dict::object();
  for (const auto& [k, row] : left.rows.items()) {
    auto v = detail::join_value(row, key);
    if (v && detail::has_key(right, *v)) {
      if (right[*v].size() > 0) {
        ret[k] = row;
        ret[k][key] = right[*v];
        ret[k] = flatten(ret[k]);
      }
    }
  }
  return ret;
}

namespace detail {

/// The loop right_join and outer_join share: a row for every right key that
/// no left row refers to.
inline void add_unfound_right(Dict& ret, const Table& left, const Dict& right, const std::string& key) {
  for (const auto& [k, rrow] : right.items()) {
    int found = 0;
    Dict empty = Dict::object();
    for (const auto& [kk, lrow] : left.rows.items()) {
      if (join_value(lrow, key) == k) found = 1;
    }
    if (found == 0) {
      std::vector<std::string> left_row;
      if (!left.rows.empty()) {
        for (const auto& [f, _] : left.rows.begin().value().items()) left_row.push_back(f);
      } else {
        left_row = left.fields;
      }
      for (const auto& kk : left_row) {
        if (kk == key)
          empty[kk] = rrow;
        else
          empty[kk] = "";
      }
      store_new(ret, k, flatten(empty));
    }
  }
}

}  // namespace detail

inline Dict right_join(const Table& left, const Dict& right, const std::string& key) {
  Dict ret = inner_join(left, right, key);
  detail::add_unfound_right(ret, left, right, key);
  return ret;
}

inline Dict outer_join(const Table& left, const Dict& right, const std::string& key) {
  Dict ret = left_join(left, right, key);
  detail::add_unfound_right(ret, left, right, key);
  return ret;
}

inline Dict cartesian(const Table& left, const Dict& right, const std::string& keys) {
  detail::check_join_field(left, keys);
  Dict ret = Dict::object();
  for (const auto& [left_key, lrow] : left.rows.items()) {
    for (const auto& [right_key, rrow] : right.items()) {
      std::string new_key = left_key + "_" + right_key;
      Dict row = lrow;  // fresh copy per pair
      row[keys] = rrow;
      detail::store_new(ret, new_key, flatten(row));
    }
  }
  return ret;
}

inline Dict natural_join(const Table& left, const Table& right) {
  bool shared = false;
  for (const auto& f : left.fields) {
    if (std::find(right.fields.begin(), right.fields.end(), f) != right.fields.end()) shared = true;
  }
  if (!shared) throw Error(ErrorCode::NoCommonField, "no shared field");
  const std::string& key = right.primary_key;
  bool in_left = std::find(left.fields.begin(), left.fields.end(), key) != left.fields.end();
  bool in_right = std::find(right.fields.begin(), right.fields.end(), key) != right.fields.end();
  if (key.empty() || !in_left || !in_right) throw Error(ErrorCode::NotJoinable, "right key not shared");

  Dict ret = Dict::object();
  for (const auto& [k, row] : left.rows.items()) {
    auto v = detail::join_value(row, key);
    if (v && detail::has_key(right.rows, *v)) {
      if (right.rows[*v].size() > 0) {
        ret[k] = row;
        ret[k][key] = right.rows[*v];
        ret[k] = flatten(ret[k]);
      }
    }
  }
  return ret;
}

}  // namespace sgdb::oracle
