#pragma once

// Canonical JSON for tuples and schemas: keys sorted by code point, UTF-8,
// no insignificant whitespace, null for Value::null(). Serializing the same
// tuple twice always yields identical bytes.

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "sgdb/model.hpp"

namespace sgdb {

namespace detail {

inline std::string dump_canonical(const nlohmann::json& j) {
  try {
    return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("cannot serialize: ") + e.what());
  }
}

}  // namespace detail

inline nlohmann::json tuple_to_json(const TupleRecord& t) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : t) j[k] = v.is_null() ? nlohmann::json(nullptr) : nlohmann::json(v.text());
  return j;
}

inline std::string encode_tuple(const TupleRecord& t) { return detail::dump_canonical(tuple_to_json(t)); }

inline TupleRecord tuple_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::CorruptFile, "tuple payload is not a JSON object");
  TupleRecord t;
  for (const auto& [k, v] : j.items()) {
    if (v.is_null())
      t.emplace(k, Value::null());
    else if (v.is_string())
      t.emplace(k, Value(v.get<std::string>()));
    else
      throw Error(ErrorCode::CorruptFile, "field '" + k + "' is neither string nor null");
  }
  return t;
}

inline TupleRecord decode_tuple(std::string_view bytes) {
  auto j = nlohmann::json::parse(bytes, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::CorruptFile, "tuple payload is not valid JSON");
  return tuple_from_json(j);
}

inline std::string encode_schema(const Schema& s) {
  nlohmann::json j = {{"primary_key", s.primary_key()}, {"fields", s.fields()}};
  return detail::dump_canonical(j);
}

inline Schema decode_schema(std::string_view bytes) {
  auto j = nlohmann::json::parse(bytes, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("primary_key") || !j.contains("fields") ||
      !j["primary_key"].is_string() || !j["fields"].is_array())
    throw Error(ErrorCode::CorruptFile, "malformed schema record");
  std::vector<FieldName> fields;
  for (const auto& f : j["fields"]) {
    if (!f.is_string()) throw Error(ErrorCode::CorruptFile, "malformed schema record");
    fields.push_back(f.get<std::string>());
  }
  return Schema::make(j["primary_key"].get<std::string>(), std::move(fields));
}

/// Builds a base relation from the dictionary literal form
/// `{ "<pk value>": { "<field>": "<value>", ... }, ... }`, optionally holding a
/// `"primary key": "<field>"` entry naming the key field. Fields are taken in
/// order of first appearance.
inline Relation relation_from_literal(const nlohmann::ordered_json& literal,
                                      std::optional<FieldName> primary_key = std::nullopt) {
  if (!literal.is_object()) throw Error(ErrorCode::SchemaError, "table literal must be an object");
  if (auto it = literal.find("primary key"); it != literal.end()) {
    if (!it->is_string()) throw Error(ErrorCode::SchemaError, "'primary key' must name a field");
    if (!primary_key) primary_key = it->get<std::string>();
  }
  if (!primary_key) throw Error(ErrorCode::SchemaError, "table literal does not name its primary key");

  std::vector<FieldName> fields;
  for (const auto& [key, row] : literal.items()) {
    if (key == "primary key") continue;
    if (!row.is_object()) throw Error(ErrorCode::SchemaError, "row '" + key + "' is not an object");
    for (const auto& [f, _] : row.items()) {
      if (std::find(fields.begin(), fields.end(), f) == fields.end()) fields.push_back(f);
    }
  }
  if (fields.empty()) fields.push_back(*primary_key);

  Relation rel(Schema::make(*primary_key, std::move(fields)));
  for (const auto& [key, row] : literal.items()) {
    if (key == "primary key") continue;
    TupleRecord t;
    for (const auto& [f, v] : row.items()) {
      if (!v.is_string()) throw Error(ErrorCode::SchemaError, "field '" + f + "' is not a string");
      t.emplace(f, Value(v.get<std::string>()));
    }
    if (check_tuple(rel.schema(), t) != key)
      throw Error(ErrorCode::SchemaError, "row '" + key + "' does not echo its key in '" + *primary_key + "'");
    rel.set_row(key, std::move(t));
  }
  return rel;
}

}  // namespace sgdb
