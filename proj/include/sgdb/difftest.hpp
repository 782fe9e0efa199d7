#pragma once

// Differential testing: random small databases, every operator run through
// both the engine (sgdb/ops.hpp) and the oracle (sgdb/oracle.hpp), results
// compared with relation_equal. Everything is a pure function of the seed.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sgdb/codec.hpp"
#include "sgdb/ops.hpp"
#include "sgdb/oracle.hpp"

namespace sgdb {

struct GenLimits {
  int max_tables = 2;
  int max_rows = 8;
  int max_fields = 5;
  std::uint64_t seed = 0;
};

struct GeneratedDb {
  Relation left;
  Relation right;
  /// Left field whose values refer to right row keys.
  FieldName join_field;
};

namespace detail {

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform-ish in [0, n). Plain modulo keeps results identical across
  /// standard libraries, unlike std::uniform_int_distribution.
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
  bool chance(int percent) { return below(100) < static_cast<std::size_t>(percent); }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

  /// `count` distinct elements of `pool`, in pool order.
  template <class T>
  std::vector<T> sample(const std::vector<T>& pool, std::size_t count) {
    std::vector<T> shuffled = pool;
    for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[below(i)]);
    shuffled.resize(std::min(count, shuffled.size()));
    std::vector<T> out;
    for (const auto& p : pool) {
      if (std::find(shuffled.begin(), shuffled.end(), p) != shuffled.end()) out.push_back(p);
    }
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

inline const std::vector<std::string>& value_pool() {
  static const std::vector<std::string> pool = {"", "x", "y", "O'Reilly", "a=b", "first author", "\xC3\xBC"};
  return pool;
}

}  // namespace detail

/// Two base relations: `left` (pk `id`) with a `ref` field pointing at `right`
/// row keys about half the time, and `right` (usually pk `ref`, occasionally
/// keyed so that a natural join fails one way or the other).
inline GeneratedDb generate_database(const GenLimits& limits) {
  detail::SeededRng rng(limits.seed);
  const int max_rows = std::max(0, limits.max_rows);
  const std::size_t extra = static_cast<std::size_t>(std::max(0, limits.max_fields - 2));

  // Right relation.
  int shape = static_cast<int>(rng.below(10));
  FieldName rpk = shape < 8 ? "ref" : shape == 8 ? "rk" : "zz";
  std::vector<FieldName> rextra_pool = rpk == "zz" ? std::vector<FieldName>{"d", "e"}
                                                   : std::vector<FieldName>{"a", "d", "e"};
  std::vector<FieldName> rfields{rpk};
  for (auto& f : rng.sample(rextra_pool, rng.below(extra + 1))) rfields.push_back(f);
  if (rpk == "rk" && std::find(rfields.begin(), rfields.end(), "a") == rfields.end()) rfields.push_back("a");

  std::vector<RowKey> rkey_pool;
  for (int i = 0; i < 8; ++i) rkey_pool.push_back("r" + std::to_string(i));
  Relation right(Schema::make(rpk, rfields));
  for (const auto& key : rng.sample(rkey_pool, rng.below(static_cast<std::size_t>(max_rows) + 1))) {
    TupleRecord t{{rpk, Value(key)}};
    for (std::size_t i = 1; i < rfields.size(); ++i) t.emplace(rfields[i], Value(rng.pick(detail::value_pool())));
    right.set_row(key, std::move(t));
  }

  // Left relation.
  std::vector<FieldName> lfields{"id", "ref"};
  for (auto& f : rng.sample(std::vector<FieldName>{"a", "b", "c"}, rng.below(extra + 1))) lfields.push_back(f);
  std::vector<RowKey> lkey_pool;
  for (int i = 0; i < 12; ++i) lkey_pool.push_back("k" + std::to_string(i));
  std::vector<RowKey> right_keys;
  for (const auto& [k, _] : right.rows()) right_keys.push_back(k);
  const std::vector<std::string> misses = {"", "r9", "x"};

  Relation left(Schema::make("id", lfields));
  for (const auto& key : rng.sample(lkey_pool, rng.below(static_cast<std::size_t>(max_rows) + 1))) {
    TupleRecord t{{"id", Value(key)}};
    bool hit = !right_keys.empty() && rng.chance(50);
    t.emplace("ref", Value(hit ? rng.pick(right_keys) : rng.pick(misses)));
    for (std::size_t i = 2; i < lfields.size(); ++i) t.emplace(lfields[i], Value(rng.pick(detail::value_pool())));
    left.set_row(key, std::move(t));
  }
  return {std::move(left), std::move(right), "ref"};
}

// ---------------------------------------------------------------------------
// Operator cases

enum class OpName { Select, Project, Rename, InnerJoin, LeftJoin, RightJoin, OuterJoin, Cartesian, NaturalJoin, Flatten };

inline const std::vector<OpName>& all_ops() {
  static const std::vector<OpName> ops = {OpName::Select,    OpName::Project,   OpName::Rename,
                                          OpName::InnerJoin, OpName::LeftJoin,  OpName::RightJoin,
                                          OpName::OuterJoin, OpName::Cartesian, OpName::NaturalJoin,
                                          OpName::Flatten};
  return ops;
}

inline std::string_view to_string(OpName op) {
  switch (op) {
    case OpName::Select: return "select";
    case OpName::Project: return "project";
    case OpName::Rename: return "rename";
    case OpName::InnerJoin: return "inner_join";
    case OpName::LeftJoin: return "left_join";
    case OpName::RightJoin: return "right_join";
    case OpName::OuterJoin: return "outer_join";
    case OpName::Cartesian: return "cartesian";
    case OpName::NaturalJoin: return "natural_join";
    case OpName::Flatten: return "flatten";
  }
  return "?";
}

inline std::optional<OpName> op_from_string(std::string_view name) {
  for (auto op : all_ops()) {
    if (to_string(op) == name) return op;
  }
  return std::nullopt;
}

/// One operator application with all of its inputs.
struct OpCase {
  OpName op = OpName::Select;
  Relation left;
  Relation right;
  std::optional<Condition> condition;
  Projection columns = AllColumns{};
  /// Join key, cartesian nest field, or the field being renamed.
  FieldName field;
  FieldName new_name;
  NestedRecord nested;
  std::optional<std::string> prefix;
};

namespace detail {

inline NestedRecord random_nested(SeededRng& rng, int depth) {
  NestedRecord r;
  const std::vector<std::string> names = depth == 0 ? std::vector<std::string>{"a", "b", "c", "a.b", "b.c"}
                                                    : std::vector<std::string>{"b", "c", "d"};
  for (const auto& name : rng.sample(names, rng.below(depth == 0 ? 5 : 4))) {
    int kind = static_cast<int>(rng.below(10));
    if (depth < 2 && kind < 4) {
      r.set(name, random_nested(rng, depth + 1));
    } else if (kind == 4) {
      r.set(name, Value::null());
    } else {
      r.set(name, Value(rng.pick(value_pool())));
    }
  }
  return r;
}

}  // namespace detail

/// Builds the case for `op` from `seed`. Parameters usually hit the
/// interesting path and occasionally a degenerate one (unknown field, empty
/// join key, rename onto an existing field).
inline OpCase generate_case(OpName op, std::uint64_t seed, const GenLimits& base = {}) {
  GenLimits limits = base;
  limits.seed = seed;
  GeneratedDb db = generate_database(limits);
  detail::SeededRng rng(seed ^ 0x9E3779B97F4A7C15ull ^ (static_cast<std::uint64_t>(op) << 32));

  OpCase c;
  c.op = op;
  c.left = db.left;
  c.right = db.right;

  std::vector<FieldName> lfields = db.left.schema().fields();
  std::vector<FieldName> with_unknown = lfields;
  with_unknown.push_back("nosuch");

  switch (op) {
    case OpName::Select: {
      if (rng.chance(10)) break;
      FieldName f = rng.pick(with_unknown);
      std::string v = rng.pick(detail::value_pool());
      if (!db.left.empty() && rng.chance(70)) {
        auto it = std::next(db.left.rows().begin(), static_cast<long>(rng.below(db.left.size())));
        if (auto fv = it->second.find(f); fv != it->second.end()) v = fv->second.text();
      }
      c.condition = Condition{f, v};
      break;
    }
    case OpName::Project: {
      if (rng.chance(15)) break;
      std::vector<FieldName> cols;
      std::size_t n = 1 + rng.below(3);
      for (std::size_t i = 0; i < n; ++i) cols.push_back(rng.pick(with_unknown));
      c.columns = cols;
      break;
    }
    case OpName::Rename:
      c.field = rng.pick(with_unknown);
      c.new_name = rng.chance(80) ? FieldName("renamed") : rng.pick(lfields);
      break;
    case OpName::InnerJoin:
    case OpName::LeftJoin:
    case OpName::RightJoin:
    case OpName::OuterJoin:
    case OpName::Cartesian: {
      int k = static_cast<int>(rng.below(20));
      c.field = k == 0 ? FieldName() : k == 1 ? FieldName("nosuch") : k < 4 ? rng.pick(lfields) : db.join_field;
      break;
    }
    case OpName::NaturalJoin: break;
    case OpName::Flatten:
      c.nested = detail::random_nested(rng, 0);
      if (rng.chance(20)) c.prefix = "p";
      break;
  }
  return c;
}

/// The engine side of a differential run. Replace a member to check that the
/// harness notices a broken operator.
struct EngineOps {
  std::function<Relation(const Relation&, const std::optional<Condition>&)> select =
      [](const Relation& r, const std::optional<Condition>& c) { return sgdb::select(r, c); };
  std::function<Relation(const Relation&, const Projection&)> project =
      [](const Relation& r, const Projection& p) { return sgdb::project(r, p); };
  std::function<Relation(const Relation&, std::string_view, std::string_view)> rename =
      [](const Relation& r, std::string_view a, std::string_view b) { return sgdb::rename(r, a, b); };
  std::function<Relation(JoinKind, const Relation&, const Relation&, std::string_view)> join =
      [](JoinKind k, const Relation& l, const Relation& r, std::string_view f) { return sgdb::join(k, l, r, f); };
  std::function<Relation(const Relation&, const Relation&, std::string_view)> cartesian =
      [](const Relation& l, const Relation& r, std::string_view f) { return sgdb::cartesian(l, r, f); };
  std::function<Relation(const Relation&, const Relation&)> natural_join =
      [](const Relation& l, const Relation& r) { return sgdb::natural_join(l, r); };
  std::function<TupleRecord(const NestedRecord&, std::optional<std::string_view>)> flatten =
      [](const NestedRecord& n, std::optional<std::string_view> p) { return sgdb::flatten(n, p); };
};

inline constexpr std::string_view kFlattenRowKey = "flattened";

inline Relation engine_eval(const OpCase& c, const EngineOps& ops = {}) {
  switch (c.op) {
    case OpName::Select: return ops.select(c.left, c.condition);
    case OpName::Project: return ops.project(c.left, c.columns);
    case OpName::Rename: return ops.rename(c.left, c.field, c.new_name);
    case OpName::InnerJoin: return ops.join(JoinKind::Inner, c.left, c.right, c.field);
    case OpName::LeftJoin: return ops.join(JoinKind::Left, c.left, c.right, c.field);
    case OpName::RightJoin: return ops.join(JoinKind::Right, c.left, c.right, c.field);
    case OpName::OuterJoin: return ops.join(JoinKind::Outer, c.left, c.right, c.field);
    case OpName::Cartesian: return ops.cartesian(c.left, c.right, c.field);
    case OpName::NaturalJoin: return ops.natural_join(c.left, c.right);
    case OpName::Flatten: {
      Relation out;
      std::optional<std::string_view> prefix;
      if (c.prefix) prefix = *c.prefix;
      out.set_row(RowKey(kFlattenRowKey), ops.flatten(c.nested, prefix));
      return out;
    }
  }
  return {};
}

inline Relation oracle_eval(const OpCase& c) {
  namespace o = oracle;
  o::Table left = o::to_table(c.left);
  o::Table right = o::to_table(c.right);
  switch (c.op) {
    case OpName::Select: {
      std::vector<std::string> where;
      if (c.condition) where = {c.condition->field, c.condition->value};
      return o::to_relation(o::select(left.rows, where));
    }
    case OpName::Project: {
      std::string text = "*";
      if (const auto* cols = std::get_if<std::vector<FieldName>>(&c.columns)) {
        text.clear();
        for (std::size_t i = 0; i < cols->size(); ++i) text += (i ? ", " : "") + (*cols)[i];
      }
      return o::to_relation(o::project(text, left.rows));
    }
    case OpName::Rename: return o::to_relation(o::rename(left.rows, c.field, c.new_name));
    case OpName::InnerJoin: return o::to_relation(o::inner_join(left, right.rows, c.field));
    case OpName::LeftJoin: return o::to_relation(o::left_join(left, right.rows, c.field));
    case OpName::RightJoin: return o::to_relation(o::right_join(left, right.rows, c.field));
    case OpName::OuterJoin: return o::to_relation(o::outer_join(left, right.rows, c.field));
    case OpName::Cartesian: return o::to_relation(o::cartesian(left, right.rows, c.field));
    case OpName::NaturalJoin: return o::to_relation(o::natural_join(left, right));
    case OpName::Flatten: {
      o::Dict rows = o::Dict::object();
      rows[std::string(kFlattenRowKey)] = o::flatten(o::to_dict(c.nested), c.prefix);
      return o::to_relation(rows);
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Divergence reporting

struct DivergenceReport {
  std::uint64_t seed = 0;
  std::string op;
  std::string inputs;
  std::string engine_output;
  std::string oracle_output;
  std::string first_difference;
};

namespace detail {

inline std::string relation_text(const Relation& r) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, row] : r.rows()) j[k] = tuple_to_json(row);
  return j.dump();
}

inline std::string describe_case(const OpCase& c) {
  std::ostringstream out;
  out << "left=" << relation_text(c.left) << " (pk " << c.left.schema().primary_key() << ")";
  if (c.op >= OpName::InnerJoin && c.op <= OpName::NaturalJoin)
    out << " right=" << relation_text(c.right) << " (pk " << c.right.schema().primary_key() << ")";
  switch (c.op) {
    case OpName::Select:
      out << " condition=" << (c.condition ? c.condition->field + "=" + c.condition->value : std::string("<none>"));
      break;
    case OpName::Project:
      if (std::holds_alternative<AllColumns>(c.columns)) {
        out << " columns=*";
      } else {
        out << " columns=";
        for (const auto& col : std::get<std::vector<FieldName>>(c.columns)) out << "[" << col << "]";
      }
      break;
    case OpName::Rename: out << " old=" << c.field << " new=" << c.new_name; break;
    case OpName::NaturalJoin: break;
    case OpName::Flatten:
      out.str("");
      out << "nested=" << oracle::to_dict(c.nested).dump() << " prefix=" << c.prefix.value_or("<none>");
      break;
    default: out << " field=" << c.field; break;
  }
  return out.str();
}

inline std::string first_difference(const Relation& a, const Relation& b) {
  for (const auto& [k, row] : a.rows()) {
    const TupleRecord* other = b.find(k);
    if (!other) return "row '" + k + "' only in engine output";
    for (const auto& [f, v] : row) {
      auto it = other->find(f);
      if (it == other->end()) return "row '" + k + "' field '" + f + "' only in engine output";
      if (it->second != v) return "row '" + k + "' field '" + f + "' differs";
    }
    for (const auto& [f, _] : *other) {
      if (!row.contains(f)) return "row '" + k + "' field '" + f + "' only in oracle output";
    }
  }
  for (const auto& [k, _] : b.rows()) {
    if (!a.contains(k)) return "row '" + k + "' only in oracle output";
  }
  return "";
}

struct Outcome {
  std::optional<Relation> result;
  std::optional<ErrorCode> error;
  std::string text() const {
    return result ? relation_text(*result) : "error " + std::string(to_string(*error));
  }
};

template <class F>
Outcome capture(F&& f) {
  try {
    return {f(), std::nullopt};
  } catch (const Error& e) {
    return {std::nullopt, e.code()};
  }
}

}  // namespace detail

/// Compares engine and oracle on one case. Returns nullopt when they agree,
/// including when both fail with the same error code.
inline std::optional<DivergenceReport> check_case(const OpCase& c, std::uint64_t seed, const EngineOps& ops = {}) {
  auto engine = detail::capture([&] { return engine_eval(c, ops); });
  auto oracle = detail::capture([&] { return oracle_eval(c); });
  std::string diff;
  if (engine.result && oracle.result) {
    if (relation_equal(*engine.result, *oracle.result)) return std::nullopt;
    diff = detail::first_difference(*engine.result, *oracle.result);
  } else if (engine.error && oracle.error) {
    if (*engine.error == *oracle.error) return std::nullopt;
    diff = "different errors";
  } else {
    diff = engine.error ? "only the engine failed" : "only the oracle failed";
  }
  return DivergenceReport{seed, std::string(to_string(c.op)), detail::describe_case(c), engine.text(), oracle.text(),
                          diff};
}

inline std::vector<DivergenceReport> differential_check(const std::vector<std::uint64_t>& seeds,
                                                        const std::vector<OpName>& ops = all_ops(),
                                                        const EngineOps& engine = {}, const GenLimits& limits = {}) {
  std::vector<DivergenceReport> reports;
  for (auto seed : seeds) {
    for (auto op : ops) {
      if (auto r = check_case(generate_case(op, seed, limits), seed, engine)) reports.push_back(std::move(*r));
    }
  }
  return reports;
}

inline std::vector<std::uint64_t> seed_range(std::uint64_t first, std::uint64_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::uint64_t i = 0; i < count; ++i) seeds[i] = first + i;
  return seeds;
}

inline std::string format_report(const DivergenceReport& r) {
  std::ostringstream out;
  out << "divergence: op=" << r.op << " seed=" << r.seed << "\n"
      << "  inputs: " << r.inputs << "\n"
      << "  engine: " << r.engine_output << "\n"
      << "  oracle: " << r.oracle_output << "\n"
      << "  first difference: " << r.first_difference << "\n";
  return out.str();
}

}  // namespace sgdb
