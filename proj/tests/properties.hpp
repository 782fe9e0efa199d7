#pragma once

// Algebraic properties of the operators, checked on generated relations.
// Each check_* function appends a message per violation and never throws.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "sgdb/difftest.hpp"
#include "sgdb/ops.hpp"

namespace props {

using sgdb::Relation;
using KeySet = std::set<sgdb::RowKey>;

inline KeySet keys(const Relation& r) {
  KeySet out;
  for (const auto& [k, _] : r.rows()) out.insert(k);
  return out;
}

inline bool subset(const KeySet& a, const KeySet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

inline KeySet set_union(const KeySet& a, const KeySet& b) {
  KeySet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

inline KeySet set_intersection(const KeySet& a, const KeySet& b) {
  KeySet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

struct Failures {
  std::uint64_t seed = 0;
  std::vector<std::string>* out = nullptr;
  void operator()(const std::string& what) const { out->push_back("seed " + std::to_string(seed) + ": " + what); }
};

inline void check_join_lattice(const sgdb::GeneratedDb& db, const Failures& fail) {
  const auto& f = db.join_field;
  KeySet inner = keys(sgdb::inner_join(db.left, db.right, f));
  KeySet left = keys(sgdb::left_join(db.left, db.right, f));
  KeySet right, outer;
  try {
    right = keys(sgdb::right_join(db.left, db.right, f));
    outer = keys(sgdb::outer_join(db.left, db.right, f));
  } catch (const sgdb::Error& e) {
    if (e.code() == sgdb::ErrorCode::KeyCollision) return;  // synthesized key clash: lattice undefined
    throw;
  }
  if (!subset(inner, left)) fail("inner keys not within left-join keys");
  if (!subset(left, outer)) fail("left-join keys not within outer-join keys");
  if (!subset(inner, right)) fail("inner keys not within right-join keys");
  if (!subset(right, outer)) fail("right-join keys not within outer-join keys");
  if (outer != set_union(left, right)) fail("outer-join keys differ from left union right");
  if (inner != set_intersection(left, right)) fail("inner keys differ from left intersect right");
}

inline void check_cartesian_size(const sgdb::GeneratedDb& db, const Failures& fail) {
  Relation x = sgdb::cartesian(db.left, db.right, db.join_field);
  if (x.size() != db.left.size() * db.right.size())
    fail("cartesian has " + std::to_string(x.size()) + " rows, expected " +
         std::to_string(db.left.size() * db.right.size()));
}

inline void check_select(const sgdb::OpCase& c, const Failures& fail) {
  Relation once = sgdb::select(c.left, c.condition);
  if (!sgdb::relation_equal(sgdb::select(once, c.condition), once)) fail("select is not idempotent");
  if (!subset(keys(once), keys(c.left))) fail("select produced keys not in its input");
}

inline void check_project(const sgdb::OpCase& c, const Failures& fail) {
  if (!sgdb::relation_equal(sgdb::project(c.left, sgdb::AllColumns{}), c.left)) fail("project * changed the relation");
  if (sgdb::project(c.left, c.columns).size() != c.left.size()) fail("project changed the row count");
}

inline void check_rename_round_trip(const sgdb::OpCase& c, const Failures& fail) {
  const std::string fresh = "fresh_name_not_in_any_row";
  Relation there = sgdb::rename(c.left, c.field, fresh);
  Relation back = sgdb::rename(there, fresh, c.field);
  if (!sgdb::relation_equal(back, c.left)) fail("rename " + c.field + " -> " + fresh + " -> " + c.field + " changed rows");
}

inline void check_flatten_idempotent(const sgdb::OpCase& c, const Failures& fail) {
  sgdb::TupleRecord once;
  try {
    once = sgdb::flatten(c.nested);
  } catch (const sgdb::Error&) {
    return;  // colliding paths: nothing to re-flatten
  }
  if (sgdb::flatten(sgdb::NestedRecord::from_tuple(once)) != once) fail("flatten is not idempotent");
}

inline void check_natural_join(const sgdb::GeneratedDb& db, const Failures& fail) {
  const auto& pk = db.right.schema().primary_key();
  if (!db.left.schema().has_field(pk)) return;
  if (!sgdb::relation_equal(sgdb::natural_join(db.left, db.right), sgdb::inner_join(db.left, db.right, pk)))
    fail("natural join differs from inner join on the right key");
}

/// Runs every operator on copies and checks the originals are untouched.
inline void check_purity(const sgdb::GeneratedDb& db, const sgdb::OpCase& sel, const sgdb::OpCase& proj,
                         const Failures& fail) {
  const Relation left = db.left, right = db.right;
  auto attempt = [](auto&& f) {
    try {
      f();
    } catch (const sgdb::Error&) {
    }
  };
  attempt([&] { sgdb::select(db.left, sel.condition); });
  attempt([&] { sgdb::project(db.left, proj.columns); });
  attempt([&] { sgdb::rename(db.left, "ref", "renamed"); });
  for (auto kind : {sgdb::JoinKind::Inner, sgdb::JoinKind::Left, sgdb::JoinKind::Right, sgdb::JoinKind::Outer})
    attempt([&] { sgdb::join(kind, db.left, db.right, db.join_field); });
  attempt([&] { sgdb::cartesian(db.left, db.right, db.join_field); });
  attempt([&] { sgdb::natural_join(db.left, db.right); });
  if (!sgdb::relation_equal(left, db.left) || !sgdb::relation_equal(right, db.right)) fail("an operator modified its input");
  if (left.schema().fields() != db.left.schema().fields()) fail("an operator modified its input schema");
}

/// All properties for one seed. Returns the number of property checks run.
inline int check_seed(std::uint64_t seed, std::vector<std::string>& failures) {
  Failures fail{seed, &failures};
  sgdb::GenLimits limits;
  limits.seed = seed;
  sgdb::GeneratedDb db = sgdb::generate_database(limits);
  sgdb::OpCase sel = sgdb::generate_case(sgdb::OpName::Select, seed);
  sgdb::OpCase proj = sgdb::generate_case(sgdb::OpName::Project, seed);
  sgdb::OpCase ren = sgdb::generate_case(sgdb::OpName::Rename, seed);
  sgdb::OpCase flat = sgdb::generate_case(sgdb::OpName::Flatten, seed);
  int checks = 0;
  auto run = [&](auto&& f) {
    ++checks;
    try {
      f();
    } catch (const std::exception& e) {
      fail(std::string("unexpected exception: ") + e.what());
    }
  };
  run([&] { check_join_lattice(db, fail); });
  run([&] { check_cartesian_size(db, fail); });
  run([&] { check_select(sel, fail); });
  run([&] { check_project(proj, fail); });
  run([&] { check_rename_round_trip(ren, fail); });
  run([&] { check_flatten_idempotent(flat, fail); });
  run([&] { check_natural_join(db, fail); });
  run([&] { check_purity(db, sel, proj, fail); });
  return checks;
}

}  // namespace props
