#pragma once

// The library example: five books, three catalog entries, and the expected
// result maps for each operator applied to them. Transcribed from the
// original dictionaries; only the quoting changed to JSON.

#include <string>

#include <json.hpp>

#include "sgdb/codec.hpp"
#include "sgdb/model.hpp"

namespace fixtures {

inline constexpr const char* kBooks = R"({
  "9780596159818": {"ISBN": "9780596159818", "title": "Beautiful testing", "publisher": "O'Reilly",
                    "first author": "Tim Riley", "catalog": "001"},
  "9781933988542": {"ISBN": "9781933988542", "title": "Open source SOA", "publisher": "Manning",
                    "first author": "Jeff Davis", "catalog": "001"},
  "9780596516499": {"ISBN": "9780596516499", "title": "Natural language processing Python", "publisher": "O'Reilly",
                    "first author": "Steven Bird", "catalog": "001"},
  "9780521741033": {"ISBN": "9780521741033", "title": "Presentation skills for scientists", "publisher": "CUP",
                    "first author": "Edward Zanders", "catalog": "002"},
  "9780751404624": {"ISBN": "9780751404624", "title": "E. coli", "publisher": "Blackie Academic",
                    "first author": "Chris Bell", "catalog": "003"}
})";

inline constexpr const char* kCatalog = R"({
  "001": {"catalog": "001", "description": "computing"},
  "002": {"catalog": "002", "description": "academic skills"},
  "003": {"catalog": "003", "description": "biology"}
})";

/// The first, schema-carrying rendition of the books table. Note the
/// capitalised 'Publisher' in its first row.
inline constexpr const char* kBooksWithPrimaryKeyEntry = R"({"primary key": "ISBN",
  "9780596159818": {"ISBN": "9780596159818", "title": "Beautiful testing", "Publisher": "O'Reilly",
                    "first author": "Tim Riley", "catalog": "001"},
  "9781933988542": {"ISBN": "9781933988542", "title": "Open source SOA", "publisher": "Manning",
                    "first author": "Jeff Davis", "catalog": "001"},
  "9780596516499": {"ISBN": "9780596516499", "title": "Natural language processing Python", "publisher": "O'Reilly",
                    "first author": "Steven Bird", "catalog": "001"},
  "9780521741033": {"ISBN": "9780521741033", "title": "Presentation skills for scientists", "publisher": "CUP",
                    "first author": "Edward Zanders", "catalog": "002"},
  "9780751404624": {"ISBN": "9780751404624", "title": "E. coli", "publisher": "Blackie Academic",
                    "first author": "Chris Bell", "catalog": "003"}
})";

inline constexpr const char* kCatalogWithPrimaryKeyEntry = R"({"primary key": "catalog",
  "001": {"catalog": "001", "description": "computing"},
  "002": {"catalog": "002", "description": "academic skills"},
  "003": {"catalog": "003", "description": "biology"}
})";

// ---- expected results --------------------------------------------------

inline constexpr const char* kSelectSingle = R"({
  "9780596159818": {"ISBN": "9780596159818", "title": "Beautiful testing", "publisher": "O'Reilly",
                    "first author": "Tim Riley", "catalog": "001"},
  "9780596516499": {"ISBN": "9780596516499", "title": "Natural language processing Python", "publisher": "O'Reilly",
                    "first author": "Steven Bird", "catalog": "001"}
})";

inline constexpr const char* kSelectDouble = R"({
  "9780596516499": {"ISBN": "9780596516499", "title": "Natural language processing Python", "publisher": "O'Reilly",
                    "first author": "Steven Bird", "catalog": "001"}
})";

inline constexpr const char* kProjectFull = kSelectSingle;

inline constexpr const char* kProjectTwoFields = R"({
  "9780596159818": {"title": "Beautiful testing", "catalog": "001"},
  "9780596516499": {"title": "Natural language processing Python", "catalog": "001"}
})";

inline constexpr const char* kRename1 = R"({
  "001": {"catalog": "001", "category": "computing"},
  "002": {"catalog": "002", "category": "academic skills"},
  "003": {"catalog": "003", "category": "biology"}
})";

inline constexpr const char* kRename2 = R"({
  "001": {"code": "001", "category": "computing"},
  "002": {"code": "002", "category": "academic skills"},
  "003": {"code": "003", "category": "biology"}
})";

/// Natural join; the left, right and outer join maps are the same five rows.
inline constexpr const char* kNaturalJoin = R"({
  "9780751404624": {"publisher": "Blackie Academic", "catalog.catalog": "003", "catalog.description": "biology",
                    "first author": "Chris Bell", "ISBN": "9780751404624", "title": "E. coli"},
  "9780596159818": {"publisher": "O'Reilly", "catalog.catalog": "001", "catalog.description": "computing",
                    "first author": "Tim Riley", "ISBN": "9780596159818", "title": "Beautiful testing"},
  "9781933988542": {"publisher": "Manning", "catalog.catalog": "001", "catalog.description": "computing",
                    "first author": "Jeff Davis", "ISBN": "9781933988542", "title": "Open source SOA"},
  "9780521741033": {"publisher": "CUP", "catalog.catalog": "002", "catalog.description": "academic skills",
                    "first author": "Edward Zanders", "ISBN": "9780521741033",
                    "title": "Presentation skills for scientists"},
  "9780596516499": {"publisher": "O'Reilly", "catalog.catalog": "001", "catalog.description": "computing",
                    "first author": "Steven Bird", "ISBN": "9780596516499",
                    "title": "Natural language processing Python"}
})";

inline constexpr const char* kLeftJoin = kNaturalJoin;
inline constexpr const char* kRightJoin = kNaturalJoin;
inline constexpr const char* kOuterJoin = kNaturalJoin;

inline constexpr const char* kProjectAfterInnerJoinSelect = R"({
  "9780596159818": {"catalog.description": "computing", "title": "Beautiful testing"},
  "9781933988542": {"catalog.description": "computing", "title": "Open source SOA"},
  "9780596516499": {"catalog.description": "computing", "title": "Natural language processing Python"}
})";

inline constexpr const char* kCartesianFull = R"({
  "9780596516499_003": {"publisher": "O'Reilly", "catalog.catalog": "003", "catalog.description": "biology",
                        "first author": "Steven Bird", "ISBN": "9780596516499",
                        "title": "Natural language processing Python"},
  "9780596516499_002": {"publisher": "O'Reilly", "catalog.catalog": "002", "catalog.description": "academic skills",
                        "first author": "Steven Bird", "ISBN": "9780596516499",
                        "title": "Natural language processing Python"},
  "9780596516499_001": {"publisher": "O'Reilly", "catalog.catalog": "001", "catalog.description": "computing",
                        "first author": "Steven Bird", "ISBN": "9780596516499",
                        "title": "Natural language processing Python"},
  "9781933988542_001": {"publisher": "Manning", "catalog.catalog": "001", "catalog.description": "computing",
                        "first author": "Jeff Davis", "ISBN": "9781933988542", "title": "Open source SOA"},
  "9781933988542_002": {"publisher": "Manning", "catalog.catalog": "002", "catalog.description": "academic skills",
                        "first author": "Jeff Davis", "ISBN": "9781933988542", "title": "Open source SOA"},
  "9781933988542_003": {"publisher": "Manning", "catalog.catalog": "003", "catalog.description": "biology",
                        "first author": "Jeff Davis", "ISBN": "9781933988542", "title": "Open source SOA"},
  "9780521741033_002": {"publisher": "CUP", "catalog.catalog": "002", "catalog.description": "academic skills",
                        "first author": "Edward Zanders", "ISBN": "9780521741033",
                        "title": "Presentation skills for scientists"},
  "9780521741033_003": {"publisher": "CUP", "catalog.catalog": "003", "catalog.description": "biology",
                        "first author": "Edward Zanders", "ISBN": "9780521741033",
                        "title": "Presentation skills for scientists"},
  "9780521741033_001": {"publisher": "CUP", "catalog.catalog": "001", "catalog.description": "computing",
                        "first author": "Edward Zanders", "ISBN": "9780521741033",
                        "title": "Presentation skills for scientists"},
  "9780751404624_001": {"publisher": "Blackie Academic", "catalog.catalog": "001", "catalog.description": "computing",
                        "first author": "Chris Bell", "ISBN": "9780751404624", "title": "E. coli"},
  "9780751404624_003": {"publisher": "Blackie Academic", "catalog.catalog": "003", "catalog.description": "biology",
                        "first author": "Chris Bell", "ISBN": "9780751404624", "title": "E. coli"},
  "9780751404624_002": {"publisher": "Blackie Academic", "catalog.catalog": "002",
                        "catalog.description": "academic skills", "first author": "Chris Bell",
                        "ISBN": "9780751404624", "title": "E. coli"},
  "9780596159818_002": {"publisher": "O'Reilly", "catalog.catalog": "002", "catalog.description": "academic skills",
                        "first author": "Tim Riley", "ISBN": "9780596159818", "title": "Beautiful testing"},
  "9780596159818_003": {"publisher": "O'Reilly", "catalog.catalog": "003", "catalog.description": "biology",
                        "first author": "Tim Riley", "ISBN": "9780596159818", "title": "Beautiful testing"},
  "9780596159818_001": {"publisher": "O'Reilly", "catalog.catalog": "001", "catalog.description": "computing",
                        "first author": "Tim Riley", "ISBN": "9780596159818", "title": "Beautiful testing"}
})";

inline constexpr const char* kCartesianSelect = R"({
  "9780751404624_001": {"publisher": "Blackie Academic", "catalog.catalog": "001", "catalog.description": "computing",
                        "first author": "Chris Bell", "ISBN": "9780751404624", "title": "E. coli"},
  "9780751404624_003": {"publisher": "Blackie Academic", "catalog.catalog": "003", "catalog.description": "biology",
                        "first author": "Chris Bell", "ISBN": "9780751404624", "title": "E. coli"},
  "9780751404624_002": {"publisher": "Blackie Academic", "catalog.catalog": "002",
                        "catalog.description": "academic skills", "first author": "Chris Bell",
                        "ISBN": "9780751404624", "title": "E. coli"}
})";

// ---- helpers -------------------------------------------------------------

inline sgdb::Relation books() { return sgdb::relation_from_literal(nlohmann::ordered_json::parse(kBooks), "ISBN"); }

inline sgdb::Relation catalog() {
  return sgdb::relation_from_literal(nlohmann::ordered_json::parse(kCatalog), "catalog");
}

/// An operator result given as a row map. JSON null becomes Value::null().
inline sgdb::Relation rows(const std::string& literal) {
  sgdb::Relation out(sgdb::Schema::derived("", {}));
  const auto parsed = nlohmann::json::parse(literal);
  for (const auto& [key, row] : parsed.items()) {
    sgdb::TupleRecord t;
    for (const auto& [f, v] : row.items()) t.emplace(f, v.is_null() ? sgdb::Value::null() : sgdb::Value(v.get<std::string>()));
    out.set_row(key, std::move(t));
  }
  return out;
}

/// Books plus a sixth title filed under catalog code 009, which the catalog
/// does not contain.
inline sgdb::Relation books_with_orphan() {
  return sgdb::insert_tuple(books(), {{"ISBN", "9780000000009"},
                                      {"title", "Orphan"},
                                      {"publisher", "Nobody"},
                                      {"first author", "A. N. Other"},
                                      {"catalog", "009"}});
}

/// Catalog plus code 004 ('news'), which no book refers to.
inline sgdb::Relation catalog_with_news() {
  return sgdb::insert_tuple(catalog(), {{"catalog", "004"}, {"description", "news"}});
}

}  // namespace fixtures
