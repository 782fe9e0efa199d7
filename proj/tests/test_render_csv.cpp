#include <gtest/gtest.h>

#include "library_db.hpp"
#include "persistence.hpp"
#include "sgdb/csv.hpp"
#include "sgdb/ops.hpp"
#include "sgdb/render.hpp"
#include "test_support.hpp"

using namespace sgdb;
using persistence::read_file;
using persistence::write_file;
using testing_support::error_of;
using testing_support::TempDir;

TEST(Render, CatalogAsTable) {
  EXPECT_EQ(render(fixtures::catalog()),
            "catalog | description\n"
            "--------+----------------\n"
            "001     | computing\n"
            "002     | academic skills\n"
            "003     | biology\n"
            "(3 rows)\n");
}

TEST(Render, TrailingColumnIsNotPadded) {
  std::string text = render(fixtures::catalog());
  EXPECT_EQ(text.find(" \n"), std::string::npos);
}

TEST(Render, CatalogAsCsvAndJson) {
  RenderSpec csv{RenderFormat::Csv};
  EXPECT_EQ(render(fixtures::catalog(), csv),
            "catalog,description\n001,computing\n002,academic skills\n003,biology\n");
  RenderSpec json{RenderFormat::Json};
  EXPECT_EQ(render(fixtures::catalog(), json),
            "{\"catalog\":\"001\",\"description\":\"computing\"}\n"
            "{\"catalog\":\"002\",\"description\":\"academic skills\"}\n"
            "{\"catalog\":\"003\",\"description\":\"biology\"}\n");
}

TEST(Render, EmptyRelation) {
  Relation empty = create_relation("catalog", {"catalog", "description"});
  EXPECT_EQ(render(empty, {RenderFormat::Csv}), "catalog,description\n");
  EXPECT_EQ(render(empty, {RenderFormat::Json}), "");
  EXPECT_EQ(render(empty), "catalog | description\n--------+------------\n(0 rows)\n");
}

TEST(Render, HeterogeneousRowsShowBlanksAndNulls) {
  Relation r(Schema::derived("", {}));
  r.set_row("a", {{"x", "1"}});
  r.set_row("b", {{"y", Value::null()}});
  EXPECT_EQ(render(r), "x | y\n--+-----\n1 | \n  | NULL\n(2 rows)\n");
  EXPECT_EQ(render(r, {RenderFormat::Table, "-"}), "x | y\n--+--\n1 | \n  | -\n(2 rows)\n");
  EXPECT_EQ(render(r, {RenderFormat::Csv}), "x,y\n1,\n,\n");
  EXPECT_EQ(render(r, {RenderFormat::Json}), "{\"x\":\"1\"}\n{\"y\":null}\n");
}

TEST(Render, SchemaFieldsComeFirstThenExtrasSorted) {
  Relation j = left_join(fixtures::books(), fixtures::catalog(), "catalog");
  std::string header = render(j, {RenderFormat::Csv}).substr(0, render(j, {RenderFormat::Csv}).find('\n'));
  EXPECT_EQ(header, "ISBN,title,publisher,first author,catalog.catalog,catalog.description");
}

TEST(Render, WidthCountsCodePointsNotBytes) {
  Relation r(Schema::derived("", {}));
  r.set_row("a", {{"n", "\xC3\xBC\xC3\xBC"}, {"z", "1"}});
  r.set_row("b", {{"n", "abc"}, {"z", "2"}});
  EXPECT_EQ(render(r), "n   | z\n----+--\n\xC3\xBC\xC3\xBC  | 1\nabc | 2\n(2 rows)\n");
}

TEST(Render, CsvQuotesWhenNeeded) {
  Relation r(Schema::derived("", {}));
  r.set_row("a", {{"v", "x, y"}});
  r.set_row("b", {{"v", "say \"hi\""}});
  r.set_row("c", {{"v", "two\nlines"}});
  r.set_row("d", {{"v", " padded"}});
  EXPECT_EQ(render(r, {RenderFormat::Csv}), "v\n\"x, y\"\n\"say \"\"hi\"\"\"\n\"two\nlines\"\n\" padded\"\n");
}

TEST(Csv, ParsesQuotedFields) {
  auto rows = parse_csv("a,b\r\n\"x, y\",\"say \"\"hi\"\"\"\n\n  trimmed  ,\"two\nlines\"\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1], (std::vector<std::string>{"x, y", "say \"hi\""}));
  EXPECT_EQ(rows[2], (std::vector<std::string>{"trimmed", "two\nlines"}));
}

TEST(Csv, KeepsEmptyFields) {
  auto rows = parse_csv("a,b,c\n,,\n1,,3");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1], (std::vector<std::string>{"", "", ""}));
  EXPECT_EQ(rows[2], (std::vector<std::string>{"1", "", "3"}));
}

TEST(Csv, RejectsMalformedQuoting) {
  EXPECT_EQ(error_of([] { parse_csv("a\n\"open"); }), ErrorCode::CsvError);
  EXPECT_EQ(error_of([] { parse_csv("a\n\"x\"y"); }), ErrorCode::CsvError);
}

TEST(Csv, ParseInvertsRender) {
  Relation r(Schema::make("k", {"k", "v"}));
  const std::vector<std::string> values = {"plain", "x, y", "say \"hi\"", "two\nlines", " lead", ""};
  for (std::size_t i = 0; i < values.size(); ++i) r.set_row("k" + std::to_string(i), {{"k", "k" + std::to_string(i)}, {"v", values[i]}});
  auto rows = parse_csv(render(r, {RenderFormat::Csv}));
  ASSERT_EQ(rows.size(), values.size() + 1);
  for (std::size_t i = 0; i < values.size(); ++i) EXPECT_EQ(rows[i + 1][1], values[i]);
}

class CsvFiles : public ::testing::Test {
 protected:
  TempDir dir;
  Database db{dir / "db"};
};

TEST_F(CsvFiles, ImportExportRoundTrip) {
  Relation B = fixtures::books();
  fixtures::store(db, "books", B);
  EXPECT_EQ(export_csv(db, "books", dir / "books.csv"), 5u);
  EXPECT_EQ(import_csv(db, "books2", dir / "books.csv", "ISBN"), 5u);
  EXPECT_REL_EQ(db.snapshot("books2"), B);
  EXPECT_EQ(db.snapshot("books2").schema().fields(), B.schema().fields());
  export_csv(db, "books2", dir / "again.csv");
  EXPECT_EQ(read_file(dir / "books.csv"), read_file(dir / "again.csv"));
}

TEST_F(CsvFiles, SampleFilesImportAsTheLibraryTables) {
  const std::filesystem::path samples = SGDB_SAMPLES_DIR;
  import_csv(db, "books", samples / "books.csv", "ISBN");
  import_csv(db, "catalog", samples / "catalog.csv", "catalog");
  EXPECT_REL_EQ(db.snapshot("books"), fixtures::books());
  EXPECT_REL_EQ(db.snapshot("catalog"), fixtures::catalog());
}

TEST_F(CsvFiles, ExportOfEmptyTableIsHeaderOnly) {
  db.create_table("t", Schema::make("id", {"id", "name"})).close();
  EXPECT_EQ(export_csv(db, "t", dir / "t.csv"), 0u);
  EXPECT_EQ(read_file(dir / "t.csv"), "id,name\n");
}

TEST_F(CsvFiles, ExportWritesNullAndMissingAsEmpty) {
  auto t = db.create_table("t", Schema::make("id", {"id", "name"}));
  t.put({{"id", "1"}, {"name", Value::null()}});
  t.put({{"id", "2"}});
  t.close();
  export_csv(db, "t", dir / "t.csv");
  EXPECT_EQ(read_file(dir / "t.csv"), "id,name\n1,\n2,\n");
}

TEST_F(CsvFiles, ImportErrors) {
  write_file(dir / "dup.csv", "id,name\n1,a\n1,b\n");
  EXPECT_EQ(error_of([&] { import_csv(db, "dup", dir / "dup.csv", "id"); }), ErrorCode::DuplicateKey);
  EXPECT_FALSE(db.has_table("dup"));

  write_file(dir / "nokey.csv", "name\na\n");
  EXPECT_EQ(error_of([&] { import_csv(db, "nokey", dir / "nokey.csv", "id"); }), ErrorCode::MissingColumn);

  write_file(dir / "ragged.csv", "id,name\n1,a,extra\n");
  EXPECT_EQ(error_of([&] { import_csv(db, "ragged", dir / "ragged.csv", "id"); }), ErrorCode::CsvError);

  write_file(dir / "emptykey.csv", "id,name\n,a\n");
  EXPECT_EQ(error_of([&] { import_csv(db, "emptykey", dir / "emptykey.csv", "id"); }), ErrorCode::SchemaError);

  write_file(dir / "empty.csv", "");
  EXPECT_EQ(error_of([&] { import_csv(db, "empty", dir / "empty.csv", "id"); }), ErrorCode::CsvError);

  EXPECT_EQ(error_of([&] { import_csv(db, "missing", dir / "missing.csv", "id"); }), ErrorCode::IoError);
}

TEST_F(CsvFiles, ImportIntoExistingTableFails) {
  fixtures::store(db, "catalog", fixtures::catalog());
  export_csv(db, "catalog", dir / "c.csv");
  EXPECT_EQ(error_of([&] { import_csv(db, "catalog", dir / "c.csv", "catalog"); }), ErrorCode::TableExists);
}

TEST_F(CsvFiles, ExportOfUnknownTable) {
  EXPECT_EQ(error_of([&] { export_csv(db, "nosuch", dir / "x.csv"); }), ErrorCode::UnknownTable);
  EXPECT_FALSE(std::filesystem::exists(dir / "x.csv"));
}
