#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sgdb/database.hpp"
#include "sgdb/render.hpp"

namespace sgdb {

/// RFC-4180 style reader. Quoted fields may hold commas, doubled quotes and
/// line breaks; unquoted fields are trimmed of surrounding blanks. Blank
/// lines are skipped.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool field_quoted = false;
  bool line_has_content = false;
  std::size_t line = 1;
  std::size_t i = 0;

  auto finish_field = [&] {
    if (!field_quoted) {
      auto b = field.find_first_not_of(" \t");
      auto e = field.find_last_not_of(" \t");
      field = b == std::string::npos ? std::string() : field.substr(b, e - b + 1);
    }
    row.push_back(std::move(field));
    field.clear();
    field_quoted = false;
  };
  auto finish_row = [&] {
    finish_field();
    if (line_has_content) rows.push_back(std::move(row));
    row.clear();
    line_has_content = false;
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == '"' && field.find_first_not_of(" \t") == std::string::npos && !field_quoted) {
      const std::size_t start_line = line;
      field.clear();
      field_quoted = true;
      line_has_content = true;
      ++i;
      while (true) {
        if (i >= text.size())
          throw Error(ErrorCode::CsvError, "unterminated quoted field starting on line " + std::to_string(start_line));
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        if (text[i] == '\n') ++line;
        field += text[i++];
      }
      while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
      if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
        throw Error(ErrorCode::CsvError, "unexpected text after quoted field on line " + std::to_string(line));
      continue;
    }
    if (c == ',') {
      line_has_content = true;
      finish_field();
      ++i;
    } else if (c == '\r' || c == '\n') {
      finish_row();
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      ++i;
      ++line;
    } else {
      if (c != ' ' && c != '\t') line_has_content = true;
      if (field_quoted)
        throw Error(ErrorCode::CsvError, "unexpected text after quoted field on line " + std::to_string(line));
      field += c;
      ++i;
    }
  }
  if (line_has_content || !field.empty() || !row.empty()) finish_row();
  return rows;
}

/// Creates `table` from a CSV file whose header row names the fields.
/// Returns the number of rows imported.
inline std::size_t import_csv(const Database& db, std::string_view table, const std::filesystem::path& csv_path,
                              const FieldName& pk) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + csv_path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  auto rows = parse_csv(buf.str());
  if (rows.empty()) throw Error(ErrorCode::CsvError, csv_path.string() + " has no header row");

  const std::vector<FieldName> header = rows.front();
  if (std::find(header.begin(), header.end(), pk) == header.end())
    throw Error(ErrorCode::MissingColumn, "no column '" + pk + "' in " + csv_path.string());
  Relation rel(Schema::make(pk, header));

  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size())
      throw Error(ErrorCode::CsvError, "record " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                                           " fields, header has " + std::to_string(header.size()));
    TupleRecord t;
    for (std::size_t c = 0; c < header.size(); ++c) t.emplace(header[c], Value(rows[r][c]));
    const RowKey key = check_tuple(rel.schema(), t);
    if (rel.contains(key)) throw Error(ErrorCode::DuplicateKey, "duplicate " + pk + " value '" + key + "'");
    rel.set_row(key, std::move(t));
  }

  TableFile file = db.create_table(table, rel.schema(), TableOptions{.sync_each_write = false});
  for (const auto& [_, row] : rel.rows()) file.put(row);
  file.close();
  return rel.size();
}

/// Writes `table` as CSV: header in schema order, rows by key.
inline std::size_t export_csv(const Database& db, std::string_view table, const std::filesystem::path& csv_path) {
  Relation rel = db.snapshot(table);
  std::string text = detail::csv_line(rel.schema().fields());
  for (const auto& [_, row] : rel.rows()) {
    std::vector<std::string> cells;
    for (const auto& f : rel.schema().fields()) {
      auto it = row.find(f);
      cells.push_back(it == row.end() || it->second.is_null() ? std::string() : it->second.text());
    }
    text += detail::csv_line(cells);
  }
  std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + csv_path.string());
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write to " + csv_path.string() + " failed");
  return rel.size();
}

}  // namespace sgdb
