#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sgdb/codec.hpp"
#include "sgdb/model.hpp"

namespace sgdb {

enum class RenderFormat { Table, Csv, Json };

struct RenderSpec {
  RenderFormat format = RenderFormat::Table;
  std::string null_text = "NULL";
};

/// Schema fields first, then any other fields found in rows, lexicographically.
inline std::vector<FieldName> render_columns(const Relation& rel) {
  std::vector<FieldName> cols = rel.schema().fields();
  std::set<FieldName> extra;
  for (const auto& [_, row] : rel.rows()) {
    for (const auto& [f, __] : row) {
      if (!rel.schema().has_field(f)) extra.insert(f);
    }
  }
  cols.insert(cols.end(), extra.begin(), extra.end());
  return cols;
}

namespace detail {

inline std::size_t display_width(std::string_view s) {
  std::size_t n = 0;
  for (char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

inline bool csv_needs_quotes(std::string_view s) {
  if (s.empty()) return false;
  if (s.find_first_of(",\"\r\n") != std::string_view::npos) return true;
  auto blank = [](char c) { return c == ' ' || c == '\t'; };
  return blank(s.front()) || blank(s.back());
}

inline std::string csv_field(std::string_view s) {
  if (!csv_needs_quotes(s)) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_field(cells[i]);
  }
  out += '\n';
  return out;
}

}  // namespace detail

/// Deterministic rendering, rows ordered by row key. Fields a row lacks are
/// shown as empty text. Nulls print as `null_text` in tables, as an empty
/// field in CSV and as `null` in JSON lines.
inline std::string render(const Relation& rel, const RenderSpec& spec = {}) {
  const auto cols = render_columns(rel);
  std::string out;

  if (spec.format == RenderFormat::Json) {
    for (const auto& [_, row] : rel.rows()) out += encode_tuple(row) + "\n";
    return out;
  }

  auto cell = [&](const TupleRecord& row, const FieldName& col) -> std::string {
    auto it = row.find(col);
    if (it == row.end()) return "";
    if (it->second.is_null()) return spec.format == RenderFormat::Table ? spec.null_text : "";
    return it->second.text();
  };

  if (spec.format == RenderFormat::Csv) {
    out += detail::csv_line(cols);
    for (const auto& [_, row] : rel.rows()) {
      std::vector<std::string> cells;
      cells.reserve(cols.size());
      for (const auto& c : cols) cells.push_back(cell(row, c));
      out += detail::csv_line(cells);
    }
    return out;
  }

  std::vector<std::vector<std::string>> grid;
  std::vector<std::size_t> width(cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) width[i] = detail::display_width(cols[i]);
  for (const auto& [_, row] : rel.rows()) {
    auto& line = grid.emplace_back();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      line.push_back(cell(row, cols[i]));
      width[i] = std::max(width[i], detail::display_width(line.back()));
    }
  }
  auto emit = [&](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) line += " | ";
      line += cells[i];
      if (i + 1 < cells.size()) line.append(width[i] - detail::display_width(cells[i]), ' ');
    }
    out += line + "\n";
  };
  if (!cols.empty()) {
    emit(cols);
    std::string rule;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i > 0) rule += "-+-";
      rule.append(width[i], '-');
    }
    out += rule + "\n";
    for (const auto& line : grid) emit(line);
  }
  out += "(" + std::to_string(rel.size()) + (rel.size() == 1 ? " row)\n" : " rows)\n");
  return out;
}

}  // namespace sgdb
