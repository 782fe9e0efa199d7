#pragma once

#include <algorithm>
#include <filesystem>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "sgdb/storage.hpp"

namespace sgdb {

inline constexpr std::string_view kTableExtension = ".sgt";

/// A database is a directory holding one `<table>.sgt` file per table.
class Database {
 public:
  explicit Database(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_))
      throw Error(ErrorCode::IoError, "cannot use database directory " + dir_.string());
  }

  const std::filesystem::path& directory() const noexcept { return dir_; }

  static bool is_valid_table_name(std::string_view name) {
    return !name.empty() && name.front() != '.' && name.find_first_of(std::string_view("/\\\0", 3)) == std::string_view::npos;
  }

  std::filesystem::path table_path(std::string_view name) const {
    if (!is_valid_table_name(name)) throw Error(ErrorCode::SchemaError, "invalid table name '" + std::string(name) + "'");
    return dir_ / (std::string(name) + std::string(kTableExtension));
  }

  bool has_table(std::string_view name) const { return std::filesystem::is_regular_file(table_path(name)); }

  /// Table names, sorted.
  std::vector<std::string> table_names() const {
    std::vector<std::string> names;
    for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
      if (!entry.is_regular_file() || entry.path().extension() != kTableExtension) continue;
      names.push_back(entry.path().stem().string());
    }
    std::sort(names.begin(), names.end());
    return names;
  }

  TableFile create_table(std::string_view name, const Schema& schema, TableOptions options = {}) const {
    if (has_table(name)) throw Error(ErrorCode::TableExists, "table '" + std::string(name) + "' already exists");
    return TableFile::open(table_path(name), schema, options);
  }

  TableFile open_table(std::string_view name, TableOptions options = {}) const {
    require(name);
    return TableFile::open(table_path(name), std::nullopt, options);
  }

  Relation snapshot(std::string_view name) const {
    require(name);
    return read_table_snapshot(table_path(name));
  }

  void drop_table(std::string_view name) const {
    require(name);
    // Taking the writer lock first keeps a live writer's file from vanishing.
    { TableFile lock = open_table(name); }
    std::error_code ec;
    std::filesystem::remove(table_path(name), ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot remove table '" + std::string(name) + "': " + ec.message());
  }

 private:
  void require(std::string_view name) const {
    if (!has_table(name)) throw Error(ErrorCode::UnknownTable, "no table '" + std::string(name) + "'");
  }

  std::filesystem::path dir_;
};

}  // namespace sgdb
