#pragma once

#include <gtest/gtest.h>

#include <filesystem>
#include <ostream>
#include <random>
#include <string>

#include <unistd.h>

#include "sgdb/codec.hpp"
#include "sgdb/error.hpp"
#include "sgdb/model.hpp"

namespace sgdb {

// gtest printers, so failures show values instead of byte dumps.
inline void PrintTo(const Value& v, std::ostream* os) { *os << (v.is_null() ? "null" : "\"" + v.text() + "\""); }

inline void PrintTo(const Relation& r, std::ostream* os) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, row] : r.rows()) j[k] = tuple_to_json(row);
  *os << j.dump();
}

}  // namespace sgdb

namespace testing_support {

/// The code of the sgdb::Error thrown by `f`, recording a failure if none is.
template <class F>
sgdb::ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const sgdb::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an sgdb::Error";
  return sgdb::ErrorCode::IoError;
}

inline ::testing::AssertionResult relations_equal(const char* a_expr, const char* b_expr, const sgdb::Relation& a,
                                                  const sgdb::Relation& b) {
  if (sgdb::relation_equal(a, b)) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << a_expr << " and " << b_expr << " differ\n  "
                                       << ::testing::PrintToString(a) << "\n  " << ::testing::PrintToString(b);
}

#define EXPECT_REL_EQ(a, b) EXPECT_PRED_FORMAT2(::testing_support::relations_equal, a, b)

/// A fresh directory removed again on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("sgdb-test-" + std::to_string(::getpid()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_support
