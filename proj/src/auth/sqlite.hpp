#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <sqlite3.h>

#include "pixi/common/error.hpp"

namespace pixi::auth::detail {

// Thin RAII layer over the SQLite C API.
class Database {
public:
  explicit Database(const std::string& path);
  ~Database();
  Database(const Database&) = delete;
  Database& operator=(const Database&) = delete;

  void exec(const std::string& sql);
  sqlite3* handle() const { return db_; }
  [[noreturn]] void fail(const std::string& what) const;

private:
  sqlite3* db_ = nullptr;
};

class Statement {
public:
  Statement(Database& db, std::string_view sql);
  ~Statement();
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  Statement& bind(int index, std::string_view text);
  Statement& bind(int index, std::int64_t value);
  Statement& bind(int index, double value);
  Statement& bind_blob(int index, const std::vector<unsigned char>& blob);
  Statement& bind_null(int index);

  // True while a row is available.
  bool step();
  // Runs to completion; returns the SQLite result code of the last step.
  int run();

  std::string text(int column) const;
  std::int64_t integer(int column) const;
  double real(int column) const;
  std::vector<unsigned char> blob(int column) const;
  bool is_null(int column) const;

private:
  Database& db_;
  sqlite3_stmt* stmt_ = nullptr;
};

}  // namespace pixi::auth::detail
