// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "migrator/program.hpp"
#include "migrator/schema.hpp"

namespace migrator {

/// Syntax or name-resolution error with a 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

/// Parses `table T { a: int [pk], b: str, c: int [fk U] } ...`.
/// Throws ParseError on syntax errors and on duplicate names or dangling
/// foreign keys.
Schema parse_schema(std::string_view text);

/// Parses a program and validates it against `schema`. Throws ParseError
/// for syntax/name errors and ValidationError for well-formedness errors.
Program parse_program(std::string_view text, const Schema& schema);

/// Canonical text; `parse_program(pretty_print(p), s) == p` for valid `p`.
std::string pretty_print(const Program& program);
std::string pretty_print(const Schema& schema);

std::string to_string(const Predicate& pred);
std::string to_string(const Query& query);
std::string to_string(const Term& term);
std::string to_string(const Statement& stmt);

enum class SourceKind { SchemaFile, ProgramFile };

struct SourceFile {
  std::filesystem::path path;
  std::string text;
  SourceKind kind = SourceKind::ProgramFile;
};

/// Reads a UTF-8 file; the kind follows the extension (`.schema` or `.dbp`).
/// Throws std::runtime_error when unreadable.
SourceFile read_source(const std::filesystem::path& path);

}  // namespace migrator
