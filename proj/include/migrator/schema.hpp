// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "migrator/value.hpp"

namespace migrator {

/// `Table.Attr`. The table part may be empty only transiently while parsing.
struct QualifiedAttr {
  std::string table;
  std::string name;

  std::string to_string() const { return table + "." + name; }
  auto operator<=>(const QualifiedAttr&) const = default;
};

enum class KeyKind { Plain, PrimaryKey, ForeignKey };

struct Attribute {
  std::string table;
  std::string name;
  ValueType type = ValueType::Int;
  KeyKind key = KeyKind::Plain;
  /// Referenced table when `key == ForeignKey`.
  std::string references;

  QualifiedAttr qualified() const { return {table, name}; }
  bool operator==(const Attribute&) const = default;
};

struct Table {
  std::string name;
  std::vector<Attribute> attributes;

  const Attribute* find(std::string_view attr) const;
  /// Column position of `attr`, or -1.
  int index_of(std::string_view attr) const;
  const Attribute* primary_key() const;
  bool operator==(const Table&) const = default;
};

class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<Table> tables) : tables_(std::move(tables)) {}

  const std::vector<Table>& tables() const { return tables_; }
  bool empty() const { return tables_.empty(); }

  const Table* find_table(std::string_view name) const;
  const Attribute* find(const QualifiedAttr& attr) const;
  /// Every attribute of every table, in declaration order.
  std::vector<QualifiedAttr> all_attributes() const;

  /// Human-readable violations of the schema invariants (unique names,
  /// at most one primary key per table, foreign keys resolve with a
  /// matching key type). Empty when the schema is well formed.
  std::vector<std::string> check() const;

  bool operator==(const Schema&) const = default;

 private:
  std::vector<Table> tables_;
};

}  // namespace migrator
