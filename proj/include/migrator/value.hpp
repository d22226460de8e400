// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace migrator {

enum class ValueType { Int, Str, Bin };

std::string_view to_string(ValueType type);

/// Opaque binary payload, compared by content.
struct Bytes {
  std::vector<std::uint8_t> data;
  auto operator<=>(const Bytes&) const = default;
};

/// A value produced by the fresh-value generator. Equal iff the tags match.
struct Uid {
  std::uint64_t tag = 0;
  auto operator<=>(const Uid&) const = default;
};

class Value {
 public:
  using Storage = std::variant<std::int64_t, std::string, Bytes, Uid>;

  Value() : data_(std::int64_t{0}) {}
  explicit Value(Storage data) : data_(std::move(data)) {}

  static Value integer(std::int64_t v) { return Value(Storage(v)); }
  static Value string(std::string v) { return Value(Storage(std::move(v))); }
  static Value bytes(std::vector<std::uint8_t> v) { return Value(Storage(Bytes{std::move(v)})); }
  static Value uid(std::uint64_t tag) { return Value(Storage(Uid{tag})); }

  bool is_int() const { return std::holds_alternative<std::int64_t>(data_); }
  bool is_str() const { return std::holds_alternative<std::string>(data_); }
  bool is_bin() const { return std::holds_alternative<Bytes>(data_); }
  bool is_uid() const { return std::holds_alternative<Uid>(data_); }

  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  const std::string& as_str() const { return std::get<std::string>(data_); }
  const Bytes& as_bin() const { return std::get<Bytes>(data_); }
  Uid as_uid() const { return std::get<Uid>(data_); }

  /// Type of a literal value; nullopt for uids, which fit any column.
  std::optional<ValueType> type() const;

  const Storage& storage() const { return data_; }

  /// Literal rendering in program syntax (`uid` values print as `#uidN`).
  std::string to_string() const;

  auto operator<=>(const Value&) const = default;
  bool operator==(const Value&) const = default;

 private:
  Storage data_;
};

/// Value-semantic heap box for recursive AST nodes. Copies share the
/// immutable payload; equality is structural.
template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}  // NOLINT

  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  const T& get() const { return *ptr_; }

  friend bool operator==(const Box& a, const Box& b) { return a.ptr_ == b.ptr_ || *a.ptr_ == *b.ptr_; }

 private:
  std::shared_ptr<const T> ptr_;
};

}  // namespace migrator
