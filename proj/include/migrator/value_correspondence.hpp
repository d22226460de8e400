// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "migrator/schema.hpp"

namespace migrator {

/// Maps each source attribute to the target attributes holding the same data.
/// An attribute absent from the map (or mapped to an empty set) was dropped.
class ValueCorrespondence {
 public:
  ValueCorrespondence() = default;

  void add(const QualifiedAttr& source, const QualifiedAttr& target);
  void set(const QualifiedAttr& source, std::vector<QualifiedAttr> targets);

  /// Images of `source`; empty when unmapped.
  const std::vector<QualifiedAttr>& images(const QualifiedAttr& source) const;

  const std::map<QualifiedAttr, std::vector<QualifiedAttr>>& mapping() const { return mapping_; }

  /// Identity mapping over every attribute of `schema`.
  static ValueCorrespondence identity(const Schema& schema);

  /// Violations of the type/membership invariants against both schemas.
  std::vector<std::string> check(const Schema& source, const Schema& target) const;

  /// One `Src.Attr -> Tgt.Attr` line per mapped pair.
  std::string to_string() const;

  bool operator==(const ValueCorrespondence&) const = default;

 private:
  std::map<QualifiedAttr, std::vector<QualifiedAttr>> mapping_;
};

}  // namespace migrator
