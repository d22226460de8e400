// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "migrator/program.hpp"
#include "migrator/schema.hpp"
#include "migrator/sketch.hpp"
#include "migrator/value_correspondence.hpp"

namespace migrator {

enum class ComposeMode {
  /// One hole per source join occurrence; a completion picks one chain.
  Choice,
  /// Update statements may run any ordered non-empty subsequence of their
  /// per-chain alternatives.
  Subset,
};

/// A statement references an attribute with no image under the correspondence,
/// or a join chain with no valid target chain.
class UnmappableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Join chains of `stmt` in the order the sketch rules visit them: the
/// statement's own chain first, then `in` sub-queries left to right.
std::vector<JoinChain> source_joins(const Statement& stmt);

/// Sketch of `stmt` assuming each source chain maps to the corresponding
/// entry of `chosen` (same order as source_joins). New holes are appended to
/// `holes` and tagged with `owner`.
SkStatement sketch_statement(const Statement& stmt, const ValueCorrespondence& corr,
                             const std::vector<JoinChain>& chosen, std::string_view owner,
                             std::vector<Hole>& holes);

/// Most general sketch of `program` over `target` under `corr`. Throws
/// UnmappableError when some statement cannot be rewritten.
Sketch gen_sketch(const Program& program, const ValueCorrespondence& corr, const Schema& source,
                  const Schema& target, ComposeMode mode = ComposeMode::Choice);

}  // namespace migrator
