// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "migrator/equiv.hpp"
#include "migrator/program.hpp"
#include "migrator/sketch.hpp"
#include "migrator/solver.hpp"
#include "migrator/validate.hpp"

namespace migrator {

/// Hole `h`, domain index `j` <-> variable `first_var[h] + j`.
struct HoleVarMap {
  std::vector<int> first_var;
  std::vector<int> sizes;
  std::vector<std::string> owner;

  int var(int hole, int index) const { return first_var.at(static_cast<std::size_t>(hole)) + index; }
  /// (hole, index) of a selector variable.
  std::pair<int, int> hole_of(int var) const;
  /// Domain index selected for `hole` by `model`.
  int selected(const Model& model, int hole) const;
};

struct SketchEncoding {
  CnfFormula formula;
  HoleVarMap vars;
};

/// One exactly-one group per hole, the at-least-one clauses of subset mode,
/// and, when `wf_constraints` is set, clauses excluding delete table lists
/// and attributes that do not belong to the chosen chain.
SketchEncoding encode_sketch(const Sketch& sketch, bool wf_constraints = true);

struct Instantiation {
  std::optional<Program> program;
  std::vector<Diagnostic> diagnostics;
  /// Functions whose instantiation failed validation.
  std::set<std::string> ill_formed;
};

/// Program selected by a hole assignment (`choice[h]` indexes hole h).
Instantiation instantiate(const Sketch& sketch, const std::vector<int>& choice);
Instantiation instantiate(const Sketch& sketch, const Model& model, const HoleVarMap& vars);

/// Negation of the model's selections for the holes owned by `functions`.
Clause block_functions(const Model& model, const std::set<std::string>& functions, const HoleVarMap& vars);
/// Negation of the model's selections for the holes owned by functions
/// named in `failing`.
Clause block_from_mfi(const Model& model, const InvocationSequence& failing, const HoleVarMap& vars);
/// Negation of the model's selections for every hole.
Clause block_model(const Model& model, const HoleVarMap& vars);

enum class BlockingMode { MinimumFailingInput, FullModel };

struct CompletionConfig {
  TestConfig test;
  bool wf_constraints = true;
  BlockingMode blocking = BlockingMode::MinimumFailingInput;
  std::chrono::milliseconds timeout{300'000};
  /// Progress lines (iterations, remaining models, last failing input).
  std::ostream* log = nullptr;
};

struct CompletionResult {
  std::optional<Program> program;
  std::size_t iterations = 0;
  bool timed_out = false;
  std::optional<InvocationSequence> last_failure;
};

/// Searches the completions of `sketch` for one that passes bounded testing
/// against `source`, learning a blocking clause from every failure.
CompletionResult complete_sketch(const Sketch& sketch, const Schema& source_schema, const Program& source,
                                 const CompletionConfig& config);

/// Same search with a prebuilt oracle for `source`.
CompletionResult complete_sketch(const Sketch& sketch, const EquivalenceOracle& oracle,
                                 const CompletionConfig& config);

}  // namespace migrator
