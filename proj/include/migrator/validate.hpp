// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "migrator/program.hpp"
#include "migrator/schema.hpp"

namespace migrator {

struct Diagnostic {
  std::string function;
  std::string construct;
  std::string rule;

  std::string to_string() const;
  bool operator==(const Diagnostic&) const = default;
};

/// Structural well-formedness of `program` against `schema`. An empty
/// result means the program is valid.
std::vector<Diagnostic> validate_program(const Program& program, const Schema& schema);

/// Diagnostics for a single function; used by the sketch instantiator to
/// localise ill-formed completions.
std::vector<Diagnostic> validate_function(const Function& function, const Schema& schema);

/// Union of the attributes of every table in `join`, in table then column
/// order. Throws std::invalid_argument for a table unknown to `schema`.
std::vector<QualifiedAttr> attrs_of(const JoinChain& join, const Schema& schema);

/// Thrown by parsing and synthesis entry points when validation fails.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace migrator
