// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace migrator {

/// DIMACS-style literal: `+v` or `-v` for variable `v >= 1`.
using Lit = int;
using Clause = std::vector<Lit>;

struct SoftClause {
  Clause clause;
  std::uint64_t weight = 0;
};

/// Hard clauses, exactly-one groups, and weighted soft clauses over
/// variables `1..num_vars()`.
class CnfFormula {
 public:
  CnfFormula() = default;
  explicit CnfFormula(int num_vars) : num_vars_(num_vars) {}

  int num_vars() const { return num_vars_; }
  /// Declares a new variable and returns its index.
  int new_var() { return ++num_vars_; }

  void add_hard(Clause clause);
  /// Exactly one of `vars` is true.
  void add_exactly_one(std::vector<int> vars);
  void add_soft(Clause clause, std::uint64_t weight);

  const std::vector<Clause>& hard() const { return hard_; }
  const std::vector<std::vector<int>>& xor_groups() const { return xor_groups_; }
  const std::vector<SoftClause>& soft() const { return soft_; }

  /// Hard part in DIMACS; exactly-one groups as `c xor v1 v2 ...` comments.
  void dump_dimacs(std::ostream& out) const;

 private:
  void check_literal(Lit lit) const;

  int num_vars_ = 0;
  std::vector<Clause> hard_;
  std::vector<std::vector<int>> xor_groups_;
  std::vector<SoftClause> soft_;
};

/// Returns `formula` with `clause` appended as a hard constraint.
CnfFormula add_hard(CnfFormula formula, Clause clause);

/// Total assignment; index 0 is unused.
class Model {
 public:
  Model() = default;
  explicit Model(std::vector<bool> values) : values_(std::move(values)) {}

  bool operator[](int var) const { return values_.at(static_cast<std::size_t>(var)); }
  bool satisfies(Lit lit) const { return lit > 0 ? (*this)[lit] : !(*this)[-lit]; }
  int num_vars() const { return static_cast<int>(values_.size()) - 1; }
  const std::vector<bool>& values() const { return values_; }

  bool operator==(const Model&) const = default;

 private:
  std::vector<bool> values_;
};

/// True iff `model` satisfies every hard clause and exactly-one group.
bool satisfies_hard(const CnfFormula& formula, const Model& model);
/// Total weight of satisfied soft clauses.
std::uint64_t soft_weight(const CnfFormula& formula, const Model& model);

/// DPLL with native exactly-one propagation. Soft clauses are ignored.
/// Branches on the lowest unassigned variable, true first.
std::optional<Model> sat_solve(const CnfFormula& formula);

/// Weighted partial MaxSAT by branch and bound with dynamic component
/// decomposition. Among optimal models returns the lexicographically least
/// (false < true, variable 1 most significant).
std::optional<Model> maxsat_solve(const CnfFormula& formula);

class CountLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact number of models of the hard part. Throws CountLimitExceeded when
/// the product of group sizes and free-variable powers exceeds `limit`.
std::uint64_t count_models(const CnfFormula& formula, std::uint64_t limit = 1'000'000'000ULL);

}  // namespace migrator
