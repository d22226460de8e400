// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "migrator/program.hpp"
#include "migrator/schema.hpp"

namespace migrator {

using Row = std::vector<Value>;

/// Runtime database state: insertion-ordered rows per table. Holds a
/// non-owning pointer to its schema, which must outlive the instance.
class Instance {
 public:
  explicit Instance(const Schema& schema);

  const Schema& schema() const { return *schema_; }
  const std::vector<Row>& rows(const std::string& table) const;
  std::vector<Row>& rows(const std::string& table);
  const std::map<std::string, std::vector<Row>>& tables() const { return tables_; }

  bool operator==(const Instance& other) const { return tables_ == other.tables_; }

 private:
  const Schema* schema_;
  std::map<std::string, std::vector<Row>> tables_;
};

/// Named rows, e.g. a query result.
struct Relation {
  std::vector<QualifiedAttr> columns;
  std::vector<Row> rows;
};

/// Result of evaluating a join chain. `provenance[r][t]` is the index in
/// `tables[t]` of the base row contributing to joined row `r`.
struct JoinedRows {
  std::vector<std::string> tables;
  std::vector<QualifiedAttr> columns;
  std::vector<Row> rows;
  std::vector<std::vector<std::size_t>> provenance;
};

using Env = std::map<std::string, Value>;

/// Allocates uids for one invocation sequence. Slots are function scoped:
/// call `begin_invocation` before each function body.
class FreshUids {
 public:
  void begin_invocation() { slots_.clear(); }
  Value slot(int slot);
  Value fresh() { return Value::uid(next_++); }
  std::uint64_t issued() const { return next_; }

 private:
  std::uint64_t next_ = 0;
  std::map<int, Value> slots_;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

JoinedRows eval_join(const Instance& instance, const JoinChain& join);

Relation eval_query(const Instance& instance, const Query& query, const Env& env);

/// Executes an insert, delete, or update statement and returns the new state.
Instance exec_update(const Instance& instance, const Statement& stmt, const Env& env, FreshUids& fresh);

struct Call {
  std::string function;
  std::vector<Value> args;
  bool operator==(const Call&) const = default;
};

/// Update calls followed by exactly one query call.
struct InvocationSequence {
  std::vector<Call> calls;

  std::size_t size() const { return calls.size(); }
  std::string to_string() const;
  bool operator==(const InvocationSequence&) const = default;
};

/// Binds `args` to the parameters of `function`. Throws EvalError on an
/// arity or type mismatch.
Env bind_arguments(const Function& function, const std::vector<Value>& args);

/// Runs one function call: updates return the new instance, queries store
/// their result in `result`.
Instance call_function(const Instance& instance, const Function& function, const std::vector<Value>& args,
                       FreshUids& fresh, Relation* result);

/// Executes `sequence` from the empty instance and returns the final query's
/// rows. Throws EvalError when the sequence is invalid for `program`.
std::vector<Row> run_sequence(const Schema& schema, const Program& program, const InvocationSequence& sequence);

std::string to_string(const Row& row);

}  // namespace migrator
