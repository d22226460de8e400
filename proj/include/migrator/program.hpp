// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "migrator/schema.hpp"
#include "migrator/value.hpp"

namespace migrator {

/// Reference to a function parameter.
struct Param {
  std::string name;
  auto operator<=>(const Param&) const = default;
};

/// Per-invocation fresh value; equal slots in one function body share it.
struct FreshUid {
  int slot = 0;
  auto operator<=>(const FreshUid&) const = default;
};

/// Right-hand side of an insert assignment or update.
using Term = std::variant<Param, Value, FreshUid>;
/// Right-hand side of a comparison.
using Operand = std::variant<QualifiedAttr, Value, Param>;

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(CmpOp op);

struct EquiJoin;

/// A base table or a (possibly nested) equi-join.
struct JoinChain {
  std::variant<std::string, Box<EquiJoin>> node;

  static JoinChain table(std::string name);
  static JoinChain join(JoinChain left, QualifiedAttr left_attr, JoinChain right, QualifiedAttr right_attr);

  bool is_table() const { return std::holds_alternative<std::string>(node); }
  const std::string& table_name() const { return std::get<std::string>(node); }
  const EquiJoin& equi() const { return *std::get<Box<EquiJoin>>(node); }

  bool operator==(const JoinChain&) const = default;
};

struct EquiJoin {
  JoinChain left;
  QualifiedAttr left_attr;
  JoinChain right;
  QualifiedAttr right_attr;
  bool operator==(const EquiJoin&) const = default;
};

/// Base tables of a chain, left to right.
std::vector<std::string> tables_of(const JoinChain& join);
/// Every `(left_attr, right_attr)` pair used by the chain's joins.
std::vector<std::pair<QualifiedAttr, QualifiedAttr>> join_conditions(const JoinChain& join);
/// Human-readable chain, e.g. `Picture join Instructor on Picture.PicId = Instructor.PicId`.
std::string to_string(const JoinChain& join);

struct Query;

struct Predicate {
  struct Cmp {
    QualifiedAttr lhs;
    CmpOp op{};
    Operand rhs;
    bool operator==(const Cmp&) const = default;
  };
  struct In {
    QualifiedAttr attr;
    Box<Query> query;
    bool operator==(const In&) const = default;
  };
  struct And {
    Box<Predicate> lhs, rhs;
    bool operator==(const And&) const = default;
  };
  struct Or {
    Box<Predicate> lhs, rhs;
    bool operator==(const Or&) const = default;
  };
  struct Not {
    Box<Predicate> operand;
    bool operator==(const Not&) const = default;
  };

  std::variant<Cmp, In, And, Or, Not> node;

  bool operator==(const Predicate&) const = default;
};

Predicate make_cmp(QualifiedAttr lhs, CmpOp op, Operand rhs);
Predicate make_and(Predicate lhs, Predicate rhs);
Predicate make_or(Predicate lhs, Predicate rhs);
Predicate make_not(Predicate operand);

struct Query {
  struct Project {
    std::vector<QualifiedAttr> attrs;
    Box<Query> source;
    bool operator==(const Project&) const = default;
  };
  struct Select {
    Predicate pred;
    Box<Query> source;
    bool operator==(const Select&) const = default;
  };
  struct From {
    JoinChain join;
    bool operator==(const From&) const = default;
  };

  std::variant<Project, Select, From> node;

  static Query from(JoinChain join) { return Query{From{std::move(join)}}; }
  static Query select(Predicate pred, Query source) { return Query{Select{std::move(pred), std::move(source)}}; }
  static Query project(std::vector<QualifiedAttr> attrs, Query source) {
    return Query{Project{std::move(attrs), std::move(source)}};
  }

  bool operator==(const Query&) const = default;
};

struct InsertStmt {
  JoinChain join;
  std::vector<std::pair<QualifiedAttr, Term>> row;
  bool operator==(const InsertStmt&) const = default;
};

struct DeleteStmt {
  std::vector<std::string> tables;
  JoinChain join;
  Predicate pred;
  bool operator==(const DeleteStmt&) const = default;
};

struct UpdateStmt {
  JoinChain join;
  Predicate pred;
  QualifiedAttr attr;
  Term value;
  bool operator==(const UpdateStmt&) const = default;
};

struct QueryStmt {
  Query query;
  bool operator==(const QueryStmt&) const = default;
};

/// A function body is a sequence of statements; sequencing is implicit.
using Statement = std::variant<InsertStmt, DeleteStmt, UpdateStmt, QueryStmt>;

enum class FunctionKind { Update, Query };

struct Parameter {
  std::string name;
  ValueType type = ValueType::Int;
  bool operator==(const Parameter&) const = default;
};

struct Function {
  std::string name;
  FunctionKind kind = FunctionKind::Update;
  std::vector<Parameter> params;
  std::vector<Statement> body;

  bool operator==(const Function&) const = default;
};

struct Program {
  std::vector<Function> functions;

  const Function* find(std::string_view name) const;
  bool operator==(const Program&) const = default;
};

}  // namespace migrator
