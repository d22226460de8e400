// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "migrator/program.hpp"
#include "migrator/schema.hpp"

namespace migrator {

/// Reference to a hole in `Sketch::holes`.
struct HoleRef {
  int id = 0;
  bool operator==(const HoleRef&) const = default;
};

/// Either a concrete element or a hole over a finite domain of them.
template <class T>
using Slot = std::variant<T, HoleRef>;

using AttrSlot = Slot<QualifiedAttr>;
using JoinSlot = Slot<JoinChain>;
using TablesSlot = Slot<std::vector<std::string>>;

struct SkQuery;

struct SkPredicate {
  struct Cmp {
    AttrSlot lhs;
    CmpOp op{};
    std::variant<AttrSlot, Value, Param> rhs;
    bool operator==(const Cmp&) const = default;
  };
  struct In {
    AttrSlot attr;
    Box<SkQuery> query;
    bool operator==(const In&) const = default;
  };
  struct And {
    Box<SkPredicate> lhs, rhs;
    bool operator==(const And&) const = default;
  };
  struct Or {
    Box<SkPredicate> lhs, rhs;
    bool operator==(const Or&) const = default;
  };
  struct Not {
    Box<SkPredicate> operand;
    bool operator==(const Not&) const = default;
  };

  std::variant<Cmp, In, And, Or, Not> node;
  bool operator==(const SkPredicate&) const = default;
};

struct SkQuery {
  struct Project {
    std::vector<AttrSlot> attrs;
    Box<SkQuery> source;
    bool operator==(const Project&) const = default;
  };
  struct Select {
    SkPredicate pred;
    Box<SkQuery> source;
    bool operator==(const Select&) const = default;
  };
  struct From {
    JoinSlot join;
    bool operator==(const From&) const = default;
  };

  std::variant<Project, Select, From> node;
  bool operator==(const SkQuery&) const = default;
};

/// Insert sketch. The target row is derived at instantiation from the chosen
/// chain: each source term is routed through its attribute slot, attributes
/// linked by the chain's join conditions share a term, and the remaining
/// target attributes receive fresh uid slots.
struct SkInsert {
  JoinSlot join;
  std::vector<std::pair<AttrSlot, Term>> values;
  bool operator==(const SkInsert&) const = default;
};

struct SkDelete {
  TablesSlot tables;
  JoinSlot join;
  SkPredicate pred;
  bool operator==(const SkDelete&) const = default;
};

struct SkUpdate {
  JoinSlot join;
  SkPredicate pred;
  AttrSlot attr;
  Term value;
  bool operator==(const SkUpdate&) const = default;
};

struct SkQueryStmt {
  SkQuery query;
  bool operator==(const SkQueryStmt&) const = default;
};

struct SkChoice;

using SkStatement = std::variant<SkInsert, SkDelete, SkUpdate, SkQueryStmt, Box<SkChoice>>;

/// `if ??{true,false} then ... else ...`; the desugared form of `s1 ?o s2`.
/// An empty branch is a no-op.
struct SkChoice {
  int hole = 0;
  std::vector<SkStatement> then_branch;
  std::vector<SkStatement> else_branch;
  bool operator==(const SkChoice&) const = default;
};

struct BoolDomain {
  bool operator==(const BoolDomain&) const = default;
};

using HoleDomain = std::variant<std::vector<JoinChain>, std::vector<QualifiedAttr>,
                                std::vector<std::vector<std::string>>, BoolDomain>;

struct Hole {
  int id = 0;
  /// Name of the function whose body contains the hole.
  std::string owner;
  HoleDomain domain;

  std::size_t size() const;
  bool operator==(const Hole&) const = default;
};

struct SketchFunction {
  std::string name;
  FunctionKind kind = FunctionKind::Update;
  std::vector<Parameter> params;
  std::vector<SkStatement> body;
  /// Fresh uid slots at or above this number are free for instantiation.
  int first_free_slot = 0;
  bool operator==(const SketchFunction&) const = default;
};

struct Sketch {
  Schema target;
  std::vector<SketchFunction> functions;
  /// Indexed by hole id.
  std::vector<Hole> holes;
  /// Groups of boolean holes of which at least one must select `true`.
  std::vector<std::vector<int>> at_least_one;

  /// Product of the hole domain sizes (saturating at UINT64_MAX).
  std::uint64_t naive_size() const;
  bool operator==(const Sketch&) const = default;
};

/// Text rendering with numbered holes and their domains, e.g.
/// `ins(??1{Picture join Instructor on ..., ...}, {...})`.
std::string to_string(const Sketch& sketch);

}  // namespace migrator
