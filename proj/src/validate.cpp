// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#include "migrator/validate.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace migrator {

std::string Diagnostic::to_string() const { return function + ": " + construct + ": " + rule; }

namespace {

std::string join_messages(const std::vector<Diagnostic>& diagnostics) {
  std::string out = "invalid program";
  for (const auto& d : diagnostics) out += "\n  " + d.to_string();
  return out;
}

class FunctionChecker {
 public:
  FunctionChecker(const Function& function, const Schema& schema) : fn_(function), schema_(schema) {}

  std::vector<Diagnostic> run() {
    std::set<std::string> names;
    for (const auto& p : fn_.params)
      if (!names.insert(p.name).second) report("params", "duplicate parameter " + p.name);

    if (fn_.kind == FunctionKind::Query) {
      if (fn_.body.size() != 1 || !std::holds_alternative<QueryStmt>(fn_.body.front()))
        report("body", "query body must be a single query");
    } else {
      if (fn_.body.empty()) report("body", "update body must not be empty");
    }
    for (const auto& stmt : fn_.body) check_statement(stmt);
    return std::move(diags_);
  }

 private:
  using Scope = std::vector<const Attribute*>;

  void report(std::string construct, std::string rule) {
    diags_.push_back(Diagnostic{fn_.name, std::move(construct), std::move(rule)});
  }

  static const Attribute* lookup(const Scope& scope, const QualifiedAttr& attr) {
    for (const auto* a : scope)
      if (a->table == attr.table && a->name == attr.name) return a;
    return nullptr;
  }

  // Returns false (after reporting) when the chain is malformed.
  bool check_join(const JoinChain& join, Scope& scope, std::set<std::string>& seen) {
    if (join.is_table()) {
      const Table* t = schema_.find_table(join.table_name());
      if (!t) {
        report("join", "unknown table " + join.table_name());
        return false;
      }
      if (!seen.insert(t->name).second) {
        report("join", "table " + t->name + " repeated in join");
        return false;
      }
      for (const auto& a : t->attributes) scope.push_back(&a);
      return true;
    }
    const auto& e = join.equi();
    Scope left, right;
    bool ok = check_join(e.left, left, seen);
    ok = check_join(e.right, right, seen) && ok;
    if (!ok) return false;
    const Attribute* la = lookup(left, e.left_attr);
    const Attribute* ra = lookup(right, e.right_attr);
    if (!la) report("join", "join attribute " + e.left_attr.to_string() + " not in left chain");
    if (!ra) report("join", "join attribute " + e.right_attr.to_string() + " not in right chain");
    if (la && ra && la->type != ra->type)
      report("join", "join attribute types differ: " + e.left_attr.to_string() + ", " + e.right_attr.to_string());
    scope.insert(scope.end(), left.begin(), left.end());
    scope.insert(scope.end(), right.begin(), right.end());
    return la && ra;
  }

  std::optional<Scope> join_scope(const JoinChain& join) {
    Scope scope;
    std::set<std::string> seen;
    if (!check_join(join, scope, seen)) return std::nullopt;
    return scope;
  }

  std::optional<ValueType> param_type(const std::string& name) {
    for (const auto& p : fn_.params)
      if (p.name == name) return p.type;
    return std::nullopt;
  }

  void check_term(const std::string& construct, const Term& term, ValueType expected) {
    if (const auto* p = std::get_if<Param>(&term)) {
      auto t = param_type(p->name);
      if (!t)
        report(construct, "unknown parameter " + p->name);
      else if (*t != expected)
        report(construct, "type mismatch for parameter " + p->name);
    } else if (const auto* v = std::get_if<Value>(&term)) {
      if (v->is_uid())
        report(construct, "uid literal not allowed");
      else if (v->type() != expected)
        report(construct, "type mismatch for literal " + v->to_string());
    } else if (std::get<FreshUid>(term).slot < 0) {
      report(construct, "negative uid slot");
    }
  }

  void check_pred(const Predicate& pred, const Scope& scope) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Predicate::Cmp>) {
            const Attribute* lhs = lookup(scope, node.lhs);
            if (!lhs) {
              report("predicate", "unknown attribute " + node.lhs.to_string());
              return;
            }
            std::optional<ValueType> rhs_type;
            if (const auto* a = std::get_if<QualifiedAttr>(&node.rhs)) {
              const Attribute* rhs = lookup(scope, *a);
              if (!rhs) {
                report("predicate", "unknown attribute " + a->to_string());
                return;
              }
              rhs_type = rhs->type;
            } else if (const auto* v = std::get_if<Value>(&node.rhs)) {
              if (v->is_uid()) {
                report("predicate", "uid literal not allowed");
                return;
              }
              rhs_type = v->type();
            } else {
              const auto& p = std::get<Param>(node.rhs);
              rhs_type = param_type(p.name);
              if (!rhs_type) {
                report("predicate", "unknown parameter " + p.name);
                return;
              }
            }
            if (*rhs_type != lhs->type) report("predicate", "type mismatch in comparison on " + node.lhs.to_string());
            if (node.op != CmpOp::Eq && node.op != CmpOp::Ne && lhs->type != ValueType::Int)
              report("predicate", "ordering comparison requires int");
          } else if constexpr (std::is_same_v<T, Predicate::In>) {
            const Attribute* a = lookup(scope, node.attr);
            if (!a) report("predicate", "unknown attribute " + node.attr.to_string());
            auto cols = check_query(*node.query);
            if (!cols) return;
            if (cols->size() != 1) {
              report("predicate", "in requires a single-column query");
              return;
            }
            if (a && cols->front()->type != a->type) report("predicate", "type mismatch in membership test");
          } else if constexpr (std::is_same_v<T, Predicate::Not>) {
            check_pred(*node.operand, scope);
          } else {
            check_pred(*node.lhs, scope);
            check_pred(*node.rhs, scope);
          }
        },
        pred.node);
  }

  std::optional<Scope> check_query(const Query& query) {
    return std::visit(
        [&](const auto& node) -> std::optional<Scope> {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Query::From>) {
            return join_scope(node.join);
          } else if constexpr (std::is_same_v<T, Query::Select>) {
            auto scope = check_query(*node.source);
            if (scope) check_pred(node.pred, *scope);
            return scope;
          } else {
            auto scope = check_query(*node.source);
            if (!scope) return std::nullopt;
            if (node.attrs.empty()) report("query", "empty projection");
            Scope out;
            for (const auto& a : node.attrs) {
              const Attribute* attr = lookup(*scope, a);
              if (!attr) {
                report("query", "unknown attribute " + a.to_string());
                return std::nullopt;
              }
              out.push_back(attr);
            }
            return out;
          }
        },
        query.node);
  }

  void check_statement(const Statement& stmt) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, InsertStmt>) {
            check_insert(s);
          } else if constexpr (std::is_same_v<T, DeleteStmt>) {
            if (fn_.kind != FunctionKind::Update) report("del", "delete inside a query function");
            auto scope = join_scope(s.join);
            if (s.tables.empty()) report("del", "non-empty subset required");
            auto joined = tables_of(s.join);
            std::set<std::string> seen;
            for (const auto& t : s.tables) {
              if (std::find(joined.begin(), joined.end(), t) == joined.end())
                report("del", "delete target not in join: " + t);
              if (!seen.insert(t).second) report("del", "delete target repeated: " + t);
            }
            if (scope) check_pred(s.pred, *scope);
          } else if constexpr (std::is_same_v<T, UpdateStmt>) {
            if (fn_.kind != FunctionKind::Update) report("upd", "update inside a query function");
            auto scope = join_scope(s.join);
            if (!scope) return;
            check_pred(s.pred, *scope);
            const Attribute* a = lookup(*scope, s.attr);
            if (!a) {
              report("upd", "unknown attribute " + s.attr.to_string());
              return;
            }
            if (std::holds_alternative<FreshUid>(s.value))
              report("upd", "fresh uid not allowed in update");
            else
              check_term("upd", s.value, a->type);
          } else {
            if (fn_.kind != FunctionKind::Query) report("query", "query inside an update function");
            check_query(s.query);
          }
        },
        stmt);
  }

  void check_insert(const InsertStmt& s) {
    if (fn_.kind != FunctionKind::Update) report("ins", "insert inside a query function");
    auto scope = join_scope(s.join);
    if (!scope) return;
    std::map<QualifiedAttr, const Term*> assigned;
    for (const auto& [attr, term] : s.row) {
      const Attribute* a = lookup(*scope, attr);
      if (!a) {
        report("ins", "attribute not in join: " + attr.to_string());
        continue;
      }
      if (!assigned.emplace(attr, &term).second) report("ins", "attribute assigned twice: " + attr.to_string());
      check_term("ins", term, a->type);
    }
    for (const auto* a : *scope)
      if (!assigned.count(a->qualified())) report("ins", "attribute not assigned: " + a->qualified().to_string());
    for (const auto& [l, r] : join_conditions(s.join)) {
      auto li = assigned.find(l);
      auto ri = assigned.find(r);
      if (li != assigned.end() && ri != assigned.end() && !(*li->second == *ri->second))
        report("ins", "linked attributes " + l.to_string() + " and " + r.to_string() + " must share a value");
    }
  }

  const Function& fn_;
  const Schema& schema_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_messages(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::vector<Diagnostic> validate_function(const Function& function, const Schema& schema) {
  return FunctionChecker(function, schema).run();
}

std::vector<Diagnostic> validate_program(const Program& program, const Schema& schema) {
  std::vector<Diagnostic> out;
  std::set<std::string> names;
  for (const auto& f : program.functions) {
    if (!names.insert(f.name).second) out.push_back(Diagnostic{f.name, "function", "duplicate function name"});
    auto diags = validate_function(f, schema);
    out.insert(out.end(), diags.begin(), diags.end());
  }
  return out;
}

std::vector<QualifiedAttr> attrs_of(const JoinChain& join, const Schema& schema) {
  std::vector<QualifiedAttr> out;
  for (const auto& name : tables_of(join)) {
    const Table* t = schema.find_table(name);
    if (!t) throw std::invalid_argument("unknown table " + name);
    for (const auto& a : t->attributes) out.push_back(a.qualified());
  }
  return out;
}

}  // namespace migrator
