// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#include "migrator/interpreter.hpp"

#include <algorithm>
#include <set>

namespace migrator {

Instance::Instance(const Schema& schema) : schema_(&schema) {
  for (const auto& t : schema.tables()) tables_[t.name];
}

const std::vector<Row>& Instance::rows(const std::string& table) const {
  auto it = tables_.find(table);
  if (it == tables_.end()) throw EvalError("unknown table " + table);
  return it->second;
}

std::vector<Row>& Instance::rows(const std::string& table) {
  auto it = tables_.find(table);
  if (it == tables_.end()) throw EvalError("unknown table " + table);
  return it->second;
}

Value FreshUids::slot(int slot) {
  auto it = slots_.find(slot);
  if (it != slots_.end()) return it->second;
  Value v = fresh();
  slots_.emplace(slot, v);
  return v;
}

namespace {

std::size_t column_index(const std::vector<QualifiedAttr>& columns, const QualifiedAttr& attr) {
  auto it = std::find(columns.begin(), columns.end(), attr);
  if (it == columns.end()) throw EvalError("attribute " + attr.to_string() + " not in scope");
  return static_cast<std::size_t>(it - columns.begin());
}

Value param_value(const Env& env, const std::string& name) {
  auto it = env.find(name);
  if (it == env.end()) throw EvalError("unbound parameter " + name);
  return it->second;
}

Value term_value(const Term& term, const Env& env, FreshUids& fresh) {
  if (const auto* p = std::get_if<Param>(&term)) return param_value(env, p->name);
  if (const auto* v = std::get_if<Value>(&term)) return *v;
  return fresh.slot(std::get<FreshUid>(term).slot);
}

bool compare(const Value& a, CmpOp op, const Value& b) {
  switch (op) {
    case CmpOp::Eq:
      return a == b;
    case CmpOp::Ne:
      return a != b;
    case CmpOp::Lt:
      return a < b;
    case CmpOp::Le:
      return a <= b;
    case CmpOp::Gt:
      return a > b;
    case CmpOp::Ge:
      return a >= b;
  }
  return false;
}

class PredicateEval {
 public:
  PredicateEval(const Instance& instance, const Env& env, const std::vector<QualifiedAttr>& columns)
      : instance_(instance), env_(env), columns_(columns) {}

  bool operator()(const Predicate& pred, const Row& row) {
    return std::visit(
        [&](const auto& node) -> bool {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Predicate::Cmp>) {
            const Value& lhs = row[column_index(columns_, node.lhs)];
            Value rhs;
            if (const auto* a = std::get_if<QualifiedAttr>(&node.rhs))
              rhs = row[column_index(columns_, *a)];
            else if (const auto* v = std::get_if<Value>(&node.rhs))
              rhs = *v;
            else
              rhs = param_value(env_, std::get<Param>(node.rhs).name);
            return compare(lhs, node.op, rhs);
          } else if constexpr (std::is_same_v<T, Predicate::In>) {
            const std::set<Value>& members = membership(node);
            return members.count(row[column_index(columns_, node.attr)]) > 0;
          } else if constexpr (std::is_same_v<T, Predicate::And>) {
            return (*this)(*node.lhs, row) && (*this)(*node.rhs, row);
          } else if constexpr (std::is_same_v<T, Predicate::Or>) {
            return (*this)(*node.lhs, row) || (*this)(*node.rhs, row);
          } else {
            return !(*this)(*node.operand, row);
          }
        },
        pred.node);
  }

 private:
  // Sub-queries do not depend on the outer row, so each is evaluated once.
  const std::set<Value>& membership(const Predicate::In& in) {
    const Query* key = &*in.query;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Relation sub = eval_query(instance_, *in.query, env_);
    if (sub.columns.size() != 1) throw EvalError("in-predicate over a multi-column sub-query");
    std::set<Value> values;
    for (const auto& r : sub.rows) values.insert(r.front());
    return cache_.emplace(key, std::move(values)).first->second;
  }

  const Instance& instance_;
  const Env& env_;
  const std::vector<QualifiedAttr>& columns_;
  std::map<const Query*, std::set<Value>> cache_;
};

std::vector<std::size_t> filter(const Instance& instance, const JoinedRows& joined, const Predicate& pred,
                                const Env& env) {
  PredicateEval eval(instance, env, joined.columns);
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < joined.rows.size(); ++r)
    if (eval(pred, joined.rows[r])) out.push_back(r);
  return out;
}

void exec_insert(Instance& instance, const InsertStmt& stmt, const Env& env, FreshUids& fresh) {
  std::map<QualifiedAttr, Value> values;
  for (const auto& [attr, term] : stmt.row) values[attr] = term_value(term, env, fresh);
  for (const auto& name : tables_of(stmt.join)) {
    const Table* table = instance.schema().find_table(name);
    if (!table) throw EvalError("unknown table " + name);
    Row row;
    for (const auto& a : table->attributes) {
      auto it = values.find(a.qualified());
      if (it == values.end()) throw EvalError("insert leaves " + a.qualified().to_string() + " unassigned");
      row.push_back(it->second);
    }
    instance.rows(name).push_back(std::move(row));
  }
}

void exec_delete(Instance& instance, const DeleteStmt& stmt, const Env& env) {
  JoinedRows joined = eval_join(instance, stmt.join);
  auto hits = filter(instance, joined, stmt.pred, env);
  for (const auto& name : stmt.tables) {
    auto pos = std::find(joined.tables.begin(), joined.tables.end(), name);
    if (pos == joined.tables.end()) throw EvalError("delete target not in join: " + name);
    auto t = static_cast<std::size_t>(pos - joined.tables.begin());
    auto& rows = instance.rows(name);
    std::set<Row> doomed;
    for (auto r : hits) doomed.insert(rows[joined.provenance[r][t]]);
    std::erase_if(rows, [&](const Row& row) { return doomed.count(row) > 0; });
  }
}

void exec_upd(Instance& instance, const UpdateStmt& stmt, const Env& env, FreshUids& fresh) {
  JoinedRows joined = eval_join(instance, stmt.join);
  auto hits = filter(instance, joined, stmt.pred, env);
  auto pos = std::find(joined.tables.begin(), joined.tables.end(), stmt.attr.table);
  if (pos == joined.tables.end()) throw EvalError("update target not in join: " + stmt.attr.table);
  auto t = static_cast<std::size_t>(pos - joined.tables.begin());
  const Table* table = instance.schema().find_table(stmt.attr.table);
  int col = table ? table->index_of(stmt.attr.name) : -1;
  if (col < 0) throw EvalError("unknown attribute " + stmt.attr.to_string());
  Value v = term_value(stmt.value, env, fresh);
  auto& rows = instance.rows(stmt.attr.table);
  for (auto r : hits) rows[joined.provenance[r][t]][static_cast<std::size_t>(col)] = v;
}

}  // namespace

JoinedRows eval_join(const Instance& instance, const JoinChain& join) {
  JoinedRows out;
  if (join.is_table()) {
    const Table* table = instance.schema().find_table(join.table_name());
    if (!table) throw EvalError("unknown table " + join.table_name());
    out.tables = {table->name};
    for (const auto& a : table->attributes) out.columns.push_back(a.qualified());
    const auto& rows = instance.rows(table->name);
    out.rows = rows;
    for (std::size_t i = 0; i < rows.size(); ++i) out.provenance.push_back({i});
    return out;
  }
  const auto& e = join.equi();
  JoinedRows left = eval_join(instance, e.left);
  JoinedRows right = eval_join(instance, e.right);
  std::size_t li = column_index(left.columns, e.left_attr);
  std::size_t ri = column_index(right.columns, e.right_attr);
  out.tables = left.tables;
  out.tables.insert(out.tables.end(), right.tables.begin(), right.tables.end());
  out.columns = left.columns;
  out.columns.insert(out.columns.end(), right.columns.begin(), right.columns.end());
  for (std::size_t l = 0; l < left.rows.size(); ++l) {
    for (std::size_t r = 0; r < right.rows.size(); ++r) {
      if (left.rows[l][li] != right.rows[r][ri]) continue;
      Row row = left.rows[l];
      row.insert(row.end(), right.rows[r].begin(), right.rows[r].end());
      out.rows.push_back(std::move(row));
      auto prov = left.provenance[l];
      prov.insert(prov.end(), right.provenance[r].begin(), right.provenance[r].end());
      out.provenance.push_back(std::move(prov));
    }
  }
  return out;
}

Relation eval_query(const Instance& instance, const Query& query, const Env& env) {
  return std::visit(
      [&](const auto& node) -> Relation {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Query::From>) {
          JoinedRows joined = eval_join(instance, node.join);
          return Relation{std::move(joined.columns), std::move(joined.rows)};
        } else if constexpr (std::is_same_v<T, Query::Select>) {
          Relation src = eval_query(instance, *node.source, env);
          PredicateEval eval(instance, env, src.columns);
          Relation out{src.columns, {}};
          for (auto& row : src.rows)
            if (eval(node.pred, row)) out.rows.push_back(std::move(row));
          return out;
        } else {
          Relation src = eval_query(instance, *node.source, env);
          std::vector<std::size_t> idx;
          for (const auto& a : node.attrs) idx.push_back(column_index(src.columns, a));
          Relation out{node.attrs, {}};
          for (const auto& row : src.rows) {
            Row r;
            for (auto i : idx) r.push_back(row[i]);
            out.rows.push_back(std::move(r));
          }
          return out;
        }
      },
      query.node);
}

Instance exec_update(const Instance& instance, const Statement& stmt, const Env& env, FreshUids& fresh) {
  Instance out = instance;
  if (const auto* ins = std::get_if<InsertStmt>(&stmt))
    exec_insert(out, *ins, env, fresh);
  else if (const auto* del = std::get_if<DeleteStmt>(&stmt))
    exec_delete(out, *del, env);
  else if (const auto* upd = std::get_if<UpdateStmt>(&stmt))
    exec_upd(out, *upd, env, fresh);
  else
    throw EvalError("query statement executed as an update");
  return out;
}

Env bind_arguments(const Function& function, const std::vector<Value>& args) {
  if (args.size() != function.params.size())
    throw EvalError(function.name + ": expected " + std::to_string(function.params.size()) + " arguments, got " +
                    std::to_string(args.size()));
  Env env;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& p = function.params[i];
    if (args[i].type() != p.type) throw EvalError(function.name + ": argument " + p.name + " has the wrong type");
    env[p.name] = args[i];
  }
  return env;
}

Instance call_function(const Instance& instance, const Function& function, const std::vector<Value>& args,
                       FreshUids& fresh, Relation* result) {
  Env env = bind_arguments(function, args);
  fresh.begin_invocation();
  if (function.kind == FunctionKind::Query) {
    if (function.body.size() != 1 || !std::holds_alternative<QueryStmt>(function.body.front()))
      throw EvalError(function.name + ": malformed query body");
    Relation rel = eval_query(instance, std::get<QueryStmt>(function.body.front()).query, env);
    if (result) *result = std::move(rel);
    return instance;
  }
  Instance state = instance;
  for (const auto& stmt : function.body) state = exec_update(state, stmt, env, fresh);
  return state;
}

std::vector<Row> run_sequence(const Schema& schema, const Program& program, const InvocationSequence& sequence) {
  if (sequence.calls.empty()) throw EvalError("empty invocation sequence");
  Instance state(schema);
  FreshUids fresh;
  for (std::size_t i = 0; i < sequence.calls.size(); ++i) {
    const Call& call = sequence.calls[i];
    const Function* fn = program.find(call.function);
    if (!fn) throw EvalError("unknown function " + call.function);
    bool last = i + 1 == sequence.calls.size();
    if (last != (fn->kind == FunctionKind::Query))
      throw EvalError(last ? "sequence must end with a query" : "query " + fn->name + " before the last call");
    Relation result;
    state = call_function(state, *fn, call.args, fresh, &result);
    if (last) return result.rows;
  }
  return {};
}

std::string to_string(const Row& row) {
  std::string out = "(";
  for (std::size_t i = 0; i < row.size(); ++i) out += (i ? ", " : "") + row[i].to_string();
  return out + ")";
}

std::string InvocationSequence::to_string() const {
  std::string out;
  for (const auto& call : calls) {
    if (!out.empty()) out += "; ";
    out += call.function + "(";
    for (std::size_t i = 0; i < call.args.size(); ++i) out += (i ? ", " : "") + call.args[i].to_string();
    out += ")";
  }
  return out;
}

}  // namespace migrator
