// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#include "migrator/sketch_solver.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace migrator {

std::pair<int, int> HoleVarMap::hole_of(int var) const {
  auto it = std::upper_bound(first_var.begin(), first_var.end(), var);
  if (it == first_var.begin()) throw std::out_of_range("variable is not a hole selector");
  auto h = static_cast<std::size_t>(std::distance(first_var.begin(), it) - 1);
  int index = var - first_var[h];
  if (index >= sizes[h]) throw std::out_of_range("variable is not a hole selector");
  return {static_cast<int>(h), index};
}

int HoleVarMap::selected(const Model& model, int hole) const {
  for (int j = 0; j < sizes.at(static_cast<std::size_t>(hole)); ++j)
    if (model[var(hole, j)]) return j;
  throw std::invalid_argument("model selects nothing for hole " + std::to_string(hole + 1));
}

namespace {

// (selector literal or 0 when concrete, element)
template <class T>
using Options = std::vector<std::pair<int, T>>;

template <class T>
const std::vector<T>& domain_of(const Sketch& sketch, int hole) {
  return std::get<std::vector<T>>(sketch.holes.at(static_cast<std::size_t>(hole)).domain);
}

template <class T>
Options<T> options(const Sketch& sketch, const HoleVarMap& vars, const Slot<T>& slot) {
  Options<T> out;
  if (const auto* h = std::get_if<HoleRef>(&slot)) {
    const auto& dom = domain_of<T>(sketch, h->id);
    for (std::size_t j = 0; j < dom.size(); ++j) out.emplace_back(vars.var(h->id, static_cast<int>(j)), dom[j]);
  } else {
    out.emplace_back(0, std::get<T>(slot));
  }
  return out;
}

void add_conflict(CnfFormula& f, int x, int y) {
  Clause c;
  if (x) c.push_back(-x);
  if (y) c.push_back(-y);
  if (!c.empty()) f.add_hard(std::move(c));
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

class WellFormedness {
 public:
  WellFormedness(const Sketch& sketch, const HoleVarMap& vars, CnfFormula& f) : sketch_(sketch), vars_(vars), f_(f) {}

  void statements(const std::vector<SkStatement>& body) {
    for (const auto& stmt : body) {
      std::visit(
          [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SkInsert>) {
              std::vector<AttrSlot> attrs;
              for (const auto& [a, t] : s.values) attrs.push_back(a);
              scope(s.join, attrs);
            } else if constexpr (std::is_same_v<T, SkDelete>) {
              std::vector<AttrSlot> attrs;
              pred(s.pred, attrs);
              scope(s.join, attrs);
              tables(s.tables, s.join);
            } else if constexpr (std::is_same_v<T, SkUpdate>) {
              std::vector<AttrSlot> attrs{s.attr};
              pred(s.pred, attrs);
              scope(s.join, attrs);
            } else if constexpr (std::is_same_v<T, SkQueryStmt>) {
              query(s.query);
            } else {
              statements(s->then_branch);
              statements(s->else_branch);
            }
          },
          stmt);
    }
  }

 private:
  void query(const SkQuery& q) {
    std::vector<AttrSlot> attrs;
    const SkQuery* cur = &q;
    while (true) {
      if (const auto* p = std::get_if<SkQuery::Project>(&cur->node)) {
        attrs.insert(attrs.end(), p->attrs.begin(), p->attrs.end());
        cur = &*p->source;
      } else if (const auto* s = std::get_if<SkQuery::Select>(&cur->node)) {
        pred(s->pred, attrs);
        cur = &*s->source;
      } else {
        scope(std::get<SkQuery::From>(cur->node).join, attrs);
        return;
      }
    }
  }

  void pred(const SkPredicate& p, std::vector<AttrSlot>& attrs) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, SkPredicate::Cmp>) {
            attrs.push_back(node.lhs);
            if (const auto* a = std::get_if<AttrSlot>(&node.rhs)) attrs.push_back(*a);
          } else if constexpr (std::is_same_v<T, SkPredicate::In>) {
            attrs.push_back(node.attr);
            query(*node.query);
          } else if constexpr (std::is_same_v<T, SkPredicate::Not>) {
            pred(*node.operand, attrs);
          } else {
            pred(*node.lhs, attrs);
            pred(*node.rhs, attrs);
          }
        },
        p.node);
  }

  void scope(const JoinSlot& join, const std::vector<AttrSlot>& attrs) {
    auto joins = options(sketch_, vars_, join);
    for (const auto& slot : attrs) {
      for (const auto& [x, a] : options(sketch_, vars_, slot))
        for (const auto& [y, j] : joins)
          if (!contains(tables_of(j), a.table)) add_conflict(f_, x, y);
    }
  }

  void tables(const TablesSlot& tables, const JoinSlot& join) {
    auto joins = options(sketch_, vars_, join);
    for (const auto& [x, subset] : options(sketch_, vars_, tables)) {
      for (const auto& [y, j] : joins) {
        auto in_chain = tables_of(j);
        bool ok = std::all_of(subset.begin(), subset.end(), [&](const std::string& t) { return contains(in_chain, t); });
        if (!ok) add_conflict(f_, x, y);
      }
    }
  }

  const Sketch& sketch_;
  const HoleVarMap& vars_;
  CnfFormula& f_;
};

// ---------------------------------------------------------------------------
// Instantiation

class Instantiator {
 public:
  Instantiator(const Sketch& sketch, const std::vector<int>& choice) : sketch_(sketch), choice_(choice) {}

  Function function(const SketchFunction& sf, std::vector<Diagnostic>& diags) {
    fn_ = &sf;
    next_slot_ = sf.first_free_slot;
    diags_ = &diags;
    Function fn{sf.name, sf.kind, sf.params, {}};
    statements(sf.body, fn.body);
    return fn;
  }

 private:
  template <class T>
  const T& pick(const Slot<T>& slot) const {
    if (const auto* h = std::get_if<HoleRef>(&slot))
      return domain_of<T>(sketch_, h->id).at(static_cast<std::size_t>(choice_.at(static_cast<std::size_t>(h->id))));
    return std::get<T>(slot);
  }

  Predicate pred(const SkPredicate& p) const {
    return std::visit(
        [&](const auto& node) -> Predicate {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, SkPredicate::Cmp>) {
            Operand rhs;
            if (const auto* a = std::get_if<AttrSlot>(&node.rhs))
              rhs = pick(*a);
            else if (const auto* v = std::get_if<Value>(&node.rhs))
              rhs = *v;
            else
              rhs = std::get<Param>(node.rhs);
            return make_cmp(pick(node.lhs), node.op, std::move(rhs));
          } else if constexpr (std::is_same_v<T, SkPredicate::In>) {
            return Predicate{Predicate::In{pick(node.attr), query(*node.query)}};
          } else if constexpr (std::is_same_v<T, SkPredicate::And>) {
            return make_and(pred(*node.lhs), pred(*node.rhs));
          } else if constexpr (std::is_same_v<T, SkPredicate::Or>) {
            return make_or(pred(*node.lhs), pred(*node.rhs));
          } else {
            return make_not(pred(*node.operand));
          }
        },
        p.node);
  }

  Query query(const SkQuery& q) const {
    if (const auto* p = std::get_if<SkQuery::Project>(&q.node)) {
      std::vector<QualifiedAttr> attrs;
      for (const auto& a : p->attrs) attrs.push_back(pick(a));
      return Query::project(std::move(attrs), query(*p->source));
    }
    if (const auto* s = std::get_if<SkQuery::Select>(&q.node)) return Query::select(pred(s->pred), query(*s->source));
    return Query::from(pick(std::get<SkQuery::From>(q.node).join));
  }

  InsertStmt insert(const SkInsert& s) {
    InsertStmt ins{pick(s.join), {}};
    auto attrs = attrs_of(ins.join, sketch_.target);
    std::vector<std::size_t> parent(attrs.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto index = [&](const QualifiedAttr& a) {
      auto it = std::find(attrs.begin(), attrs.end(), a);
      return it == attrs.end() ? attrs.size() : static_cast<std::size_t>(it - attrs.begin());
    };
    auto find = [&](std::size_t i) {
      while (parent[i] != i) i = parent[i] = parent[parent[i]];
      return i;
    };
    for (const auto& [l, r] : join_conditions(ins.join)) {
      std::size_t a = index(l), b = index(r);
      if (a < attrs.size() && b < attrs.size()) parent[find(a)] = find(b);
    }
    std::map<std::size_t, Term> terms;
    for (const auto& [slot, term] : s.values) {
      const QualifiedAttr& a = pick(slot);
      std::size_t i = index(a);
      if (i == attrs.size()) {
        diags_->push_back(Diagnostic{fn_->name, "ins " + a.to_string(), "attribute outside the insert join"});
        continue;
      }
      terms.emplace(find(i), term);
    }
    for (std::size_t i = 0; i < attrs.size(); ++i) {
      std::size_t root = find(i);
      auto it = terms.find(root);
      if (it == terms.end()) it = terms.emplace(root, FreshUid{next_slot_++}).first;
      ins.row.emplace_back(attrs[i], it->second);
    }
    return ins;
  }

  void statements(const std::vector<SkStatement>& body, std::vector<Statement>& out) {
    for (const auto& stmt : body) {
      std::visit(
          [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SkInsert>) {
              out.push_back(insert(s));
            } else if constexpr (std::is_same_v<T, SkDelete>) {
              out.push_back(DeleteStmt{pick(s.tables), pick(s.join), pred(s.pred)});
            } else if constexpr (std::is_same_v<T, SkUpdate>) {
              out.push_back(UpdateStmt{pick(s.join), pred(s.pred), pick(s.attr), s.value});
            } else if constexpr (std::is_same_v<T, SkQueryStmt>) {
              out.push_back(QueryStmt{query(s.query)});
            } else {
              bool take = choice_.at(static_cast<std::size_t>(s->hole)) == 0;
              statements(take ? s->then_branch : s->else_branch, out);
            }
          },
          stmt);
    }
  }

  const Sketch& sketch_;
  const std::vector<int>& choice_;
  const SketchFunction* fn_ = nullptr;
  std::vector<Diagnostic>* diags_ = nullptr;
  int next_slot_ = 0;
};

Clause block_holes(const Model& model, const HoleVarMap& vars, const std::function<bool(const std::string&)>& keep) {
  Clause c;
  for (std::size_t h = 0; h < vars.sizes.size(); ++h) {
    if (!keep(vars.owner[h])) continue;
    int hole = static_cast<int>(h);
    c.push_back(-vars.var(hole, vars.selected(model, hole)));
  }
  return c;
}

}  // namespace

SketchEncoding encode_sketch(const Sketch& sketch, bool wf_constraints) {
  SketchEncoding enc;
  int next = 1;
  for (const auto& h : sketch.holes) {
    enc.vars.first_var.push_back(next);
    enc.vars.sizes.push_back(static_cast<int>(h.size()));
    enc.vars.owner.push_back(h.owner);
    next += static_cast<int>(h.size());
  }
  enc.formula = CnfFormula(next - 1);
  for (std::size_t h = 0; h < sketch.holes.size(); ++h) {
    std::vector<int> group(static_cast<std::size_t>(enc.vars.sizes[h]));
    std::iota(group.begin(), group.end(), enc.vars.first_var[h]);
    enc.formula.add_exactly_one(std::move(group));
  }
  for (const auto& group : sketch.at_least_one) {
    Clause c;
    for (int h : group) c.push_back(enc.vars.var(h, 0));
    enc.formula.add_hard(std::move(c));
  }
  if (wf_constraints) {
    WellFormedness wf(sketch, enc.vars, enc.formula);
    for (const auto& fn : sketch.functions) wf.statements(fn.body);
  }
  return enc;
}

Instantiation instantiate(const Sketch& sketch, const std::vector<int>& choice) {
  if (choice.size() != sketch.holes.size()) throw std::invalid_argument("one choice per hole required");
  for (std::size_t h = 0; h < choice.size(); ++h)
    if (choice[h] < 0 || static_cast<std::size_t>(choice[h]) >= sketch.holes[h].size())
      throw std::out_of_range("choice out of range for hole " + std::to_string(h + 1));
  Instantiation out;
  Program program;
  Instantiator inst(sketch, choice);
  for (const auto& sf : sketch.functions) {
    std::vector<Diagnostic> diags;
    Function fn = inst.function(sf, diags);
    if (diags.empty()) diags = validate_function(fn, sketch.target);
    if (!diags.empty()) {
      out.ill_formed.insert(sf.name);
      out.diagnostics.insert(out.diagnostics.end(), diags.begin(), diags.end());
    }
    program.functions.push_back(std::move(fn));
  }
  if (out.ill_formed.empty()) out.program = std::move(program);
  return out;
}

Instantiation instantiate(const Sketch& sketch, const Model& model, const HoleVarMap& vars) {
  std::vector<int> choice;
  for (std::size_t h = 0; h < sketch.holes.size(); ++h) choice.push_back(vars.selected(model, static_cast<int>(h)));
  return instantiate(sketch, choice);
}

Clause block_functions(const Model& model, const std::set<std::string>& functions, const HoleVarMap& vars) {
  return block_holes(model, vars, [&](const std::string& owner) { return functions.count(owner) > 0; });
}

Clause block_from_mfi(const Model& model, const InvocationSequence& failing, const HoleVarMap& vars) {
  std::set<std::string> names;
  for (const auto& call : failing.calls) names.insert(call.function);
  return block_functions(model, names, vars);
}

Clause block_model(const Model& model, const HoleVarMap& vars) {
  return block_holes(model, vars, [](const std::string&) { return true; });
}

CompletionResult complete_sketch(const Sketch& sketch, const Schema& source_schema, const Program& source,
                                 const CompletionConfig& config) {
  EquivalenceOracle oracle(source_schema, source, config.test);
  return complete_sketch(sketch, oracle, config);
}

CompletionResult complete_sketch(const Sketch& sketch, const EquivalenceOracle& oracle,
                                 const CompletionConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  auto enc = encode_sketch(sketch, config.wf_constraints);
  CompletionResult result;
  while (true) {
    if (config.timeout.count() > 0 && std::chrono::steady_clock::now() - start >= config.timeout) {
      result.timed_out = true;
      return result;
    }
    auto model = sat_solve(enc.formula);
    if (!model) return result;
    ++result.iterations;
    auto inst = instantiate(sketch, *model, enc.vars);
    Clause block;
    if (!inst.program) {
      block = config.blocking == BlockingMode::FullModel ? block_model(*model, enc.vars)
                                                         : block_functions(*model, inst.ill_formed, enc.vars);
      if (config.log) *config.log << "iteration " << result.iterations << ": ill-formed " << inst.diagnostics.front().to_string() << "\n";
    } else {
      auto mfi = oracle.find_mfi(sketch.target, *inst.program);
      if (!mfi) {
        result.program = std::move(inst.program);
        if (config.log) *config.log << "iteration " << result.iterations << ": verified\n";
        return result;
      }
      block = config.blocking == BlockingMode::FullModel ? block_model(*model, enc.vars)
                                                         : block_from_mfi(*model, *mfi, enc.vars);
      if (config.log) *config.log << "iteration " << result.iterations << ": failing input " << mfi->to_string() << "\n";
      result.last_failure = std::move(mfi);
    }
    if (block.empty()) return result;
    enc.formula.add_hard(std::move(block));
  }
}

}  // namespace migrator
