// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#include "migrator/sketch_gen.hpp"

#include <algorithm>
#include <sstream>

#include "migrator/join_graph.hpp"
#include "migrator/parser.hpp"

namespace migrator {

namespace {

const JoinChain& own_chain(const Query& q) {
  if (const auto* p = std::get_if<Query::Project>(&q.node)) return own_chain(*p->source);
  if (const auto* s = std::get_if<Query::Select>(&q.node)) return own_chain(*s->source);
  return std::get<Query::From>(q.node).join;
}

void pred_joins(const Predicate& pred, std::vector<JoinChain>& out);

void query_joins(const Query& q, std::vector<JoinChain>& out) {
  out.push_back(own_chain(q));
  const Query* cur = &q;
  while (true) {
    if (const auto* p = std::get_if<Query::Project>(&cur->node)) {
      cur = &*p->source;
    } else if (const auto* s = std::get_if<Query::Select>(&cur->node)) {
      pred_joins(s->pred, out);
      cur = &*s->source;
    } else {
      break;
    }
  }
}

void pred_joins(const Predicate& pred, std::vector<JoinChain>& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Predicate::In>) {
          query_joins(*node.query, out);
        } else if constexpr (std::is_same_v<T, Predicate::Not>) {
          pred_joins(*node.operand, out);
        } else if constexpr (std::is_same_v<T, Predicate::And> || std::is_same_v<T, Predicate::Or>) {
          pred_joins(*node.lhs, out);
          pred_joins(*node.rhs, out);
        }
      },
      pred.node);
}

// Non-empty subsets by size, then by position in `tables`.
std::vector<std::vector<std::string>> nonempty_subsets(const std::vector<std::string>& tables) {
  std::vector<std::vector<std::string>> out;
  const std::size_t n = tables.size();
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::vector<std::string> subset;
      for (auto i : idx) subset.push_back(tables[i]);
      out.push_back(std::move(subset));
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

class Builder {
 public:
  Builder(const ValueCorrespondence& corr, std::string_view owner, std::vector<Hole>& holes,
          std::vector<JoinSlot> joins)
      : corr_(corr), owner_(owner), holes_(holes), joins_(std::move(joins)) {}

  int new_hole(HoleDomain domain) {
    int id = static_cast<int>(holes_.size());
    holes_.push_back(Hole{id, std::string(owner_), std::move(domain)});
    return id;
  }

  JoinSlot take_join() {
    if (next_join_ >= joins_.size()) throw std::logic_error("join slots exhausted");
    return joins_[next_join_++];
  }

  AttrSlot attr(const QualifiedAttr& a) {
    const auto& images = corr_.images(a);
    if (images.empty()) throw UnmappableError(std::string(owner_) + ": unmappable attribute " + a.to_string());
    if (images.size() == 1) return images.front();
    return HoleRef{new_hole(images)};
  }

  SkPredicate pred(const Predicate& p) {
    return std::visit(
        [&](const auto& node) -> SkPredicate {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Predicate::Cmp>) {
            SkPredicate::Cmp cmp;
            cmp.lhs = attr(node.lhs);
            cmp.op = node.op;
            if (const auto* a = std::get_if<QualifiedAttr>(&node.rhs))
              cmp.rhs = attr(*a);
            else if (const auto* v = std::get_if<Value>(&node.rhs))
              cmp.rhs = *v;
            else
              cmp.rhs = std::get<Param>(node.rhs);
            return SkPredicate{std::move(cmp)};
          } else if constexpr (std::is_same_v<T, Predicate::In>) {
            AttrSlot a = attr(node.attr);
            SkQuery sub = query(*node.query);
            return SkPredicate{SkPredicate::In{std::move(a), std::move(sub)}};
          } else if constexpr (std::is_same_v<T, Predicate::And>) {
            SkPredicate l = pred(*node.lhs);
            SkPredicate r = pred(*node.rhs);
            return SkPredicate{SkPredicate::And{std::move(l), std::move(r)}};
          } else if constexpr (std::is_same_v<T, Predicate::Or>) {
            SkPredicate l = pred(*node.lhs);
            SkPredicate r = pred(*node.rhs);
            return SkPredicate{SkPredicate::Or{std::move(l), std::move(r)}};
          } else {
            return SkPredicate{SkPredicate::Not{pred(*node.operand)}};
          }
        },
        p.node);
  }

  SkQuery query(const Query& q) {
    JoinSlot own = take_join();
    return rebuild(q, own);
  }

  SkStatement statement(const Statement& stmt, std::optional<TablesSlot> tables) {
    return std::visit(
        [&](const auto& s) -> SkStatement {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, InsertStmt>) {
            SkInsert ins;
            ins.join = take_join();
            for (const auto& [a, term] : s.row) {
              if (corr_.images(a).empty()) continue;
              ins.values.emplace_back(attr(a), term);
            }
            return ins;
          } else if constexpr (std::is_same_v<T, DeleteStmt>) {
            JoinSlot join = take_join();
            SkPredicate where = pred(s.pred);
            return SkDelete{*tables, std::move(join), std::move(where)};
          } else if constexpr (std::is_same_v<T, UpdateStmt>) {
            JoinSlot join = take_join();
            SkPredicate where = pred(s.pred);
            AttrSlot target = attr(s.attr);
            return SkUpdate{std::move(join), std::move(where), std::move(target), s.value};
          } else {
            return SkQueryStmt{query(s.query)};
          }
        },
        stmt);
  }

 private:
  SkQuery rebuild(const Query& q, const JoinSlot& own) {
    if (const auto* p = std::get_if<Query::Project>(&q.node)) {
      std::vector<AttrSlot> attrs;
      for (const auto& a : p->attrs) attrs.push_back(attr(a));
      SkQuery src = rebuild(*p->source, own);
      return SkQuery{SkQuery::Project{std::move(attrs), std::move(src)}};
    }
    if (const auto* s = std::get_if<Query::Select>(&q.node)) {
      SkPredicate pr = pred(s->pred);
      SkQuery src = rebuild(*s->source, own);
      return SkQuery{SkQuery::Select{std::move(pr), std::move(src)}};
    }
    return SkQuery{SkQuery::From{own}};
  }

  const ValueCorrespondence& corr_;
  std::string_view owner_;
  std::vector<Hole>& holes_;
  std::vector<JoinSlot> joins_;
  std::size_t next_join_ = 0;
};

int max_uid_slot(const Function& fn) {
  int top = -1;
  for (const auto& stmt : fn.body) {
    auto visit_term = [&](const Term& t) {
      if (const auto* u = std::get_if<FreshUid>(&t)) top = std::max(top, u->slot);
    };
    if (const auto* ins = std::get_if<InsertStmt>(&stmt))
      for (const auto& [a, t] : ins->row) visit_term(t);
    if (const auto* upd = std::get_if<UpdateStmt>(&stmt)) visit_term(upd->value);
  }
  return top;
}

std::vector<std::vector<JoinChain>> candidates_for(const Statement& stmt, const ValueCorrespondence& corr,
                                                   const Schema& source, const Schema& target,
                                                   const std::string& owner) {
  std::vector<std::vector<JoinChain>> out;
  for (const auto& j : source_joins(stmt)) {
    auto cands = candidate_joins(j, corr, source, target);
    if (cands.empty()) throw UnmappableError(owner + ": no target join chain for " + to_string(j));
    out.push_back(std::move(cands));
  }
  return out;
}

// One statement whose join (and delete table list) positions are holes
// ranging over every candidate.
SkStatement merged_statement(const Statement& stmt, const std::vector<std::vector<JoinChain>>& cands,
                             const ValueCorrespondence& corr, const std::string& owner, std::vector<Hole>& holes) {
  Builder probe(corr, owner, holes, {});
  std::optional<TablesSlot> tables;
  if (std::holds_alternative<DeleteStmt>(stmt)) {
    std::vector<std::string> all;
    for (const auto& chain : cands.front())
      for (const auto& t : tables_of(chain))
        if (std::find(all.begin(), all.end(), t) == all.end()) all.push_back(t);
    tables = HoleRef{probe.new_hole(nonempty_subsets(all))};
  }
  std::vector<JoinSlot> slots;
  for (const auto& c : cands) slots.push_back(HoleRef{probe.new_hole(c)});
  Builder b(corr, owner, holes, std::move(slots));
  return b.statement(stmt, tables);
}

}  // namespace

std::vector<JoinChain> source_joins(const Statement& stmt) {
  std::vector<JoinChain> out;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, InsertStmt>) {
          out.push_back(s.join);
        } else if constexpr (std::is_same_v<T, QueryStmt>) {
          query_joins(s.query, out);
        } else {
          out.push_back(s.join);
          pred_joins(s.pred, out);
        }
      },
      stmt);
  return out;
}

SkStatement sketch_statement(const Statement& stmt, const ValueCorrespondence& corr,
                             const std::vector<JoinChain>& chosen, std::string_view owner,
                             std::vector<Hole>& holes) {
  if (chosen.size() != source_joins(stmt).size()) throw std::invalid_argument("one target chain per source chain");
  std::vector<JoinSlot> slots(chosen.begin(), chosen.end());
  Builder b(corr, owner, holes, std::move(slots));
  std::optional<TablesSlot> tables;
  if (std::holds_alternative<DeleteStmt>(stmt)) tables = HoleRef{b.new_hole(nonempty_subsets(tables_of(chosen.front())))};
  return b.statement(stmt, tables);
}

Sketch gen_sketch(const Program& program, const ValueCorrespondence& corr, const Schema& source,
                  const Schema& target, ComposeMode mode) {
  Sketch sketch;
  sketch.target = target;
  for (const auto& fn : program.functions) {
    SketchFunction sf{fn.name, fn.kind, fn.params, {}, max_uid_slot(fn) + 1};
    for (const auto& stmt : fn.body) {
      auto cands = candidates_for(stmt, corr, source, target, fn.name);
      bool subset = mode == ComposeMode::Subset && !std::holds_alternative<QueryStmt>(stmt);
      if (!subset) {
        sf.body.push_back(merged_statement(stmt, cands, corr, fn.name, sketch.holes));
        continue;
      }
      std::vector<std::vector<JoinChain>> alternatives{{}};
      for (const auto& options : cands) {
        std::vector<std::vector<JoinChain>> next;
        for (const auto& prefix : alternatives) {
          for (const auto& c : options) {
            auto alt = prefix;
            alt.push_back(c);
            next.push_back(std::move(alt));
          }
        }
        alternatives = std::move(next);
      }
      if (alternatives.size() == 1) {
        sf.body.push_back(sketch_statement(stmt, corr, alternatives.front(), fn.name, sketch.holes));
        continue;
      }
      std::vector<int> group;
      for (const auto& alt : alternatives) {
        int flag = static_cast<int>(sketch.holes.size());
        sketch.holes.push_back(Hole{flag, fn.name, BoolDomain{}});
        group.push_back(flag);
        SkChoice choice{flag, {sketch_statement(stmt, corr, alt, fn.name, sketch.holes)}, {}};
        sf.body.push_back(Box<SkChoice>(std::move(choice)));
      }
      sketch.at_least_one.push_back(std::move(group));
    }
    sketch.functions.push_back(std::move(sf));
  }
  return sketch;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

class SketchPrinter {
 public:
  explicit SketchPrinter(const Sketch& sketch) : sketch_(sketch) {}

  std::string hole(int id) const {
    const Hole& h = sketch_.holes.at(static_cast<std::size_t>(id));
    std::string items;
    auto add = [&](const std::string& s) { items += (items.empty() ? "" : ", ") + s; };
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, std::vector<JoinChain>>) {
            for (const auto& c : d) add(to_string(c));
          } else if constexpr (std::is_same_v<T, std::vector<QualifiedAttr>>) {
            for (const auto& a : d) add(a.to_string());
          } else if constexpr (std::is_same_v<T, std::vector<std::vector<std::string>>>) {
            for (const auto& ts : d) {
              std::string list;
              for (const auto& t : ts) list += (list.empty() ? "" : ", ") + t;
              add("[" + list + "]");
            }
          } else {
            add("true");
            add("false");
          }
        },
        h.domain);
    return "??" + std::to_string(id + 1) + "{" + items + "}";
  }

  std::string attr(const AttrSlot& a) const {
    if (const auto* h = std::get_if<HoleRef>(&a)) return hole(h->id);
    return std::get<QualifiedAttr>(a).to_string();
  }

  std::string join(const JoinSlot& j) const {
    if (const auto* h = std::get_if<HoleRef>(&j)) return hole(h->id);
    return to_string(std::get<JoinChain>(j));
  }

  std::string tables(const TablesSlot& t) const {
    if (const auto* h = std::get_if<HoleRef>(&t)) return hole(h->id);
    std::string list;
    for (const auto& name : std::get<std::vector<std::string>>(t)) list += (list.empty() ? "" : ", ") + name;
    return "[" + list + "]";
  }

  std::string pred(const SkPredicate& p) const {
    return std::visit(
        [&](const auto& node) -> std::string {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, SkPredicate::Cmp>) {
            std::string rhs;
            if (const auto* a = std::get_if<AttrSlot>(&node.rhs))
              rhs = attr(*a);
            else if (const auto* v = std::get_if<Value>(&node.rhs))
              rhs = v->to_string();
            else
              rhs = std::get<Param>(node.rhs).name;
            return attr(node.lhs) + " " + std::string(to_string(node.op)) + " " + rhs;
          } else if constexpr (std::is_same_v<T, SkPredicate::In>) {
            return attr(node.attr) + " in (" + query(*node.query) + ")";
          } else if constexpr (std::is_same_v<T, SkPredicate::And>) {
            return "(" + pred(*node.lhs) + " && " + pred(*node.rhs) + ")";
          } else if constexpr (std::is_same_v<T, SkPredicate::Or>) {
            return "(" + pred(*node.lhs) + " || " + pred(*node.rhs) + ")";
          } else {
            return "!" + pred(*node.operand);
          }
        },
        p.node);
  }

  std::string query(const SkQuery& q) const {
    return std::visit(
        [&](const auto& node) -> std::string {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, SkQuery::Project>) {
            std::string attrs;
            for (const auto& a : node.attrs) attrs += (attrs.empty() ? "" : ", ") + attr(a);
            return "proj([" + attrs + "], " + query(*node.source) + ")";
          } else if constexpr (std::is_same_v<T, SkQuery::Select>) {
            return "sel(" + pred(node.pred) + ", " + query(*node.source) + ")";
          } else {
            return join(node.join);
          }
        },
        q.node);
  }

  void statements(const std::vector<SkStatement>& body, const std::string& indent, std::ostream& out) const {
    for (const auto& stmt : body) {
      std::visit(
          [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SkInsert>) {
              std::string row;
              for (const auto& [a, t] : s.values) row += (row.empty() ? "" : ", ") + attr(a) + ": " + to_string(t);
              out << indent << "ins(" << join(s.join) << ", {" << row << "});\n";
            } else if constexpr (std::is_same_v<T, SkDelete>) {
              out << indent << "del(" << tables(s.tables) << ", " << join(s.join) << ", " << pred(s.pred) << ");\n";
            } else if constexpr (std::is_same_v<T, SkUpdate>) {
              out << indent << "upd(" << join(s.join) << ", " << pred(s.pred) << ", " << attr(s.attr) << ", "
                  << to_string(s.value) << ");\n";
            } else if constexpr (std::is_same_v<T, SkQueryStmt>) {
              out << indent << query(s.query) << ";\n";
            } else {
              out << indent << "if " << hole(s->hole) << " {\n";
              statements(s->then_branch, indent + "  ", out);
              out << indent << "} else {\n";
              statements(s->else_branch, indent + "  ", out);
              out << indent << "}\n";
            }
          },
          stmt);
    }
  }

 private:
  const Sketch& sketch_;
};

}  // namespace

std::string to_string(const Sketch& sketch) {
  SketchPrinter printer(sketch);
  std::ostringstream out;
  bool first = true;
  for (const auto& fn : sketch.functions) {
    if (!first) out << "\n";
    first = false;
    out << (fn.kind == FunctionKind::Update ? "update " : "query ") << fn.name << "(";
    for (std::size_t i = 0; i < fn.params.size(); ++i)
      out << (i ? ", " : "") << fn.params[i].name << ": " << to_string(fn.params[i].type);
    out << ") {\n";
    printer.statements(fn.body, "  ", out);
    out << "}\n";
  }
  for (const auto& group : sketch.at_least_one) {
    out << "// at least one of";
    for (int h : group) out << " ??" << h + 1;
    out << "\n";
  }
  return out.str();
}

}  // namespace migrator
