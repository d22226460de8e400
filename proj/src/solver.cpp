// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#include "migrator/solver.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace migrator {

void CnfFormula::check_literal(Lit lit) const {
  if (lit == 0 || std::abs(lit) > num_vars_)
    throw std::invalid_argument("literal " + std::to_string(lit) + " out of range");
}

void CnfFormula::add_hard(Clause clause) {
  for (Lit l : clause) check_literal(l);
  hard_.push_back(std::move(clause));
}

void CnfFormula::add_exactly_one(std::vector<int> vars) {
  for (int v : vars)
    if (v <= 0) throw std::invalid_argument("exactly-one group over a negative literal");
  for (int v : vars) check_literal(v);
  xor_groups_.push_back(std::move(vars));
}

void CnfFormula::add_soft(Clause clause, std::uint64_t weight) {
  for (Lit l : clause) check_literal(l);
  soft_.push_back(SoftClause{std::move(clause), weight});
}

void CnfFormula::dump_dimacs(std::ostream& out) const {
  out << "p cnf " << num_vars_ << " " << hard_.size() << "\n";
  for (const auto& g : xor_groups_) {
    out << "c xor";
    for (int v : g) out << " " << v;
    out << "\n";
  }
  for (const auto& c : hard_) {
    for (Lit l : c) out << l << " ";
    out << "0\n";
  }
}

CnfFormula add_hard(CnfFormula formula, Clause clause) {
  formula.add_hard(std::move(clause));
  return formula;
}

bool satisfies_hard(const CnfFormula& formula, const Model& model) {
  if (model.num_vars() < formula.num_vars()) return false;
  for (const auto& c : formula.hard())
    if (std::none_of(c.begin(), c.end(), [&](Lit l) { return model.satisfies(l); })) return false;
  for (const auto& g : formula.xor_groups())
    if (std::count_if(g.begin(), g.end(), [&](int v) { return model[v]; }) != 1) return false;
  return true;
}

std::uint64_t soft_weight(const CnfFormula& formula, const Model& model) {
  std::uint64_t total = 0;
  for (const auto& s : formula.soft())
    if (std::any_of(s.clause.begin(), s.clause.end(), [&](Lit l) { return model.satisfies(l); })) total += s.weight;
  return total;
}

namespace {

// Partial assignment with propagation of hard clauses and exactly-one
// groups through occurrence lists.
class Engine {
 public:
  explicit Engine(const CnfFormula& f)
      : f_(f),
        value_(static_cast<std::size_t>(f.num_vars()) + 1, -1),
        clause_occ_(2 * (static_cast<std::size_t>(f.num_vars()) + 1)),
        group_occ_(static_cast<std::size_t>(f.num_vars()) + 1) {
    for (std::size_t c = 0; c < f.hard().size(); ++c)
      for (Lit l : f.hard()[c]) clause_occ_[code(l)].push_back(static_cast<int>(c));
    for (std::size_t g = 0; g < f.xor_groups().size(); ++g)
      for (int v : f.xor_groups()[g]) group_occ_[static_cast<std::size_t>(v)].push_back(static_cast<int>(g));
  }

  // Root-level consequences: unit clauses and singleton groups.
  bool init() {
    for (const auto& c : f_.hard()) {
      if (c.empty()) return false;
      if (c.size() == 1 && !enqueue(c.front())) return false;
    }
    for (const auto& g : f_.xor_groups()) {
      if (g.empty()) return false;
      if (g.size() == 1 && !enqueue(g.front())) return false;
    }
    return propagate();
  }

  int num_vars() const { return f_.num_vars(); }
  int value(int v) const { return value_[static_cast<std::size_t>(v)]; }
  bool is_true(Lit l) const { return value(std::abs(l)) == (l > 0 ? 1 : 0); }
  bool is_false(Lit l) const { return value(std::abs(l)) == (l > 0 ? 0 : 1); }

  std::size_t mark() const { return trail_.size(); }
  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      value_[static_cast<std::size_t>(std::abs(trail_.back()))] = -1;
      trail_.pop_back();
    }
    qhead_ = std::min(qhead_, trail_.size());
  }

  // Assigns `lit` and propagates; on conflict the caller must undo.
  bool assign(Lit lit) { return enqueue(lit) && propagate(); }

  void set_use_clauses(bool on) { use_clauses_ = on; }

  bool clause_satisfied(const Clause& c) const {
    return std::any_of(c.begin(), c.end(), [&](Lit l) { return is_true(l); });
  }
  bool clause_open(const Clause& c) const {
    return !clause_satisfied(c) && std::any_of(c.begin(), c.end(), [&](Lit l) { return value(std::abs(l)) < 0; });
  }
  bool group_open(const std::vector<int>& g) const {
    return std::none_of(g.begin(), g.end(), [&](int v) { return value(v) == 1; });
  }

 private:
  static std::size_t code(Lit l) { return 2 * static_cast<std::size_t>(std::abs(l)) + (l < 0 ? 1 : 0); }

  bool enqueue(Lit lit) {
    auto v = static_cast<std::size_t>(std::abs(lit));
    int want = lit > 0 ? 1 : 0;
    if (value_[v] >= 0) return value_[v] == want;
    value_[v] = static_cast<std::int8_t>(want);
    trail_.push_back(lit);
    return true;
  }

  bool propagate() {
    while (qhead_ < trail_.size()) {
      Lit lit = trail_[qhead_++];
      int v = std::abs(lit);
      if (use_clauses_) {
        for (int c : clause_occ_[code(-lit)]) {
          const Clause& cl = f_.hard()[static_cast<std::size_t>(c)];
          Lit unit = 0;
          int open = 0;
          bool sat = false;
          for (Lit l : cl) {
            if (is_true(l)) {
              sat = true;
              break;
            }
            if (value(std::abs(l)) < 0) {
              ++open;
              unit = l;
            }
          }
          if (sat) continue;
          if (open == 0) return false;
          if (open == 1 && !enqueue(unit)) return false;
        }
      }
      for (int g : group_occ_[static_cast<std::size_t>(v)]) {
        const auto& group = f_.xor_groups()[static_cast<std::size_t>(g)];
        if (lit > 0) {
          for (int u : group) {
            if (u == v) continue;
            if (!enqueue(-u)) return false;
          }
        } else {
          int open = 0, last = 0;
          bool has_true = false;
          for (int u : group) {
            if (value(u) == 1) has_true = true;
            if (value(u) < 0) {
              ++open;
              last = u;
            }
          }
          if (has_true) continue;
          if (open == 0) return false;
          if (open == 1 && !enqueue(last)) return false;
        }
      }
    }
    return true;
  }

  const CnfFormula& f_;
  std::vector<std::int8_t> value_;
  std::vector<Lit> trail_;
  std::size_t qhead_ = 0;
  std::vector<std::vector<int>> clause_occ_;
  std::vector<std::vector<int>> group_occ_;
  bool use_clauses_ = true;
};

Model to_model(const Engine& e, const std::vector<std::int8_t>& extra = {}) {
  std::vector<bool> values(static_cast<std::size_t>(e.num_vars()) + 1, false);
  for (int v = 1; v <= e.num_vars(); ++v) {
    int x = e.value(v);
    if (x < 0 && static_cast<std::size_t>(v) < extra.size()) x = extra[static_cast<std::size_t>(v)];
    values[static_cast<std::size_t>(v)] = x == 1;
  }
  return Model(std::move(values));
}

bool sat_search(Engine& e, int from) {
  int v = from;
  while (v <= e.num_vars() && e.value(v) >= 0) ++v;
  if (v > e.num_vars()) return true;
  for (Lit lit : {v, -v}) {
    auto m = e.mark();
    if (e.assign(lit) && sat_search(e, v + 1)) return true;
    e.undo(m);
  }
  return false;
}

// A set of unassigned variables closed under the open constraints touching
// them.
struct Component {
  std::vector<int> vars;
  std::vector<int> hard;
  std::vector<int> groups;
  std::vector<int> soft;
};

class Splitter {
 public:
  Splitter(const CnfFormula& f, const Engine& e) : f_(f), e_(e), index_(static_cast<std::size_t>(f.num_vars()) + 1, -1) {}

  // Open constraints of `c` grouped by connectivity over unassigned
  // variables. `relax` ignores hard clauses of two or more literals.
  // Unassigned variables touched by no open constraint go to `free_vars`.
  std::vector<Component> split(const Component& c, bool relax, std::vector<int>* free_vars = nullptr) {
    std::vector<int> vars;
    for (int v : c.vars)
      if (e_.value(v) < 0) vars.push_back(v);
    for (std::size_t i = 0; i < vars.size(); ++i) index_[static_cast<std::size_t>(vars[i])] = static_cast<int>(i);
    std::vector<int> parent(vars.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<bool> touched(vars.size(), false);
    auto find = [&](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
      }
      return x;
    };
    auto link = [&](const std::vector<int>& lits) -> int {
      int root = -1;
      for (Lit l : lits) {
        int i = index_[static_cast<std::size_t>(std::abs(l))];
        if (i < 0 || e_.value(std::abs(l)) >= 0) continue;
        touched[static_cast<std::size_t>(i)] = true;
        int r = find(i);
        if (root < 0)
          root = r;
        else if (r != root)
          parent[static_cast<std::size_t>(r)] = root;
      }
      return root;
    };
    std::vector<std::pair<int, int>> hard_at, group_at, soft_at;
    for (int h : c.hard) {
      const Clause& cl = f_.hard()[static_cast<std::size_t>(h)];
      if ((relax && cl.size() >= 2) || !e_.clause_open(cl)) continue;
      hard_at.emplace_back(link(cl), h);
    }
    for (int g : c.groups) {
      const auto& grp = f_.xor_groups()[static_cast<std::size_t>(g)];
      if (!e_.group_open(grp)) continue;
      group_at.emplace_back(link(grp), g);
    }
    for (int s : c.soft) {
      const Clause& cl = f_.soft()[static_cast<std::size_t>(s)].clause;
      if (!e_.clause_open(cl)) continue;
      soft_at.emplace_back(link(cl), s);
    }
    std::map<int, std::size_t> slot;
    std::vector<Component> out;
    auto comp_of = [&](int i) -> Component& {
      int r = find(i);
      auto [it, fresh] = slot.emplace(r, out.size());
      if (fresh) out.emplace_back();
      return out[it->second];
    };
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (touched[i])
        comp_of(static_cast<int>(i)).vars.push_back(vars[i]);
      else if (free_vars)
        free_vars->push_back(vars[i]);
    }
    for (auto [r, h] : hard_at) comp_of(r).hard.push_back(h);
    for (auto [r, g] : group_at) comp_of(r).groups.push_back(g);
    for (auto [r, s] : soft_at) comp_of(r).soft.push_back(s);
    for (int v : vars) index_[static_cast<std::size_t>(v)] = -1;
    return out;
  }

 private:
  const CnfFormula& f_;
  const Engine& e_;
  std::vector<int> index_;
};

class MaxSat {
 public:
  explicit MaxSat(const CnfFormula& f) : f_(f), e_(f), split_(f, e_) {}

  std::optional<Model> run() {
    if (!e_.init()) return std::nullopt;
    Component all;
    for (int v = 1; v <= f_.num_vars(); ++v) all.vars.push_back(v);
    all.hard.resize(f_.hard().size());
    std::iota(all.hard.begin(), all.hard.end(), 0);
    all.groups.resize(f_.xor_groups().size());
    std::iota(all.groups.begin(), all.groups.end(), 0);
    all.soft.resize(f_.soft().size());
    std::iota(all.soft.begin(), all.soft.end(), 0);
    auto best = solve(all, false);
    if (!best) return std::nullopt;
    std::vector<std::int8_t> extra(static_cast<std::size_t>(f_.num_vars()) + 1, 0);
    for (auto [v, b] : best->values) extra[static_cast<std::size_t>(v)] = b ? 1 : 0;
    return to_model(e_, extra);
  }

 private:
  struct Best {
    std::uint64_t weight = 0;
    std::vector<std::pair<int, bool>> values;
  };

  std::uint64_t gained(const Component& root) const {
    std::uint64_t w = 0;
    for (int s : root.soft) {
      const auto& sc = f_.soft()[static_cast<std::size_t>(s)];
      if (e_.clause_satisfied(sc.clause)) w += sc.weight;
    }
    return w;
  }

  std::uint64_t naive_bound(const Component& c) const {
    std::uint64_t w = 0;
    for (int s : c.soft) w += f_.soft()[static_cast<std::size_t>(s)].weight;
    return w;
  }

  // Optimum of the problem with long hard clauses dropped, when dropping
  // them splits `c`; otherwise the sum of the open soft weights.
  std::optional<std::uint64_t> upper_bound(const Component& c, bool relaxed) {
    if (relaxed || c.hard.empty()) return naive_bound(c);
    auto parts = split_.split(c, true);
    if (parts.size() <= 1) return naive_bound(c);
    std::uint64_t total = 0;
    e_.set_use_clauses(false);
    for (const auto& p : parts) {
      auto r = relaxed_optimum(p);
      if (!r) {
        e_.set_use_clauses(true);
        return std::nullopt;
      }
      total += *r;
    }
    e_.set_use_clauses(true);
    return total;
  }

  std::optional<std::uint64_t> relaxed_optimum(const Component& c) {
    std::string key;
    auto add = [&](int x) { key += std::to_string(x) + ','; };
    for (int v : c.vars) add(v);
    key += '|';
    for (int s : c.soft) {
      add(s);
      for (Lit l : f_.soft()[static_cast<std::size_t>(s)].clause) add(e_.value(std::abs(l)));
    }
    key += '|';
    for (int g : c.groups) {
      add(g);
      for (int v : f_.xor_groups()[static_cast<std::size_t>(g)]) add(e_.value(v));
    }
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    auto best = solve(c, true);
    std::optional<std::uint64_t> w;
    if (best) w = best->weight;
    memo_.emplace(std::move(key), w);
    return w;
  }

  std::optional<Best> solve(const Component& root, bool relaxed) {
    std::optional<Best> best;
    search(root, relaxed, best);
    return best;
  }

  void record(const Component& root, std::uint64_t weight, const std::vector<std::pair<int, bool>>& sub,
              std::optional<Best>& best) {
    if (best && weight <= best->weight) return;
    Best b;
    b.weight = weight;
    std::map<int, bool> fixed(sub.begin(), sub.end());
    for (int v : root.vars) {
      int x = e_.value(v);
      bool val = x == 1;
      if (x < 0) {
        auto it = fixed.find(v);
        val = it != fixed.end() && it->second;
      }
      b.values.emplace_back(v, val);
    }
    best = std::move(b);
  }

  void search(const Component& root, bool relaxed, std::optional<Best>& best) {
    auto parts = split_.split(root, relaxed);
    std::uint64_t g = gained(root);
    if (parts.empty()) {
      record(root, g, {}, best);
      return;
    }
    if (parts.size() > 1) {
      std::uint64_t total = g;
      std::vector<std::pair<int, bool>> values;
      for (const auto& p : parts) {
        auto r = solve(p, relaxed);
        if (!r) return;
        total += r->weight;
        values.insert(values.end(), r->values.begin(), r->values.end());
      }
      record(root, total, values, best);
      return;
    }
    const Component& c = parts.front();
    if (best) {
      auto ub = upper_bound(c, relaxed);
      if (!ub || g + *ub <= best->weight) return;
    }
    int v = *std::min_element(c.vars.begin(), c.vars.end());
    for (Lit lit : {-v, v}) {
      auto m = e_.mark();
      if (e_.assign(lit)) search(root, relaxed, best);
      e_.undo(m);
    }
  }

  const CnfFormula& f_;
  Engine e_;
  Splitter split_;
  std::map<std::string, std::optional<std::uint64_t>> memo_;
};

class Counter {
 public:
  Counter(const CnfFormula& f, std::uint64_t limit) : f_(f), e_(f), split_(f, e_), limit_(limit) {}

  std::uint64_t run() {
    if (!e_.init()) return 0;
    Component all;
    for (int v = 1; v <= f_.num_vars(); ++v) all.vars.push_back(v);
    all.hard.resize(f_.hard().size());
    std::iota(all.hard.begin(), all.hard.end(), 0);
    all.groups.resize(f_.xor_groups().size());
    std::iota(all.groups.begin(), all.groups.end(), 0);
    return count(all);
  }

 private:
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    if (a != 0 && b > limit_ / a) throw CountLimitExceeded("model count exceeds " + std::to_string(limit_));
    return a * b;
  }

  std::uint64_t count(const Component& c) {
    std::vector<int> free_vars;
    auto parts = split_.split(c, false, &free_vars);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < free_vars.size(); ++i) total = mul(total, 2);
    for (const auto& p : parts) {
      std::uint64_t n = branch(p);
      if (n == 0) return 0;
      total = mul(total, n);
    }
    return total;
  }

  std::uint64_t branch(const Component& c) {
    int v = *std::min_element(c.vars.begin(), c.vars.end());
    std::uint64_t total = 0;
    for (Lit lit : {v, -v}) {
      auto m = e_.mark();
      if (e_.assign(lit)) total += count(c);
      e_.undo(m);
      if (total > limit_) throw CountLimitExceeded("model count exceeds " + std::to_string(limit_));
    }
    return total;
  }

  const CnfFormula& f_;
  Engine e_;
  Splitter split_;
  std::uint64_t limit_;
};

}  // namespace

std::optional<Model> sat_solve(const CnfFormula& formula) {
  Engine e(formula);
  if (!e.init()) return std::nullopt;
  if (!sat_search(e, 1)) return std::nullopt;
  return to_model(e);
}

std::optional<Model> maxsat_solve(const CnfFormula& formula) { return MaxSat(formula).run(); }

std::uint64_t count_models(const CnfFormula& formula, std::uint64_t limit) {
  std::uint64_t space = 1;
  std::vector<bool> grouped(static_cast<std::size_t>(formula.num_vars()) + 1, false);
  auto guard = [&](std::uint64_t factor) {
    if (factor != 0 && space > limit / factor)
      throw CountLimitExceeded("search space exceeds " + std::to_string(limit));
    space *= factor;
  };
  for (const auto& g : formula.xor_groups()) {
    guard(std::max<std::uint64_t>(g.size(), 1));
    for (int v : g) grouped[static_cast<std::size_t>(v)] = true;
  }
  for (int v = 1; v <= formula.num_vars(); ++v)
    if (!grouped[static_cast<std::size_t>(v)]) guard(2);
  return Counter(formula, limit).run();
}

}  // namespace migrator
