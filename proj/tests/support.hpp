// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

// Fixtures, generators and brute-force reference implementations shared by
// the unit tests and the acceptance runner.

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "migrator/equiv.hpp"
#include "migrator/parser.hpp"
#include "migrator/sketch.hpp"
#include "migrator/sketch_solver.hpp"
#include "migrator/solver.hpp"

namespace migrator::testing {

inline std::filesystem::path data_path(const std::string& rel) { return std::filesystem::path(MIGRATOR_DATA_DIR) / rel; }

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Scenario {
  Schema source_schema;
  Schema target_schema;
  Program source;
  std::optional<Program> expected;
};

inline Scenario load_scenario(const std::string& dir) {
  Scenario s;
  s.source_schema = parse_schema(read_text(data_path(dir + "/source.schema")));
  s.target_schema = parse_schema(read_text(data_path(dir + "/target.schema")));
  s.source = parse_program(read_text(data_path(dir + "/source.dbp")), s.source_schema);
  auto expected = data_path(dir + "/expected.dbp");
  if (std::filesystem::exists(expected)) s.expected = parse_program(read_text(expected), s.target_schema);
  return s;
}

// ---------------------------------------------------------------------------
// Brute-force solvers

inline Model model_from_bits(int n, std::uint64_t bits) {
  std::vector<bool> v(static_cast<std::size_t>(n) + 1, false);
  for (int i = 1; i <= n; ++i) v[static_cast<std::size_t>(i)] = (bits >> (n - i)) & 1U;
  return Model(std::move(v));
}

struct BruteMaxSat {
  std::optional<Model> best;
  std::uint64_t weight = 0;
};

// Enumerates in lexicographic order (variable 1 most significant, false
// first) so the first optimum seen is the lexicographically least.
inline BruteMaxSat brute_maxsat(const CnfFormula& f) {
  BruteMaxSat out;
  const int n = f.num_vars();
  for (std::uint64_t bits = 0; bits < (1ULL << n); ++bits) {
    Model m = model_from_bits(n, bits);
    if (!satisfies_hard(f, m)) continue;
    auto w = soft_weight(f, m);
    if (!out.best || w > out.weight) {
      out.best = m;
      out.weight = w;
    }
  }
  return out;
}

inline std::uint64_t brute_count(const CnfFormula& f) {
  std::uint64_t count = 0;
  const int n = f.num_vars();
  for (std::uint64_t bits = 0; bits < (1ULL << n); ++bits)
    if (satisfies_hard(f, model_from_bits(n, bits))) ++count;
  return count;
}

inline CnfFormula random_formula(std::mt19937& rng, int vars, bool with_groups, bool with_soft) {
  CnfFormula f(vars);
  std::uniform_int_distribution<int> var(1, vars);
  std::uniform_int_distribution<int> len(1, 3);
  std::bernoulli_distribution sign(0.5);
  std::uniform_int_distribution<int> clauses(0, vars);
  for (int c = clauses(rng); c > 0; --c) {
    Clause cl;
    for (int k = len(rng); k > 0; --k) cl.push_back(sign(rng) ? var(rng) : -var(rng));
    f.add_hard(std::move(cl));
  }
  if (with_groups) {
    std::vector<int> pool(static_cast<std::size_t>(vars));
    for (int i = 0; i < vars; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::size_t at = 0;
    std::uniform_int_distribution<int> gsize(1, 4);
    while (at < pool.size() && sign(rng)) {
      std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(gsize(rng)), pool.size() - at);
      f.add_exactly_one(std::vector<int>(pool.begin() + static_cast<long>(at), pool.begin() + static_cast<long>(at + n)));
      at += n;
    }
  }
  if (with_soft) {
    std::uniform_int_distribution<std::uint64_t> w(1, 20);
    for (int c = clauses(rng) + 2; c > 0; --c) {
      Clause cl;
      for (int k = len(rng); k > 0; --k) cl.push_back(sign(rng) ? var(rng) : -var(rng));
      f.add_soft(std::move(cl), w(rng));
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Sketch completion by enumeration

inline void for_each_choice(const Sketch& sketch, const std::function<bool(const std::vector<int>&)>& visit) {
  std::vector<int> choice(sketch.holes.size(), 0);
  while (true) {
    if (!visit(choice)) return;
    std::size_t h = choice.size();
    while (h > 0) {
      --h;
      if (static_cast<std::size_t>(++choice[h]) < sketch.holes[h].size()) break;
      choice[h] = 0;
      if (h == 0) return;
    }
    if (choice.empty()) return;
  }
}

inline Model model_from_choice(const Sketch& sketch, const HoleVarMap& vars, const std::vector<int>& choice) {
  int n = 0;
  for (std::size_t h = 0; h < sketch.holes.size(); ++h) n += vars.sizes[h];
  std::vector<bool> v(static_cast<std::size_t>(n) + 1, false);
  for (std::size_t h = 0; h < choice.size(); ++h) v[static_cast<std::size_t>(vars.var(static_cast<int>(h), choice[h]))] = true;
  return Model(std::move(v));
}

/// First completion (in odometer order) that passes `oracle`, if any.
inline std::optional<Program> brute_complete(const Sketch& sketch, const EquivalenceOracle& oracle) {
  std::optional<Program> found;
  for_each_choice(sketch, [&](const std::vector<int>& choice) {
    auto inst = instantiate(sketch, choice);
    if (inst.program && !oracle.find_mfi(sketch.target, *inst.program)) {
      found = std::move(inst.program);
      return false;
    }
    return true;
  });
  return found;
}

// ---------------------------------------------------------------------------
// Random sketches over a two-table schema

inline const char* kRandomSketchSchema = R"(
table Q {
  k: int [pk],
  z: str
}

table R {
  k: int [pk],
  x: str,
  y: str
}
)";

template <class T>
std::vector<T> random_domain(std::mt19937& rng, std::vector<T> universe, std::size_t max_size) {
  std::shuffle(universe.begin(), universe.end(), rng);
  std::uniform_int_distribution<std::size_t> n(1, std::min(max_size, universe.size()));
  universe.resize(n(rng));
  return universe;
}

class RandomSketch {
 public:
  RandomSketch(std::mt19937& rng, const Schema& schema) : rng_(rng) {
    sketch_.target = schema;
    chains_ = {JoinChain::table("Q"), JoinChain::table("R"),
               JoinChain::join(JoinChain::table("Q"), {"Q", "k"}, JoinChain::table("R"), {"R", "k"})};
  }

  Sketch build() {
    std::bernoulli_distribution coin(0.5);
    Param id{"id"}, s{"s"};
    std::vector<Parameter> id_s{{"id", ValueType::Int}, {"s", ValueType::Str}};
    std::vector<Parameter> id_only{{"id", ValueType::Int}};

    owner_ = "add";
    SkInsert ins{join(), {{int_attr(), id}, {str_attr(), s}}};
    sketch_.functions.push_back(SketchFunction{"add", FunctionKind::Update, id_s, {ins}, 0});

    owner_ = "drop";
    TablesSlot tables = hole(random_domain<std::vector<std::string>>(rng_, {{"Q"}, {"R"}, {"Q", "R"}}, 2));
    JoinSlot dj = join();
    SkDelete del{tables, dj, key_pred(id)};
    sketch_.functions.push_back(SketchFunction{"drop", FunctionKind::Update, id_only, {del}, 0});

    if (coin(rng_)) {
      owner_ = "set";
      JoinSlot uj = join();
      SkPredicate p = key_pred(id);
      SkUpdate upd{uj, p, str_attr(), s};
      sketch_.functions.push_back(SketchFunction{"set", FunctionKind::Update, id_s, {upd}, 0});
    }

    owner_ = "get";
    AttrSlot out = str_attr();
    SkPredicate p = key_pred(id);
    JoinSlot qj = join();
    SkQuery q{SkQuery::Project{{out}, SkQuery{SkQuery::Select{p, SkQuery{SkQuery::From{qj}}}}}};
    sketch_.functions.push_back(SketchFunction{"get", FunctionKind::Query, id_only, {SkQueryStmt{q}}, 0});
    return sketch_;
  }

 private:
  template <class T>
  HoleRef hole(std::vector<T> domain) {
    int id = static_cast<int>(sketch_.holes.size());
    sketch_.holes.push_back(Hole{id, owner_, std::move(domain)});
    return HoleRef{id};
  }

  JoinSlot join() { return hole(random_domain(rng_, chains_, 3)); }
  AttrSlot int_attr() { return hole(random_domain<QualifiedAttr>(rng_, {{"Q", "k"}, {"R", "k"}}, 2)); }
  AttrSlot str_attr() { return hole(random_domain<QualifiedAttr>(rng_, {{"Q", "z"}, {"R", "x"}, {"R", "y"}}, 3)); }
  SkPredicate key_pred(const Param& p) { return SkPredicate{SkPredicate::Cmp{int_attr(), CmpOp::Eq, p}}; }

  std::mt19937& rng_;
  Sketch sketch_;
  std::vector<JoinChain> chains_;
  std::string owner_;
};

/// Random sketch with at most `limit` completions.
inline Sketch random_sketch(std::mt19937& rng, const Schema& schema, std::uint64_t limit) {
  while (true) {
    Sketch s = RandomSketch(rng, schema).build();
    if (s.naive_size() <= limit && s.naive_size() > 1) return s;
  }
}

/// A well-formed completion chosen uniformly among the first `tries` draws.
inline std::optional<Program> random_completion(std::mt19937& rng, const Sketch& sketch, int tries = 200) {
  for (int t = 0; t < tries; ++t) {
    std::vector<int> choice;
    for (const auto& h : sketch.holes) {
      std::uniform_int_distribution<int> pick(0, static_cast<int>(h.size()) - 1);
      choice.push_back(pick(rng));
    }
    auto inst = instantiate(sketch, choice);
    if (inst.program) return inst.program;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Independent-pairs sketch: `pairs` tables T1..Tn, each with an add/get pair
// whose attribute holes must agree.

struct PairsSuite {
  Schema source_schema;
  Program source;
  Sketch sketch;
};

inline PairsSuite pairs_suite(int pairs) {
  std::string src_schema, tgt_schema, program;
  for (int i = 1; i <= pairs; ++i) {
    auto n = std::to_string(i);
    src_schema += "table S" + n + " { k: int [pk], v: str }\n";
    tgt_schema += "table T" + n + " { k: int [pk], a: str, b: str, c: str }\n";
    program += "update add" + n + "(id: int, v: str) { ins(S" + n + ", {k: id, v: v}); }\n";
    program += "query get" + n + "(id: int) { proj([v], sel(k = id, S" + n + ")); }\n";
  }
  PairsSuite suite;
  suite.source_schema = parse_schema(src_schema);
  suite.source = parse_program(program, suite.source_schema);
  suite.sketch.target = parse_schema(tgt_schema);
  for (int i = 1; i <= pairs; ++i) {
    std::string t = "T" + std::to_string(i);
    std::vector<QualifiedAttr> forward{{t, "a"}, {t, "b"}, {t, "c"}};
    std::vector<QualifiedAttr> backward{{t, "c"}, {t, "b"}, {t, "a"}};
    auto& holes = suite.sketch.holes;
    std::string add = "add" + std::to_string(i), get = "get" + std::to_string(i);

    int h_add = static_cast<int>(holes.size());
    holes.push_back(Hole{h_add, add, forward});
    SkInsert ins{JoinChain::table(t), {{QualifiedAttr{t, "k"}, Param{"id"}}, {HoleRef{h_add}, Param{"v"}}}};
    suite.sketch.functions.push_back(SketchFunction{
        add, FunctionKind::Update, {{"id", ValueType::Int}, {"v", ValueType::Str}}, {ins}, 0});

    int h_get = static_cast<int>(holes.size());
    holes.push_back(Hole{h_get, get, backward});
    SkPredicate key{SkPredicate::Cmp{QualifiedAttr{t, "k"}, CmpOp::Eq, Param{"id"}}};
    SkQuery q{SkQuery::Project{{HoleRef{h_get}}, SkQuery{SkQuery::Select{key, SkQuery{SkQuery::From{JoinChain::table(t)}}}}}};
    suite.sketch.functions.push_back(
        SketchFunction{get, FunctionKind::Query, {{"id", ValueType::Int}}, {SkQueryStmt{q}}, 0});
  }
  return suite;
}

// ---------------------------------------------------------------------------
// Random programs for round-trip checks

inline const char* kRoundTripSchema = R"(
table A {
  k: int [pk],
  s: str,
  b: bin,
  r: int [fk B]
}

table B {
  r: int [pk],
  t: str
}
)";

class RandomProgram {
 public:
  RandomProgram(std::mt19937& rng, const Schema& schema) : rng_(rng), schema_(schema) {
    chains_ = {JoinChain::table("A"), JoinChain::table("B"),
               JoinChain::join(JoinChain::table("A"), {"A", "r"}, JoinChain::table("B"), {"B", "r"}),
               JoinChain::join(JoinChain::table("B"), {"B", "r"}, JoinChain::table("A"), {"A", "r"})};
  }

  Program build() {
    Program p;
    int n = uniform(1, 4);
    for (int i = 0; i < n; ++i) p.functions.push_back(function("f" + std::to_string(i)));
    return p;
  }

 private:
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  template <class T>
  T pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
  }

  Value literal(ValueType type) {
    switch (type) {
      case ValueType::Int:
        return Value::integer(uniform(-20, 20));
      case ValueType::Str: {
        static const std::vector<std::string> pool{"", "A", "x y", "quote\"d", "back\\slash", "line\nbreak", "tab"};
        return Value::string(pick(pool));
      }
      case ValueType::Bin: {
        std::vector<std::uint8_t> bytes(static_cast<std::size_t>(uniform(1, 3)));
        for (auto& b : bytes) b = static_cast<std::uint8_t>(uniform(0, 255));
        return Value::bytes(bytes);
      }
    }
    return Value::integer(0);
  }

  std::vector<QualifiedAttr> attrs(const JoinChain& j, std::optional<ValueType> type = std::nullopt) {
    std::vector<QualifiedAttr> out;
    for (const auto& a : attrs_of_chain(j))
      if (!type || schema_.find(a)->type == *type) out.push_back(a);
    return out;
  }

  std::vector<QualifiedAttr> attrs_of_chain(const JoinChain& j) {
    std::vector<QualifiedAttr> out;
    for (const auto& t : tables_of(j))
      for (const auto& a : schema_.find_table(t)->attributes) out.push_back(a.qualified());
    return out;
  }

  std::optional<Param> param_of(ValueType type) {
    std::vector<Param> fit;
    for (const auto& p : params_)
      if (p.type == type) fit.push_back(Param{p.name});
    if (fit.empty()) return std::nullopt;
    return pick(fit);
  }

  Operand operand(const QualifiedAttr& lhs, const JoinChain& scope) {
    ValueType type = schema_.find(lhs)->type;
    int r = uniform(0, 2);
    if (r == 0) return pick(attrs(scope, type));
    if (r == 1)
      if (auto p = param_of(type)) return *p;
    return literal(type);
  }

  Predicate pred(const JoinChain& scope, int depth) {
    int r = depth <= 0 ? 0 : uniform(0, 5);
    switch (r) {
      case 1:
        return make_and(pred(scope, depth - 1), pred(scope, depth - 1));
      case 2:
        return make_or(pred(scope, depth - 1), pred(scope, depth - 1));
      case 3:
        return make_not(pred(scope, depth - 1));
      case 4: {
        QualifiedAttr a = pick(attrs(scope, ValueType::Int));
        JoinChain sub = pick(chains_);
        Query q = Query::project({pick(attrs(sub, ValueType::Int))}, query_body(sub, depth - 1));
        return Predicate{Predicate::In{a, q}};
      }
      default: {
        QualifiedAttr a = pick(attrs(scope));
        ValueType type = schema_.find(a)->type;
        CmpOp op = CmpOp::Eq;
        if (type == ValueType::Int)
          op = static_cast<CmpOp>(uniform(0, 5));
        else if (coin())
          op = CmpOp::Ne;
        return make_cmp(a, op, operand(a, scope));
      }
    }
  }

  Query query_body(const JoinChain& j, int depth) {
    Query q = Query::from(j);
    for (int i = uniform(0, 2); i > 0; --i) q = Query::select(pred(j, depth), std::move(q));
    return q;
  }

  Query query(int depth) {
    JoinChain j = pick(chains_);
    Query q = query_body(j, depth);
    if (coin(0.7)) {
      std::vector<QualifiedAttr> cols;
      for (int i = uniform(1, 3); i > 0; --i) cols.push_back(pick(attrs(j)));
      q = Query::project(std::move(cols), std::move(q));
    }
    return q;
  }

  Term term(ValueType type, bool allow_uid) {
    int r = uniform(0, 2);
    if (r == 0)
      if (auto p = param_of(type)) return *p;
    if (r == 1 && allow_uid) return FreshUid{uniform(0, 2)};
    return literal(type);
  }

  Statement statement() {
    JoinChain j = pick(chains_);
    int r = uniform(0, 2);
    if (r == 0) {
      InsertStmt ins{j, {}};
      std::map<QualifiedAttr, Term> linked;
      for (const auto& [l, rr] : join_conditions(j)) linked[rr] = linked[l] = term(schema_.find(l)->type, true);
      for (const auto& a : attrs(j)) {
        auto it = linked.find(a);
        ins.row.emplace_back(a, it != linked.end() ? it->second : term(schema_.find(a)->type, true));
      }
      std::shuffle(ins.row.begin(), ins.row.end(), rng_);
      return ins;
    }
    if (r == 1) {
      auto tables = tables_of(j);
      std::shuffle(tables.begin(), tables.end(), rng_);
      tables.resize(static_cast<std::size_t>(uniform(1, static_cast<int>(tables.size()))));
      return DeleteStmt{tables, j, pred(j, 2)};
    }
    QualifiedAttr a = pick(attrs(j));
    return UpdateStmt{j, pred(j, 2), a, term(schema_.find(a)->type, false)};
  }

  Function function(std::string name) {
    params_.clear();
    for (int i = uniform(0, 3); i > 0; --i)
      params_.push_back(Parameter{"p" + std::to_string(params_.size()), static_cast<ValueType>(uniform(0, 2))});
    Function f{std::move(name), coin() ? FunctionKind::Update : FunctionKind::Query, params_, {}};
    if (f.kind == FunctionKind::Query) {
      f.body.push_back(QueryStmt{query(2)});
    } else {
      for (int i = uniform(1, 3); i > 0; --i) f.body.push_back(statement());
    }
    return f;
  }

  std::mt19937& rng_;
  const Schema& schema_;
  std::vector<JoinChain> chains_;
  std::vector<Parameter> params_;
};

}  // namespace migrator::testing
