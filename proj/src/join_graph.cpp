// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#include "migrator/join_graph.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "migrator/validate.hpp"

namespace migrator {

namespace {

JoinEdge make_edge(QualifiedAttr x, QualifiedAttr y) {
  if (y.table < x.table) std::swap(x, y);
  return JoinEdge{std::move(x), std::move(y)};
}

struct Tree {
  std::vector<std::string> tables;
  std::vector<std::size_t> edges;
};

class TreeEnumerator {
 public:
  TreeEnumerator(const JoinGraph& g, const std::set<std::string>& terminals) : g_(g), terminals_(terminals) {}

  std::vector<Tree> run() {
    std::set<std::string> in{*terminals_.begin()};
    std::vector<std::size_t> chosen;
    std::vector<bool> excluded(g_.edges.size(), false);
    grow(in, chosen, excluded);
    return std::move(out_);
  }

 private:
  bool inside(const std::set<std::string>& in, const std::string& t) const { return in.count(t) > 0; }

  void grow(std::set<std::string>& in, std::vector<std::size_t>& chosen, std::vector<bool>& excluded) {
    std::size_t next = g_.edges.size();
    for (std::size_t e = 0; e < g_.edges.size(); ++e) {
      if (excluded[e]) continue;
      bool a = inside(in, g_.edges[e].a.table), b = inside(in, g_.edges[e].b.table);
      if (a != b) {
        next = e;
        break;
      }
    }
    if (next == g_.edges.size()) {
      emit(in, chosen);
      return;
    }
    const auto& edge = g_.edges[next];
    const std::string& added = inside(in, edge.a.table) ? edge.b.table : edge.a.table;
    in.insert(added);
    chosen.push_back(next);
    grow(in, chosen, excluded);
    chosen.pop_back();
    in.erase(added);

    excluded[next] = true;
    grow(in, chosen, excluded);
    excluded[next] = false;
  }

  void emit(const std::set<std::string>& in, const std::vector<std::size_t>& chosen) {
    for (const auto& t : terminals_)
      if (!in.count(t)) return;
    std::map<std::string, int> degree;
    for (auto e : chosen) {
      ++degree[g_.edges[e].a.table];
      ++degree[g_.edges[e].b.table];
    }
    for (const auto& [t, d] : degree)
      if (d == 1 && !terminals_.count(t)) return;
    out_.push_back(Tree{{in.begin(), in.end()}, chosen});
  }

  const JoinGraph& g_;
  const std::set<std::string>& terminals_;
  std::vector<Tree> out_;
};

// Depth-first linearisation from the least terminal, children by name.
std::pair<JoinChain, std::vector<std::string>> linearise(const JoinGraph& g, const Tree& tree,
                                                         const std::string& root) {
  std::map<std::string, std::vector<std::pair<std::string, std::size_t>>> adj;
  for (auto e : tree.edges) {
    adj[g.edges[e].a.table].emplace_back(g.edges[e].b.table, e);
    adj[g.edges[e].b.table].emplace_back(g.edges[e].a.table, e);
  }
  for (auto& [t, n] : adj) std::sort(n.begin(), n.end());
  JoinChain chain = JoinChain::table(root);
  std::vector<std::string> order{root};
  std::set<std::string> seen{root};
  auto visit = [&](auto&& self, const std::string& t) -> void {
    for (const auto& [u, e] : adj[t]) {
      if (seen.count(u)) continue;
      seen.insert(u);
      const auto& edge = g.edges[e];
      QualifiedAttr mine = edge.a.table == t ? edge.a : edge.b;
      QualifiedAttr theirs = edge.a.table == t ? edge.b : edge.a;
      chain = JoinChain::join(std::move(chain), mine, JoinChain::table(u), theirs);
      order.push_back(u);
      self(self, u);
    }
  };
  visit(visit, root);
  return {std::move(chain), std::move(order)};
}

void collect_edges(const JoinChain& join, std::set<JoinEdge>& out) {
  for (const auto& [l, r] : join_conditions(join)) out.insert(make_edge(l, r));
}

}  // namespace

JoinGraph build_join_graph(const Schema& schema) {
  JoinGraph g;
  std::set<JoinEdge> seen;
  const auto& tables = schema.tables();
  for (const auto& t : tables) g.tables.push_back(t.name);
  auto add = [&](const QualifiedAttr& x, const QualifiedAttr& y) {
    if (x.table == y.table) return;
    JoinEdge e = make_edge(x, y);
    if (seen.insert(e).second) g.edges.push_back(e);
  };
  for (std::size_t i = 0; i < tables.size(); ++i) {
    for (std::size_t j = i + 1; j < tables.size(); ++j) {
      for (const auto& a : tables[i].attributes) {
        const Attribute* b = tables[j].find(a.name);
        if (b && b->type == a.type) add(a.qualified(), b->qualified());
      }
    }
  }
  for (const auto& t : tables) {
    for (const auto& a : t.attributes) {
      if (a.key != KeyKind::ForeignKey) continue;
      const Table* ref = schema.find_table(a.references);
      const Attribute* pk = ref ? ref->primary_key() : nullptr;
      if (pk && pk->type == a.type) add(a.qualified(), pk->qualified());
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::vector<JoinChain> steiner_trees(const JoinGraph& graph, const std::set<std::string>& terminals) {
  if (terminals.empty()) return {};
  for (const auto& t : terminals)
    if (std::find(graph.tables.begin(), graph.tables.end(), t) == graph.tables.end()) return {};
  struct Ranked {
    std::size_t size;
    std::vector<std::string> order;
    std::set<JoinEdge> edges;
    JoinChain chain;
  };
  std::vector<Ranked> ranked;
  for (const auto& tree : TreeEnumerator(graph, terminals).run()) {
    auto [chain, order] = linearise(graph, tree, *terminals.begin());
    std::set<JoinEdge> edges;
    for (auto e : tree.edges) edges.insert(graph.edges[e]);
    ranked.push_back(Ranked{order.size(), std::move(order), std::move(edges), std::move(chain)});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& x, const Ranked& y) {
    return std::tie(x.size, x.order, x.edges) < std::tie(y.size, y.order, y.edges);
  });
  std::vector<JoinChain> out;
  for (auto& r : ranked) out.push_back(std::move(r.chain));
  return out;
}

bool valid_join_correspondence(const JoinChain& source, const JoinChain& target, const ValueCorrespondence& corr,
                               const Schema& source_schema, const Schema& target_schema) {
  auto target_attrs = attrs_of(target, target_schema);
  for (const auto& a : attrs_of(source, source_schema)) {
    const auto& images = corr.images(a);
    if (images.empty()) continue;
    bool hit = std::any_of(images.begin(), images.end(), [&](const QualifiedAttr& img) {
      return std::find(target_attrs.begin(), target_attrs.end(), img) != target_attrs.end();
    });
    if (!hit) return false;
  }
  return true;
}

std::vector<JoinChain> candidate_joins(const JoinChain& source, const ValueCorrespondence& corr,
                                       const Schema& source_schema, const Schema& target_schema) {
  std::vector<std::vector<std::string>> choices;
  for (const auto& a : attrs_of(source, source_schema)) {
    const auto& images = corr.images(a);
    if (images.empty()) continue;
    std::set<std::string> tables;
    for (const auto& img : images) tables.insert(img.table);
    choices.emplace_back(tables.begin(), tables.end());
  }
  if (choices.empty()) return {};
  std::set<std::set<std::string>> terminal_sets{{}};
  for (const auto& options : choices) {
    std::set<std::set<std::string>> next;
    for (const auto& partial : terminal_sets) {
      for (const auto& t : options) {
        auto s = partial;
        s.insert(t);
        next.insert(std::move(s));
      }
    }
    terminal_sets = std::move(next);
  }
  JoinGraph graph = build_join_graph(target_schema);
  std::vector<JoinChain> out;
  for (const auto& terminals : terminal_sets) {
    for (auto& chain : steiner_trees(graph, terminals)) {
      if (std::find(out.begin(), out.end(), chain) != out.end()) continue;
      if (!valid_join_correspondence(source, chain, corr, source_schema, target_schema)) continue;
      out.push_back(std::move(chain));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const JoinChain& x, const JoinChain& y) {
    return tables_of(x).size() < tables_of(y).size();
  });
  return out;
}

ChainShape shape_of(const JoinChain& join) {
  ChainShape shape;
  for (const auto& t : tables_of(join)) shape.tables.insert(t);
  collect_edges(join, shape.edges);
  return shape;
}

}  // namespace migrator
