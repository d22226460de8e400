// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <numeric>
#include <random>

#include "migrator/join_graph.hpp"
#include "migrator/parser.hpp"
#include "support.hpp"

namespace migrator {
namespace {

// Every edge subset that forms a tree spanning the terminals with terminal leaves.
std::set<ChainShape> brute_trees(const JoinGraph& g, const std::set<std::string>& terminals) {
  std::set<ChainShape> out;
  if (terminals.size() == 1) out.insert(ChainShape{terminals, {}});
  const std::size_t m = g.edges.size();
  for (std::uint64_t bits = 1; bits < (1ull << m); ++bits) {
    std::set<std::string> nodes;
    std::set<std::pair<std::string, std::string>> pairs;
    std::map<std::string, int> degree;
    std::map<std::string, std::string> parent;
    std::function<std::string(const std::string&)> find = [&](const std::string& x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    bool ok = true;
    ChainShape shape;
    for (std::size_t e = 0; e < m && ok; ++e) {
      if (!(bits >> e & 1)) continue;
      const auto& edge = g.edges[e];
      for (const auto& t : {edge.a.table, edge.b.table})
        if (nodes.insert(t).second) parent[t] = t;
      auto ra = find(edge.a.table), rb = find(edge.b.table);
      if (ra == rb) ok = false;
      parent[ra] = rb;
      ++degree[edge.a.table];
      ++degree[edge.b.table];
      shape.edges.insert(edge);
    }
    if (!ok) continue;
    std::set<std::string> roots;
    for (const auto& t : nodes) roots.insert(find(t));
    if (roots.size() != 1) continue;
    for (const auto& t : terminals)
      if (!nodes.count(t)) ok = false;
    for (const auto& [t, d] : degree)
      if (d == 1 && !terminals.count(t)) ok = false;
    if (!ok) continue;
    shape.tables = nodes;
    out.insert(shape);
  }
  return out;
}

std::set<ChainShape> shapes(const std::vector<JoinChain>& chains) {
  std::set<ChainShape> out;
  for (const auto& c : chains) out.insert(shape_of(c));
  return out;
}

JoinEdge edge(std::string t1, std::string a1, std::string t2, std::string a2) {
  return JoinEdge{{std::move(t1), std::move(a1)}, {std::move(t2), std::move(a2)}};
}

TEST(JoinGraph, RunningTargetEdges) {
  auto s = testing::load_scenario("running");
  auto g = build_join_graph(s.target_schema);
  EXPECT_EQ(g.tables.size(), 4u);
  std::set<JoinEdge> edges(g.edges.begin(), g.edges.end());
  EXPECT_EQ(edges, (std::set<JoinEdge>{edge("Class", "InstId", "Instructor", "InstId"),
                                       edge("Class", "TaId", "TA", "TaId"),
                                       edge("Instructor", "PicId", "Picture", "PicId"),
                                       edge("Instructor", "PicId", "TA", "PicId"),
                                       edge("Picture", "PicId", "TA", "PicId")}));
}

TEST(SteinerTrees, PictureAndInstructor) {
  auto s = testing::load_scenario("running");
  auto g = build_join_graph(s.target_schema);
  auto trees = steiner_trees(g, {"Picture", "Instructor"});
  ASSERT_EQ(trees.size(), 3u);
  std::set<ChainShape> expected{
      {{"Instructor", "Picture"}, {edge("Instructor", "PicId", "Picture", "PicId")}},
      {{"Instructor", "Picture", "TA"},
       {edge("Instructor", "PicId", "TA", "PicId"), edge("Picture", "PicId", "TA", "PicId")}},
      {{"Class", "Instructor", "Picture", "TA"},
       {edge("Class", "InstId", "Instructor", "InstId"), edge("Class", "TaId", "TA", "TaId"),
        edge("Picture", "PicId", "TA", "PicId")}}};
  EXPECT_EQ(shapes(trees), expected);
  EXPECT_EQ(tables_of(trees[0]).size(), 2u);
  EXPECT_EQ(tables_of(trees[2]).size(), 4u);
}

TEST(SteinerTrees, MatchesEdgeSubsetEnumeration) {
  auto s = testing::load_scenario("running");
  auto g = build_join_graph(s.target_schema);
  std::vector<std::string> names = g.tables;
  for (std::uint32_t mask = 1; mask < (1u << names.size()); ++mask) {
    std::set<std::string> terminals;
    for (std::size_t i = 0; i < names.size(); ++i)
      if (mask >> i & 1) terminals.insert(names[i]);
    auto trees = steiner_trees(g, terminals);
    EXPECT_EQ(shapes(trees), brute_trees(g, terminals));
    EXPECT_EQ(shapes(trees).size(), trees.size());
  }
}

TEST(SteinerTrees, RandomGraphsMatchEnumeration) {
  std::mt19937 rng(11);
  for (int round = 0; round < 40; ++round) {
    std::uniform_int_distribution<int> nt(2, 5), coin(0, 2);
    int n = nt(rng);
    std::string text;
    for (int i = 0; i < n; ++i) {
      text += "table T" + std::to_string(i) + " { k" + std::to_string(i) + ": int [pk]";
      for (int j = 0; j < 3; ++j)
        if (coin(rng) == 0) text += ", c" + std::to_string(j) + ": int";
      text += " }\n";
    }
    auto schema = parse_schema(text);
    auto g = build_join_graph(schema);
    if (g.edges.size() > 14) continue;
    std::set<std::string> terminals{"T0"};
    if (n > 1) terminals.insert("T" + std::to_string(n - 1));
    EXPECT_EQ(shapes(steiner_trees(g, terminals)), brute_trees(g, terminals)) << text;
  }
}

TEST(SteinerTrees, UnknownTerminal) {
  auto s = testing::load_scenario("running");
  EXPECT_TRUE(steiner_trees(build_join_graph(s.target_schema), {"Nope"}).empty());
}

TEST(CandidateJoins, InstructorChainUnderFirstCorrespondence) {
  auto s = testing::load_scenario("running");
  ValueCorrespondence corr;
  for (const auto& a : s.source_schema.all_attributes())
    corr.add(a, a.name == "IPic" || a.name == "TPic" ? QualifiedAttr{"Picture", "Pic"} : a);
  auto cands = candidate_joins(JoinChain::table("Instructor"), corr, s.source_schema, s.target_schema);
  EXPECT_EQ(cands.size(), 3u);
  for (const auto& c : cands) {
    EXPECT_TRUE(valid_join_correspondence(JoinChain::table("Instructor"), c, corr, s.source_schema, s.target_schema));
    auto t = tables_of(c);
    EXPECT_TRUE(std::count(t.begin(), t.end(), "Picture"));
  }
  auto cls = candidate_joins(JoinChain::table("Class"), corr, s.source_schema, s.target_schema);
  ASSERT_EQ(cls.size(), 1u);
  EXPECT_EQ(cls[0], JoinChain::table("Class"));
}

}  // namespace
}  // namespace migrator
