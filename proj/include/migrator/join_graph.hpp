// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <string>
#include <vector>

#include "migrator/program.hpp"
#include "migrator/schema.hpp"
#include "migrator/value_correspondence.hpp"

namespace migrator {

/// One way of joining two tables. `a.table < b.table`.
struct JoinEdge {
  QualifiedAttr a;
  QualifiedAttr b;
  bool operator==(const JoinEdge&) const = default;
  auto operator<=>(const JoinEdge&) const = default;
};

/// Tables of a schema and every attribute pair that can join them. Parallel
/// edges (several joinable pairs between the same tables) are kept apart.
struct JoinGraph {
  std::vector<std::string> tables;
  std::vector<JoinEdge> edges;
};

/// Edge for every same-named, same-typed attribute pair across two tables and
/// for every foreign key to its referenced table's primary key.
JoinGraph build_join_graph(const Schema& schema);

/// Every tree of `graph` that contains all `terminals` and whose leaves are
/// all terminals, linearised depth-first from the least terminal (children
/// in name order). Ordered by table count, then by table sequence.
std::vector<JoinChain> steiner_trees(const JoinGraph& graph, const std::set<std::string>& terminals);

/// True iff every attribute of `source` with a non-empty image under
/// `corr` has some image among the attributes of `target`.
bool valid_join_correspondence(const JoinChain& source, const JoinChain& target, const ValueCorrespondence& corr,
                               const Schema& source_schema, const Schema& target_schema);

/// Target chains that `source` may correspond to under `corr`.
std::vector<JoinChain> candidate_joins(const JoinChain& source, const ValueCorrespondence& corr,
                                       const Schema& source_schema, const Schema& target_schema);

/// Orientation-independent description of a chain: its table set and its
/// join conditions as unordered attribute pairs. Used to compare chains
/// that differ only in how the tree was linearised.
struct ChainShape {
  std::set<std::string> tables;
  std::set<JoinEdge> edges;
  bool operator==(const ChainShape&) const = default;
  auto operator<=>(const ChainShape&) const = default;
};

ChainShape shape_of(const JoinChain& join);

}  // namespace migrator
