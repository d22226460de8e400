// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#include "migrator/value_corr.hpp"

#include <algorithm>
#include <stdexcept>

namespace migrator {

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return row[b.size()];
}

std::uint64_t similarity_weight(const QualifiedAttr& source, const QualifiedAttr& target, int alpha) {
  auto dist = static_cast<std::int64_t>(levenshtein(source.name, target.name));
  std::int64_t sim = std::max<std::int64_t>(0, alpha - dist);
  if (sim == 0) return 0;
  auto table = std::min<std::int64_t>(static_cast<std::int64_t>(levenshtein(source.table, target.table)),
                                      static_cast<std::int64_t>(kSimilarityScale) - 1);
  return static_cast<std::uint64_t>(sim * static_cast<std::int64_t>(kSimilarityScale) - table);
}

namespace {

void collect_pred(const Predicate& pred, std::set<QualifiedAttr>& out);

void collect_query(const Query& query, std::set<QualifiedAttr>& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Query::Project>) {
          out.insert(node.attrs.begin(), node.attrs.end());
          collect_query(*node.source, out);
        } else if constexpr (std::is_same_v<T, Query::Select>) {
          collect_pred(node.pred, out);
          collect_query(*node.source, out);
        }
      },
      query.node);
}

void collect_pred(const Predicate& pred, std::set<QualifiedAttr>& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Predicate::Cmp>) {
          out.insert(node.lhs);
          if (const auto* a = std::get_if<QualifiedAttr>(&node.rhs)) out.insert(*a);
        } else if constexpr (std::is_same_v<T, Predicate::In>) {
          out.insert(node.attr);
          collect_query(*node.query, out);
        } else if constexpr (std::is_same_v<T, Predicate::Not>) {
          collect_pred(*node.operand, out);
        } else {
          collect_pred(*node.lhs, out);
          collect_pred(*node.rhs, out);
        }
      },
      pred.node);
}

}  // namespace

std::set<QualifiedAttr> queried_attributes(const Program& program) {
  std::set<QualifiedAttr> out;
  for (const auto& fn : program.functions) {
    if (fn.kind != FunctionKind::Query) continue;
    for (const auto& stmt : fn.body)
      if (const auto* q = std::get_if<QueryStmt>(&stmt)) collect_query(q->query, out);
  }
  return out;
}

VcEncoding encode_vc(const Schema& source, const Schema& target, const Program& program, int alpha) {
  if (alpha <= 0) throw std::invalid_argument("alpha must be positive");
  VcEncoding enc;
  enc.alpha = alpha;
  enc.source_attrs = source.all_attributes();
  enc.target_attrs = target.all_attributes();
  const std::size_t n = enc.source_attrs.size(), m = enc.target_attrs.size();
  enc.formula = CnfFormula(static_cast<int>(n * m));
  auto queried = queried_attributes(program);
  const auto pair_weight = kSimilarityScale * static_cast<std::uint64_t>(alpha);
  for (std::size_t i = 0; i < n; ++i) {
    const Attribute* s = source.find(enc.source_attrs[i]);
    for (std::size_t j = 0; j < m; ++j) {
      const Attribute* t = target.find(enc.target_attrs[j]);
      int x = enc.var(i, j);
      if (s->type != t->type)
        enc.formula.add_hard({-x});
      else
        enc.formula.add_soft({x}, similarity_weight(enc.source_attrs[i], enc.target_attrs[j], alpha));
    }
    if (queried.count(enc.source_attrs[i])) {
      Clause some;
      for (std::size_t j = 0; j < m; ++j) some.push_back(enc.var(i, j));
      enc.formula.add_hard(std::move(some));
    }
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = j + 1; k < m; ++k) enc.formula.add_soft({-enc.var(i, j), -enc.var(i, k)}, pair_weight);
  }
  return enc;
}

std::optional<ValueCorrespondence> next_value_corr(VcEncoding& encoding) {
  auto model = maxsat_solve(encoding.formula);
  if (!model) return std::nullopt;
  ValueCorrespondence corr;
  Clause block;
  for (std::size_t i = 0; i < encoding.source_attrs.size(); ++i) {
    for (std::size_t j = 0; j < encoding.target_attrs.size(); ++j) {
      int x = encoding.var(i, j);
      if ((*model)[x]) {
        corr.add(encoding.source_attrs[i], encoding.target_attrs[j]);
        block.push_back(-x);
      } else {
        block.push_back(x);
      }
    }
  }
  encoding.formula.add_hard(std::move(block));
  ++encoding.blocked;
  return corr;
}

}  // namespace migrator
