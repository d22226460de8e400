// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "migrator/program.hpp"
#include "migrator/schema.hpp"
#include "migrator/solver.hpp"
#include "migrator/value_correspondence.hpp"

namespace migrator {

/// Unit-cost edit distance.
std::size_t levenshtein(std::string_view a, std::string_view b);

/// Scale applied to name similarity so that the table-name distance can
/// break ties without overturning it.
inline constexpr std::uint64_t kSimilarityScale = 100;
inline constexpr int kDefaultAlpha = 100;

/// Soft weight rewarding `source -> target`: the attribute-name similarity
/// `alpha - lev(name, name')` (clamped at 0) scaled by kSimilarityScale,
/// minus the table-name distance (itself capped below the scale).
std::uint64_t similarity_weight(const QualifiedAttr& source, const QualifiedAttr& target, int alpha);

/// Attributes appearing in a projection list or predicate of a query function.
std::set<QualifiedAttr> queried_attributes(const Program& program);

/// MaxSAT encoding of candidate value correspondences plus the blocking
/// clauses added so far. `var(i, j)` is true iff target attribute `j` is in
/// the image of source attribute `i`.
struct VcEncoding {
  std::vector<QualifiedAttr> source_attrs;
  std::vector<QualifiedAttr> target_attrs;
  CnfFormula formula;
  int alpha = kDefaultAlpha;
  std::size_t blocked = 0;

  int var(std::size_t i, std::size_t j) const { return static_cast<int>(i * target_attrs.size() + j + 1); }
};

/// Builds the encoding: type-incompatible pairs are hard-false, every
/// queried attribute must map somewhere, similar names are rewarded, and
/// one-to-many images are penalised with weight `alpha` per extra pair.
/// Requires `alpha` > 0.
VcEncoding encode_vc(const Schema& source, const Schema& target, const Program& program, int alpha = kDefaultAlpha);

/// Next most likely correspondence, blocking it for subsequent calls.
std::optional<ValueCorrespondence> next_value_corr(VcEncoding& encoding);

}  // namespace migrator
