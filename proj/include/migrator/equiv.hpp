// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "migrator/interpreter.hpp"
#include "migrator/program.hpp"
#include "migrator/schema.hpp"

namespace migrator {

enum class Comparison { Bag, List };

/// Seed constants and bounds for exhaustive testing.
struct TestConfig {
  std::vector<std::int64_t> ints{0, 1};
  std::vector<std::string> strs{"A", "B"};
  std::vector<std::vector<std::uint8_t>> bins{{0x00}, {0x01}};
  /// Maximum number of calls per sequence, the final query included.
  std::size_t max_length = 3;
  Comparison comparison = Comparison::Bag;

  /// Throws std::invalid_argument for an empty seed set or a zero bound.
  void check() const;
  std::vector<Value> seeds(ValueType type) const;
};

/// Every call of `function` with arguments drawn from the seeds, first
/// parameter most significant.
std::vector<Call> instantiations(const Function& function, const TestConfig& config);

/// Visits seeded sequences in increasing length, then lexicographically by
/// (function declaration order, argument tuple). Stops early when `visit`
/// returns false.
void for_each_sequence(const Program& program, const TestConfig& config,
                       const std::function<bool(const InvocationSequence&)>& visit);

std::vector<InvocationSequence> gen_sequences(const Program& program, const TestConfig& config);

bool same_result(std::vector<Row> a, std::vector<Row> b, Comparison comparison);

/// Precomputes a reference program's results over the seeded sequences so
/// that many candidates can be checked against it. Candidates are run
/// level by level, sharing update prefixes, and checking stops at the first
/// differing sequence in enumeration order.
class EquivalenceOracle {
 public:
  EquivalenceOracle(const Schema& schema, const Program& program, TestConfig config);

  /// First sequence (in enumeration order) whose results differ, or nullopt.
  /// A candidate missing a function, or raising an evaluation error, fails
  /// on the first sequence that calls it.
  std::optional<InvocationSequence> find_mfi(const Schema& schema, const Program& candidate) const;

  std::size_t sequence_count() const { return expected_.size(); }
  const TestConfig& config() const { return config_; }

 private:
  TestConfig config_;
  std::vector<Call> updates_;
  std::vector<Call> queries_;
  /// Reference result of each sequence in enumeration order; nullopt for
  /// an evaluation error.
  std::vector<std::optional<std::vector<Row>>> expected_;
};

std::optional<InvocationSequence> find_mfi(const Schema& schema, const Program& program, const Schema& other_schema,
                                           const Program& other, const TestConfig& config);

bool bounded_verify(const Schema& schema, const Program& program, const Schema& other_schema, const Program& other,
                    const TestConfig& config);

}  // namespace migrator
