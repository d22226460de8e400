// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#include "migrator/equiv.hpp"

#include <algorithm>
#include <stdexcept>

namespace migrator {

void TestConfig::check() const {
  if (ints.empty() || strs.empty() || bins.empty()) throw std::invalid_argument("every seed set must be non-empty");
  if (max_length == 0) throw std::invalid_argument("maximum sequence length must be positive");
}

std::vector<Value> TestConfig::seeds(ValueType type) const {
  std::vector<Value> out;
  switch (type) {
    case ValueType::Int:
      for (auto v : ints) out.push_back(Value::integer(v));
      break;
    case ValueType::Str:
      for (const auto& v : strs) out.push_back(Value::string(v));
      break;
    case ValueType::Bin:
      for (const auto& v : bins) out.push_back(Value::bytes(v));
      break;
  }
  return out;
}

std::vector<Call> instantiations(const Function& function, const TestConfig& config) {
  std::vector<std::vector<Value>> tuples{{}};
  for (const auto& p : function.params) {
    auto seeds = config.seeds(p.type);
    std::vector<std::vector<Value>> next;
    for (const auto& prefix : tuples) {
      for (const auto& v : seeds) {
        auto t = prefix;
        t.push_back(v);
        next.push_back(std::move(t));
      }
    }
    tuples = std::move(next);
  }
  std::vector<Call> out;
  for (auto& t : tuples) out.push_back(Call{function.name, std::move(t)});
  return out;
}

namespace {

std::pair<std::vector<Call>, std::vector<Call>> split_calls(const Program& program, const TestConfig& config) {
  std::vector<Call> updates, queries;
  for (const auto& fn : program.functions) {
    auto calls = instantiations(fn, config);
    auto& dst = fn.kind == FunctionKind::Update ? updates : queries;
    dst.insert(dst.end(), calls.begin(), calls.end());
  }
  return {std::move(updates), std::move(queries)};
}

InvocationSequence make_sequence(const std::vector<Call>& updates, std::size_t prefix, std::size_t length,
                                 const Call& query) {
  InvocationSequence seq;
  seq.calls.resize(length);
  for (std::size_t i = length; i-- > 0;) {
    seq.calls[i] = updates[prefix % updates.size()];
    prefix /= updates.size();
  }
  seq.calls.push_back(query);
  return seq;
}

struct State {
  Instance instance;
  FreshUids fresh;
};

using MaybeState = std::optional<State>;
using MaybeRows = std::optional<std::vector<Row>>;

MaybeState apply(const MaybeState& state, const Program& program, const Call& call) {
  if (!state) return std::nullopt;
  const Function* fn = program.find(call.function);
  if (!fn || fn->kind != FunctionKind::Update) return std::nullopt;
  try {
    State next = *state;
    next.instance = call_function(next.instance, *fn, call.args, next.fresh, nullptr);
    return next;
  } catch (const EvalError&) {
    return std::nullopt;
  }
}

MaybeRows ask(const MaybeState& state, const Program& program, const Call& call) {
  if (!state) return std::nullopt;
  const Function* fn = program.find(call.function);
  if (!fn || fn->kind != FunctionKind::Query) return std::nullopt;
  try {
    FreshUids fresh = state->fresh;
    Relation rel;
    call_function(state->instance, *fn, call.args, fresh, &rel);
    return std::move(rel.rows);
  } catch (const EvalError&) {
    return std::nullopt;
  }
}

// Runs every seeded sequence level by level; `visit(index, prefix, length,
// query, result)` returns false to stop.
template <class Visit>
void run_levels(const Schema& schema, const Program& program, const std::vector<Call>& updates,
                const std::vector<Call>& queries, std::size_t max_length, Visit&& visit) {
  std::vector<MaybeState> states;
  states.emplace_back(State{Instance(schema), FreshUids{}});
  std::size_t index = 0;
  for (std::size_t length = 0; length < max_length; ++length) {
    for (std::size_t p = 0; p < states.size(); ++p)
      for (const auto& q : queries)
        if (!visit(index++, p, length, q, ask(states[p], program, q))) return;
    if (length + 1 == max_length || updates.empty()) return;
    std::vector<MaybeState> next;
    next.reserve(states.size() * updates.size());
    for (const auto& s : states)
      for (const auto& u : updates) next.push_back(apply(s, program, u));
    states = std::move(next);
  }
}

}  // namespace

void for_each_sequence(const Program& program, const TestConfig& config,
                       const std::function<bool(const InvocationSequence&)>& visit) {
  config.check();
  auto [updates, queries] = split_calls(program, config);
  if (queries.empty()) return;
  std::size_t prefixes = 1;
  for (std::size_t length = 0; length < config.max_length; ++length) {
    if (length > 0) {
      if (updates.empty()) return;
      prefixes *= updates.size();
    }
    for (std::size_t p = 0; p < prefixes; ++p)
      for (const auto& q : queries)
        if (!visit(make_sequence(updates, p, length, q))) return;
  }
}

std::vector<InvocationSequence> gen_sequences(const Program& program, const TestConfig& config) {
  std::vector<InvocationSequence> out;
  for_each_sequence(program, config, [&](const InvocationSequence& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

bool same_result(std::vector<Row> a, std::vector<Row> b, Comparison comparison) {
  if (comparison == Comparison::Bag) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
  }
  return a == b;
}

EquivalenceOracle::EquivalenceOracle(const Schema& schema, const Program& program, TestConfig config)
    : config_(std::move(config)) {
  config_.check();
  std::tie(updates_, queries_) = split_calls(program, config_);
  run_levels(schema, program, updates_, queries_, config_.max_length,
             [&](std::size_t, std::size_t, std::size_t, const Call&, MaybeRows rows) {
               expected_.push_back(std::move(rows));
               return true;
             });
}

std::optional<InvocationSequence> EquivalenceOracle::find_mfi(const Schema& schema, const Program& candidate) const {
  std::optional<InvocationSequence> failing;
  run_levels(schema, candidate, updates_, queries_, config_.max_length,
             [&](std::size_t index, std::size_t prefix, std::size_t length, const Call& q, MaybeRows rows) {
               const MaybeRows& want = expected_.at(index);
               bool same = rows.has_value() == want.has_value() &&
                           (!rows || same_result(*rows, *want, config_.comparison));
               if (same) return true;
               failing = make_sequence(updates_, prefix, length, q);
               return false;
             });
  return failing;
}

std::optional<InvocationSequence> find_mfi(const Schema& schema, const Program& program, const Schema& other_schema,
                                           const Program& other, const TestConfig& config) {
  return EquivalenceOracle(schema, program, config).find_mfi(other_schema, other);
}

bool bounded_verify(const Schema& schema, const Program& program, const Schema& other_schema, const Program& other,
                    const TestConfig& config) {
  return !find_mfi(schema, program, other_schema, other, config);
}

}  // namespace migrator
