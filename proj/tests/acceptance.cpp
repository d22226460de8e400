// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include "migrator/interpreter.hpp"
#include "migrator/join_graph.hpp"
#include "migrator/sketch_gen.hpp"
#include "migrator/synthesize.hpp"
#include "migrator/validate.hpp"
#include "support.hpp"

namespace {

using namespace migrator;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Produced {
  std::string label;
  Schema source_schema;
  Program source;
  Schema target_schema;
  Program output;
  TestConfig config;
};

std::vector<Produced> produced;

double since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", s);
  return buf;
}

Sketch first_sketch(const testing::Scenario& s, ComposeMode mode = ComposeMode::Choice) {
  auto enc = encode_vc(s.source_schema, s.target_schema, s.source);
  auto corr = next_value_corr(enc);
  if (!corr) throw std::runtime_error("no value correspondence");
  return gen_sketch(s.source, *corr, s.source_schema, s.target_schema, mode);
}

Outcome synth_scenario(const std::string& dir, const SynthesisOptions& opts, double limit) {
  auto s = testing::load_scenario(dir);
  auto start = Clock::now();
  auto r = synthesize(s.source_schema, s.source, s.target_schema, opts);
  double t = since(start);
  if (!r.program) return {false, dir + ": " + r.message};
  produced.push_back({dir, s.source_schema, s.source, s.target_schema, *r.program, opts.test});
  std::ostringstream d;
  d << dir << " in " << seconds(t) << ", correspondences " << r.vc_attempts << ", iterations " << r.iterations;
  bool ok = t < limit;
  if (s.expected && !bounded_verify(s.target_schema, *s.expected, s.target_schema, *r.program, opts.test)) {
    ok = false;
    d << ", differs from reference";
  }
  return {ok, d.str()};
}

Outcome running_example() {
  auto s = testing::load_scenario("running");
  auto start = Clock::now();
  auto r = synthesize(s.source_schema, s.source, s.target_schema);
  double t = since(start);
  if (!r.program) return {false, r.message};
  produced.push_back({"running", s.source_schema, s.source, s.target_schema, *r.program, TestConfig{}});
  bool ok = r.vc_attempts == 1 && t < 60 &&
            bounded_verify(s.target_schema, *s.expected, s.target_schema, *r.program, TestConfig{});
  for (auto mode : {ComposeMode::Choice, ComposeMode::Subset}) {
    for (bool wf : {true, false}) {
      SynthesisOptions opts;
      opts.mode = mode;
      opts.wf_constraints = wf;
      auto v = synthesize(s.source_schema, s.source, s.target_schema, opts);
      if (!v.program) {
        ok = false;
        continue;
      }
      produced.push_back({"running variant", s.source_schema, s.source, s.target_schema, *v.program, TestConfig{}});
    }
  }
  return {ok, "correspondence " + std::to_string(r.vc_attempts) + ", iterations " + std::to_string(r.iterations) +
                  ", " + seconds(t)};
}

Outcome search_space() {
  auto s = testing::load_scenario("running");
  auto n = count_models(encode_sketch(first_sketch(s), false).formula);
  return {n == 164025, std::to_string(n) + " models"};
}

Outcome mfi_blocking() {
  auto s = testing::load_scenario("running");
  auto sk = first_sketch(s);
  auto enc = encode_sketch(sk, false);
  std::vector<int> choice(sk.holes.size(), 0);
  choice.back() = 2;
  auto inst = instantiate(sk, choice);
  if (!inst.program) return {false, "candidate is ill-formed"};
  EquivalenceOracle oracle(s.source_schema, s.source, TestConfig{});
  auto mfi = oracle.find_mfi(sk.target, *inst.program);
  if (!mfi) return {false, "candidate passes"};
  auto model = testing::model_from_choice(sk, enc.vars, choice);
  auto before = count_models(enc.formula);
  auto after = count_models(add_hard(enc.formula, block_from_mfi(model, *mfi, enc.vars)));
  bool names_ok = mfi->size() == 2 && mfi->calls[0].function == "addTA" && mfi->calls[1].function == "getTAInfo";
  return {names_ok && before - after == 18225,
          mfi->to_string() + " removes " + std::to_string(before - after) + " models"};
}

JoinEdge edge(std::string t1, std::string a1, std::string t2, std::string a2) {
  if (t2 < t1) {
    std::swap(t1, t2);
    std::swap(a1, a2);
  }
  return JoinEdge{{std::move(t1), std::move(a1)}, {std::move(t2), std::move(a2)}};
}

std::set<ChainShape> shapes(const std::vector<JoinChain>& chains) {
  std::set<ChainShape> out;
  for (const auto& c : chains) out.insert(shape_of(c));
  return out;
}

Outcome join_chains() {
  auto s = testing::load_scenario("running");
  auto g = build_join_graph(s.target_schema);
  auto expected = [](const std::string& person) {
    auto other = person == "Instructor" ? std::string("TA") : std::string("Instructor");
    std::set<std::string> all{"Class", "Instructor", "Picture", "TA"};
    return std::set<ChainShape>{
        {{person, "Picture"}, {edge(person, "PicId", "Picture", "PicId")}},
        {{"Instructor", "Picture", "TA"},
         {edge("Instructor", "PicId", "TA", "PicId"), edge("Picture", "PicId", other, "PicId")}},
        {all,
         {edge("Class", "InstId", "Instructor", "InstId"), edge("Class", "TaId", "TA", "TaId"),
          edge("Picture", "PicId", other, "PicId")}}};
  };
  auto inst = steiner_trees(g, {"Picture", "Instructor"});
  auto ta = steiner_trees(g, {"Picture", "TA"});
  bool ok = inst.size() == 3 && ta.size() == 3 && shapes(inst) == expected("Instructor") &&
            shapes(ta) == expected("TA");
  auto sk = first_sketch(s);
  const auto& add_instructor = std::get<std::vector<JoinChain>>(sk.holes[0].domain);
  const auto& add_ta = std::get<std::vector<JoinChain>>(sk.holes[4].domain);
  ok = ok && shapes(add_instructor) == shapes(inst) && shapes(add_ta) == shapes(ta);
  return {ok, std::to_string(inst.size()) + " and " + std::to_string(ta.size()) + " chains"};
}

Outcome interpreter() {
  auto I = [](std::int64_t v) { return Value::integer(v); };
  auto S = [](const char* v) { return Value::string(v); };
  auto schema = parse_schema(
      "table Car { cid: int [pk], model: str, year: int }\n"
      "table Part { name: str, amount: int, cid: int [fk Car] }");
  Instance inst(schema);
  inst.rows("Car") = {{I(1), S("M1"), I(2016)}, {I(2), S("M2"), I(2018)}};
  inst.rows("Part") = {{S("tire"), I(10), I(1)}, {S("brake"), I(20), I(1)}, {S("tire"), I(20), I(2)},
                       {S("brake"), I(30), I(2)}};
  auto program = parse_program(
      "update d() { del([Car, Part], Car join Part on Car.cid = Part.cid, model = \"M1\"); }\n"
      "update u() { upd(Car join Part on Car.cid = Part.cid, model = \"M2\" && name = \"tire\", amount, 30); }",
      schema);
  FreshUids fresh;
  auto deleted = exec_update(inst, program.functions[0].body[0], {}, fresh);
  auto updated = exec_update(inst, program.functions[1].body[0], {}, fresh);
  bool del_ok = deleted.rows("Car") == std::vector<Row>{{I(2), S("M2"), I(2018)}} &&
                deleted.rows("Part") == std::vector<Row>{{S("tire"), I(20), I(2)}, {S("brake"), I(30), I(2)}};
  bool upd_ok = updated.rows("Part") == std::vector<Row>{{S("tire"), I(10), I(1)},
                                                         {S("brake"), I(20), I(1)},
                                                         {S("tire"), I(30), I(2)},
                                                         {S("brake"), I(30), I(2)}} &&
                updated.rows("Car") == inst.rows("Car");
  return {del_ok && upd_ok, std::string("delete ") + (del_ok ? "ok" : "wrong") + ", update " + (upd_ok ? "ok" : "wrong")};
}

TestConfig small_config() {
  TestConfig cfg;
  cfg.ints = {0, 1};
  cfg.strs = {"A", "B"};
  cfg.max_length = 3;
  return cfg;
}

Outcome oracle_equivalence() {
  std::mt19937 rng(2026);
  auto schema = parse_schema(testing::kRandomSketchSchema);
  int instances = 0, disagreements = 0, found = 0;
  while (instances < 100) {
    auto sk = testing::random_sketch(rng, schema, 5000);
    std::optional<Program> reference;
    if (instances % 2 == 0) {
      reference = testing::random_completion(rng, sk);
    } else {
      reference = testing::random_completion(rng, testing::random_sketch(rng, schema, 5000));
    }
    if (!reference) continue;
    ++instances;
    EquivalenceOracle oracle(schema, *reference, small_config());
    CompletionConfig cc;
    cc.test = small_config();
    cc.timeout = std::chrono::milliseconds{0};
    auto got = complete_sketch(sk, oracle, cc);
    bool expected = testing::brute_complete(sk, oracle).has_value();
    if (got.program.has_value() != expected) ++disagreements;
    if (got.program) {
      ++found;
      produced.push_back({"random sketch", schema, *reference, schema, *got.program, small_config()});
    }
  }
  return {disagreements == 0, std::to_string(instances) + " instances, " + std::to_string(found) + " completed, " +
                                  std::to_string(disagreements) + " disagreements"};
}

Outcome maxsat_optimality() {
  std::mt19937 rng(16);
  int disagreements = 0;
  for (int i = 0; i < 100; ++i) {
    auto f = testing::random_formula(rng, 8 + i % 9, i % 2 == 0, true);
    auto brute = testing::brute_maxsat(f);
    auto m = maxsat_solve(f);
    bool same = m.has_value() == brute.best.has_value() &&
                (!m || (satisfies_hard(f, *m) && soft_weight(f, *m) == brute.weight));
    if (!same) ++disagreements;
  }
  return {disagreements == 0, "100 instances, " + std::to_string(disagreements) + " disagreements"};
}

Outcome round_trip() {
  auto schema = parse_schema(testing::kRoundTripSchema);
  std::mt19937 rng(500);
  int failures = 0;
  for (int i = 0; i < 500; ++i) {
    Program p = testing::RandomProgram(rng, schema).build();
    try {
      if (!validate_program(p, schema).empty() || parse_program(pretty_print(p), schema) != p) ++failures;
    } catch (const std::exception&) {
      ++failures;
    }
  }
  return {failures == 0, "500 programs, " + std::to_string(failures) + " failures"};
}

Outcome iteration_advantage() {
  auto suite = testing::pairs_suite(4);
  EquivalenceOracle oracle(suite.source_schema, suite.source, TestConfig{});
  CompletionConfig mfi;
  mfi.timeout = std::chrono::milliseconds{0};
  auto with_mfi = complete_sketch(suite.sketch, oracle, mfi);
  CompletionConfig full;
  full.blocking = BlockingMode::FullModel;
  full.timeout = std::chrono::milliseconds{120'000};
  auto with_full = complete_sketch(suite.sketch, oracle, full);
  if (!with_mfi.program) return {false, "no completion with failing-input blocking"};
  produced.push_back({"pairs", suite.source_schema, suite.source, suite.sketch.target, *with_mfi.program, TestConfig{}});
  if (with_full.program)
    produced.push_back({"pairs", suite.source_schema, suite.source, suite.sketch.target, *with_full.program, TestConfig{}});
  double ratio = static_cast<double>(with_mfi.iterations) / static_cast<double>(with_full.iterations);
  std::ostringstream d;
  d << suite.sketch.functions.size() << " functions, " << with_mfi.iterations << " vs " << with_full.iterations
    << (with_full.timed_out ? "+" : "") << " iterations (" << static_cast<int>(ratio * 100 + 0.5) << "%)";
  return {ratio <= 0.2, d.str()};
}

Outcome textbook_scenarios() {
  auto merge = synth_scenario("merge", SynthesisOptions{}, 60);
  auto split = synth_scenario("split", SynthesisOptions{}, 60);
  return {merge.pass && split.pass, merge.detail + "; " + split.detail};
}

Outcome soundness() {
  int violations = 0;
  for (const auto& p : produced) {
    if (!validate_program(p.output, p.target_schema).empty() ||
        !bounded_verify(p.source_schema, p.source, p.target_schema, p.output, p.config))
      ++violations;
  }
  return {violations == 0 && !produced.empty(),
          std::to_string(produced.size()) + " outputs, " + std::to_string(violations) + " violations"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* title;
    Outcome (*run)();
  };
  // Soundness runs last so that it sees every output produced above.
  const Criterion criteria[] = {
      {"1", "running example synthesis", running_example},
      {"2", "search space count", search_space},
      {"3", "failing-input blocking power", mfi_blocking},
      {"4", "join chain enumeration", join_chains},
      {"5", "interpreter semantics", interpreter},
      {"6a", "completion agrees with enumeration", oracle_equivalence},
      {"6b", "maxsat optimality", maxsat_optimality},
      {"6c", "parse and print round trip", round_trip},
      {"6e", "iteration advantage", iteration_advantage},
      {"7", "merge and split scenarios", textbook_scenarios},
      {"6d", "soundness of synthesized outputs", soundness},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    auto start = Clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.id << " " << c.title << ": " << o.detail << " [" << seconds(since(start))
              << "]" << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
