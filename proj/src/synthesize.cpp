// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#include "migrator/synthesize.hpp"

#include <iostream>
#include <stdexcept>

#include "json.hpp"
#include "migrator/parser.hpp"
#include "migrator/sketch_solver.hpp"
#include "migrator/validate.hpp"

namespace migrator {

namespace {

std::string_view status_name(SynthesisStatus s) {
  switch (s) {
    case SynthesisStatus::Success:
      return "success";
    case SynthesisStatus::Failure:
      return "failure";
    case SynthesisStatus::Timeout:
      return "timeout";
  }
  return "failure";
}

void check_schema(const Schema& schema, std::string_view role) {
  auto problems = schema.check();
  if (schema.empty()) problems.push_back("no tables");
  if (problems.empty()) return;
  std::string msg = std::string(role) + " schema:";
  for (const auto& p : problems) msg += " " + p + ";";
  throw std::invalid_argument(msg);
}

}  // namespace

std::string SynthesisReport::to_json() const {
  nlohmann::ordered_json j;
  j["status"] = status_name(status);
  j["program"] = program ? nlohmann::ordered_json(pretty_print(*program)) : nlohmann::ordered_json(nullptr);
  if (correspondence) {
    nlohmann::ordered_json m = nlohmann::ordered_json::object();
    for (const auto& [src, images] : correspondence->mapping()) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& t : images) arr.push_back(t.to_string());
      m[src.to_string()] = arr;
    }
    j["correspondence"] = m;
  } else {
    j["correspondence"] = nullptr;
  }
  j["vc_attempts"] = vc_attempts;
  j["sketches"] = sketches;
  j["iterations"] = iterations;
  j["seconds"] = seconds;
  j["message"] = message;
  return j.dump(2);
}

SynthesisReport synthesize(const Schema& source_schema, const Program& source, const Schema& target_schema,
                           const SynthesisOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  check_schema(source_schema, "source");
  check_schema(target_schema, "target");
  if (auto diags = validate_program(source, source_schema); !diags.empty()) throw ValidationError(std::move(diags));

  std::ostream& dump = options.log ? *options.log : std::cerr;
  SynthesisReport report;
  auto finish = [&](SynthesisStatus status, std::string message) {
    report.status = status;
    report.message = std::move(message);
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  };

  EquivalenceOracle oracle(source_schema, source, options.test);
  VcEncoding vc = encode_vc(source_schema, target_schema, source, options.alpha);
  while (report.vc_attempts < options.max_vc_attempts) {
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    if (options.timeout.count() > 0 && elapsed >= options.timeout) return finish(SynthesisStatus::Timeout, "time limit reached");
    auto corr = next_value_corr(vc);
    if (!corr) return finish(SynthesisStatus::Failure, "value correspondences exhausted");
    ++report.vc_attempts;
    if (options.dump_vc) dump << "correspondence " << report.vc_attempts << ":\n" << corr->to_string() << "\n";

    Sketch sketch;
    try {
      sketch = gen_sketch(source, *corr, source_schema, target_schema, options.mode);
    } catch (const UnmappableError& e) {
      if (options.log) *options.log << "correspondence " << report.vc_attempts << " skipped: " << e.what() << "\n";
      continue;
    }
    ++report.sketches;
    if (options.dump_sketch) dump << to_string(sketch) << "\n";
    if (options.dump_cnf) encode_sketch(sketch, options.wf_constraints).formula.dump_dimacs(dump);

    CompletionConfig cc;
    cc.test = options.test;
    cc.wf_constraints = options.wf_constraints;
    cc.timeout = options.timeout.count() > 0 ? std::max(options.timeout - elapsed, std::chrono::milliseconds{1})
                                             : std::chrono::milliseconds{0};
    cc.log = options.log;
    auto result = complete_sketch(sketch, oracle, cc);
    report.iterations += result.iterations;
    if (result.program) {
      report.program = std::move(result.program);
      report.correspondence = std::move(corr);
      return finish(SynthesisStatus::Success, "verified up to length " + std::to_string(options.test.max_length));
    }
    if (result.timed_out) return finish(SynthesisStatus::Timeout, "time limit reached");
  }
  return finish(SynthesisStatus::Failure, "correspondence attempt limit reached");
}

}  // namespace migrator
