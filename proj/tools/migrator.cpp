// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "migrator/equiv.hpp"
#include "migrator/parser.hpp"
#include "migrator/sketch_gen.hpp"
#include "migrator/synthesize.hpp"
#include "migrator/validate.hpp"
#include "migrator/value_corr.hpp"

namespace {

using namespace migrator;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kInputError = 2;
constexpr int kTimeout = 3;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TestFlags {
  std::vector<std::int64_t> ints;
  std::vector<std::string> strs;
  std::vector<std::string> bins;
  std::size_t max_length = 3;
  std::string compare = "bag";

  void add_to(CLI::App& app) {
    app.add_option("--max-seq-len", max_length, "Longest invocation sequence, query included")
        ->envname("MIGRATOR_MAX_SEQ_LEN")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed-ints", ints, "Integer seeds")->delimiter(',')->envname("MIGRATOR_SEED_INTS");
    app.add_option("--seed-strs", strs, "String seeds")->delimiter(',')->envname("MIGRATOR_SEED_STRS");
    app.add_option("--seed-bins", bins, "Binary seeds as hex, e.g. 0x00")->delimiter(',')->envname("MIGRATOR_SEED_BINS");
    app.add_option("--compare", compare, "Result comparison")
        ->check(CLI::IsMember({"bag", "list"}))
        ->envname("MIGRATOR_COMPARE");
  }

  TestConfig build() const {
    TestConfig cfg;
    if (!ints.empty()) cfg.ints = ints;
    if (!strs.empty()) cfg.strs = strs;
    if (!bins.empty()) {
      cfg.bins.clear();
      for (const auto& b : bins) cfg.bins.push_back(parse_hex(b));
    }
    cfg.max_length = max_length;
    cfg.comparison = compare == "list" ? Comparison::List : Comparison::Bag;
    return cfg;
  }

 private:
  static std::vector<std::uint8_t> parse_hex(std::string text) {
    if (text.rfind("0x", 0) == 0 || text.rfind("0X", 0) == 0) text = text.substr(2);
    if (text.empty() || text.size() % 2 != 0) throw InputError("bad binary seed '" + text + "'");
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i < text.size(); i += 2) {
      std::size_t used = 0;
      unsigned long byte = 0;
      try {
        byte = std::stoul(text.substr(i, 2), &used, 16);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != 2) throw InputError("bad binary seed '" + text + "'");
      out.push_back(static_cast<std::uint8_t>(byte));
    }
    return out;
  }
};

struct Inputs {
  std::string program;
  std::string source_schema;
  std::string target_schema;

  void add_to(CLI::App& app) {
    app.add_option("-p,--program", program, "Source program (.dbp)")->required();
    app.add_option("-s,--source-schema", source_schema, "Source schema (.schema)")->required();
    app.add_option("-t,--target-schema", target_schema, "Target schema (.schema)")->required();
  }
};

struct SynthFlags {
  int alpha = kDefaultAlpha;
  std::string mode = "choice";
  bool wf = true;
  double timeout = 300;
  std::size_t max_vc = 1000;

  void add_to(CLI::App& app) {
    app.add_option("--alpha", alpha, "Name-similarity bound")->check(CLI::PositiveNumber);
    app.add_option("--compose-mode", mode, "Join alternative composition")->check(CLI::IsMember({"choice", "subset"}));
    app.add_flag("--wf-constraints,!--no-wf-constraints", wf, "Well-formedness side constraints");
    app.add_option("--timeout", timeout, "Seconds")->check(CLI::PositiveNumber);
    app.add_option("--max-vc", max_vc, "Maximum value correspondences to try")->check(CLI::PositiveNumber);
  }

  ComposeMode compose() const { return mode == "subset" ? ComposeMode::Subset : ComposeMode::Choice; }
};

Schema load_schema(const std::string& path) {
  auto file = read_source(path);
  return parse_schema(file.text);
}

Program load_program(const std::string& path, const Schema& schema) { return parse_program(read_source(path).text, schema); }

int run_synth(const Inputs& in, const SynthFlags& flags, const TestFlags& test, const std::string& output,
              const std::string& report_format, bool dump_vc, bool dump_sketch, bool dump_cnf, bool quiet) {
  Schema src = load_schema(in.source_schema);
  Schema tgt = load_schema(in.target_schema);
  Program prog = load_program(in.program, src);

  SynthesisOptions opts;
  opts.alpha = flags.alpha;
  opts.test = test.build();
  opts.mode = flags.compose();
  opts.wf_constraints = flags.wf;
  opts.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(flags.timeout * 1000));
  opts.max_vc_attempts = flags.max_vc;
  opts.log = quiet ? nullptr : &std::cerr;
  opts.dump_vc = dump_vc;
  opts.dump_sketch = dump_sketch;
  opts.dump_cnf = dump_cnf;

  auto report = synthesize(src, prog, tgt, opts);
  if (report.program) {
    std::string text = pretty_print(*report.program);
    if (output.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(output);
      if (!out) throw InputError("cannot write " + output);
      out << text;
    }
  }
  if (report_format == "json") std::cout << report.to_json() << "\n";
  if (!quiet || report.status != SynthesisStatus::Success) {
    std::cerr << report.message << " (correspondences " << report.vc_attempts << ", sketches " << report.sketches
              << ", iterations " << report.iterations << ", " << report.seconds << " s)\n";
  }
  switch (report.status) {
    case SynthesisStatus::Success:
      return kOk;
    case SynthesisStatus::Timeout:
      return kTimeout;
    default:
      return kFailure;
  }
}

int run_check(const std::string& a, const std::string& b, const std::string& schema_a, const std::string& schema_b,
              const TestFlags& test) {
  Schema sa = load_schema(schema_a);
  Schema sb = load_schema(schema_b);
  Program pa = load_program(a, sa);
  Program pb = load_program(b, sb);
  auto mfi = find_mfi(sa, pa, sb, pb, test.build());
  if (!mfi) {
    std::cout << "equivalent (bounded)\n";
    return kOk;
  }
  std::cout << "not equivalent: " << mfi->to_string() << "\n";
  return kFailure;
}

std::optional<ValueCorrespondence> nth_correspondence(VcEncoding& enc, std::size_t index) {
  std::optional<ValueCorrespondence> corr;
  for (std::size_t i = 0; i < index; ++i)
    if (!(corr = next_value_corr(enc))) return std::nullopt;
  return corr;
}

int run_sketch(const Inputs& in, const SynthFlags& flags, std::size_t index) {
  Schema src = load_schema(in.source_schema);
  Schema tgt = load_schema(in.target_schema);
  Program prog = load_program(in.program, src);
  auto enc = encode_vc(src, tgt, prog, flags.alpha);
  auto corr = nth_correspondence(enc, index);
  if (!corr) {
    std::cerr << "only " << enc.blocked << " correspondences exist\n";
    return kFailure;
  }
  try {
    Sketch sketch = gen_sketch(prog, *corr, src, tgt, flags.compose());
    std::cout << to_string(sketch);
    std::cout << "// holes " << sketch.holes.size() << ", completions " << sketch.naive_size() << "\n";
  } catch (const UnmappableError& e) {
    std::cerr << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}

int run_vc(const Inputs& in, const SynthFlags& flags, std::size_t count) {
  Schema src = load_schema(in.source_schema);
  Schema tgt = load_schema(in.target_schema);
  Program prog = load_program(in.program, src);
  auto enc = encode_vc(src, tgt, prog, flags.alpha);
  for (std::size_t i = 0; i < count; ++i) {
    auto corr = next_value_corr(enc);
    if (!corr) break;
    std::cout << "# correspondence " << i + 1 << "\n" << corr->to_string() << "\n";
  }
  return enc.blocked > 0 ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Database program migration synthesizer"};
  app.require_subcommand(1);

  Inputs inputs;
  SynthFlags synth_flags;
  TestFlags test_flags;

  auto* synth = app.add_subcommand("synth", "Synthesize a program over the target schema");
  std::string output, report_format;
  bool dump_vc = false, dump_sketch = false, dump_cnf = false, quiet = false;
  inputs.add_to(*synth);
  synth_flags.add_to(*synth);
  test_flags.add_to(*synth);
  synth->add_option("-o,--output", output, "Output program path (stdout when omitted)");
  synth->add_option("--report", report_format, "Summary format")->check(CLI::IsMember({"json"}));
  synth->add_flag("--dump-vc", dump_vc, "Print each value correspondence");
  synth->add_flag("--dump-sketch", dump_sketch, "Print each sketch");
  synth->add_flag("--dump-cnf", dump_cnf, "Print each sketch encoding");
  synth->add_flag("-q,--quiet", quiet, "No progress output");

  auto* check = app.add_subcommand("check", "Bounded equivalence of two programs");
  std::string prog_a, prog_b, schema_a, schema_b;
  check->add_option("a", prog_a, "First program")->required();
  check->add_option("b", prog_b, "Second program")->required();
  check->add_option("--schema-a", schema_a, "Schema of the first program")->required();
  check->add_option("--schema-b", schema_b, "Schema of the second program")->required();
  test_flags.add_to(*check);

  auto* sketch = app.add_subcommand("sketch", "Print the sketch for one value correspondence");
  std::size_t vc_index = 1;
  inputs.add_to(*sketch);
  synth_flags.add_to(*sketch);
  sketch->add_option("--vc-index", vc_index, "1-based correspondence index")->check(CLI::PositiveNumber);

  auto* vc = app.add_subcommand("vc", "List value correspondences in rank order");
  std::size_t vc_count = 5;
  inputs.add_to(*vc);
  synth_flags.add_to(*vc);
  vc->add_option("-k,--count", vc_count, "How many to list")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kInputError;
  }

  try {
    if (synth->parsed())
      return run_synth(inputs, synth_flags, test_flags, output, report_format, dump_vc, dump_sketch, dump_cnf, quiet);
    if (check->parsed()) return run_check(prog_a, prog_b, schema_a, schema_b, test_flags);
    if (sketch->parsed()) return run_sketch(inputs, synth_flags, vc_index);
    if (vc->parsed()) return run_vc(inputs, synth_flags, vc_count);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  } catch (const ValidationError& e) {
    std::cerr << "invalid program:\n";
    for (const auto& d : e.diagnostics()) std::cerr << "  " << d.to_string() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
