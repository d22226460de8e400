// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <fstream>

#include "support.hpp"

namespace migrator {
namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run_shell(const std::string& cmd) {
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Run run(const std::string& args, const std::string& env = "") {
  return run_shell(env + " \"" + MIGRATOR_BIN + "\" " + args + " 2>/dev/null");
}

std::string path(const std::string& rel) { return "\"" + testing::data_path(rel).string() + "\""; }

std::string running_inputs() {
  return "-p " + path("running/source.dbp") + " -s " + path("running/source.schema") + " -t " +
         path("running/target.schema");
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  auto p = std::filesystem::temp_directory_path() / ("migrator_cli_" + name);
  std::ofstream(p) << text;
  return p;
}

TEST(Cli, SynthPrintsVerifiedProgram) {
  auto r = run("synth -q " + running_inputs());
  ASSERT_EQ(r.code, 0);
  auto s = testing::load_scenario("running");
  auto p = parse_program(r.out, s.target_schema);
  EXPECT_TRUE(bounded_verify(s.source_schema, s.source, s.target_schema, p, TestConfig{}));
}

TEST(Cli, SynthWritesOutputAndJson) {
  auto out = std::filesystem::temp_directory_path() / "migrator_cli_out.dbp";
  std::filesystem::remove(out);
  auto r = run("synth -q --report json -o \"" + out.string() + "\" " + running_inputs());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"status\": \"success\""), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(out));
  EXPECT_FALSE(testing::read_text(out).empty());
}

TEST(Cli, SynthFailureExitCode) {
  auto src = temp_file("f.schema", "table T { k: int [pk], photo: bin }\n");
  auto tgt = temp_file("g.schema", "table T { k: int [pk], name: str }\n");
  auto prog = temp_file("f.dbp", "query q(x: int) { proj([photo], sel(k = x, T)); }\n");
  auto r = run("synth -q -p \"" + prog.string() + "\" -s \"" + src.string() + "\" -t \"" + tgt.string() + "\"");
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("synth -p nope.dbp -s nope.schema -t nope.schema").code, 2);
  EXPECT_EQ(run("synth " + running_inputs() + " --compose-mode sideways").code, 2);
  EXPECT_EQ(run("synth " + running_inputs() + " --seed-bins zz").code, 2);
  auto bad = temp_file("bad.dbp", "update f( { }\n");
  EXPECT_EQ(run("synth -p \"" + bad.string() + "\" -s " + path("running/source.schema") + " -t " +
                path("running/target.schema"))
                .code,
            2);
}

TEST(Cli, CheckEquivalence) {
  auto ok = run("check " + path("running/source.dbp") + " " + path("running/expected.dbp") + " --schema-a " +
                path("running/source.schema") + " --schema-b " + path("running/target.schema"));
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out, "equivalent (bounded)\n");

  auto text = testing::read_text(testing::data_path("running/expected.dbp"));
  text.replace(text.find("TA.TName: name"), 14, "TA.TName: \"A\"");
  auto wrong = temp_file("wrong.dbp", text);
  auto bad = run("check " + path("running/source.dbp") + " \"" + wrong.string() + "\" --schema-a " +
                 path("running/source.schema") + " --schema-b " + path("running/target.schema"));
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.out.rfind("not equivalent: ", 0), 0u);
}

TEST(Cli, SeedOverridesFromEnvironment) {
  auto text = testing::read_text(testing::data_path("running/expected.dbp"));
  text.replace(text.find("TA.TName: name"), 14, "TA.TName: \"A\"");
  auto wrong = temp_file("wrong_env.dbp", text);
  auto args = "check " + path("running/source.dbp") + " \"" + wrong.string() + "\" --schema-a " +
              path("running/source.schema") + " --schema-b " + path("running/target.schema");
  EXPECT_EQ(run(args).code, 1);
  EXPECT_EQ(run(args + " --seed-strs A").code, 0);
  EXPECT_EQ(run(args, "MIGRATOR_SEED_STRS=A").code, 0);
  EXPECT_EQ(run(args, "MIGRATOR_MAX_SEQ_LEN=1").code, 0);
}

TEST(Cli, SketchAndVc) {
  auto sk = run("sketch " + running_inputs());
  ASSERT_EQ(sk.code, 0);
  EXPECT_NE(sk.out.find("// holes 8, completions 164025"), std::string::npos);
  auto vc = run("vc -k 2 " + running_inputs());
  ASSERT_EQ(vc.code, 0);
  EXPECT_NE(vc.out.find("# correspondence 1"), std::string::npos);
  EXPECT_NE(vc.out.find("# correspondence 2"), std::string::npos);
  auto schema = temp_file("one.schema", "table T { k: int [pk] }\n");
  auto prog = temp_file("one.dbp", "query q(x: int) { proj([k], sel(k = x, T)); }\n");
  auto one = "-p \"" + prog.string() + "\" -s \"" + schema.string() + "\" -t \"" + schema.string() + "\"";
  EXPECT_EQ(run("sketch --vc-index 1 " + one).code, 0);
  EXPECT_EQ(run("sketch --vc-index 2 " + one).code, 1);
}

}  // namespace
}  // namespace migrator
