// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>

#include "migrator/equiv.hpp"
#include "migrator/program.hpp"
#include "migrator/schema.hpp"
#include "migrator/sketch_gen.hpp"
#include "migrator/value_corr.hpp"
#include "migrator/value_correspondence.hpp"

namespace migrator {

struct SynthesisOptions {
  int alpha = kDefaultAlpha;
  TestConfig test;
  ComposeMode mode = ComposeMode::Choice;
  bool wf_constraints = true;
  std::chrono::milliseconds timeout{300'000};
  std::size_t max_vc_attempts = 1000;

  std::ostream* log = nullptr;
  bool dump_vc = false;
  bool dump_sketch = false;
  bool dump_cnf = false;
};

enum class SynthesisStatus { Success, Failure, Timeout };

struct SynthesisReport {
  SynthesisStatus status = SynthesisStatus::Failure;
  std::optional<Program> program;
  std::optional<ValueCorrespondence> correspondence;
  /// Correspondences tried, sketches generated, and completion iterations.
  std::size_t vc_attempts = 0;
  std::size_t sketches = 0;
  std::size_t iterations = 0;
  double seconds = 0.0;
  std::string message;

  std::string to_json() const;
};

/// Enumerates value correspondences, sketches each, and completes the
/// sketch; the first bounded-verified completion wins.
SynthesisReport synthesize(const Schema& source_schema, const Program& source, const Schema& target_schema,
                           const SynthesisOptions& options = {});

}  // namespace migrator
