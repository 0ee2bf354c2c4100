// Copyright 2026 The provkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "provkit/core.hpp"
#include "provkit/metadata.hpp"

namespace provkit {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,          // operational error; also a non-empty diff
  kExitVerification = 2,   // lineage, checksum or replay mismatch
};

int exit_code_for(ErrorCode code) noexcept;

struct DiffReport {
  struct Change {
    std::string key;
    std::string left;
    std::string right;
    friend bool operator==(Change const&, Change const&) = default;
  };

  std::vector<std::string> only_left;
  std::vector<std::string> only_right;
  std::vector<Change> changed;

  bool empty() const noexcept { return only_left.empty() && only_right.empty() && changed.empty(); }
};

DiffReport diff_metadata(MetadataDictionary const& left, MetadataDictionary const& right);

std::string render_table(MetadataDictionary const& d);
std::string render_tsv(MetadataDictionary const& d);
std::string render_diff(DiffReport const& report);
std::string render_report(JobReport const& report);

struct RunResult {
  JobReport report;
  AppliedLog applied;
  std::optional<MetadataDictionary> metadata;
};

/// Builds and runs a job. Build errors propagate as exceptions; phase
/// failures are carried in the report.
RunResult run_config(OptionsSet config, Catalog const& catalog = Catalog::standard(),
                     JobEnvironment env = {});

/// The stored dictionary as a runnable options set.
OptionsSet replay_config(MetadataDictionary const& info, std::filesystem::path const& out);

/// Checks every recorded input still exists and matches its checksum.
/// Throws LineageMissing or LineageMismatch.
void verify_lineage(MetadataDictionary const& info);

/// Re-runs the job recorded in `container`, writing to `out`, and checks
/// the new `events` checksum and `info` (modulo ApplicationMgr.OutputFile)
/// against the original. Throws MissingInfo, LineageMissing,
/// LineageMismatch, ReplayMismatch, or the run's own error.
RunResult replay(std::filesystem::path const& container, std::filesystem::path const& out,
                 Catalog const& catalog = Catalog::standard(), JobEnvironment env = {});

int cmd_run(std::filesystem::path const& config, std::ostream& out, std::ostream& err);
int cmd_view(std::filesystem::path const& container, std::string const& format,
             std::ostream& out, std::ostream& err);
int cmd_export(std::filesystem::path const& container, std::filesystem::path const& dest,
               std::ostream& out, std::ostream& err);
int cmd_replay(std::filesystem::path const& container, std::filesystem::path const& dest,
               std::ostream& out, std::ostream& err);
int cmd_diff(std::filesystem::path const& a, std::filesystem::path const& b, std::ostream& out,
             std::ostream& err);

/// Entry point shared by the `provkit` binary and the CLI tests.
int cli_main(int argc, char const* const* argv, std::ostream& out, std::ostream& err);

}  // namespace provkit
