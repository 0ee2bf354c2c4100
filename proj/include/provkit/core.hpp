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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "provkit/component.hpp"
#include "provkit/error.hpp"
#include "provkit/options.hpp"
#include "provkit/provenance.hpp"
#include "provkit/services.hpp"

namespace provkit {

inline constexpr std::string_view kApplicationMgr = "ApplicationMgr";

/// Holds the reserved `ApplicationMgr.*` keys as ordinary properties.
class ApplicationMgr final : public Component {
 public:
  ApplicationMgr();

  std::vector<std::string> top_algorithms() const;
  std::vector<std::string> services() const;
  std::string const& output_file() const { return get_text("OutputFile"); }
};

class Algorithm : public Component {
 public:
  explicit Algorithm(std::string name) : Component(std::move(name), ComponentKind::Algorithm) {}

  virtual void initialize(Job& /*job*/) {}
  /// Returns false to veto the event; downstream algorithms are skipped.
  virtual bool execute(Job& job, EventRecord const& event) = 0;
  virtual void finalize(Job& /*job*/) {}
};

/// Produces the job's events. Only valid as the first algorithm.
class EventSource : public Algorithm {
 public:
  using Algorithm::Algorithm;

  /// Field names; available after initialize.
  virtual std::vector<std::string> schema() const = 0;
  /// Fills `event` with the next record; false once exhausted.
  virtual bool next(EventRecord& event) = 0;
  bool execute(Job&, EventRecord const&) override { return true; }
};

// --- demo algorithms ------------------------------------------------------

/// SplitMix64 with its published constants.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  /// Uniform on [0, 1) from the top 53 bits.
  double next_double() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Fields f0..f{FieldCount-1}, one draw per field per event, row-major.
class RandomEventSource final : public EventSource {
 public:
  RandomEventSource();
  void initialize(Job& job) override;
  std::vector<std::string> schema() const override;
  bool next(EventRecord& event) override;

 protected:
  void validate(PropertySpec const& spec, OptionValue const& value) const override;

 private:
  std::optional<SplitMix64> rng_;
  std::uint64_t produced_ = 0;
};

/// Replays the `events` block of an existing container and records its
/// lineage.
class FileEventSource final : public EventSource {
 public:
  FileEventSource();
  void initialize(Job& job) override;
  std::vector<std::string> schema() const override { return table_.fields; }
  bool next(EventRecord& event) override;

 private:
  EventTable table_;
  std::size_t cursor_ = 0;
};

/// Vetoes events whose Field is below Min.
class ThresholdFilter final : public Algorithm {
 public:
  ThresholdFilter();
  bool execute(Job& job, EventRecord const& event) override;
};

/// Sums Field over the events that reach it; writes a `summary` block of
/// {count u64, sum f64}.
class Accumulator final : public Algorithm {
 public:
  Accumulator();
  bool execute(Job& job, EventRecord const& event) override;
  void finalize(Job& job) override;

  double sum() const noexcept { return sum_; }
  std::uint64_t count() const noexcept { return count_; }

 private:
  double sum_ = 0.0;
  std::uint64_t count_ = 0;
};

// --- catalogue ------------------------------------------------------------

/// Components a job may instantiate by name.
class Catalog {
 public:
  using Factory = std::function<std::unique_ptr<Component>()>;

  void add(std::string name, ComponentKind kind, Factory factory);
  template <typename T>
  void add(std::string name, ComponentKind kind) {
    add(std::move(name), kind, [] { return std::make_unique<T>(); });
  }

  bool contains(std::string_view name) const;
  std::optional<ComponentKind> kind_of(std::string_view name) const;
  std::unique_ptr<Component> create(std::string_view name) const;

  /// RandomEventSource, FileEventSource, ThresholdFilter, Accumulator,
  /// MetaDataSvc and DemoTool.
  static Catalog standard();

 private:
  struct Entry {
    ComponentKind kind;
    Factory factory;
  };
  std::map<std::string, Entry, std::less<>> entries_;
};

// --- job ------------------------------------------------------------------

enum class PhaseStatus : std::uint8_t { NotRun, Ok, Failed, Skipped };

std::string_view to_string(PhaseStatus s) noexcept;

struct JobReport {
  PhaseStatus initialize = PhaseStatus::NotRun;
  PhaseStatus execute = PhaseStatus::NotRun;
  PhaseStatus finalize = PhaseStatus::NotRun;
  std::uint64_t events_seen = 0;
  std::uint64_t events_written = 0;
  std::string output_path;
  std::optional<std::uint32_t> payload_checksum;  // CRC32C of `events`
  bool info_written = false;

  /// First failure, if any.
  std::optional<ErrorCode> error_code;
  std::string error_message;
  std::string failed_phase;

  bool ok() const noexcept {
    return initialize == PhaseStatus::Ok && execute == PhaseStatus::Ok &&
           finalize == PhaseStatus::Ok;
  }
};

struct JobEnvironment {
  /// Message sink; nullptr selects std::cerr.
  std::ostream* log_sink = nullptr;
  bool quiet = false;
};

class Job {
 public:
  Job(Job&&) noexcept = default;
  Job& operator=(Job&&) noexcept = default;
  ~Job();

  ApplicationMgr& app() noexcept { return *app_; }
  ApplicationMgr const& app() const noexcept { return *app_; }
  ServiceRegistry& services() noexcept { return *registry_; }
  ServiceRegistry const& services() const noexcept { return *registry_; }
  std::vector<std::unique_ptr<Algorithm>> const& algorithms() const noexcept { return algorithms_; }
  Algorithm* find_algorithm(std::string_view name) const noexcept;

  OptionsSet const& config() const noexcept { return registry_->job_options().config(); }
  AppliedLog const& applied_log() const noexcept { return registry_->job_options().applied(); }
  MessageSvc& msg() const noexcept { return registry_->message(); }

  /// Null when MetaDataSvc is not enabled for this job.
  MetaDataSvc* metadata_service() const noexcept;

  std::vector<InputLineage> const& lineage() const noexcept { return lineage_; }
  void add_lineage(std::string path, std::uint32_t checksum);

  JobReport const& report() const noexcept { return report_; }
  /// Lifecycle events in order, e.g. "activate:MessageSvc".
  std::vector<std::string> const& trace() const noexcept { return trace_; }

 private:
  Job() = default;

  friend Job build_job(OptionsSet config, Catalog const& catalog, JobEnvironment env);
  friend PhaseStatus initialize(Job& job);
  friend PhaseStatus execute(Job& job);
  friend PhaseStatus finalize(Job& job);

  void fail(std::string_view phase, Error const& e);
  void fail(std::string_view phase, std::exception const& e);

  std::unique_ptr<ApplicationMgr> app_;
  std::unique_ptr<ServiceRegistry> registry_;
  std::vector<std::unique_ptr<Algorithm>> algorithms_;
  std::shared_ptr<Catalog const> catalog_;
  std::vector<InputLineage> lineage_;
  std::vector<Service*> activated_;
  JobReport report_;
  std::vector<std::string> trace_;
  bool finalized_ = false;
};

/// Instantiates the manager, the standard services, the services listed in
/// `ApplicationMgr.Services` and the algorithms of `ApplicationMgr.TopAlg`,
/// in list order, with properties at their defaults. Throws
/// UnknownComponent, DuplicateComponent, ReservedNamespace or KindMismatch.
Job build_job(OptionsSet config, Catalog const& catalog = Catalog::standard(),
              JobEnvironment env = {});

PhaseStatus initialize(Job& job);
PhaseStatus execute(Job& job);
/// Runs once per job; later calls return the first result.
PhaseStatus finalize(Job& job);

/// initialize, then execute when initialize succeeded, then finalize.
JobReport run_job(Job& job);

}  // namespace provkit
