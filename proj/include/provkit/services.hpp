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
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "provkit/component.hpp"
#include "provkit/container.hpp"
#include "provkit/options.hpp"

namespace provkit {

class Job;

inline constexpr std::string_view kMessageSvc = "MessageSvc";
inline constexpr std::string_view kJobOptionsSvc = "JobOptionsSvc";
inline constexpr std::string_view kToolSvc = "ToolSvc";
inline constexpr std::string_view kEventDataSvc = "EventDataSvc";
inline constexpr std::string_view kContainerWriterSvc = "ContainerWriterSvc";

/// Component namespace reserved for lineage assertions
/// (`Provenance.Inputs.<n>.Path` / `.Checksum`).
inline constexpr std::string_view kProvenanceNamespace = "Provenance";

class Service : public Component {
 public:
  explicit Service(std::string name) : Component(std::move(name), ComponentKind::Service) {}

  /// Lifecycle hooks, called in declaration order at initialize and in
  /// reverse order at finalize.
  virtual void activate(Job& /*job*/) {}
  virtual void deactivate(Job& /*job*/) {}
};

class Tool : public Component {
 public:
  explicit Tool(std::string name) : Component(std::move(name), ComponentKind::Tool) {}
};

// --- message service ------------------------------------------------------

enum class MsgLevel : int { Debug = 0, Verbose = 1, Info = 2, Warning = 3, Error = 4 };

class MessageSvc final : public Service {
 public:
  MessageSvc();

  /// Emits iff level >= OutputLevel.
  void log(int level, std::string_view component, std::string_view message);
  void log(MsgLevel level, std::string_view component, std::string_view message) {
    log(static_cast<int>(level), component, message);
  }
  bool enabled(int level) const { return level >= get_integer("OutputLevel"); }

  /// Defaults to std::cerr. Passing nullptr discards all output.
  void set_sink(std::ostream* sink) noexcept { sink_ = sink; }

 private:
  std::ostream* sink_;
};

// --- job options ----------------------------------------------------------

using AppliedLog = std::vector<std::pair<OptionKey, OptionValue>>;

class JobOptionsSvc final : public Service {
 public:
  explicit JobOptionsSvc(OptionsSet config = {});

  void load(OptionsSet config) { config_ = std::move(config); }
  OptionsSet const& config() const noexcept { return config_; }
  AppliedLog const& applied() const noexcept { return applied_; }
  void record(OptionKey key, OptionValue value) { applied_.emplace_back(std::move(key), std::move(value)); }

 private:
  OptionsSet config_;
  AppliedLog applied_;
};

// --- tools ----------------------------------------------------------------

class DemoTool final : public Tool {
 public:
  DemoTool();
  double gain() const { return get_float("Gain"); }
  double apply(double x) const { return x * gain(); }
};

class ToolSvc final : public Service {
 public:
  using Factory = std::function<std::unique_ptr<Tool>(std::string_view)>;

  ToolSvc();

  /// `factory` returns nullptr for names it does not know. `options` are
  /// applied to each tool when it is first created.
  void configure(Factory factory, OptionsSet const* options);

  /// Single shared instance per name, created on first request.
  /// Throws UnknownTool.
  Tool& retrieve(std::string_view name);
  bool is_tool(std::string_view name) const;

  std::vector<std::unique_ptr<Tool>> const& tools() const noexcept { return tools_; }

 private:
  Factory factory_;
  OptionsSet const* options_ = nullptr;
  std::vector<std::unique_ptr<Tool>> tools_;
};

// --- event data -----------------------------------------------------------

struct EventRecord {
  std::uint64_t index = 0;
  std::vector<std::pair<std::string, double>> fields;

  double const* find(std::string_view name) const noexcept;
};

/// In-memory store holding the event currently flowing through the chain.
class EventDataSvc final : public Service {
 public:
  EventDataSvc();

  EventRecord& current() noexcept { return current_; }
  EventRecord const& current() const noexcept { return current_; }
  std::vector<std::string> const& schema() const noexcept { return schema_; }
  void set_schema(std::vector<std::string> schema) { schema_ = std::move(schema); }

 private:
  EventRecord current_;
  std::vector<std::string> schema_;
};

// --- persistency ----------------------------------------------------------

/// Owns the output container. The `events` block is streamed while the
/// loop runs; auxiliary blocks and `info` are appended at finalize.
class ContainerWriterSvc final : public Service {
 public:
  ContainerWriterSvc();

  void open(std::filesystem::path const& path, std::span<std::string const> fields);
  bool is_open() const noexcept { return writer_ != nullptr; }
  void write_event(std::span<double const> values);
  void add_block(std::string name, std::string payload);

  /// Closes the events block, writes pending blocks then `info` (when
  /// given), and commits. Returns the TOC.
  std::vector<TocEntry> commit(std::optional<std::string> info_payload);
  void discard() noexcept { writer_.reset(); }

 private:
  std::unique_ptr<ContainerWriter> writer_;
  std::vector<Block> pending_;
  std::string row_buffer_;
};

// --- registry -------------------------------------------------------------

/// Standard services first, in fixed order, then user services.
class ServiceRegistry {
 public:
  ServiceRegistry();

  void add(std::unique_ptr<Service> service);
  Service* find(std::string_view name) const noexcept;
  std::vector<std::unique_ptr<Service>> const& services() const noexcept { return services_; }

  MessageSvc& message() const noexcept { return *message_; }
  JobOptionsSvc& job_options() const noexcept { return *job_options_; }
  ToolSvc& tools() const noexcept { return *tools_; }
  EventDataSvc& event_data() const noexcept { return *event_data_; }
  ContainerWriterSvc& writer() const noexcept { return *writer_; }

  static bool is_standard(std::string_view name) noexcept;

 private:
  std::vector<std::unique_ptr<Service>> services_;
  MessageSvc* message_ = nullptr;
  JobOptionsSvc* job_options_ = nullptr;
  ToolSvc* tools_ = nullptr;
  EventDataSvc* event_data_ = nullptr;
  ContainerWriterSvc* writer_ = nullptr;
};

/// Applies every `Component.Property` assignment of `config` to the matching
/// component: the registry's services, its tools (instantiating catalogued
/// tools on demand), and `others` (the manager and the algorithms). Keys in
/// the `Provenance` namespace are lineage assertions and are skipped.
///
/// Returns the assignments actually applied, in key order; the same entries
/// are recorded on the JobOptionsSvc. Throws UnknownComponent,
/// UnknownProperty, KindMismatch or InvalidValue on the first bad key.
AppliedLog apply_options(ServiceRegistry& registry, OptionsSet const& config,
                         std::span<Component* const> others = {});

}  // namespace provkit
