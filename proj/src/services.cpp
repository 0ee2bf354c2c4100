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

#include "provkit/services.hpp"

#include <iostream>

#include "provkit/error.hpp"

namespace provkit {

namespace {

constexpr char const* kLevelNames[] = {"DEBUG", "VERBOSE", "INFO", "WARNING", "ERROR"};

}  // namespace

MessageSvc::MessageSvc() : Service(std::string(kMessageSvc)), sink_(&std::cerr) {
  declare("OutputLevel", std::int64_t{static_cast<int>(MsgLevel::Warning)});
}

void MessageSvc::log(int level, std::string_view component, std::string_view message) {
  if (sink_ == nullptr || !enabled(level)) return;
  std::string_view const tag =
      level >= 0 && level <= 4 ? kLevelNames[level] : std::string_view("LEVEL");
  *sink_ << component << ' ' << tag << ' ' << message << '\n';
}

JobOptionsSvc::JobOptionsSvc(OptionsSet config)
    : Service(std::string(kJobOptionsSvc)), config_(std::move(config)) {}

DemoTool::DemoTool() : Tool("DemoTool") { declare("Gain", 1.0); }

ToolSvc::ToolSvc() : Service(std::string(kToolSvc)) {}

void ToolSvc::configure(Factory factory, OptionsSet const* options) {
  factory_ = std::move(factory);
  options_ = options;
}

bool ToolSvc::is_tool(std::string_view name) const {
  for (auto const& t : tools_) {
    if (t->name() == name) return true;
  }
  return factory_ && factory_(name) != nullptr;
}

Tool& ToolSvc::retrieve(std::string_view name) {
  for (auto const& t : tools_) {
    if (t->name() == name) return *t;
  }
  auto tool = factory_ ? factory_(name) : nullptr;
  if (!tool) throw Error(ErrorCode::UnknownTool, "no tool named '" + std::string(name) + "'");
  if (options_ != nullptr) {
    for (auto const& [key, value] : *options_) {
      if (key.component() == name) tool->set_property(key.property(), value);
    }
  }
  tools_.push_back(std::move(tool));
  return *tools_.back();
}

double const* EventRecord::find(std::string_view name) const noexcept {
  for (auto const& [n, v] : fields) {
    if (n == name) return &v;
  }
  return nullptr;
}

EventDataSvc::EventDataSvc() : Service(std::string(kEventDataSvc)) {
  declare("RootName", "/Event");
}

ContainerWriterSvc::ContainerWriterSvc() : Service(std::string(kContainerWriterSvc)) {}

void ContainerWriterSvc::open(std::filesystem::path const& path,
                              std::span<std::string const> fields) {
  if (writer_) throw Error(ErrorCode::WriteFailure, "output already open");
  if (path.empty()) throw Error(ErrorCode::WriteFailure, "ApplicationMgr.OutputFile is empty");
  writer_ = std::make_unique<ContainerWriter>(path);
  writer_->begin_block(std::string(kEventsBlock));
  writer_->append(encode_events_header(fields));
}

void ContainerWriterSvc::write_event(std::span<double const> values) {
  row_buffer_.clear();
  append_event(row_buffer_, values);
  writer_->append(row_buffer_);
}

void ContainerWriterSvc::add_block(std::string name, std::string payload) {
  pending_.push_back({std::move(name), std::move(payload)});
}

std::vector<TocEntry> ContainerWriterSvc::commit(std::optional<std::string> info_payload) {
  if (!writer_) throw Error(ErrorCode::WriteFailure, "output was never opened");
  if (writer_->in_block()) writer_->end_block();
  for (auto& b : pending_) writer_->write_block(std::move(b.name), b.payload);
  pending_.clear();
  if (info_payload) writer_->write_block(std::string(kInfoBlock), *info_payload);
  writer_->commit();
  auto toc = writer_->toc();
  writer_.reset();
  return toc;
}

ServiceRegistry::ServiceRegistry() {
  auto message = std::make_unique<MessageSvc>();
  auto options = std::make_unique<JobOptionsSvc>();
  auto tools = std::make_unique<ToolSvc>();
  auto events = std::make_unique<EventDataSvc>();
  auto writer = std::make_unique<ContainerWriterSvc>();
  message_ = message.get();
  job_options_ = options.get();
  tools_ = tools.get();
  event_data_ = events.get();
  writer_ = writer.get();
  services_.push_back(std::move(message));
  services_.push_back(std::move(options));
  services_.push_back(std::move(tools));
  services_.push_back(std::move(events));
  services_.push_back(std::move(writer));
}

void ServiceRegistry::add(std::unique_ptr<Service> service) {
  if (find(service->name()) != nullptr) {
    throw Error(ErrorCode::DuplicateComponent, "service '" + service->name() + "' already present");
  }
  services_.push_back(std::move(service));
}

Service* ServiceRegistry::find(std::string_view name) const noexcept {
  for (auto const& s : services_) {
    if (s->name() == name) return s.get();
  }
  return nullptr;
}

bool ServiceRegistry::is_standard(std::string_view name) noexcept {
  return name == kMessageSvc || name == kJobOptionsSvc || name == kToolSvc ||
         name == kEventDataSvc || name == kContainerWriterSvc;
}

AppliedLog apply_options(ServiceRegistry& registry, OptionsSet const& config,
                         std::span<Component* const> others) {
  AppliedLog log;
  for (auto const& [key, value] : config) {
    if (key.component() == kProvenanceNamespace) continue;
    Component* target = nullptr;
    for (auto* c : others) {
      if (c->name() == key.component()) target = c;
    }
    if (target == nullptr) target = registry.find(key.component());
    if (target == nullptr && registry.tools().is_tool(key.component())) {
      target = &registry.tools().retrieve(key.component());
    }
    if (target == nullptr) {
      throw Error(ErrorCode::UnknownComponent,
                  "'" + key.full() + "' names no component in this job");
    }
    target->set_property(key.property(), value);
    log.emplace_back(key, value);
    registry.job_options().record(key, value);
  }
  return log;
}

}  // namespace provkit
