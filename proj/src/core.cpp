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

#include "provkit/core.hpp"

#include <chrono>
#include <ctime>
#include <set>

#include "provkit/container.hpp"

namespace provkit {

namespace {

std::vector<std::string> texts_of(OptionValue const& v) {
  std::vector<std::string> out;
  for (auto const& item : v.as_list().items()) out.push_back(std::get<std::string>(item));
  return out;
}

}  // namespace

std::string_view to_string(PhaseStatus s) noexcept {
  switch (s) {
    case PhaseStatus::NotRun: return "not-run";
    case PhaseStatus::Ok: return "ok";
    case PhaseStatus::Failed: return "failed";
    case PhaseStatus::Skipped: return "skipped";
  }
  return "?";
}

// --- ApplicationMgr -------------------------------------------------------

ApplicationMgr::ApplicationMgr() : Component(std::string(kApplicationMgr), ComponentKind::Manager) {
  declare_list("TopAlg", ValueKind::Text);
  declare_list("Services", ValueKind::Text);
  declare("AppName", "");
  declare("AppVersion", "");
  declare("OutputFile", "output.pdc");
}

std::vector<std::string> ApplicationMgr::top_algorithms() const { return texts_of(get("TopAlg")); }
std::vector<std::string> ApplicationMgr::services() const { return texts_of(get("Services")); }

// --- demo algorithms ------------------------------------------------------

RandomEventSource::RandomEventSource() : EventSource("RandomEventSource") {
  declare("Seed", std::int64_t{0});
  declare("NumEvents", std::int64_t{10});
  declare("FieldCount", std::int64_t{1});
}

void RandomEventSource::validate(PropertySpec const& spec, OptionValue const& value) const {
  if (spec.name == "NumEvents" && value.as_integer() < 0) {
    throw Error(ErrorCode::InvalidValue, "RandomEventSource.NumEvents must be >= 0");
  }
  if (spec.name == "FieldCount" && (value.as_integer() < 1 || value.as_integer() > 4096)) {
    throw Error(ErrorCode::InvalidValue, "RandomEventSource.FieldCount must be in 1..4096");
  }
}

void RandomEventSource::initialize(Job&) {
  rng_.emplace(static_cast<std::uint64_t>(get_integer("Seed")));
  produced_ = 0;
}

std::vector<std::string> RandomEventSource::schema() const {
  std::vector<std::string> names;
  for (std::int64_t i = 0; i < get_integer("FieldCount"); ++i) names.push_back("f" + std::to_string(i));
  return names;
}

bool RandomEventSource::next(EventRecord& event) {
  if (produced_ >= static_cast<std::uint64_t>(get_integer("NumEvents"))) return false;
  auto const k = static_cast<std::size_t>(get_integer("FieldCount"));
  if (event.fields.size() != k) {
    event.fields.clear();
    for (std::size_t i = 0; i < k; ++i) event.fields.emplace_back("f" + std::to_string(i), 0.0);
  }
  for (auto& f : event.fields) f.second = rng_->next_double();
  event.index = produced_++;
  return true;
}

FileEventSource::FileEventSource() : EventSource("FileEventSource") { declare("Input", ""); }

void FileEventSource::initialize(Job& job) {
  auto const& input = get_text("Input");
  if (input.empty()) throw Error(ErrorCode::InvalidValue, "FileEventSource.Input is empty");
  ContainerReader reader{std::filesystem::path(input)};
  auto const* entry = reader.find(kEventsBlock);
  if (entry == nullptr) throw Error(ErrorCode::UnknownBlock, input + " has no events block");
  table_ = decode_events(reader.read_block(kEventsBlock));
  cursor_ = 0;
  job.add_lineage(input, entry->crc32c);
}

bool FileEventSource::next(EventRecord& event) {
  if (cursor_ >= table_.rows()) return false;
  auto const row = table_.row(cursor_);
  event.fields.clear();
  for (std::size_t i = 0; i < row.size(); ++i) event.fields.emplace_back(table_.fields[i], row[i]);
  event.index = cursor_++;
  return true;
}

ThresholdFilter::ThresholdFilter() : Algorithm("ThresholdFilter") {
  declare("Field", "f0");
  declare("Min", 0.0);
}

bool ThresholdFilter::execute(Job&, EventRecord const& event) {
  auto const* v = event.find(get_text("Field"));
  if (v == nullptr) {
    throw Error(ErrorCode::AlgorithmFailure,
                "ThresholdFilter: event " + std::to_string(event.index) + " has no field '" +
                    get_text("Field") + "'");
  }
  return *v >= get_float("Min");
}

Accumulator::Accumulator() : Algorithm("Accumulator") { declare("Field", "f0"); }

bool Accumulator::execute(Job&, EventRecord const& event) {
  auto const* v = event.find(get_text("Field"));
  if (v == nullptr) {
    throw Error(ErrorCode::AlgorithmFailure,
                "Accumulator: event " + std::to_string(event.index) + " has no field '" +
                    get_text("Field") + "'");
  }
  sum_ += *v;
  ++count_;
  return true;
}

void Accumulator::finalize(Job& job) {
  std::string payload;
  for (std::size_t i = 0; i < 8; ++i) payload += static_cast<char>((count_ >> (8 * i)) & 0xFF);
  append_event(payload, std::span(&sum_, 1));
  job.services().writer().add_block(std::string(kSummaryBlock), std::move(payload));
}

// --- catalogue ------------------------------------------------------------

void Catalog::add(std::string name, ComponentKind kind, Factory factory) {
  entries_.insert_or_assign(std::move(name), Entry{kind, std::move(factory)});
}

bool Catalog::contains(std::string_view name) const { return entries_.find(name) != entries_.end(); }

std::optional<ComponentKind> Catalog::kind_of(std::string_view name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) return std::nullopt;
  return it->second.kind;
}

std::unique_ptr<Component> Catalog::create(std::string_view name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw Error(ErrorCode::UnknownComponent, "'" + std::string(name) + "' is not catalogued");
  }
  auto c = it->second.factory();
  if (c->name() != name) {
    throw Error(ErrorCode::InvalidValue,
                "catalogue entry '" + std::string(name) + "' built '" + c->name() + "'");
  }
  return c;
}

Catalog Catalog::standard() {
  Catalog c;
  c.add<RandomEventSource>("RandomEventSource", ComponentKind::Algorithm);
  c.add<FileEventSource>("FileEventSource", ComponentKind::Algorithm);
  c.add<ThresholdFilter>("ThresholdFilter", ComponentKind::Algorithm);
  c.add<Accumulator>("Accumulator", ComponentKind::Algorithm);
  c.add<MetaDataSvc>(std::string(kMetaDataSvc), ComponentKind::Service);
  c.add<DemoTool>("DemoTool", ComponentKind::Tool);
  return c;
}

// --- job ------------------------------------------------------------------

Job::~Job() = default;

Algorithm* Job::find_algorithm(std::string_view name) const noexcept {
  for (auto const& a : algorithms_) {
    if (a->name() == name) return a.get();
  }
  return nullptr;
}

MetaDataSvc* Job::metadata_service() const noexcept {
  return dynamic_cast<MetaDataSvc*>(registry_->find(kMetaDataSvc));
}

void Job::add_lineage(std::string path, std::uint32_t checksum) {
  lineage_.push_back({lineage_.size(), std::move(path), checksum});
}

void Job::fail(std::string_view phase, Error const& e) {
  if (!report_.error_code) {
    report_.error_code = e.code();
    report_.error_message = e.what();
    report_.failed_phase = std::string(phase);
  }
  registry_->message().log(MsgLevel::Error, kApplicationMgr,
                           std::string(phase) + " failed: " + e.what());
}

void Job::fail(std::string_view phase, std::exception const& e) {
  fail(phase, Error(ErrorCode::AlgorithmFailure, e.what()));
}

Job build_job(OptionsSet config, Catalog const& catalog, JobEnvironment env) {
  Job job;
  job.app_ = std::make_unique<ApplicationMgr>();
  job.registry_ = std::make_unique<ServiceRegistry>();
  job.catalog_ = std::make_shared<Catalog const>(catalog);

  auto& registry = *job.registry_;
  if (env.quiet) registry.message().set_sink(nullptr);
  else if (env.log_sink != nullptr) registry.message().set_sink(env.log_sink);

  for (char const* key : {"TopAlg", "Services"}) {
    if (auto const* v = config.find(std::string(kApplicationMgr) + "." + key)) {
      job.app_->set_property(key, *v);
    }
  }

  std::set<std::string, std::less<>> names = {std::string(kApplicationMgr)};
  for (auto const& s : registry.services()) names.insert(s->name());

  auto check_name = [&](std::string const& name) {
    if (name == kProvenanceNamespace) {
      throw Error(ErrorCode::ReservedNamespace,
                  "'" + name + "' is reserved for lineage records");
    }
  };

  std::set<std::string, std::less<>> listed_services;
  for (auto const& name : job.app_->services()) {
    check_name(name);
    if (!listed_services.insert(name).second) {
      throw Error(ErrorCode::DuplicateComponent, "service '" + name + "' listed twice");
    }
    if (ServiceRegistry::is_standard(name)) continue;
    if (catalog.kind_of(name) != ComponentKind::Service) {
      throw Error(ErrorCode::UnknownComponent, "'" + name + "' is not a catalogued service");
    }
    if (!names.insert(name).second) {
      throw Error(ErrorCode::DuplicateComponent, "component '" + name + "' appears twice");
    }
    auto component = catalog.create(name);
    auto* service = dynamic_cast<Service*>(component.get());
    if (service == nullptr) {
      throw Error(ErrorCode::UnknownComponent, "'" + name + "' is not a service");
    }
    component.release();
    registry.add(std::unique_ptr<Service>(service));
  }

  for (auto const& name : job.app_->top_algorithms()) {
    check_name(name);
    if (catalog.kind_of(name) != ComponentKind::Algorithm) {
      throw Error(ErrorCode::UnknownComponent, "'" + name + "' is not a catalogued algorithm");
    }
    if (!names.insert(name).second) {
      throw Error(ErrorCode::DuplicateComponent, "component '" + name + "' appears twice");
    }
    auto component = catalog.create(name);
    auto* algorithm = dynamic_cast<Algorithm*>(component.get());
    if (algorithm == nullptr) {
      throw Error(ErrorCode::UnknownComponent, "'" + name + "' is not an algorithm");
    }
    component.release();
    job.algorithms_.emplace_back(algorithm);
  }

  registry.job_options().load(std::move(config));
  auto shared_catalog = job.catalog_;
  registry.tools().configure(
      [shared_catalog](std::string_view name) -> std::unique_ptr<Tool> {
        if (shared_catalog->kind_of(name) != ComponentKind::Tool) return nullptr;
        auto component = shared_catalog->create(name);
        auto* tool = dynamic_cast<Tool*>(component.get());
        if (tool == nullptr) return nullptr;
        component.release();
        return std::unique_ptr<Tool>(tool);
      },
      &registry.job_options().config());
  return job;
}

namespace {

struct LineageClaim {
  std::optional<std::string> path;
  std::optional<std::uint32_t> checksum;
};

/// Reads `Provenance.Inputs.<n>.{Path,Checksum}` assertions from the config.
std::map<std::size_t, LineageClaim> lineage_claims(OptionsSet const& config) {
  std::map<std::size_t, LineageClaim> claims;
  for (auto const& [key, value] : config) {
    if (key.component() != kProvenanceNamespace) continue;
    auto const& prop = key.property();
    std::string_view rest = prop;
    constexpr std::string_view prefix = "Inputs.";
    auto const bad = [&] {
      return Error(ErrorCode::UnknownProperty, "'" + key.full() + "' is not a lineage key");
    };
    if (!rest.starts_with(prefix)) throw bad();
    rest.remove_prefix(prefix.size());
    auto const dot = rest.find('.');
    if (dot == std::string_view::npos) throw bad();
    auto const index_text = rest.substr(0, dot);
    auto const field = rest.substr(dot + 1);
    std::size_t index = 0;
    for (char c : index_text) {
      if (c < '0' || c > '9') throw bad();
      index = index * 10 + static_cast<std::size_t>(c - '0');
    }
    if (field == "Path") {
      if (!value.is_text()) throw Error(ErrorCode::KindMismatch, key.full() + " expects Text");
      claims[index].path = value.as_text();
    } else if (field == "Checksum") {
      if (!value.is_integer() || value.as_integer() < 0 || value.as_integer() > 0xFFFFFFFFll) {
        throw Error(ErrorCode::KindMismatch, key.full() + " expects a 32-bit unsigned Integer");
      }
      claims[index].checksum = static_cast<std::uint32_t>(value.as_integer());
    } else {
      throw bad();
    }
  }
  std::size_t expected = 0;
  for (auto const& [index, claim] : claims) {
    if (index != expected++ || !claim.path || !claim.checksum) {
      throw Error(ErrorCode::UnknownProperty, "lineage records must be dense and complete");
    }
  }
  return claims;
}

void verify_lineage_sources(std::map<std::size_t, LineageClaim> const& claims) {
  for (auto const& [index, claim] : claims) {
    std::error_code ec;
    if (!std::filesystem::exists(*claim.path, ec)) {
      throw Error(ErrorCode::LineageMissing, "input " + std::to_string(index) + " '" +
                                                 *claim.path + "' no longer exists");
    }
    ContainerReader reader{std::filesystem::path(*claim.path)};
    auto const* entry = reader.find(kEventsBlock);
    if (entry == nullptr || entry->crc32c != *claim.checksum) {
      throw Error(ErrorCode::LineageMismatch,
                  "input " + std::to_string(index) + " '" + *claim.path +
                      "' differs from the recorded checksum");
    }
  }
}

}  // namespace

PhaseStatus initialize(Job& job) {
  auto& report = job.report_;
  if (report.initialize != PhaseStatus::NotRun) return report.initialize;
  auto& registry = *job.registry_;
  try {
    std::vector<Component*> others{job.app_.get()};
    for (auto const& a : job.algorithms_) others.push_back(a.get());
    apply_options(registry, registry.job_options().config(), others);

    auto const claims = lineage_claims(job.config());
    verify_lineage_sources(claims);

    for (auto const& s : registry.services()) {
      s->activate(job);
      job.activated_.push_back(s.get());
      job.trace_.push_back("activate:" + s->name());
    }

    for (std::size_t i = 0; i < job.algorithms_.size(); ++i) {
      auto& a = *job.algorithms_[i];
      if (i > 0 && dynamic_cast<EventSource*>(&a) != nullptr) {
        throw Error(ErrorCode::InvalidValue, a.name() + " is an event source and must come first");
      }
      a.initialize(job);
      job.trace_.push_back("initialize:" + a.name());
    }

    // A config without lineage records (a hand-written one) asserts nothing.
    if (!claims.empty() && claims.size() != job.lineage_.size()) {
      throw Error(ErrorCode::LineageMismatch, "recorded inputs do not match the configured sources");
    }
    for (auto const& l : claims.empty() ? std::vector<InputLineage>{} : job.lineage_) {
      auto const& claim = claims.at(l.ordinal);
      if (*claim.path != l.path || *claim.checksum != l.checksum) {
        throw Error(ErrorCode::LineageMismatch,
                    "input " + std::to_string(l.ordinal) + " does not match its record");
      }
    }

    if (job.msg().enabled(static_cast<int>(MsgLevel::Info))) {
      auto const now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
      char stamp[32];
      std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
      job.msg().log(MsgLevel::Info, kApplicationMgr, std::string("job initialized at ") + stamp);
    }
    report.initialize = PhaseStatus::Ok;
  } catch (Error const& e) {
    job.fail("initialize", e);
    report.initialize = PhaseStatus::Failed;
  } catch (std::exception const& e) {
    job.fail("initialize", e);
    report.initialize = PhaseStatus::Failed;
  }
  return report.initialize;
}

PhaseStatus execute(Job& job) {
  auto& report = job.report_;
  if (report.execute != PhaseStatus::NotRun) return report.execute;
  if (report.initialize != PhaseStatus::Ok) {
    report.execute = PhaseStatus::Skipped;
    return report.execute;
  }
  job.trace_.push_back("execute");
  auto& registry = *job.registry_;
  auto& events = registry.event_data();
  try {
    auto* source = job.algorithms_.empty() ? nullptr
                                           : dynamic_cast<EventSource*>(job.algorithms_.front().get());
    events.set_schema(source ? source->schema() : std::vector<std::string>{});
    if (source == nullptr) {
      job.msg().log(MsgLevel::Warning, kApplicationMgr, "no event source; zero events processed");
    }
    registry.writer().open(job.app_->output_file(), events.schema());
    report.output_path = job.app_->output_file();

    std::vector<double> row;
    auto& record = events.current();
    while (source != nullptr && source->next(record)) {
      ++report.events_seen;
      bool kept = true;
      for (std::size_t i = 1; i < job.algorithms_.size() && kept; ++i) {
        try {
          kept = job.algorithms_[i]->execute(job, record);
        } catch (Error const&) {
          throw;
        } catch (std::exception const& e) {
          throw Error(ErrorCode::AlgorithmFailure, job.algorithms_[i]->name() + ": " + e.what());
        }
      }
      if (!kept) continue;
      row.clear();
      for (auto const& f : record.fields) row.push_back(f.second);
      registry.writer().write_event(row);
      ++report.events_written;
    }
    report.execute = PhaseStatus::Ok;
  } catch (Error const& e) {
    job.fail("execute", e);
    report.execute = PhaseStatus::Failed;
  } catch (std::exception const& e) {
    job.fail("execute", e);
    report.execute = PhaseStatus::Failed;
  }
  return report.execute;
}

PhaseStatus finalize(Job& job) {
  auto& report = job.report_;
  if (job.finalized_) return report.finalize;
  job.finalized_ = true;
  job.trace_.push_back("finalize");
  auto& registry = *job.registry_;

  auto stop_services = [&] {
    for (auto it = job.activated_.rbegin(); it != job.activated_.rend(); ++it) {
      try {
        (*it)->deactivate(job);
      } catch (std::exception const& e) {
        job.fail("finalize", e);
      }
      job.trace_.push_back("deactivate:" + (*it)->name());
    }
    job.activated_.clear();
  };

  if (report.initialize != PhaseStatus::Ok) {
    registry.writer().discard();
    stop_services();
    report.finalize = PhaseStatus::Skipped;
    return report.finalize;
  }

  try {
    for (auto const& a : job.algorithms_) {
      a->finalize(job);
      job.trace_.push_back("finalize:" + a->name());
    }
    auto& writer = registry.writer();
    if (!writer.is_open()) {
      writer.open(job.app_->output_file(), registry.event_data().schema());
      report.output_path = job.app_->output_file();
    }

    std::optional<std::string> info;
    if (auto* metadata = job.metadata_service()) {
      metadata->start(job);
      job.trace_.push_back("capture");
      info = metadata->get_metadata().emit();
    }
    auto const toc = writer.commit(std::move(info));
    for (auto const& e : toc) {
      if (e.name == kEventsBlock) report.payload_checksum = e.crc32c;
      if (e.name == kInfoBlock) report.info_written = true;
    }
    report.finalize = PhaseStatus::Ok;
  } catch (Error const& e) {
    registry.writer().discard();
    job.fail("finalize", e);
    report.finalize = PhaseStatus::Failed;
  } catch (std::exception const& e) {
    registry.writer().discard();
    job.fail("finalize", e);
    report.finalize = PhaseStatus::Failed;
  }
  stop_services();
  return report.finalize;
}

JobReport run_job(Job& job) {
  if (initialize(job) == PhaseStatus::Ok) execute(job);
  finalize(job);
  return job.report();
}

}  // namespace provkit
