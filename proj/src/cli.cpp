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

#include "provkit/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "provkit/container.hpp"

namespace provkit {

namespace fs = std::filesystem;

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::LineageMissing:
    case ErrorCode::LineageMismatch:
    case ErrorCode::ReplayMismatch:
    case ErrorCode::ChecksumMismatch:
      return kExitVerification;
    default:
      return kExitError;
  }
}

DiffReport diff_metadata(MetadataDictionary const& left, MetadataDictionary const& right) {
  DiffReport r;
  auto l = left.begin();
  auto rt = right.begin();
  while (l != left.end() || rt != right.end()) {
    if (rt == right.end() || (l != left.end() && l->first < rt->first)) {
      r.only_left.push_back(l->first);
      ++l;
    } else if (l == left.end() || rt->first < l->first) {
      r.only_right.push_back(rt->first);
      ++rt;
    } else {
      if (l->second != rt->second) r.changed.push_back({l->first, l->second, rt->second});
      ++l;
      ++rt;
    }
  }
  return r;
}

namespace {

std::string display_value(std::string const& canonical) {
  try {
    auto v = text_to_value(canonical);
    if (v.is_text()) return v.as_text();
  } catch (Error const&) {
  }
  return canonical;
}

}  // namespace

std::string render_table(MetadataDictionary const& d) {
  std::size_t width = 3;
  for (auto const& [key, _] : d) width = std::max(width, key.size());
  std::ostringstream os;
  auto row = [&](std::string_view k, std::string_view v) {
    os << k << std::string(width - k.size(), ' ') << " | " << v << '\n';
  };
  row("key", "value");
  os << std::string(width, '-') << "-+-" << std::string(5, '-') << '\n';
  for (auto const& [key, value] : d) row(key, display_value(value));
  return os.str();
}

std::string render_tsv(MetadataDictionary const& d) {
  std::string out;
  for (auto const& [key, value] : d) out += key + '\t' + value + '\n';
  return out;
}

std::string render_diff(DiffReport const& report) {
  if (report.empty()) return "no differences\n";
  std::ostringstream os;
  for (auto const& k : report.only_left) os << "only in left:  " << k << '\n';
  for (auto const& k : report.only_right) os << "only in right: " << k << '\n';
  for (auto const& c : report.changed) os << "changed:       " << c.key << ": " << c.left << " -> " << c.right << '\n';
  return os.str();
}

std::string render_report(JobReport const& report) {
  std::ostringstream os;
  os << "initialize:     " << to_string(report.initialize) << '\n'
     << "execute:        " << to_string(report.execute) << '\n'
     << "finalize:       " << to_string(report.finalize) << '\n'
     << "events_seen:    " << report.events_seen << '\n'
     << "events_written: " << report.events_written << '\n'
     << "output:         " << report.output_path << '\n';
  if (report.payload_checksum) {
    char hex[16];
    std::snprintf(hex, sizeof(hex), "0x%08x", *report.payload_checksum);
    os << "events_crc32c:  " << hex << '\n';
  }
  os << "provenance:     " << (report.info_written ? "recorded" : "none") << '\n';
  return os.str();
}

RunResult run_config(OptionsSet config, Catalog const& catalog, JobEnvironment env) {
  auto job = build_job(std::move(config), catalog, env);
  RunResult result;
  result.report = run_job(job);
  result.applied = job.applied_log();
  if (auto* metadata = job.metadata_service(); metadata && metadata->collected()) {
    result.metadata = metadata->get_metadata();
  }
  return result;
}

OptionsSet replay_config(MetadataDictionary const& info, fs::path const& out) {
  auto config = info.to_options();
  config.set(std::string(kApplicationMgr) + ".OutputFile", OptionValue(out.string()));
  return config;
}

void verify_lineage(MetadataDictionary const& info) {
  for (std::size_t n = 0;; ++n) {
    auto const* path_text = info.find(lineage_path_key(n));
    auto const* sum_text = info.find(lineage_checksum_key(n));
    if (path_text == nullptr && sum_text == nullptr) break;
    if (path_text == nullptr || sum_text == nullptr) {
      throw Error(ErrorCode::LineageMismatch, "incomplete lineage record " + std::to_string(n));
    }
    auto const path = text_to_value(*path_text).as_text();
    auto const expected = text_to_value(*sum_text).as_integer();
    std::error_code ec;
    if (!fs::exists(path, ec)) {
      throw Error(ErrorCode::LineageMissing, "input '" + path + "' no longer exists");
    }
    ContainerReader reader{fs::path(path)};
    auto const* entry = reader.find(kEventsBlock);
    if (entry == nullptr || static_cast<std::int64_t>(entry->crc32c) != expected) {
      throw Error(ErrorCode::LineageMismatch, "input '" + path + "' changed since it was consumed");
    }
  }
}

RunResult replay(fs::path const& container, fs::path const& out, Catalog const& catalog,
                 JobEnvironment env) {
  ContainerReader reader(container);
  auto const original = extract_info(reader);
  auto const* original_events = reader.find(kEventsBlock);
  verify_lineage(original);

  auto result = run_config(replay_config(original, out), catalog, env);
  if (!result.report.ok()) {
    throw Error(result.report.error_code.value_or(ErrorCode::AlgorithmFailure),
                "replay run failed in " + result.report.failed_phase + ": " +
                    result.report.error_message);
  }
  if (original_events == nullptr || result.report.payload_checksum != original_events->crc32c) {
    throw Error(ErrorCode::ReplayMismatch, "replayed events differ from the original");
  }
  auto const output_key = std::string(kApplicationMgr) + ".OutputFile";
  auto lhs = original;
  auto rhs = result.metadata.value_or(MetadataDictionary{});
  lhs.erase(output_key);
  rhs.erase(output_key);
  if (!(lhs == rhs)) {
    throw Error(ErrorCode::ReplayMismatch, "replayed provenance differs from the original");
  }
  return result;
}

namespace {

std::string read_file(fs::path const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(fs::path const& path, std::string const& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCode::WriteFailure, "cannot write " + path.string());
}

int report_exit(JobReport const& report, std::ostream& err) {
  if (report.ok()) return kExitOk;
  err << "error in " << report.failed_phase << " phase: " << report.error_message << '\n';
  return exit_code_for(report.error_code.value_or(ErrorCode::AlgorithmFailure));
}

}  // namespace

int cmd_run(fs::path const& config_path, std::ostream& out, std::ostream& err) {
  OptionsSet config;
  try {
    config = parse_options(read_file(config_path));
  } catch (Error const& e) {
    err << "error reading " << config_path.string() << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  try {
    auto result = run_config(std::move(config), Catalog::standard(), JobEnvironment{&err});
    out << render_report(result.report);
    return report_exit(result.report, err);
  } catch (Error const& e) {
    err << "error in initialize phase: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

int cmd_view(fs::path const& container, std::string const& format, std::ostream& out,
             std::ostream& err) {
  try {
    auto const info = extract_info(container);
    out << (format == "tsv" ? render_tsv(info) : render_table(info));
    return kExitOk;
  } catch (Error const& e) {
    if (e.code() == ErrorCode::MissingInfo) err << container.string() << ": no provenance recorded\n";
    else err << container.string() << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

int cmd_export(fs::path const& container, fs::path const& dest, std::ostream& out,
               std::ostream& err) {
  try {
    auto const info = extract_info(container);
    write_file(dest, info.emit());
    out << "exported " << info.size() << " options to " << dest.string() << '\n';
    return kExitOk;
  } catch (Error const& e) {
    if (e.code() == ErrorCode::MissingInfo) err << container.string() << ": no provenance recorded\n";
    else err << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

int cmd_replay(fs::path const& container, fs::path const& dest, std::ostream& out,
               std::ostream& err) {
  try {
    auto result = replay(container, dest, Catalog::standard(), JobEnvironment{&err});
    out << render_report(result.report);
    out << "replay verified: events and provenance match " << container.string() << '\n';
    return kExitOk;
  } catch (Error const& e) {
    if (e.code() == ErrorCode::MissingInfo) err << container.string() << ": no provenance recorded\n";
    else err << "replay failed: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

int cmd_diff(fs::path const& a, fs::path const& b, std::ostream& out, std::ostream& err) {
  MetadataDictionary left, right;
  for (auto const& [path, dict] : {std::pair{&a, &left}, std::pair{&b, &right}}) {
    try {
      *dict = extract_info(*path);
    } catch (Error const& e) {
      if (e.code() == ErrorCode::MissingInfo) err << path->string() << ": no provenance recorded\n";
      else err << path->string() << ": " << e.what() << '\n';
      return exit_code_for(e.code());
    }
  }
  auto const report = diff_metadata(left, right);
  out << render_diff(report);
  return report.empty() ? kExitOk : kExitError;
}

int cli_main(int argc, char const* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"provkit: provenance-capturing job runner"};
  app.require_subcommand(1);

  std::string config, container, dest, format = "table", left, right;

  auto* run = app.add_subcommand("run", "Run a job from an options file");
  run->add_option("config", config, "Options file")->required();

  auto* view = app.add_subcommand("view", "Print the provenance stored in a container");
  view->add_option("container", container)->required();
  view->add_option("--format", format, "table or tsv")
      ->check(CLI::IsMember({"table", "tsv"}))
      ->capture_default_str();

  auto* exp = app.add_subcommand("export", "Write the stored provenance as a flat options file");
  exp->add_option("container", container)->required();
  exp->add_option("out", dest)->required();

  auto* rep = app.add_subcommand("replay", "Re-run the job recorded in a container and verify it");
  rep->add_option("container", container)->required();
  rep->add_option("out", dest)->required();

  auto* dif = app.add_subcommand("diff", "Compare the provenance of two containers");
  dif->add_option("a", left)->required();
  dif->add_option("b", right)->required();

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
  }

  if (*run) return cmd_run(config, out, err);
  if (*view) return cmd_view(container, format, out, err);
  if (*exp) return cmd_export(container, dest, out, err);
  if (*rep) return cmd_replay(container, dest, out, err);
  if (*dif) return cmd_diff(left, right, out, err);
  return kExitError;
}

}  // namespace provkit
