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

#include <doctest.h>

#include <sstream>

#include "provkit/core.hpp"
#include "provkit/error.hpp"
#include "provkit/services.hpp"
#include "test_support.hpp"

using namespace provkit;

namespace {

ErrorCode apply_error(ServiceRegistry& registry, std::string_view text,
                      std::span<Component* const> others = {}) {
  try {
    apply_options(registry, parse_options(text), others);
  } catch (Error const& e) {
    return e.code();
  }
  FAIL("apply succeeded: " << text);
  return ErrorCode::IoFailure;
}

}  // namespace

TEST_CASE("registry holds the standard services in order") {
  ServiceRegistry r;
  std::vector<std::string> names;
  for (auto const& s : r.services()) names.push_back(s->name());
  CHECK(names == std::vector<std::string>{"MessageSvc", "JobOptionsSvc", "ToolSvc",
                                          "EventDataSvc", "ContainerWriterSvc"});
  CHECK(r.message().get_integer("OutputLevel") == 3);
  CHECK_THROWS_AS(r.add(std::make_unique<MessageSvc>()), Error);
}

TEST_CASE("apply_options: log of exactly the matching assignments") {
  ServiceRegistry r;
  ApplicationMgr app;
  Component* others[] = {&app};
  auto const config = parse_options(
      "MessageSvc.OutputLevel = 2\nApplicationMgr.AppName = \"DaVinci\"\nEventDataSvc.RootName = \"/E\"\n");
  auto const log = apply_options(r, config, others);
  REQUIRE(log.size() == 3);
  CHECK(log[0].first.full() == "ApplicationMgr.AppName");
  CHECK(r.message().get_integer("OutputLevel") == 2);
  CHECK(app.get_text("AppName") == "DaVinci");
  CHECK(r.job_options().applied() == log);

  ServiceRegistry empty;
  CHECK(apply_options(empty, OptionsSet{}).empty());
}

TEST_CASE("apply_options: errors") {
  ServiceRegistry r;
  CHECK(apply_error(r, "Ghost.X = 1") == ErrorCode::UnknownComponent);
  CHECK(apply_error(r, "MessageSvc.Nope = 1") == ErrorCode::UnknownProperty);
  CHECK(apply_error(r, "MessageSvc.OutputLevel = \"x\"") == ErrorCode::KindMismatch);
  CHECK(apply_error(r, "MessageSvc.OutputLevel = 2.0") == ErrorCode::KindMismatch);
}

TEST_CASE("apply_options: lineage keys are skipped") {
  ServiceRegistry r;
  auto const log = apply_options(r, parse_options("Provenance.Inputs.0.Path = \"a\"\n"));
  CHECK(log.empty());
}

TEST_CASE("apply_options: randomized valid configs log every assignment") {
  testing::Generator g(31);
  for (int trial = 0; trial < 100; ++trial) {
    ServiceRegistry r;
    ApplicationMgr app;
    Component* others[] = {&app};
    r.tools().configure([](std::string_view n) -> std::unique_ptr<Tool> {
      if (n == "DemoTool") return std::make_unique<DemoTool>();
      return nullptr;
    }, &r.job_options().config());
    auto const n = g.below(51);
    OptionsSet config;
    for (std::size_t i = 0; i < n; ++i) {
      switch (g.below(5)) {
        case 0: config.set("MessageSvc.OutputLevel", static_cast<std::int64_t>(g.below(5))); break;
        case 1: config.set("ApplicationMgr.AppName", g.text()); break;
        case 2: config.set("ApplicationMgr.AppVersion", g.text()); break;
        case 3: config.set("DemoTool.Gain", g.finite_double()); break;
        default: config.set("EventDataSvc.RootName", g.text()); break;
      }
    }
    auto const log = apply_options(r, config, others);
    CHECK(log.size() == config.size());
  }
}

TEST_CASE("MessageSvc threshold") {
  MessageSvc m;
  std::ostringstream os;
  m.set_sink(&os);
  m.log(2, "Alg", "quiet");
  CHECK(os.str().empty());
  m.log(3, "Alg", "loud");
  CHECK(os.str() == "Alg WARNING loud\n");
  m.set_property("OutputLevel", 0);
  os.str("");
  m.log(0, "Alg", "debug");
  m.log(MsgLevel::Error, "Alg", "bad");
  CHECK(os.str() == "Alg DEBUG debug\nAlg ERROR bad\n");
}

TEST_CASE("ToolSvc: single shared instance, unknown tools, options") {
  OptionsSet opts = parse_options("DemoTool.Gain = 2.5\n");
  ToolSvc tools;
  tools.configure([](std::string_view n) -> std::unique_ptr<Tool> {
    if (n == "DemoTool") return std::make_unique<DemoTool>();
    return nullptr;
  }, &opts);
  auto& a = tools.retrieve("DemoTool");
  auto& b = tools.retrieve("DemoTool");
  CHECK(&a == &b);
  CHECK(tools.tools().size() == 1);
  CHECK(dynamic_cast<DemoTool&>(a).gain() == 2.5);
  CHECK(dynamic_cast<DemoTool&>(a).apply(2.0) == 5.0);
  try {
    tools.retrieve("Nope");
    FAIL("no error");
  } catch (Error const& e) {
    CHECK(e.code() == ErrorCode::UnknownTool);
  }
}

TEST_CASE("service activation order and reverse deactivation") {
  auto job = build_job(parse_options(
      "ApplicationMgr.Services = [\"MetaDataSvc\"]\nApplicationMgr.OutputFile = \"svc_order.pdc\"\n"),
      Catalog::standard(), JobEnvironment{nullptr, true});
  run_job(job);
  std::vector<std::string> activated, deactivated;
  for (auto const& t : job.trace()) {
    if (t.starts_with("activate:")) activated.push_back(t.substr(9));
    if (t.starts_with("deactivate:")) deactivated.push_back(t.substr(11));
  }
  std::vector<std::string> const expected = {"MessageSvc", "JobOptionsSvc", "ToolSvc",
                                             "EventDataSvc", "ContainerWriterSvc", "MetaDataSvc"};
  CHECK(activated == expected);
  CHECK(std::equal(deactivated.begin(), deactivated.end(), expected.rbegin(), expected.rend()));
  std::filesystem::remove("svc_order.pdc");
}
