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

#include "provkit/provenance.hpp"

#include <algorithm>

#include "provkit/core.hpp"
#include "provkit/error.hpp"

namespace provkit {

std::string lineage_path_key(std::size_t ordinal) {
  return std::string(kProvenanceNamespace) + ".Inputs." + std::to_string(ordinal) + ".Path";
}

std::string lineage_checksum_key(std::size_t ordinal) {
  return std::string(kProvenanceNamespace) + ".Inputs." + std::to_string(ordinal) + ".Checksum";
}

bool is_enabled(OptionsSet const& config) {
  auto const* services = config.find(std::string(kApplicationMgr) + ".Services");
  if (services == nullptr || !services->is_list()) return false;
  auto const& items = services->as_list().items();
  return std::any_of(items.begin(), items.end(), [](Scalar const& s) {
    auto const* text = std::get_if<std::string>(&s);
    return text != nullptr && *text == kMetaDataSvc;
  });
}

MetaDataSvc::MetaDataSvc() : Service(std::string(kMetaDataSvc)) { declare("Enabled", true); }

void MetaDataSvc::validate(PropertySpec const& spec, OptionValue const& value) const {
  if (spec.name == "Enabled" && !value.as_boolean()) {
    throw Error(ErrorCode::InvalidValue,
                "MetaDataSvc.Enabled cannot be false; remove MetaDataSvc from "
                "ApplicationMgr.Services to disable capture");
  }
}

void MetaDataSvc::start(Job const& job) {
  if (metadata_) return;
  metadata_ = collect_data(job);
}

MetadataDictionary MetaDataSvc::collect_data(Job const& job) const {
  MetadataDictionary d;
  auto capture = [&d](Component const& c) {
    for (auto const& p : c.properties()) d.set(OptionKey(c.name(), p.name), p.applied);
  };

  capture(job.app());
  for (auto const& s : job.services().services()) capture(*s);
  for (auto const& t : job.services().tools().tools()) capture(*t);
  for (auto const& a : job.algorithms()) capture(*a);

  for (auto const& l : job.lineage()) {
    d.set(OptionKey::parse(lineage_path_key(l.ordinal)), OptionValue(l.path));
    d.set(OptionKey::parse(lineage_checksum_key(l.ordinal)),
          OptionValue(static_cast<std::int64_t>(l.checksum)));
  }

  for (auto const& [key, value] : job.applied_log()) {
    if (d.find(key.full()) == nullptr) d.set(key, value);
  }
  return d;
}

MetadataDictionary const& MetaDataSvc::get_metadata() const {
  if (!metadata_) throw Error(ErrorCode::NotCollected, "MetaDataSvc::start has not run");
  return *metadata_;
}

}  // namespace provkit
