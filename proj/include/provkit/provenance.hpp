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
#include <optional>
#include <string>
#include <string_view>

#include "provkit/metadata.hpp"
#include "provkit/options.hpp"
#include "provkit/services.hpp"

namespace provkit {

class Job;

inline constexpr std::string_view kMetaDataSvc = "MetaDataSvc";

/// Identity of one consumed input dataset. Ordinals are dense from 0 in
/// configuration order.
struct InputLineage {
  std::size_t ordinal = 0;
  std::string path;
  std::uint32_t checksum = 0;  // CRC32C of the input's `events` block

  friend bool operator==(InputLineage const&, InputLineage const&) = default;
};

std::string lineage_path_key(std::size_t ordinal);
std::string lineage_checksum_key(std::size_t ordinal);

/// True iff `ApplicationMgr.Services` lists MetaDataSvc.
bool is_enabled(OptionsSet const& config);

/// Snapshots the fully resolved job configuration at finalize.
class MetaDataSvc final : public Service {
 public:
  MetaDataSvc();

  /// Runs collect_data once; later calls leave the snapshot unchanged.
  void start(Job const& job);

  /// Every declared property of the manager, every service, every
  /// instantiated tool and every algorithm, at its resolved value, plus
  /// input lineage. Any logged job-options assignment not already covered
  /// is added as well.
  MetadataDictionary collect_data(Job const& job) const;

  /// Throws Error{NotCollected} before start().
  MetadataDictionary const& get_metadata() const;
  bool collected() const noexcept { return metadata_.has_value(); }

 protected:
  void validate(PropertySpec const& spec, OptionValue const& value) const override;

 private:
  std::optional<MetadataDictionary> metadata_;
};

}  // namespace provkit
