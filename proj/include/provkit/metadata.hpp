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

#include <map>
#include <string>
#include <string_view>

#include "provkit/options.hpp"

namespace provkit {

/// Flat snapshot of a job's resolved configuration: full dotted key to
/// canonical value text, ordered by key bytes. Stored in a container's
/// `info` block as a canonical options document.
class MetadataDictionary {
 public:
  using Map = std::map<std::string, std::string>;

  MetadataDictionary() = default;
  static MetadataDictionary from_options(OptionsSet const& set);

  void set(OptionKey const& key, OptionValue const& value);
  std::string const* find(std::string_view key) const;
  bool erase(std::string_view key);

  /// Types are recovered through the options grammar.
  OptionsSet to_options() const;
  /// Canonical options document; equal dictionaries yield equal bytes.
  std::string emit() const;

  Map const& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(MetadataDictionary const&, MetadataDictionary const&) = default;

 private:
  Map entries_;
};

}  // namespace provkit
