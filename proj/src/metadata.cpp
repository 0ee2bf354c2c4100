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

#include "provkit/metadata.hpp"

namespace provkit {

MetadataDictionary MetadataDictionary::from_options(OptionsSet const& set) {
  MetadataDictionary d;
  for (auto const& [key, value] : set) d.set(key, value);
  return d;
}

void MetadataDictionary::set(OptionKey const& key, OptionValue const& value) {
  entries_.insert_or_assign(key.full(), value_to_text(value));
}

std::string const* MetadataDictionary::find(std::string_view key) const {
  auto it = entries_.find(std::string(key));
  return it == entries_.end() ? nullptr : &it->second;
}

bool MetadataDictionary::erase(std::string_view key) {
  return entries_.erase(std::string(key)) > 0;
}

OptionsSet MetadataDictionary::to_options() const {
  OptionsSet out;
  for (auto const& [key, text] : entries_) out.set(key, text_to_value(text));
  return out;
}

std::string MetadataDictionary::emit() const {
  std::string out;
  for (auto const& [key, text] : entries_) {
    out += key;
    out += " = ";
    out += text;
    out += '\n';
  }
  return out;
}

}  // namespace provkit
