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
#include <vector>

#include "provkit/options.hpp"

namespace provkit {

enum class ComponentKind : std::uint8_t { Manager, Algorithm, Service, Tool };

std::string_view to_string(ComponentKind kind) noexcept;

/// Declared type of a property. List properties also fix the element kind;
/// an empty list value is accepted for any element kind.
struct PropertyType {
  ValueKind kind = ValueKind::Integer;
  std::optional<ValueKind> element;

  bool accepts(OptionValue const& v) const noexcept;
  std::string describe() const;
};

struct PropertySpec {
  std::string name;
  PropertyType type;
  OptionValue default_value;
  OptionValue applied;  // equals default_value until an assignment lands
};

/// A named, configurable framework piece: the application manager, an
/// algorithm, a service or a tool.
class Component {
 public:
  Component(std::string name, ComponentKind kind);
  virtual ~Component() = default;
  Component(Component const&) = delete;
  Component& operator=(Component const&) = delete;

  std::string const& name() const noexcept { return name_; }
  ComponentKind kind() const noexcept { return kind_; }

  std::vector<PropertySpec> const& properties() const noexcept { return properties_; }
  PropertySpec const* property(std::string_view name) const noexcept;

  /// Throws UnknownProperty, KindMismatch or InvalidValue.
  void set_property(std::string_view name, OptionValue value);

  OptionValue const& get(std::string_view name) const;
  std::int64_t get_integer(std::string_view name) const { return get(name).as_integer(); }
  double get_float(std::string_view name) const { return get(name).as_float(); }
  bool get_boolean(std::string_view name) const { return get(name).as_boolean(); }
  std::string const& get_text(std::string_view name) const { return get(name).as_text(); }

 protected:
  void declare(std::string name, OptionValue default_value);
  void declare_list(std::string name, ValueKind element, ValueList default_value = {});

  /// Hook for value constraints beyond the declared kind.
  virtual void validate(PropertySpec const& /*spec*/, OptionValue const& /*value*/) const {}

 private:
  std::string name_;
  ComponentKind kind_;
  std::vector<PropertySpec> properties_;
};

}  // namespace provkit
