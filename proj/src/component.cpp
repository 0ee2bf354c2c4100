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

#include "provkit/component.hpp"

#include "provkit/error.hpp"

namespace provkit {

std::string_view to_string(ComponentKind kind) noexcept {
  switch (kind) {
    case ComponentKind::Manager: return "Manager";
    case ComponentKind::Algorithm: return "Algorithm";
    case ComponentKind::Service: return "Service";
    case ComponentKind::Tool: return "Tool";
  }
  return "?";
}

bool PropertyType::accepts(OptionValue const& v) const noexcept {
  if (v.kind() != kind) return false;
  if (kind != ValueKind::List) return true;
  auto const ek = v.as_list().element_kind();
  return !ek || ek == element;
}

std::string PropertyType::describe() const {
  std::string s(to_string(kind));
  if (kind == ValueKind::List && element) s += "<" + std::string(to_string(*element)) + ">";
  return s;
}

namespace {

PropertyType type_of(OptionValue const& v) {
  PropertyType t{v.kind(), std::nullopt};
  if (v.is_list()) t.element = v.as_list().element_kind();
  return t;
}

}  // namespace

Component::Component(std::string name, ComponentKind kind) : name_(std::move(name)), kind_(kind) {
  if (!is_identifier(name_)) {
    throw Error(ErrorCode::MalformedKey, "component name '" + name_ + "' is not an identifier");
  }
}

PropertySpec const* Component::property(std::string_view name) const noexcept {
  for (auto const& p : properties_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

void Component::set_property(std::string_view name, OptionValue value) {
  for (auto& p : properties_) {
    if (p.name != name) continue;
    if (!p.type.accepts(value)) {
      throw Error(ErrorCode::KindMismatch,
                  name_ + "." + p.name + " expects " + p.type.describe() + ", got " +
                      type_of(value).describe());
    }
    validate(p, value);
    p.applied = std::move(value);
    return;
  }
  throw Error(ErrorCode::UnknownProperty,
              name_ + " has no property '" + std::string(name) + "'");
}

OptionValue const& Component::get(std::string_view name) const {
  if (auto const* p = property(name)) return p->applied;
  throw Error(ErrorCode::UnknownProperty, name_ + " has no property '" + std::string(name) + "'");
}

void Component::declare(std::string name, OptionValue default_value) {
  auto type = type_of(default_value);
  properties_.push_back({std::move(name), type, default_value, default_value});
}

void Component::declare_list(std::string name, ValueKind element, ValueList default_value) {
  OptionValue v(std::move(default_value));
  properties_.push_back({std::move(name), PropertyType{ValueKind::List, element}, v, v});
}

}  // namespace provkit
