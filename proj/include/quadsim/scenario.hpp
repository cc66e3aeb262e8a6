#pragma once

#include <string>

#include "quadsim/sim.hpp"

namespace quadsim {

// Built-in presets: "nominal", "disturbance", "variation", plus "custom"
// (the base parameter set with no disturbance). Throws UnknownPresetError.
ScenarioSpec make_preset(const std::string& name);

// Parses the flat key-value config format (see README). The `name` key picks
// the preset whose values seed every field; explicit keys override.
// Throws ParseError / ValidationError / UnknownPresetError.
ScenarioSpec parse_scenario(const std::string& text);

// Loads a preset by name or a config file by path.
ScenarioSpec load_scenario(const std::string& path_or_preset);

// Full explicit dump in the config format; load(serialize(s)) == s.
std::string serialize_scenario(const ScenarioSpec& spec);

void validate_scenario(const ScenarioSpec& spec);

const char* controller_kind_name(ControllerKind kind);
ControllerKind controller_kind_from_name(const std::string& name);

// FNV-1a over arbitrary bytes; scenario_hash(spec) applies it to
// serialize_scenario(spec).
std::uint64_t fnv1a_hash(const std::string& bytes);

}  // namespace quadsim
