#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pentadrive/fsmpc.hpp"
#include "pentadrive/machine.hpp"
#include "pentadrive/plant.hpp"
#include "pentadrive/sweep.hpp"

namespace pentadrive {

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

/// Splits `key = value` lines; '#' starts a comment. Malformed lines are
/// appended to `errors` and skipped.
std::vector<KeyValue> parse_key_values(std::string_view text, std::vector<std::string>& errors);

/// Sets one machine field by its bare name (Rs, Rr, Lls, Llr, LM, Jm, P, Vdc).
bool assign_machine_key(MachineParams& params, std::string_view key, std::string_view value,
                        std::string& error);

/// Everything a run or sweep needs, with defaults filled in.
struct RunConfig {
  MachineParams machine;
  PlantConfig plant;
  ControllerConfig controller;  // used by single runs
  SweepSpec sweep;

  RunConfig();
};

struct ConfigResult {
  std::optional<RunConfig> config;
  std::vector<std::string> errors;  // every problem found, with line numbers

  bool ok() const { return config.has_value(); }
};

/// Validates a flat machine./plant./controller./sweep. configuration.
/// An empty text yields all defaults.
ConfigResult validate_config(std::string_view text);

/// Canonical text form of a resolved configuration; feeding it back to
/// validate_config reproduces the same configuration.
std::string to_config_text(const RunConfig& config);

}  // namespace pentadrive
