#pragma once

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>

#include "covertplan/model.hpp"

namespace covertplan {

/// Parse or validation failure with a "file:line: reason" message.
struct ScenarioFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Load a flat key/value scenario file. Keys carry explicit unit suffixes
/// (_m, _mps, _s, _W, _dBm, _dB); dB quantities are converted to linear once
/// here. See the scenario format section of the README for the key list.
Scenario load_scenario(const std::filesystem::path& path);

/// Same parser over a stream; `name` labels error messages.
Scenario parse_scenario(std::istream& in, const std::string& name);

}  // namespace covertplan
