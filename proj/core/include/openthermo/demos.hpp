#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "openthermo/scenario.hpp"

namespace openthermo {

/// tank, piston, two-compartment, serial-membrane, parallel-membrane,
/// heat-matter, parallel-heat-membrane.
const std::vector<std::string>& demo_names();

/// Scenario text of a built-in demo; throws std::out_of_range for unknown names.
const std::string& demo_text(std::string_view name);

Scenario demo_scenario(std::string_view name);

}  // namespace openthermo
