#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ensim/scenario.hpp"

namespace ensim {

/// Names of the bundled attack demonstrations: recentralize, probe, beacon,
/// victim. Each is a fixed zero-noise scenario plus a scripted expectation.
std::vector<std::string> demo_names();

/// The built-in scenario behind a demo. Throws std::invalid_argument for an
/// unknown name.
Scenario demo_scenario(const std::string& name);

/// Runs a demo, narrates what happened, prints one final PASS/FAIL line.
/// Returns false when the outcome does not meet the scripted expectation.
bool run_demo(const std::string& name, std::ostream& out);

}  // namespace ensim
