/* Copyright 2026 The latentgeo Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include "latentgeo/config.hpp"
#include "latentgeo/error.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace latentgeo::commands {

/// train, metrics, interpolate, synthesize, rank-report, geodesic, data
const std::vector<std::string>& command_names();
const std::vector<config::KeySpec>& schema(const std::string& command);
std::string help(const std::string& command);

/// Validates the whole config against the command schema, then runs it.
/// Progress goes to `log`; warnings that do not stop the run to `warn`.
void run(const std::string& command, const config::RunConfig& raw, std::ostream& log, std::ostream& warn);

/// 0 success, 2 config, 3 io, 4 numerical.
int exit_code(ErrorKind kind) noexcept;

}  // namespace latentgeo::commands
