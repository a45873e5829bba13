// Copyright 2026 The viewadj Authors.
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

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace viewadj::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitInternal = 4;

/// Runs one subcommand. args excludes the program name. Logs go to err;
/// command results (suggest, refine, replay) go to out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Re-runs the stage recorded in a manifest and returns the outputs whose
/// content no longer matches. Throws on a failed stage.
std::vector<std::string> replay_manifest(const std::filesystem::path& manifest);

}  // namespace viewadj::cli
