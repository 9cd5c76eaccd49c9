/*
 * Copyright 2026 The OrdShap Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#ifndef ORDSHAP_TOOLS_CLI_H_
#define ORDSHAP_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace ordshap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

inline constexpr char kEndpointEnv[] = "ORDSHAP_ENDPOINT";

// Runs the `ordshap` command line. `args` excludes the program name.
// Returns the process exit code.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace ordshap::cli

#endif  // ORDSHAP_TOOLS_CLI_H_
