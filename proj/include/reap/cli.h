//
// Copyright 2026 The REAP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef REAP_CLI_H_
#define REAP_CLI_H_

#include <ostream>

namespace reap::cli {

enum ExitCode {
  kOk = 0,
  kUsage = 1,
  kVerifyFailed = 2,
  kNumerical = 3,
};

// Entry point of the reap command-line tool. Subcommands: design, verify,
// simulate, sweep, figure.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace reap::cli

#endif  // REAP_CLI_H_
