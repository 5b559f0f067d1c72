// dubkit/cli.h

// Copyright 2026  Dubkit Authors

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

#ifndef DUBKIT_CLI_H_
#define DUBKIT_CLI_H_

namespace dubkit {

// Entry point behind the dubkit binary. Subcommands: gen-data, train,
// sample, eval, ablate, grad-check. Returns 0 on success, 1 on a runtime
// failure, 2 on a usage error.
int cli_main(int argc, char** argv);

}  // namespace dubkit

#endif  // DUBKIT_CLI_H_
