/*
 * Copyright 2026 The gofbayes Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GOFBAYES_CLI_HPP_
#define GOFBAYES_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace gofbayes {

// Reads a data file with one observation per line; blank lines and lines
// starting with '#' are ignored. Requires at least 2 finite values; throws
// std::runtime_error naming the file and line on parse failure.
std::vector<double> read_data_file(const std::string& path);

// Command-line entry point (subcommands: test, experiment, report).
// Exit status: 0 success, 1 computational failure, 2 usage/config error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace gofbayes

#endif  // GOFBAYES_CLI_HPP_
