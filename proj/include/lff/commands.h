// Copyright (c) 2026 The lff authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LFF_COMMANDS_H_
#define LFF_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <string>

namespace lff::cli {

// Feature extraction for a single WAV file or a directory of them. The
// config file names the front-end; a non-empty frontend_override replaces it.
void Extract(const std::string& frontend_override, const std::string& config_path,
             const std::string& input_path, const std::string& output_path);

// Learned filter centers/bandwidths of a trained model as CSV, with
// mel-scale reference columns.
void ExportFilters(const std::string& model_path, const std::string& output_csv);

// Stride/pool sweep over front-ends: analytic MAC counts plus median
// wall-clock per cell.
void Bench(const std::string& sweep_path, const std::string& output_csv,
           std::optional<uint64_t> seed);

// Desk-scale end-to-end experiment: synthesizes a speaker set, trains each
// listed front-end, scores held-out trials, and writes a metrics JSON plus
// per-front-end model, history, and filter files.
void ToyExperiment(const std::string& spec_path, const std::string& output_json,
                   std::optional<uint64_t> seed);

// Full CLI entry: parses arguments, dispatches, and maps errors to exit
// codes (0 success, 2 user/config error, 3 internal invariant violation).
int Run(int argc, const char* const* argv);

}  // namespace lff::cli

#endif  // LFF_COMMANDS_H_
