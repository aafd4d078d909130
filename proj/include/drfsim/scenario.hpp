// Licensed to the Apache Software Foundation (ASF) under one
// or more contributor license agreements.  See the NOTICE file
// distributed with this work for additional information
// regarding copyright ownership.  The ASF licenses this file
// to you under the Apache License, Version 2.0 (the
// "License"); you may not use this file except in compliance
// with the License.  You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef __DRFSIM_SCENARIO_HPP__
#define __DRFSIM_SCENARIO_HPP__

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "drfsim/engine.hpp"
#include "drfsim/metrics.hpp"

namespace drfsim {

// The only schema version understood by the parser.
constexpr int SCENARIO_VERSION = 1;


struct ScenarioConfig
{
  std::string name;
  std::string description;
  SimulationConfig simulation;
  std::string outputDir = "out";

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) =
    default;
};


// Malformed text: bad syntax, unknown or duplicate key, unparsable value
// or a missing required key. `line` is 1-based; 0 means the whole file.
class ParseError : public std::runtime_error
{
public:
  ParseError(size_t line, std::string field, const std::string& message);

  size_t line;
  std::string field;
};


// Well-formed text describing an impossible scenario.
class ValidationError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};


class UnknownScenarioError : public std::out_of_range
{
public:
  using std::out_of_range::out_of_range;
};


class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};


ScenarioConfig parseScenario(std::string_view text);


// Canonical text; parseScenario(serializeScenario(c)) == c for any
// valid `c`.
std::string serializeScenario(const ScenarioConfig& config);


// Throws ValidationError naming the first violated rule.
void validateScenario(const ScenarioConfig& config);


struct BuiltinScenario
{
  std::string name;
  std::string description;

  // Commented scenario file, accepted by parseScenario.
  std::string text;
};


const std::vector<BuiltinScenario>& builtinScenarios();


// Throws UnknownScenarioError.
ScenarioConfig builtinScenario(const std::string& name);


struct RunOptions
{
  // Empty runs seed 0 only.
  std::vector<uint64_t> seeds;

  // Overrides the scenario's own output directory when set.
  std::filesystem::path outputDir;

  // Overrides the scenario's horizon when set.
  std::optional<Duration> maxTime;

  bool eventLog = false;

  // Upper bound on simulations running at once; 0 picks the number of
  // hardware threads.
  unsigned parallelism = 0;
};


struct SeedRun
{
  uint64_t seed;
  SimulationResult result;
  std::vector<SummaryRow> summary;
};


struct RunReport
{
  std::vector<SeedRun> runs;
  std::vector<std::filesystem::path> written;
};


// Runs every seed, then writes timeline_seed<N>.csv, summary_seed<N>.csv
// (and events_seed<N>.log with `eventLog`) per seed plus
// summary_all_seeds.csv. Nothing is written unless every run succeeds.
// Throws IoError when the directory cannot be created or written.
RunReport runScenario(const ScenarioConfig& config, const RunOptions& options);


// Cross-seed summary: one row per framework with mean, min and max of
// attainment and makespan over the seeds where they are defined.
void writeCrossSeedSummaryCsv(std::ostream& out, std::span<const SeedRun> runs);

} // namespace drfsim {

#endif // __DRFSIM_SCENARIO_HPP__
