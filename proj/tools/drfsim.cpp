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

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drfsim/scenario.hpp"

using namespace drfsim;

namespace {

// Exit statuses.
constexpr int OK = 0;
constexpr int INVALID = 1;
constexpr int FAILED = 2;


// Accepts "3", "0-9" and comma separated mixes such as "0-4,7".
std::vector<uint64_t> parseSeeds(const std::string& text)
{
  auto number = [&](std::string_view part) {
    uint64_t value = 0;
    auto [ptr, error] =
      std::from_chars(part.data(), part.data() + part.size(), value);
    if (part.empty() || error != std::errc() ||
        ptr != part.data() + part.size()) {
      throw CLI::ValidationError("--seeds", "bad seed list '" + text + "'");
    }
    return value;
  };

  std::vector<uint64_t> seeds;
  std::string_view rest = text;
  while (true) {
    size_t comma = rest.find(',');
    std::string_view part = rest.substr(0, comma);
    size_t dash = part.find('-');
    if (dash == std::string_view::npos) {
      seeds.push_back(number(part));
    } else {
      uint64_t first = number(part.substr(0, dash));
      uint64_t last = number(part.substr(dash + 1));
      if (last < first || last - first >= 100000) {
        throw CLI::ValidationError("--seeds", "bad seed range '" +
                                   std::string(part) + "'");
      }
      for (uint64_t seed = first; seed <= last; seed++) {
        seeds.push_back(seed);
      }
    }
    if (comma == std::string_view::npos) {
      break;
    }
    rest = rest.substr(comma + 1);
  }
  return seeds;
}


std::string readFile(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("Cannot read '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}


// A path to an existing file wins over a built-in of the same name.
ScenarioConfig loadScenario(const std::string& source)
{
  if (std::filesystem::is_regular_file(source)) {
    return parseScenario(readFile(source));
  }
  try {
    return builtinScenario(source);
  } catch (const UnknownScenarioError&) {
    throw UnknownScenarioError(
        "'" + source + "' is neither a file nor a built-in scenario "
        "(see 'drfsim list')");
  }
}


int list()
{
  size_t width = 0;
  for (const BuiltinScenario& scenario : builtinScenarios()) {
    width = std::max(width, scenario.name.size());
  }
  for (const BuiltinScenario& scenario : builtinScenarios()) {
    std::cout << scenario.name << std::string(width + 2 - scenario.name.size(), ' ')
              << scenario.description << "\n";
  }
  return OK;
}


int show(const std::string& name)
{
  for (const BuiltinScenario& scenario : builtinScenarios()) {
    if (scenario.name == name) {
      std::cout << scenario.text;
      return OK;
    }
  }
  throw UnknownScenarioError(
      "no built-in scenario named '" + name + "' (see 'drfsim list')");
}


int validate(const std::string& path)
{
  ScenarioConfig config = parseScenario(readFile(path));
  std::cout << path << ": OK ("
            << (config.name.empty() ? "unnamed" : config.name) << ", "
            << config.simulation.frameworks.size() << " frameworks)\n";
  return OK;
}


int run(const std::string& source, const RunOptions& options)
{
  ScenarioConfig config = loadScenario(source);
  RunReport report = runScenario(config, options);

  writeCrossSeedSummaryCsv(std::cout, report.runs);
  std::cerr << "Wrote " << report.written.size() << " files to "
            << report.written.front().parent_path().string() << "\n";
  return OK;
}

} // namespace {


int main(int argc, char** argv)
{
  CLI::App app{"Discrete event simulator for DRF offer allocation"};
  app.require_subcommand(1);

  CLI::App* runCommand = app.add_subcommand(
      "run", "Run a scenario file or built-in scenario and write CSV results");
  std::string source;
  runCommand->add_option("scenario", source, "Scenario file or built-in name")
    ->required();

  std::optional<uint64_t> seed;
  std::string seeds;
  std::string out;
  std::optional<double> maxTime;
  bool eventLog = false;
  unsigned jobs = 0;

  CLI::Option* seedOption =
    runCommand->add_option("--seed", seed, "Run a single seed");
  runCommand->add_option("--seeds", seeds, "Seed list such as 0-9 or 1,4,7")
    ->excludes(seedOption);
  runCommand->add_option("--out", out, "Output directory");
  runCommand->add_option("--max-time", maxTime, "Simulation horizon in seconds")
    ->check(CLI::PositiveNumber);
  runCommand->add_flag("--event-log", eventLog, "Also write the event log");
  runCommand->add_option("--jobs", jobs, "Simulations run at once (0: all cores)");

  CLI::App* listCommand = app.add_subcommand("list", "List built-in scenarios");

  CLI::App* showCommand = app.add_subcommand(
      "show", "Print a built-in scenario in the scenario file format");
  std::string name;
  showCommand->add_option("name", name, "Built-in scenario name")->required();

  CLI::App* validateCommand =
    app.add_subcommand("validate", "Check a scenario file");
  std::string path;
  validateCommand->add_option("file", path, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return INVALID;
  }

  try {
    if (listCommand->parsed()) {
      return list();
    }
    if (showCommand->parsed()) {
      return show(name);
    }
    if (validateCommand->parsed()) {
      return validate(path);
    }

    RunOptions options;
    if (seed) {
      options.seeds = {*seed};
    } else if (!seeds.empty()) {
      options.seeds = parseSeeds(seeds);
    }
    options.outputDir = out;
    if (maxTime) {
      options.maxTime = fromSeconds(*maxTime);
    }
    options.eventLog = eventLog;
    options.parallelism = jobs;
    return run(source, options);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return INVALID;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return INVALID;
  } catch (const ValidationError& e) {
    std::cerr << "invalid scenario: " << e.what() << "\n";
    return INVALID;
  } catch (const UnknownScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return INVALID;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return FAILED;
  }
}
