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

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <thread>

#include "drfsim/scenario.hpp"

namespace fs = std::filesystem;

namespace drfsim {

namespace {

std::string fixed(double value, int precision)
{
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", precision, value);
  return buffer;
}


struct Stats
{
  size_t count = 0;
  double sum = 0.0;
  double min = 0.0;
  double max = 0.0;

  void add(double value)
  {
    min = count == 0 ? value : std::min(min, value);
    max = count == 0 ? value : std::max(max, value);
    sum += value;
    count++;
  }

  std::string format(int precision) const
  {
    if (count == 0) {
      return ",,";
    }
    return fixed(sum / count, precision) + ',' + fixed(min, precision) + ',' +
      fixed(max, precision);
  }
};


void writeFile(
    const fs::path& path,
    const std::function<void(std::ostream&)>& write,
    std::vector<fs::path>& written)
{
  // Binary mode keeps "\n" line endings on every platform.
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("Cannot open '" + path.string() + "' for writing");
  }
  write(out);
  out.flush();
  if (!out) {
    throw IoError("Failed writing '" + path.string() + "'");
  }
  written.push_back(path);
}

} // namespace {


void writeCrossSeedSummaryCsv(std::ostream& out, std::span<const SeedRun> runs)
{
  out << "framework,seeds,attainment_mean,attainment_min,attainment_max,"
      << "makespan_mean_s,makespan_min_s,makespan_max_s,truncated_runs\n";

  // Rows keep the order of the first run's summary.
  std::vector<std::string> order;
  std::map<std::string, Stats> attainment;
  std::map<std::string, Stats> makespan;
  std::map<std::string, size_t> truncated;

  for (const SeedRun& run : runs) {
    for (const SummaryRow& row : run.summary) {
      // The cluster row has neither attainment nor makespan.
      if (row.framework == "cluster") {
        continue;
      }
      if (std::find(order.begin(), order.end(), row.framework) == order.end()) {
        order.push_back(row.framework);
      }
      if (row.attainment) {
        attainment[row.framework].add(*row.attainment);
      }
      if (row.makespan) {
        if (row.makespan->truncated) {
          truncated[row.framework]++;
        } else {
          makespan[row.framework].add(row.makespan->seconds);
        }
      }
    }
  }

  for (const std::string& framework : order) {
    out << framework << ',' << runs.size() << ','
        << attainment[framework].format(4) << ','
        << makespan[framework].format(3) << ','
        << truncated[framework] << '\n';
  }
}


RunReport runScenario(const ScenarioConfig& config, const RunOptions& options)
{
  validateScenario(config);

  std::vector<uint64_t> seeds = options.seeds;
  if (seeds.empty()) {
    seeds.push_back(0);
  }

  RunReport report;
  report.runs.resize(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());

  unsigned workers = options.parallelism;
  if (workers == 0) {
    workers = std::max(1u, std::thread::hardware_concurrency());
  }
  workers = std::min<size_t>(workers, seeds.size());

  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (size_t i = next++; i < seeds.size(); i = next++) {
      try {
        SimulationConfig simulation = config.simulation;
        simulation.seed = seeds[i];
        if (options.maxTime) {
          simulation.maxTime = *options.maxTime;
        }
        SeedRun& run = report.runs[i];
        run.seed = seeds[i];
        run.result = simulate(simulation);
        run.summary = summarize(run.result);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  std::vector<std::thread> threads;
  for (unsigned i = 1; i < workers; i++) {
    threads.emplace_back(work);
  }
  work();
  for (std::thread& thread : threads) {
    thread.join();
  }

  for (const std::exception_ptr& error : errors) {
    if (error) {
      std::rethrow_exception(error);
    }
  }

  fs::path directory =
    options.outputDir.empty() ? fs::path(config.outputDir) : options.outputDir;

  std::error_code error;
  fs::create_directories(directory, error);
  if (error || !fs::is_directory(directory)) {
    throw IoError("Cannot create output directory '" + directory.string() +
                  "'" + (error ? ": " + error.message() : ""));
  }

  for (const SeedRun& run : report.runs) {
    const std::string suffix = "_seed" + std::to_string(run.seed);

    writeFile(directory / ("timeline" + suffix + ".csv"), [&](std::ostream& out) {
      writeTimelineCsv(out, timeline(run.result));
    }, report.written);

    writeFile(directory / ("summary" + suffix + ".csv"), [&](std::ostream& out) {
      writeSummaryCsv(out, run.summary);
    }, report.written);

    if (options.eventLog) {
      writeFile(directory / ("events" + suffix + ".log"), [&](std::ostream& out) {
        out << formatEventLog(run.result.log);
      }, report.written);
    }
  }

  writeFile(directory / "summary_all_seeds.csv", [&](std::ostream& out) {
    writeCrossSeedSummaryCsv(out, report.runs);
  }, report.written);

  return report;
}

} // namespace drfsim {
