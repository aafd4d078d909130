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

#ifndef __DRFSIM_METRICS_HPP__
#define __DRFSIM_METRICS_HPP__

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "drfsim/engine.hpp"
#include "drfsim/resources.hpp"

namespace drfsim {

class EmptyWindowError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};


class NoOverlapError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};


// Half-open range of whole seconds [start, end).
struct Window
{
  int64_t start = 0;
  int64_t end = 0;

  int64_t length() const { return end - start; }

  friend bool operator==(const Window&, const Window&) = default;
};


struct FrameworkTimeline
{
  FrameworkID framework;

  // running[s] = tasks running at the instant s seconds.
  std::vector<int64_t> running;
};


struct Timeline
{
  std::vector<FrameworkTimeline> frameworks;

  int64_t seconds() const;
  const FrameworkTimeline& of(const FrameworkID& frameworkId) const;
};


// Per whole second, the number of running tasks of every framework. A task
// launched at L with duration D is counted in seconds L .. L+D-1.
Timeline timeline(const SimulationResult& result);


// How many tasks of `demand` fit the cluster at once, agent by agent.
int64_t maxConcurrentTasks(const ClusterSpec& cluster, const ResourceVector& demand);


// Frameworks that were given at least one task.
std::vector<FrameworkID> competingFrameworks(const SimulationResult& result);


// floor(max concurrent tasks for the framework's template / number of
// competing frameworks).
int64_t fairLine(const SimulationResult& result, const FrameworkID& frameworkId);


// From the first task arrival (rounded down) to the last completion
// (rounded up, or the end of a truncated run).
Window activitySpan(const SimulationResult& result, const FrameworkID& frameworkId);


// Intersection of the spans; throws NoOverlapError if it is empty and
// std::invalid_argument if fewer than two spans are given.
Window intersect(std::span<const Window> spans);


// The contention window over every competing framework.
Window detectWindow(const SimulationResult& result);


struct UnfairnessReport
{
  FrameworkID framework;
  Window window;

  // 100 * area under the framework's curve / area under the fair line.
  double attainment = 0.0;

  // 100 - min(100, attainment).
  double reduction = 0.0;
};


// Throws EmptyWindowError when window.start >= window.end.
UnfairnessReport unfairness(
    const Timeline& timeline,
    const FrameworkID& frameworkId,
    const Window& window,
    int64_t fairLine);


struct Makespan
{
  double seconds = 0.0;
  bool truncated = false;
};


// Last completion minus the framework's start. For a truncated run with
// unfinished tasks the end of the run stands in for the last completion.
// Throws std::invalid_argument when the framework has no tasks.
Makespan makespan(const SimulationResult& result, const FrameworkID& frameworkId);


// Per second, busy/total on one axis, for the whole cluster.
std::vector<double> utilization(const SimulationResult& result, ResourceKind kind);

// Same, counting only one framework's tasks.
std::vector<double> utilization(
    const SimulationResult& result,
    ResourceKind kind,
    const FrameworkID& frameworkId);


struct SummaryRow
{
  // "cluster" for the whole-cluster row.
  std::string framework;
  std::optional<Window> window;
  std::optional<double> attainment;
  std::optional<double> reduction;
  std::optional<Makespan> makespan;
  double meanCpu = 0.0;
  double meanMem = 0.0;
  double meanDisk = 0.0;
};


// One row per framework plus a trailing "cluster" row. Fairness columns
// are filled for competing frameworks; with a single competitor its own
// activity span is the window.
std::vector<SummaryRow> summarize(const SimulationResult& result);


void writeTimelineCsv(std::ostream& out, const Timeline& timeline);
void writeSummaryCsv(std::ostream& out, std::span<const SummaryRow> rows);

} // namespace drfsim {

#endif // __DRFSIM_METRICS_HPP__
