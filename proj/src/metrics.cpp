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

#include "drfsim/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <string>

namespace drfsim {

namespace {

int64_t floorSeconds(Duration duration)
{
  int64_t ms = duration.count();
  return ms >= 0 ? ms / 1000 : -((-ms + 999) / 1000);
}


int64_t ceilSeconds(Duration duration)
{
  int64_t ms = duration.count();
  return ms >= 0 ? (ms + 999) / 1000 : -((-ms) / 1000);
}


const FrameworkSpec& specOf(
    const SimulationResult& result,
    const FrameworkID& frameworkId)
{
  for (const FrameworkSpec& spec : result.frameworks) {
    if (spec.id == frameworkId) {
      return spec;
    }
  }
  throw std::out_of_range("Unknown framework '" + frameworkId + "'");
}


// Seconds [first, last] during which the task counts as running.
std::optional<std::pair<int64_t, int64_t>> runningSeconds(
    const TaskRecord& task,
    int64_t length)
{
  if (!task.launchedAt) {
    return std::nullopt;
  }

  int64_t first = ceilSeconds(*task.launchedAt);
  int64_t last = task.finishedAt ? ceilSeconds(*task.finishedAt) - 1 : length - 1;
  last = std::min(last, length - 1);

  if (first > last) {
    return std::nullopt;
  }
  return std::make_pair(first, last);
}


std::vector<double> utilizationOf(
    const SimulationResult& result,
    ResourceKind kind,
    const FrameworkID* frameworkId)
{
  const int64_t length = ceilSeconds(result.endTime);
  const int64_t total = result.cluster.total().get(kind);

  std::vector<int64_t> delta(length + 1, 0);
  for (const TaskRecord& task : result.tasks) {
    if (frameworkId != nullptr && task.framework != *frameworkId) {
      continue;
    }
    if (auto seconds = runningSeconds(task, length)) {
      delta[seconds->first] += task.demand.get(kind);
      delta[seconds->second + 1] -= task.demand.get(kind);
    }
  }

  std::vector<double> series(length, 0.0);
  int64_t busy = 0;
  for (int64_t s = 0; s < length; s++) {
    busy += delta[s];
    series[s] = total > 0
      ? static_cast<double>(busy) / static_cast<double>(total)
      : 0.0;
  }
  return series;
}


double mean(const std::vector<double>& values)
{
  if (values.empty()) {
    return 0.0;
  }

  double sum = 0.0;
  for (double value : values) {
    sum += value;
  }
  return sum / static_cast<double>(values.size());
}


std::string fixed(double value, int precision)
{
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", precision, value);
  return buffer;
}

} // namespace {


int64_t Timeline::seconds() const
{
  return frameworks.empty()
    ? 0
    : static_cast<int64_t>(frameworks.front().running.size());
}


const FrameworkTimeline& Timeline::of(const FrameworkID& frameworkId) const
{
  for (const FrameworkTimeline& framework : frameworks) {
    if (framework.framework == frameworkId) {
      return framework;
    }
  }
  throw std::out_of_range("No timeline for framework '" + frameworkId + "'");
}


Timeline timeline(const SimulationResult& result)
{
  const int64_t length = ceilSeconds(result.endTime);

  Timeline timeline;
  std::map<FrameworkID, std::vector<int64_t>> deltas;
  for (const FrameworkSpec& spec : result.frameworks) {
    deltas[spec.id].assign(length + 1, 0);
  }

  for (const TaskRecord& task : result.tasks) {
    if (auto seconds = runningSeconds(task, length)) {
      std::vector<int64_t>& delta = deltas.at(task.framework);
      delta[seconds->first]++;
      delta[seconds->second + 1]--;
    }
  }

  for (const FrameworkSpec& spec : result.frameworks) {
    const std::vector<int64_t>& delta = deltas.at(spec.id);

    FrameworkTimeline framework{spec.id, std::vector<int64_t>(length, 0)};
    int64_t running = 0;
    for (int64_t s = 0; s < length; s++) {
      running += delta[s];
      framework.running[s] = running;
    }
    timeline.frameworks.push_back(std::move(framework));
  }

  return timeline;
}


int64_t maxConcurrentTasks(
    const ClusterSpec& cluster,
    const ResourceVector& demand)
{
  if (demand.empty()) {
    throw std::invalid_argument("Task demand must be positive on some axis");
  }

  int64_t perAgent = std::numeric_limits<int64_t>::max();
  for (ResourceKind kind : RESOURCE_KINDS) {
    if (demand.get(kind) > 0) {
      perAgent = std::min(
          perAgent, cluster.perAgent.get(kind) / demand.get(kind));
    }
  }

  return perAgent * cluster.agents;
}


std::vector<FrameworkID> competingFrameworks(const SimulationResult& result)
{
  std::vector<FrameworkID> competing;
  for (const FrameworkSpec& spec : result.frameworks) {
    if (spec.taskCount > 0) {
      competing.push_back(spec.id);
    }
  }
  return competing;
}


int64_t fairLine(const SimulationResult& result, const FrameworkID& frameworkId)
{
  const FrameworkSpec& spec = specOf(result, frameworkId);
  const int64_t competing =
    static_cast<int64_t>(competingFrameworks(result).size());

  if (competing == 0) {
    return 0;
  }

  return maxConcurrentTasks(result.cluster, spec.task.demand) / competing;
}


Window activitySpan(
    const SimulationResult& result,
    const FrameworkID& frameworkId)
{
  const FrameworkSpec& spec = specOf(result, frameworkId);

  std::optional<Duration> firstArrival;
  Duration lastFinish{0};
  int64_t finished = 0;

  for (const TaskRecord& task : result.tasks) {
    if (task.framework != frameworkId) {
      continue;
    }
    if (!firstArrival || task.arrivedAt < *firstArrival) {
      firstArrival = task.arrivedAt;
    }
    if (task.finishedAt) {
      finished++;
      lastFinish = std::max(lastFinish, *task.finishedAt);
    }
  }

  if (!firstArrival) {
    throw std::invalid_argument(
        "Framework '" + frameworkId + "' has no tasks");
  }

  Duration end = finished == spec.taskCount ? lastFinish : result.endTime;
  return Window{floorSeconds(*firstArrival), ceilSeconds(end)};
}


Window intersect(std::span<const Window> spans)
{
  if (spans.size() < 2) {
    throw std::invalid_argument("Need at least two activity spans");
  }

  Window window = spans.front();
  for (const Window& span : spans.subspan(1)) {
    window.start = std::max(window.start, span.start);
    window.end = std::min(window.end, span.end);
  }

  if (window.start >= window.end) {
    throw NoOverlapError("Frameworks were never active at the same time");
  }

  return window;
}


Window detectWindow(const SimulationResult& result)
{
  std::vector<Window> spans;
  for (const FrameworkID& frameworkId : competingFrameworks(result)) {
    spans.push_back(activitySpan(result, frameworkId));
  }
  return intersect(spans);
}


UnfairnessReport unfairness(
    const Timeline& timeline,
    const FrameworkID& frameworkId,
    const Window& window,
    int64_t fairLine)
{
  if (window.start >= window.end) {
    throw EmptyWindowError(
        "Window [" + std::to_string(window.start) + ", " +
        std::to_string(window.end) + ") is empty");
  }
  if (fairLine <= 0) {
    throw std::invalid_argument("Fair line must be positive");
  }

  const std::vector<int64_t>& running = timeline.of(frameworkId).running;

  int64_t area = 0;
  for (int64_t s = std::max<int64_t>(window.start, 0); s < window.end; s++) {
    if (s < static_cast<int64_t>(running.size())) {
      area += running[s];
    }
  }

  UnfairnessReport report;
  report.framework = frameworkId;
  report.window = window;
  report.attainment =
    100.0 * static_cast<double>(area) /
    static_cast<double>(fairLine * window.length());
  report.reduction = 100.0 - std::min(100.0, report.attainment);
  return report;
}


Makespan makespan(const SimulationResult& result, const FrameworkID& frameworkId)
{
  const FrameworkSpec& spec = specOf(result, frameworkId);
  if (spec.taskCount == 0) {
    throw std::invalid_argument(
        "Framework '" + frameworkId + "' has no tasks");
  }

  Duration first = spec.start;
  Duration last{0};
  int64_t finished = 0;
  for (const TaskRecord& task : result.tasks) {
    if (task.framework != frameworkId) {
      continue;
    }
    first = std::min(first, task.arrivedAt);
    if (task.finishedAt) {
      finished++;
      last = std::max(last, *task.finishedAt);
    }
  }

  Makespan makespan;
  makespan.truncated = finished < spec.taskCount;
  if (makespan.truncated) {
    last = result.endTime;
  }
  makespan.seconds = toSeconds(last - first);
  return makespan;
}


std::vector<double> utilization(const SimulationResult& result, ResourceKind kind)
{
  return utilizationOf(result, kind, nullptr);
}


std::vector<double> utilization(
    const SimulationResult& result,
    ResourceKind kind,
    const FrameworkID& frameworkId)
{
  return utilizationOf(result, kind, &frameworkId);
}


std::vector<SummaryRow> summarize(const SimulationResult& result)
{
  const Timeline series = timeline(result);
  const std::vector<FrameworkID> competing = competingFrameworks(result);

  std::optional<Window> window;
  if (competing.size() >= 2) {
    try {
      window = detectWindow(result);
    } catch (const NoOverlapError&) {
      window.reset();
    }
  } else if (competing.size() == 1) {
    window = activitySpan(result, competing.front());
  }

  std::vector<SummaryRow> rows;

  for (const FrameworkSpec& spec : result.frameworks) {
    SummaryRow row;
    row.framework = spec.id;
    row.meanCpu = mean(utilization(result, ResourceKind::CPU, spec.id));
    row.meanMem = mean(utilization(result, ResourceKind::MEMORY, spec.id));
    row.meanDisk = mean(utilization(result, ResourceKind::DISK, spec.id));

    if (spec.taskCount > 0) {
      row.makespan = makespan(result, spec.id);

      const int64_t line = fairLine(result, spec.id);
      if (window && window->length() > 0 && line > 0) {
        UnfairnessReport report = unfairness(series, spec.id, *window, line);
        row.window = window;
        row.attainment = report.attainment;
        row.reduction = report.reduction;
      }
    }

    rows.push_back(std::move(row));
  }

  SummaryRow cluster;
  cluster.framework = "cluster";
  cluster.meanCpu = mean(utilization(result, ResourceKind::CPU));
  cluster.meanMem = mean(utilization(result, ResourceKind::MEMORY));
  cluster.meanDisk = mean(utilization(result, ResourceKind::DISK));
  rows.push_back(std::move(cluster));

  return rows;
}


void writeTimelineCsv(std::ostream& out, const Timeline& timeline)
{
  out << "second,framework,running_tasks\n";
  for (int64_t s = 0; s < timeline.seconds(); s++) {
    for (const FrameworkTimeline& framework : timeline.frameworks) {
      out << s << ',' << framework.framework << ','
          << framework.running[s] << '\n';
    }
  }
}


void writeSummaryCsv(std::ostream& out, std::span<const SummaryRow> rows)
{
  out << "framework,window_start,window_end,attainment_pct,reduction_pct,"
      << "makespan_s,mean_cpu_util,mean_mem_util,mean_disk_util\n";

  for (const SummaryRow& row : rows) {
    out << row.framework << ',';
    if (row.window) {
      out << row.window->start << ',' << row.window->end << ',';
    } else {
      out << ",,";
    }
    out << (row.attainment ? fixed(*row.attainment, 4) : "") << ','
        << (row.reduction ? fixed(*row.reduction, 4) : "") << ',';
    // A truncated makespan is a lower bound only; it is left blank.
    if (row.makespan && !row.makespan->truncated) {
      out << fixed(row.makespan->seconds, 3);
    }
    out << ',' << fixed(row.meanCpu, 4) << ',' << fixed(row.meanMem, 4)
        << ',' << fixed(row.meanDisk, 4) << '\n';
  }
}

} // namespace drfsim {
