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

#include "drfsim/framework.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace drfsim {

std::string toString(PackingRule rule)
{
  switch (rule) {
    case PackingRule::FIRST_FIT: return "first-fit";
    case PackingRule::BIN_PACKING: return "bin-packing";
    case PackingRule::ONE_TASK_PER_CYCLE: return "one-task-per-cycle";
    case PackingRule::GREEDY_ALL: return "greedy-all";
  }
  return "unknown";
}


std::optional<PackingRule> parsePackingRule(const std::string& name)
{
  for (PackingRule rule : {PackingRule::FIRST_FIT,
                           PackingRule::BIN_PACKING,
                           PackingRule::ONE_TASK_PER_CYCLE,
                           PackingRule::GREEDY_ALL}) {
    if (toString(rule) == name) {
      return rule;
    }
  }
  return std::nullopt;
}


Duration FrameworkSpec::effectiveRefuse() const
{
  return policy.rule == PackingRule::GREEDY_ALL ? Duration::zero() : refuse;
}


Duration FrameworkSpec::effectiveDecisionDelay() const
{
  return policy.rule == PackingRule::GREEDY_ALL
    ? Duration::zero()
    : decisionDelay;
}


std::vector<TaskID> firstFit(
    std::span<const QueuedTask> queue,
    const ResourceVector& offer)
{
  std::vector<TaskID> taken;
  ResourceVector residual = offer;

  for (const QueuedTask& task : queue) {
    if (task.demand.fitsIn(residual)) {
      residual -= task.demand;
      taken.push_back(task.id);
    }
  }

  return taken;
}


std::vector<TaskID> binPacking(
    std::span<const QueuedTask> queue,
    const ResourceVector& offer)
{
  std::vector<size_t> order(queue.size());
  std::iota(order.begin(), order.end(), 0);

  // Fraction of the offer the task would take on its tightest axis. Tasks
  // needing an axis the offer lacks can never fit and sort last.
  auto fraction = [&offer](const ResourceVector& demand) {
    double worst = 0.0;
    for (ResourceKind kind : RESOURCE_KINDS) {
      if (demand.get(kind) == 0) {
        continue;
      }
      if (offer.get(kind) == 0) {
        return std::numeric_limits<double>::infinity();
      }
      worst = std::max(
          worst,
          static_cast<double>(demand.get(kind)) /
            static_cast<double>(offer.get(kind)));
    }
    return worst;
  };

  std::vector<double> fractions;
  fractions.reserve(queue.size());
  for (const QueuedTask& task : queue) {
    fractions.push_back(fraction(task.demand));
  }

  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return fractions[a] < fractions[b];
  });

  std::vector<TaskID> taken;
  ResourceVector residual = offer;
  for (size_t index : order) {
    if (queue[index].demand.fitsIn(residual)) {
      residual -= queue[index].demand;
      taken.push_back(queue[index].id);
    }
  }

  std::vector<TaskID> fifo = firstFit(queue, offer);
  if (fifo.size() > taken.size()) {
    return fifo;
  }

  return taken;
}


std::vector<TaskID> oneTaskPerCycle(
    std::span<const QueuedTask> queue,
    const ResourceVector& offer)
{
  for (const QueuedTask& task : queue) {
    if (task.demand.fitsIn(offer)) {
      return {task.id};
    }
  }
  return {};
}


std::vector<TaskID> pack(
    PackingRule rule,
    std::span<const QueuedTask> queue,
    const ResourceVector& offer)
{
  switch (rule) {
    case PackingRule::FIRST_FIT:
      return firstFit(queue, offer);
    case PackingRule::BIN_PACKING:
    case PackingRule::GREEDY_ALL:
      return binPacking(queue, offer);
    case PackingRule::ONE_TASK_PER_CYCLE:
      return oneTaskPerCycle(queue, offer);
  }
  return {};
}


Response respond(
    const Policy& policy,
    std::span<const QueuedTask> queue,
    const ResourceVector& offer,
    Duration now,
    bool holdElapsed)
{
  std::vector<TaskID> tasks = pack(policy.rule, queue, offer);
  if (!tasks.empty()) {
    return Accept{std::move(tasks)};
  }

  if (policy.hold && *policy.hold > Duration::zero() && !holdElapsed) {
    return Hold{now + *policy.hold};
  }

  return Decline{};
}

} // namespace drfsim {
