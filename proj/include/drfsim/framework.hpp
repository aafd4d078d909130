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

#ifndef __DRFSIM_FRAMEWORK_HPP__
#define __DRFSIM_FRAMEWORK_HPP__

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "drfsim/allocator.hpp"
#include "drfsim/resources.hpp"
#include "drfsim/time.hpp"

namespace drfsim {

using TaskID = uint64_t;


// How a framework maps its queued tasks onto one offer.
enum class PackingRule
{
  FIRST_FIT,
  BIN_PACKING,
  ONE_TASK_PER_CYCLE,

  // Bin-packing with no back-off: zero refuse seconds and zero decision
  // delay regardless of configuration.
  GREEDY_ALL,
};

std::string toString(PackingRule rule);
std::optional<PackingRule> parsePackingRule(const std::string& name);


struct Policy
{
  PackingRule rule = PackingRule::FIRST_FIT;

  // When set, offers the packing rule cannot use right away are held for
  // this long before the rule is consulted again.
  std::optional<Duration> hold;

  static Policy holding(Duration hold, PackingRule inner)
  {
    return Policy{inner, hold};
  }

  friend bool operator==(const Policy&, const Policy&) = default;
};


struct TaskTemplate
{
  ResourceVector demand;
  Duration duration{0};

  friend bool operator==(const TaskTemplate&, const TaskTemplate&) = default;
};


struct FrameworkSpec
{
  FrameworkID id;
  std::string role = DEFAULT_ROLE;

  // Registration time.
  Duration start{0};

  Policy policy;
  Duration refuse{0};
  Duration decisionDelay{0};

  TaskTemplate task;
  int64_t taskCount = 0;

  // First task arrives at `start`, the rest every `arrivalInterval`; zero
  // makes the whole queue visible at `start`.
  Duration arrivalInterval{0};

  Duration effectiveRefuse() const;
  Duration effectiveDecisionDelay() const;

  friend bool operator==(const FrameworkSpec&, const FrameworkSpec&) = default;
};


struct QueuedTask
{
  TaskID id;
  ResourceVector demand;
};


struct Accept
{
  std::vector<TaskID> tasks;
};

struct Decline {};

struct Hold
{
  Duration until;
};

using Response = std::variant<Accept, Decline, Hold>;


// FIFO scan; takes every task that still fits the shrinking residual.
std::vector<TaskID> firstFit(
    std::span<const QueuedTask> queue,
    const ResourceVector& offer);

// Maximizes the number of tasks packed into `offer`. Identical demands pack
// min over axes of floor(offer/demand). Mixed demands are packed greedily in
// ascending order of dominant fraction of the offer; the FIFO first-fit
// packing is kept instead if it places more tasks.
std::vector<TaskID> binPacking(
    std::span<const QueuedTask> queue,
    const ResourceVector& offer);

// The first queued task that fits, if any.
std::vector<TaskID> oneTaskPerCycle(
    std::span<const QueuedTask> queue,
    const ResourceVector& offer);

std::vector<TaskID> pack(
    PackingRule rule,
    std::span<const QueuedTask> queue,
    const ResourceVector& offer);


// The framework's answer to an offer it holds. `holdElapsed` is true when
// the offer comes back to the framework because its hold timer (or the
// master's offer timeout) fired. Holding policies use the offer at once if
// their packing rule places anything, and otherwise hold it until
// `now + hold`.
Response respond(
    const Policy& policy,
    std::span<const QueuedTask> queue,
    const ResourceVector& offer,
    Duration now,
    bool holdElapsed = false);

} // namespace drfsim {

#endif // __DRFSIM_FRAMEWORK_HPP__
