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

#include "tests/invariants.hpp"

#include <array>
#include <map>
#include <optional>
#include <sstream>

namespace drfsim {
namespace tests {

namespace {

constexpr size_t MAX_MESSAGES = 10;


std::string describe(const LogEntry& entry)
{
  std::vector<LogEntry> one = {entry};
  std::string text = formatEventLog(one);
  if (!text.empty() && text.back() == '\n') {
    text.pop_back();
  }
  return text;
}


// Mostly the framework's own policy; now and then a task list that
// overcommits the offer or names a task twice.
Response chaoticResponder(
    const FrameworkSpec& framework,
    std::span<const QueuedTask> queue,
    const ResourceVector& offer,
    Duration now,
    bool holdElapsed)
{
  uint64_t h = static_cast<uint64_t>(now.count()) * 0x9E3779B97F4A7C15ull;
  h ^= queue.size() * 0xC2B2AE3D27D4EB4Full + offer.cpuMillis();
  h ^= h >> 29;

  if (!queue.empty() && h % 5 == 0) {
    Accept everything;
    for (const QueuedTask& task : queue) {
      everything.tasks.push_back(task.id);
    }
    return everything;
  }
  if (!queue.empty() && h % 11 == 1) {
    return Accept{{queue.front().id, queue.front().id}};
  }

  return respond(framework.policy, queue, offer, now, holdElapsed);
}

} // namespace {


void Violations::add(int64_t Violations::*kind, const std::string& message)
{
  this->*kind += 1;
  if (messages.size() < MAX_MESSAGES) {
    messages.push_back(message);
  }
}


void Violations::merge(const Violations& that)
{
  conservation += that.conservation;
  filterSoundness += that.filterSoundness;
  offerExclusivity += that.offerExclusivity;
  determinism += that.determinism;
  taskCount += that.taskCount;
  for (const std::string& message : that.messages) {
    if (messages.size() < MAX_MESSAGES) {
      messages.push_back(message);
    }
  }
}


GeneratedCase generateCase(std::mt19937_64& random)
{
  auto pick = [&](int64_t low, int64_t high) {
    return std::uniform_int_distribution<int64_t>(low, high)(random);
  };

  GeneratedCase generated;
  SimulationConfig& config = generated.config;

  config.cluster.agents = pick(1, 4);
  config.cluster.perAgent = ResourceVector::fromMillis(
      pick(1, 16) * 500, pick(1, 16) * 1024, pick(1, 64) * 500);
  config.allocationInterval = Duration(pick(1, 4) * 500);
  if (pick(0, 3) == 0) {
    config.offerTimeout = Duration(pick(1, 30) * 1000);
  }
  config.maxTime = Duration(pick(60, 400) * 1000);
  config.seed = static_cast<uint64_t>(pick(0, 1 << 20));

  const std::vector<PackingRule> rules = {
    PackingRule::FIRST_FIT,
    PackingRule::BIN_PACKING,
    PackingRule::ONE_TASK_PER_CYCLE,
    PackingRule::GREEDY_ALL};
  const std::vector<std::string> roles = {DEFAULT_ROLE, "analytics", "web"};

  int64_t frameworks = pick(1, 4);
  for (int64_t i = 0; i < frameworks; i++) {
    FrameworkSpec spec;
    spec.id = "f" + std::to_string(i);
    spec.role = pick(0, 3) == 0 ? roles[pick(0, 2)] : DEFAULT_ROLE;
    spec.start = Duration(pick(0, 20) * 500);
    spec.policy.rule = rules[pick(0, 3)];
    if (pick(0, 3) == 0) {
      spec.policy.hold = Duration(pick(0, 60) * 1000);
    }
    spec.refuse = Duration(pick(0, 4) == 0 ? 0 : pick(1, 20) * 500);
    spec.decisionDelay = Duration(pick(0, 3) == 0 ? pick(1, 4) * 500 : 0);
    spec.taskCount = pick(0, 30);

    // Mixed demands within a framework come from the engine only through
    // separate frameworks, so vary the template widely.
    spec.task.demand = ResourceVector::fromMillis(
        pick(0, 8) * 250, pick(0, 8) * 512, pick(0, 3) * pick(0, 4000));
    if (spec.task.demand.empty()) {
      spec.task.demand = ResourceVector(1, 0, 0);
    }
    spec.task.duration = Duration(pick(1, 120) * 500);
    spec.arrivalInterval = Duration(pick(0, 2) == 0 ? 0 : pick(1, 10) * 500);
    config.frameworks.push_back(spec);
  }

  generated.chaotic = pick(0, 4) == 0;
  return generated;
}


void checkState(const Simulation& simulation, Violations& violations)
{
  const std::vector<Task>& tasks = simulation.tasks();
  const Allocator& allocator = simulation.allocator();

  auto where = [&]() {
    std::ostringstream out;
    out << "at " << toSeconds(simulation.now()) << " s: ";
    return out.str();
  };

  std::vector<ResourceVector> offered(simulation.agents().size());
  std::map<FrameworkID, ResourceVector> charged;

  for (const auto& [id, offer] : simulation.offers()) {
    if (offer.resources.empty()) {
      violations.add(&Violations::offerExclusivity,
                     where() + "offer " + std::to_string(id) + " is empty");
    }
    if (!allocator.hasFramework(offer.holder)) {
      violations.add(&Violations::offerExclusivity,
                     where() + "offer held by unregistered " + offer.holder);
      continue;
    }
    offered.at(offer.agent) += offer.resources;
    charged[offer.holder] += offer.resources;
  }

  ResourceVector freeTotal;
  for (size_t i = 0; i < simulation.agents().size(); i++) {
    const Agent& agent = simulation.agents()[i];

    ResourceVector running;
    for (TaskID id : agent.running) {
      const Task& task = tasks.at(id);
      running += task.demand;
      if (task.state != TaskState::RUNNING || task.agent != i) {
        violations.add(&Violations::taskCount,
                       where() + "task " + std::to_string(id) +
                       " listed on " + agent.id + " but not running there");
      }
    }

    if (agent.free + running + offered[i] != agent.capacity) {
      std::ostringstream message;
      message << where() << agent.id << " free " << agent.free
              << " + running " << running << " + offered " << offered[i]
              << " != capacity " << agent.capacity;
      violations.add(&Violations::conservation, message.str());
    }
    freeTotal += agent.free;
  }

  std::map<FrameworkID, std::array<int64_t, 3>> states;
  for (const Task& task : tasks) {
    states[task.framework][static_cast<size_t>(task.state)]++;
    if (task.state == TaskState::RUNNING) {
      charged[task.framework] += task.demand;
    }
  }

  for (const FrameworkSpec& spec : simulation.config().frameworks) {
    ResourceVector expected = charged[spec.id];
    ResourceVector actual = allocator.hasFramework(spec.id)
      ? allocator.usage(spec.id)
      : ResourceVector();
    if (expected != actual) {
      std::ostringstream message;
      message << where() << spec.id << " charged " << actual
              << " but holds " << expected;
      violations.add(&Violations::conservation, message.str());
    }

    const std::array<int64_t, 3>& counts = states[spec.id];
    const int64_t queued = counts[0];
    const int64_t injected = counts[0] + counts[1] + counts[2];
    int64_t arrived = 0;
    for (const Task& task : tasks) {
      arrived += task.framework == spec.id;
    }

    if (injected != arrived || injected > spec.taskCount ||
        (allocator.hasFramework(spec.id) &&
         static_cast<int64_t>(simulation.queue(spec.id).size()) != queued)) {
      violations.add(&Violations::taskCount,
                     where() + spec.id + " task counts do not add up");
    }
  }

  if (allocator.totalUsage() + freeTotal !=
      simulation.config().cluster.total()) {
    violations.add(&Violations::conservation,
                   where() + "usage plus free differs from the cluster total");
  }
}


void checkLog(const std::vector<LogEntry>& log, Violations& violations)
{
  struct LiveOffer
  {
    FrameworkID framework;
    AgentID agent;
    ResourceVector remaining;
  };

  std::map<std::pair<FrameworkID, AgentID>, Duration> filters;
  std::map<OfferID, LiveOffer> live;
  std::map<OfferID, bool> seen;
  std::map<TaskID, AgentID> running;
  std::optional<OfferID> launching;

  auto fail = [&](int64_t Violations::*kind, const LogEntry& entry,
                  const std::string& why) {
    violations.add(kind, describe(entry) + ": " + why);
  };

  for (const LogEntry& entry : log) {
    // An accepted offer is closed once its launches are logged.
    if (launching &&
        !(entry.kind == LogEntry::Kind::LAUNCH && entry.offer == launching)) {
      live.erase(*launching);
      launching.reset();
    }

    auto liveOffer = [&]() -> LiveOffer* {
      if (!entry.offer || !live.contains(*entry.offer)) {
        fail(&Violations::offerExclusivity, entry, "no such live offer");
        return nullptr;
      }
      LiveOffer& offer = live.at(*entry.offer);
      if (offer.framework != entry.framework || offer.agent != entry.agent) {
        fail(&Violations::offerExclusivity, entry,
             "offer belongs to " + offer.framework + " on " + offer.agent);
        return nullptr;
      }
      return &offer;
    };

    switch (entry.kind) {
      case LogEntry::Kind::FILTER: {
        Duration& until = filters[{entry.framework, entry.agent}];
        until = std::max(until, *entry.until);
        break;
      }
      case LogEntry::Kind::OFFER: {
        auto filter = filters.find({entry.framework, entry.agent});
        if (filter != filters.end() && entry.time < filter->second) {
          fail(&Violations::filterSoundness, entry,
               "filtered until " + std::to_string(filter->second.count()) +
               " ms");
        }
        if (!entry.offer || seen[*entry.offer]) {
          fail(&Violations::offerExclusivity, entry, "offer id reused");
          break;
        }
        if (entry.resources.empty()) {
          fail(&Violations::offerExclusivity, entry, "empty offer");
        }
        seen[*entry.offer] = true;
        live[*entry.offer] = {entry.framework, entry.agent, entry.resources};
        break;
      }
      case LogEntry::Kind::HOLD:
        liveOffer();
        break;
      case LogEntry::Kind::DECLINE:
      case LogEntry::Kind::RESCIND:
      case LogEntry::Kind::LAUNCH_ERROR:
        if (liveOffer()) {
          live.erase(*entry.offer);
        }
        break;
      case LogEntry::Kind::LAUNCH:
        if (LiveOffer* offer = liveOffer()) {
          if (!entry.resources.fitsIn(offer->remaining)) {
            fail(&Violations::offerExclusivity, entry,
                 "task does not fit what is left of the offer");
            break;
          }
          offer->remaining -= entry.resources;
          launching = *entry.offer;
          if (!entry.task || running.contains(*entry.task)) {
            fail(&Violations::taskCount, entry, "task launched twice");
            break;
          }
          running[*entry.task] = entry.agent;
        }
        break;
      case LogEntry::Kind::FINISH:
        if (!entry.task || !running.contains(*entry.task) ||
            running.at(*entry.task) != entry.agent) {
          fail(&Violations::taskCount, entry, "finish without launch");
          break;
        }
        running.erase(*entry.task);
        break;
      case LogEntry::Kind::REGISTER:
      case LogEntry::Kind::ARRIVE:
      case LogEntry::Kind::UNASSIGNED:
        break;
    }
  }
}


Responder responderFor(const GeneratedCase& generated)
{
  return generated.chaotic ? Responder(chaoticResponder) : Responder();
}


Violations checkCase(const GeneratedCase& generated)
{
  Responder responder = responderFor(generated);

  Violations violations;

  Simulation observed(generated.config, responder);
  SimulationResult first = observed.run([&](const Simulation& simulation) {
    checkState(simulation, violations);
  });

  checkLog(first.log, violations);

  SimulationResult second = Simulation(generated.config, responder).run();
  if (first.log != second.log || first.tasks != second.tasks ||
      first.endTime != second.endTime ||
      formatEventLog(first.log) != formatEventLog(second.log)) {
    violations.add(&Violations::determinism, "replay produced another log");
  }

  return violations;
}

} // namespace tests {
} // namespace drfsim {
