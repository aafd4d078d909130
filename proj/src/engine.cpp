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

#include "drfsim/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace drfsim {

std::string toString(EventKind kind)
{
  switch (kind) {
    case EventKind::TASK_FINISH: return "TaskFinish";
    case EventKind::OFFER_TIMEOUT: return "OfferTimeout";
    case EventKind::FRAMEWORK_START: return "FrameworkStart";
    case EventKind::ADVERTISE_AND_ALLOCATE: return "AdvertiseAndAllocate";
    case EventKind::OFFER_RESPONSE: return "OfferResponse";
    case EventKind::TASK_ARRIVAL: return "TaskArrival";
  }
  return "Unknown";
}


std::string toString(LogEntry::Kind kind)
{
  switch (kind) {
    case LogEntry::Kind::REGISTER: return "REGISTER";
    case LogEntry::Kind::ARRIVE: return "ARRIVE";
    case LogEntry::Kind::OFFER: return "OFFER";
    case LogEntry::Kind::UNASSIGNED: return "UNASSIGNED";
    case LogEntry::Kind::LAUNCH: return "LAUNCH";
    case LogEntry::Kind::DECLINE: return "DECLINE";
    case LogEntry::Kind::HOLD: return "HOLD";
    case LogEntry::Kind::RESCIND: return "RESCIND";
    case LogEntry::Kind::FILTER: return "FILTER";
    case LogEntry::Kind::LAUNCH_ERROR: return "LAUNCH_ERROR";
    case LogEntry::Kind::FINISH: return "FINISH";
  }
  return "UNKNOWN";
}


static std::string formatSeconds(Duration duration)
{
  char buffer[32];
  std::snprintf(
      buffer,
      sizeof(buffer),
      "%lld.%03lld",
      static_cast<long long>(duration.count() / 1000),
      static_cast<long long>(duration.count() % 1000));
  return buffer;
}


std::string formatEventLog(std::span<const LogEntry> log)
{
  std::ostringstream out;

  for (const LogEntry& entry : log) {
    out << formatSeconds(entry.time) << ' ' << toString(entry.kind);
    if (!entry.framework.empty()) {
      out << " framework=" << entry.framework;
    }
    if (!entry.agent.empty()) {
      out << " agent=" << entry.agent;
    }
    if (entry.offer) {
      out << " offer=" << *entry.offer;
    }
    if (entry.task) {
      out << " task=" << *entry.task;
    }
    if (!entry.resources.empty()) {
      out << " cpus=" << entry.resources.cpuMillis() / 1000 << '.';
      char millis[8];
      std::snprintf(
          millis,
          sizeof(millis),
          "%03lld",
          static_cast<long long>(entry.resources.cpuMillis() % 1000));
      out << millis << " mem=" << entry.resources.memMb()
          << " disk=" << entry.resources.diskMb();
    }
    if (entry.until) {
      out << " until=" << formatSeconds(*entry.until);
    }
    out << '\n';
  }

  return out.str();
}


bool Simulation::Later::operator()(const Event& a, const Event& b) const
{
  if (a.time != b.time) {
    return a.time > b.time;
  }
  if (a.kind != b.kind) {
    return a.kind > b.kind;
  }
  return a.sequence > b.sequence;
}


Simulation::Simulation(SimulationConfig config, Responder _responder)
  : configuration(std::move(config)),
    responder(std::move(_responder)),
    drf(configuration.cluster.total(), configuration.seed)
{
  if (configuration.allocationInterval <= Duration::zero()) {
    throw std::invalid_argument("Allocation interval must be positive");
  }

  for (int64_t i = 0; i < configuration.cluster.agents; i++) {
    const ResourceVector& capacity = configuration.cluster.perAgent;
    agentList.push_back(
        Agent{"agent-" + std::to_string(i), capacity, capacity, {}});
  }

  for (size_t i = 0; i < configuration.frameworks.size(); i++) {
    const FrameworkSpec& spec = configuration.frameworks[i];
    if (!frameworkIndex.emplace(spec.id, i).second) {
      throw std::invalid_argument("Duplicate framework id '" + spec.id + "'");
    }

    FrameworkRuntime framework;
    framework.spec = spec;
    framework.notArrived = spec.taskCount;
    frameworks.push_back(std::move(framework));

    schedule(spec.start, EventKind::FRAMEWORK_START, i);
  }

  schedule(Duration::zero(), EventKind::ADVERTISE_AND_ALLOCATE, 0);
}


void Simulation::schedule(Duration time, EventKind kind, uint64_t subject)
{
  events.push(Event{time, nextSequence++, kind, subject});
}


bool Simulation::done() const
{
  if (finished) {
    return true;
  }

  return std::all_of(
      frameworks.begin(),
      frameworks.end(),
      [](const FrameworkRuntime& framework) {
        return framework.notArrived == 0 &&
               framework.queue.empty() &&
               framework.running == 0;
      });
}


bool Simulation::step()
{
  if (finished) {
    return false;
  }

  if (done() || events.empty()) {
    finished = true;
    return false;
  }

  Event event = events.top();
  if (event.time > configuration.maxTime) {
    truncated = true;
    currentTime = configuration.maxTime;
    finished = true;
    return false;
  }

  events.pop();
  currentTime = event.time;
  dispatch(event);

  if (done()) {
    finished = true;
  }

  return true;
}


SimulationResult Simulation::run(const Observer& observer)
{
  while (step()) {
    if (observer) {
      observer(*this);
    }
  }

  return result();
}


void Simulation::dispatch(const Event& event)
{
  switch (event.kind) {
    case EventKind::TASK_FINISH:
      finishTask(event.subject);
      break;
    case EventKind::OFFER_TIMEOUT:
      timeoutOffer(event.subject);
      break;
    case EventKind::FRAMEWORK_START:
      startFramework(event.subject);
      break;
    case EventKind::ADVERTISE_AND_ALLOCATE:
      advertiseAndAllocate();
      schedule(
          currentTime + configuration.allocationInterval,
          EventKind::ADVERTISE_AND_ALLOCATE,
          0);
      break;
    case EventKind::OFFER_RESPONSE:
      respondToOffer(event.subject, false);
      break;
    case EventKind::TASK_ARRIVAL:
      arriveTask(event.subject);
      break;
  }
}


Simulation::FrameworkRuntime& Simulation::runtime(
    const FrameworkID& frameworkId)
{
  return frameworks.at(frameworkIndex.at(frameworkId));
}


const Simulation::FrameworkRuntime& Simulation::runtime(
    const FrameworkID& frameworkId) const
{
  return frameworks.at(frameworkIndex.at(frameworkId));
}


void Simulation::record(LogEntry entry)
{
  entry.time = currentTime;
  eventLog.push_back(std::move(entry));
}


void Simulation::startFramework(size_t index)
{
  FrameworkRuntime& framework = frameworks.at(index);
  const FrameworkSpec& spec = framework.spec;

  drf.addFramework(spec.id, currentTime, spec.role);
  framework.registered = true;
  record({.kind = LogEntry::Kind::REGISTER, .framework = spec.id});

  // Tasks due at registration are visible to the same instant's allocation.
  if (spec.taskCount == 0) {
    return;
  }

  if (spec.arrivalInterval == Duration::zero()) {
    while (framework.notArrived > 0) {
      arriveTask(index);
    }
    return;
  }

  arriveTask(index);
  for (int64_t k = 1; k < spec.taskCount; k++) {
    schedule(
        spec.start + spec.arrivalInterval * k,
        EventKind::TASK_ARRIVAL,
        index);
  }
}


void Simulation::arriveTask(size_t index)
{
  FrameworkRuntime& framework = frameworks.at(index);

  Task task;
  task.id = taskList.size();
  task.framework = framework.spec.id;
  task.demand = framework.spec.task.demand;
  task.duration = framework.spec.task.duration;
  task.arrivedAt = currentTime;

  framework.queue.push_back(task.id);
  framework.notArrived--;

  record({
      .kind = LogEntry::Kind::ARRIVE,
      .framework = task.framework,
      .task = task.id});

  taskList.push_back(std::move(task));
}


std::vector<QueuedTask> Simulation::queue(const FrameworkID& frameworkId) const
{
  std::vector<QueuedTask> visible;
  for (TaskID id : runtime(frameworkId).queue) {
    visible.push_back({id, taskList.at(id).demand});
  }
  return visible;
}


void Simulation::advertiseAndAllocate()
{
  drf.expireFilters(currentTime);

  std::vector<FreeOffer> free;
  std::map<AgentID, size_t> agentIndex;
  for (size_t i = 0; i < agentList.size(); i++) {
    Agent& agent = agentList[i];
    if (!agent.free.empty()) {
      free.push_back({agent.id, agent.free});
      agentIndex.emplace(agent.id, i);
      agent.free = ResourceVector();
    }
  }

  if (free.empty()) {
    return;
  }

  CycleResult cycle = drf.allocationCycle(std::move(free), currentTime);

  for (const FreeOffer& offer : cycle.unassigned) {
    agentList.at(agentIndex.at(offer.agent)).free += offer.resources;
    record({
        .kind = LogEntry::Kind::UNASSIGNED,
        .agent = offer.agent,
        .resources = offer.resources});
  }

  for (const Assignment& assignment : cycle.assigned) {
    const FrameworkRuntime& framework = runtime(assignment.framework);

    OutstandingOffer offer;
    offer.id = nextOfferId++;
    offer.agent = agentIndex.at(assignment.offer.agent);
    offer.resources = assignment.offer.resources;
    offer.holder = assignment.framework;
    offer.issuedAt = currentTime;
    if (configuration.offerTimeout) {
      offer.masterTimeoutAt = currentTime + *configuration.offerTimeout;
      schedule(*offer.masterTimeoutAt, EventKind::OFFER_TIMEOUT, offer.id);
    }

    record({
        .kind = LogEntry::Kind::OFFER,
        .framework = offer.holder,
        .agent = assignment.offer.agent,
        .offer = offer.id,
        .resources = offer.resources});

    schedule(
        currentTime + framework.spec.effectiveDecisionDelay(),
        EventKind::OFFER_RESPONSE,
        offer.id);

    outstanding.emplace(offer.id, std::move(offer));
  }
}


void Simulation::respondToOffer(OfferID offerId, bool holdElapsed)
{
  auto it = outstanding.find(offerId);
  if (it == outstanding.end()) {
    return; // Rescinded.
  }

  const OutstandingOffer& offer = it->second;
  const FrameworkSpec& spec = runtime(offer.holder).spec;
  std::vector<QueuedTask> visible = queue(offer.holder);

  Response response = responder
    ? responder(spec, visible, offer.resources, currentTime, holdElapsed)
    : respond(spec.policy, visible, offer.resources, currentTime, holdElapsed);

  applyOfferResponse(offerId, response);
}


void Simulation::timeoutOffer(OfferID offerId)
{
  auto it = outstanding.find(offerId);
  if (it == outstanding.end()) {
    return;
  }

  if (it->second.holderReleaseAt) {
    const OutstandingOffer& offer = it->second;
    Duration due = *offer.holderReleaseAt;
    if (offer.masterTimeoutAt) {
      due = std::min(due, *offer.masterTimeoutAt);
    }
    if (currentTime < due) {
      return; // Superseded timer.
    }

    respondToOffer(offerId, true);

    // A framework may not keep holding past the master's timeout.
    it = outstanding.find(offerId);
    if (it == outstanding.end() ||
        !it->second.masterTimeoutAt ||
        currentTime < *it->second.masterTimeoutAt) {
      return;
    }
  }

  OutstandingOffer& offer = it->second;

  // The framework has not answered within the master's timeout.
  if (offer.masterTimeoutAt && currentTime >= *offer.masterTimeoutAt) {
    record({
        .kind = LogEntry::Kind::RESCIND,
        .framework = offer.holder,
        .agent = agentList.at(offer.agent).id,
        .offer = offer.id,
        .resources = offer.resources});
    returnOffer(offer, offer.resources);
    outstanding.erase(it);
  }
}


void Simulation::returnOffer(
    OutstandingOffer& offer,
    ResourceVector resources)
{
  offer.resources -= resources;
  agentList.at(offer.agent).free += resources;
  drf.recover(offer.holder, resources);
}


void Simulation::applyOfferResponse(OfferID offerId, const Response& response)
{
  OutstandingOffer& offer = outstanding.at(offerId);
  FrameworkRuntime& framework = runtime(offer.holder);
  Agent& agent = agentList.at(offer.agent);

  auto filter = [&]() {
    Duration refuse = framework.spec.effectiveRefuse();
    if (refuse > Duration::zero()) {
      drf.addFilter(offer.holder, agent.id, refuse, currentTime);
      record({
          .kind = LogEntry::Kind::FILTER,
          .framework = offer.holder,
          .agent = agent.id,
          .until = currentTime + refuse});
    }
  };

  if (const Hold* hold = std::get_if<Hold>(&response)) {
    offer.holderReleaseAt = hold->until;
    Duration due = hold->until;
    if (offer.masterTimeoutAt) {
      due = std::min(due, *offer.masterTimeoutAt);
    }
    record({
        .kind = LogEntry::Kind::HOLD,
        .framework = offer.holder,
        .agent = agent.id,
        .offer = offer.id,
        .resources = offer.resources,
        .until = hold->until});
    schedule(std::max(due, currentTime), EventKind::OFFER_TIMEOUT, offer.id);
    return;
  }

  const Accept* accept = std::get_if<Accept>(&response);

  if (accept == nullptr || accept->tasks.empty()) {
    record({
        .kind = LogEntry::Kind::DECLINE,
        .framework = offer.holder,
        .agent = agent.id,
        .offer = offer.id,
        .resources = offer.resources});
    returnOffer(offer, offer.resources);
    filter();
    outstanding.erase(offerId);
    return;
  }

  // The master validates the task list against the offer; on failure the
  // whole offer goes back and the tasks stay queued.
  ResourceVector demand;
  bool valid = true;
  std::vector<TaskID> seen;
  for (TaskID id : accept->tasks) {
    auto position =
      std::find(framework.queue.begin(), framework.queue.end(), id);
    if (position == framework.queue.end() ||
        std::find(seen.begin(), seen.end(), id) != seen.end()) {
      valid = false;
      break;
    }
    seen.push_back(id);
    demand += taskList.at(id).demand;
  }

  if (!valid || !demand.fitsIn(offer.resources)) {
    launchErrors++;
    record({
        .kind = LogEntry::Kind::LAUNCH_ERROR,
        .framework = offer.holder,
        .agent = agent.id,
        .offer = offer.id,
        .resources = demand});
    returnOffer(offer, offer.resources);
    outstanding.erase(offerId);
    return;
  }

  for (TaskID id : accept->tasks) {
    framework.queue.erase(
        std::find(framework.queue.begin(), framework.queue.end(), id));

    Task& task = taskList.at(id);
    task.state = TaskState::RUNNING;
    task.launchedAt = currentTime;
    task.agent = offer.agent;
    agent.running.push_back(id);
    framework.running++;

    // The task's demand stays charged to the framework until it finishes.
    offer.resources -= task.demand;

    schedule(currentTime + task.duration, EventKind::TASK_FINISH, id);

    record({
        .kind = LogEntry::Kind::LAUNCH,
        .framework = offer.holder,
        .agent = agent.id,
        .offer = offer.id,
        .task = id,
        .resources = task.demand});
  }

  if (!offer.resources.empty()) {
    returnOffer(offer, offer.resources);
    filter();
  }

  outstanding.erase(offerId);
}


void Simulation::finishTask(TaskID taskId)
{
  Task& task = taskList.at(taskId);
  Agent& agent = agentList.at(*task.agent);

  task.state = TaskState::FINISHED;
  task.finishedAt = currentTime;

  agent.running.erase(
      std::find(agent.running.begin(), agent.running.end(), taskId));
  agent.free += task.demand;
  drf.recover(task.framework, task.demand);
  runtime(task.framework).running--;

  record({
      .kind = LogEntry::Kind::FINISH,
      .framework = task.framework,
      .agent = agent.id,
      .task = taskId,
      .resources = task.demand});
}


SimulationResult Simulation::result() const
{
  SimulationResult result;
  result.cluster = configuration.cluster;
  result.frameworks = configuration.frameworks;
  result.log = eventLog;
  result.endTime = currentTime;
  result.truncated = truncated;
  result.launchErrors = launchErrors;

  for (const Task& task : taskList) {
    result.tasks.push_back(
        {task.id,
         task.framework,
         task.demand,
         task.arrivedAt,
         task.launchedAt,
         task.finishedAt});
  }

  return result;
}


SimulationResult simulate(const SimulationConfig& config)
{
  return Simulation(config).run();
}

} // namespace drfsim {
