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

#ifndef __DRFSIM_ENGINE_HPP__
#define __DRFSIM_ENGINE_HPP__

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "drfsim/allocator.hpp"
#include "drfsim/framework.hpp"
#include "drfsim/resources.hpp"
#include "drfsim/time.hpp"

namespace drfsim {

using OfferID = uint64_t;


struct ClusterSpec
{
  int64_t agents = 0;
  ResourceVector perAgent;

  ResourceVector total() const { return perAgent * agents; }

  friend bool operator==(const ClusterSpec&, const ClusterSpec&) = default;
};


struct SimulationConfig
{
  ClusterSpec cluster;
  Duration allocationInterval = std::chrono::seconds(1);

  // Master-side offer timeout; unset means offers can be held forever.
  std::optional<Duration> offerTimeout;

  std::vector<FrameworkSpec> frameworks;
  Duration maxTime = std::chrono::seconds(10000);
  uint64_t seed = 0;

  friend bool operator==(const SimulationConfig&, const SimulationConfig&) =
    default;
};


enum class TaskState
{
  QUEUED,
  RUNNING,
  FINISHED,
};


struct Task
{
  TaskID id;
  FrameworkID framework;
  ResourceVector demand;
  Duration duration;
  TaskState state = TaskState::QUEUED;
  Duration arrivedAt{0};
  std::optional<Duration> launchedAt;
  std::optional<Duration> finishedAt;
  std::optional<size_t> agent;
};


struct Agent
{
  AgentID id;
  ResourceVector capacity;
  ResourceVector free;
  std::vector<TaskID> running;
};


struct OutstandingOffer
{
  OfferID id;
  size_t agent;
  ResourceVector resources;
  FrameworkID holder;
  Duration issuedAt;
  std::optional<Duration> masterTimeoutAt;
  std::optional<Duration> holderReleaseAt;
};


enum class EventKind
{
  TASK_FINISH,
  OFFER_TIMEOUT,
  FRAMEWORK_START,
  ADVERTISE_AND_ALLOCATE,
  OFFER_RESPONSE,
  TASK_ARRIVAL,
};

std::string toString(EventKind kind);


// Same-instant events fire in EventKind order, then in insertion order.
struct Event
{
  Duration time;
  uint64_t sequence;
  EventKind kind;

  // Task id, offer id or framework index depending on `kind`.
  uint64_t subject;
};


// One line of the replay log.
struct LogEntry
{
  enum class Kind
  {
    REGISTER,
    ARRIVE,
    OFFER,
    UNASSIGNED,
    LAUNCH,
    DECLINE,
    HOLD,
    RESCIND,
    FILTER,
    LAUNCH_ERROR,
    FINISH,
  };

  Duration time{0};
  Kind kind = Kind::REGISTER;
  FrameworkID framework{};
  AgentID agent{};
  std::optional<OfferID> offer{};
  std::optional<TaskID> task{};
  ResourceVector resources{};
  std::optional<Duration> until{};

  friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

std::string toString(LogEntry::Kind kind);

// One event per line: time in seconds, kind, subject ids, resources.
std::string formatEventLog(std::span<const LogEntry> log);


struct TaskRecord
{
  TaskID id;
  FrameworkID framework;
  ResourceVector demand;
  Duration arrivedAt;
  std::optional<Duration> launchedAt;
  std::optional<Duration> finishedAt;

  friend bool operator==(const TaskRecord&, const TaskRecord&) = default;
};


struct SimulationResult
{
  ClusterSpec cluster;
  std::vector<FrameworkSpec> frameworks;
  std::vector<TaskRecord> tasks;
  std::vector<LogEntry> log;

  // Time of the last processed event, or the max time when truncated.
  Duration endTime{0};

  // Work remained when the max time was reached.
  bool truncated = false;

  int64_t launchErrors = 0;
};


// Replaces the framework policy; used to drive the engine with
// hand-written behaviors.
using Responder = std::function<Response(
    const FrameworkSpec& framework,
    std::span<const QueuedTask> queue,
    const ResourceVector& offer,
    Duration now,
    bool holdElapsed)>;


class Simulation;

// Invoked after every processed event.
using Observer = std::function<void(const Simulation&)>;


// Single-threaded discrete-event engine for one scenario run.
class Simulation
{
public:
  explicit Simulation(SimulationConfig config, Responder responder = {});

  Simulation(Simulation&&) = default;
  Simulation& operator=(Simulation&&) = default;

  SimulationResult run(const Observer& observer = {});

  // Processes the next event. Returns false once the run is over.
  bool step();

  bool done() const;

  Duration now() const { return currentTime; }
  const SimulationConfig& config() const { return configuration; }
  const std::vector<Agent>& agents() const { return agentList; }
  const std::map<OfferID, OutstandingOffer>& offers() const
  {
    return outstanding;
  }
  const std::vector<Task>& tasks() const { return taskList; }
  const Allocator& allocator() const { return drf; }
  const std::vector<LogEntry>& log() const { return eventLog; }

  // Tasks whose arrival has fired.
  int64_t injectedTasks() const { return static_cast<int64_t>(taskList.size()); }

  // Visible queue of a framework, FIFO.
  std::vector<QueuedTask> queue(const FrameworkID& frameworkId) const;

  SimulationResult result() const;

private:
  struct FrameworkRuntime
  {
    FrameworkSpec spec;
    bool registered = false;
    std::deque<TaskID> queue;
    int64_t notArrived = 0;
    int64_t running = 0;
  };

  struct Later
  {
    bool operator()(const Event& a, const Event& b) const;
  };

  void schedule(Duration time, EventKind kind, uint64_t subject);
  void dispatch(const Event& event);

  void startFramework(size_t index);
  void arriveTask(size_t index);
  void advertiseAndAllocate();
  void respondToOffer(OfferID offerId, bool holdElapsed);
  void timeoutOffer(OfferID offerId);
  void applyOfferResponse(OfferID offerId, const Response& response);
  void returnOffer(OutstandingOffer& offer, ResourceVector resources);
  void finishTask(TaskID taskId);

  FrameworkRuntime& runtime(const FrameworkID& frameworkId);
  const FrameworkRuntime& runtime(const FrameworkID& frameworkId) const;

  void record(LogEntry entry);

  SimulationConfig configuration;
  Responder responder;
  Allocator drf;

  std::vector<Agent> agentList;
  std::vector<FrameworkRuntime> frameworks;
  std::map<FrameworkID, size_t> frameworkIndex;
  std::vector<Task> taskList;
  std::map<OfferID, OutstandingOffer> outstanding;
  std::vector<LogEntry> eventLog;

  std::priority_queue<Event, std::vector<Event>, Later> events;
  uint64_t nextSequence = 0;
  OfferID nextOfferId = 0;
  Duration currentTime{0};
  bool truncated = false;
  bool finished = false;
  int64_t launchErrors = 0;
};


// Runs `config` to completion.
SimulationResult simulate(const SimulationConfig& config);

} // namespace drfsim {

#endif // __DRFSIM_ENGINE_HPP__
