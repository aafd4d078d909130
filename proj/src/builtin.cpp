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

#include <string>
#include <vector>

#include "drfsim/scenario.hpp"

using std::chrono::seconds;

namespace drfsim {

namespace {

// 4 agents of 8 CPUs, 16 GB memory and 32000 MB disk: the experimental
// cluster of 32 CPUs and 64 GB.
ScenarioConfig cluster(const std::string& name, const std::string& description)
{
  ScenarioConfig config;
  config.name = name;
  config.description = description;
  config.outputDir = "out/" + name;
  config.simulation.cluster = {4, ResourceVector(8, 16384, 32000)};
  return config;
}


FrameworkSpec framework(
    const std::string& id,
    Policy policy,
    Duration refuse,
    Duration start,
    int64_t taskCount,
    const ResourceVector& demand,
    Duration duration,
    Duration arrivalInterval = Duration::zero())
{
  FrameworkSpec spec;
  spec.id = id;
  spec.start = start;
  spec.policy = policy;
  spec.refuse = refuse;
  spec.task = {demand, duration};
  spec.taskCount = taskCount;
  spec.arrivalInterval = arrivalInterval;
  return spec;
}


Policy rule(PackingRule packing)
{
  return Policy{packing, std::nullopt};
}


const ResourceVector SMALL_TASK(1, 1024, 0);

// Mesos applies a 5 s filter when a framework declines without saying
// otherwise; it is used wherever no other value is known.
const Duration DEFAULT_REFUSE = seconds(5);

// Aurora keeps offers it cannot use for five minutes.
const Policy AURORA = Policy::holding(seconds(300), PackingRule::FIRST_FIT);


struct Entry
{
  ScenarioConfig config;
  std::vector<std::string> notes;
};


Entry marathonVsScylla(
    const std::string& name,
    const std::string& description,
    PackingRule packing,
    Duration refuse)
{
  ScenarioConfig config = cluster(name, description);
  config.simulation.frameworks = {
    framework("marathon", rule(PackingRule::GREEDY_ALL), Duration::zero(),
              Duration::zero(), 100, SMALL_TASK, seconds(100)),
    framework("scylla", rule(packing), refuse,
              Duration::zero(), 100, SMALL_TASK, seconds(100)),
  };

  return {config, {
    "Task durations are not documented for this experiment; 100 s is assumed.",
    "Both frameworks start together with their whole queue visible.",
  }};
}


Entry twoScylla(int64_t refuse)
{
  std::string name = "two-scylla-refuse-" + std::to_string(refuse);
  ScenarioConfig config = cluster(
      name,
      "Two identical first-fit frameworks, the second starting 10 s later, "
      "refuse " + std::to_string(refuse) + " s");
  config.simulation.frameworks = {
    framework("scylla-a", rule(PackingRule::FIRST_FIT), seconds(refuse),
              Duration::zero(), 100, SMALL_TASK, seconds(100)),
    framework("scylla-b", rule(PackingRule::FIRST_FIT), seconds(refuse),
              seconds(10), 100, SMALL_TASK, seconds(100)),
  };

  return {config, {
    "scylla-b starts once scylla-a has filled the cluster; the exact delay "
    "is not documented, 10 s is assumed.",
  }};
}


Entry auroraHold(bool bigDisk, int64_t refuse)
{
  std::string size = bigDisk ? "bigdisk" : "smalldisk";
  int64_t disk = bigDisk ? 4096 : 100;
  std::string name = "aurora-hold-" + size + "-refuse-" + std::to_string(refuse);
  ScenarioConfig config = cluster(
      name,
      "Holding framework against first-fit with (1 CPU, 2048 MB, " +
      std::to_string(disk) + " MB) tasks, competitor refuse " +
      std::to_string(refuse) + " s");

  ResourceVector task(1, 2048, disk);
  config.simulation.frameworks = {
    framework("scylla", rule(PackingRule::FIRST_FIT), seconds(refuse),
              Duration::zero(), 100, task, seconds(100)),
    framework("aurora", AURORA, DEFAULT_REFUSE,
              seconds(10), 100, task, seconds(100)),
  };

  return {config, {
    "Task count and durations are not documented for this experiment; 100 "
    "tasks of 100 s each are assumed.",
    "aurora starts 10 s after scylla has filled the cluster.",
  }};
}


Entry idleFrameworks(
    const std::string& name,
    const std::string& description,
    int64_t idle,
    Duration idleRefuse,
    Duration activeRefuse)
{
  ScenarioConfig config = cluster(name, description);
  config.simulation.frameworks = {
    framework("scylla", rule(PackingRule::FIRST_FIT), activeRefuse,
              Duration::zero(), 100, SMALL_TASK, seconds(100), seconds(2)),
  };
  for (int64_t i = 1; i <= idle; i++) {
    config.simulation.frameworks.push_back(
        framework("idle-" + std::to_string(i), rule(PackingRule::FIRST_FIT),
                  idleRefuse, Duration::zero(), 0, SMALL_TASK, seconds(100)));
  }

  return {config, {
    "Task durations are not documented for this experiment; 100 s is assumed.",
    "Idle frameworks register at time zero and never receive a task.",
  }};
}


Entry longShort(int64_t longInterval, int64_t shortInterval)
{
  std::string rates =
    std::to_string(longInterval) + "-" + std::to_string(shortInterval);
  ScenarioConfig config = cluster(
      "long-short-arrival-" + rates,
      "50 long (200 s) tasks every " + std::to_string(longInterval) +
      " s against 100 short (100 s) tasks every " +
      std::to_string(shortInterval) + " s");
  config.simulation.frameworks = {
    framework("scylla-l", rule(PackingRule::FIRST_FIT), DEFAULT_REFUSE,
              Duration::zero(), 50, SMALL_TASK, seconds(200),
              seconds(longInterval)),
    framework("scylla-s", rule(PackingRule::FIRST_FIT), DEFAULT_REFUSE,
              Duration::zero(), 100, SMALL_TASK, seconds(100),
              seconds(shortInterval)),
  };

  return {config, {
    "Both frameworks start at time zero.",
  }};
}


std::vector<Entry> catalog()
{
  std::vector<Entry> entries;

  entries.push_back(marathonVsScylla(
      "marathon-vs-scylla-firstfit",
      "Greedy framework against first-fit with the default 5 s refuse",
      PackingRule::FIRST_FIT,
      DEFAULT_REFUSE));

  {
    ScenarioConfig config = cluster(
        "scylla-vs-aurora-holding",
        "First-fit framework against a framework holding unusable offers "
        "for 300 s");
    config.simulation.frameworks = {
      framework("scylla", rule(PackingRule::FIRST_FIT), DEFAULT_REFUSE,
                Duration::zero(), 100, SMALL_TASK, seconds(100)),
      framework("aurora", AURORA, DEFAULT_REFUSE,
                seconds(10), 100, SMALL_TASK, seconds(100)),
    };
    entries.push_back({config, {
      "Task durations are not documented for this experiment; 100 s is "
      "assumed.",
      "aurora starts 10 s after scylla has filled the cluster.",
    }});
  }

  for (int64_t refuse : {0, 5, 7, 10}) {
    entries.push_back(twoScylla(refuse));
  }

  for (int64_t refuse : {3, 5}) {
    entries.push_back(marathonVsScylla(
        "scylla-binpack-vs-marathon-refuse-" + std::to_string(refuse),
        "Greedy framework against bin-packing with refuse " +
        std::to_string(refuse) + " s",
        PackingRule::BIN_PACKING,
        seconds(refuse)));
  }

  for (bool bigDisk : {false, true}) {
    for (int64_t refuse : {5, 20}) {
      entries.push_back(auroraHold(bigDisk, refuse));
    }
  }

  for (int64_t idle = 0; idle <= 5; idle++) {
    entries.push_back(idleFrameworks(
        "idle-frameworks-" + std::to_string(idle),
        "One active framework (tasks every 2 s) beside " +
        std::to_string(idle) + (idle == 1 ? " idle framework" : " idle frameworks") +
        ", refuse 5 s",
        idle,
        DEFAULT_REFUSE,
        DEFAULT_REFUSE));
  }

  entries.push_back(idleFrameworks(
      "idle-refuse-tuned",
      "Five idle frameworks refusing for 10 s beside an active one "
      "refusing for 2 s",
      5,
      seconds(10),
      seconds(2)));

  entries.push_back(longShort(5, 5));
  entries.push_back(longShort(5, 10));
  entries.push_back(longShort(10, 5));

  return entries;
}

} // namespace {


const std::vector<BuiltinScenario>& builtinScenarios()
{
  static const std::vector<BuiltinScenario> scenarios = [] {
    std::vector<BuiltinScenario> result;
    for (const Entry& entry : catalog()) {
      std::string text = "# " + entry.config.name + "\n#\n# " +
        entry.config.description + "\n#\n";
      for (const std::string& note : entry.notes) {
        text += "# " + note + "\n";
      }
      text += "\n" + serializeScenario(entry.config);
      result.push_back({entry.config.name, entry.config.description, text});
    }
    return result;
  }();
  return scenarios;
}


ScenarioConfig builtinScenario(const std::string& name)
{
  for (const BuiltinScenario& scenario : builtinScenarios()) {
    if (scenario.name == name) {
      return parseScenario(scenario.text);
    }
  }
  throw UnknownScenarioError("Unknown built-in scenario '" + name + "'");
}

} // namespace drfsim {
