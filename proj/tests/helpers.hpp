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

#ifndef __DRFSIM_TESTS_HELPERS_HPP__
#define __DRFSIM_TESTS_HELPERS_HPP__

#include <algorithm>
#include <string>
#include <vector>

#include "drfsim/engine.hpp"

namespace drfsim {
namespace tests {

// Four agents of (8 CPU, 16 GB, 32000 MB disk).
inline ClusterSpec paperCluster()
{
  return ClusterSpec{4, ResourceVector(8, 16384, 32000)};
}


inline FrameworkSpec makeFramework(
    const FrameworkID& id,
    Policy policy,
    int64_t taskCount,
    const ResourceVector& demand,
    Duration duration,
    Duration refuse = Duration::zero(),
    Duration start = Duration::zero(),
    Duration arrivalInterval = Duration::zero())
{
  FrameworkSpec spec;
  spec.id = id;
  spec.policy = policy;
  spec.taskCount = taskCount;
  spec.task = TaskTemplate{demand, duration};
  spec.refuse = refuse;
  spec.start = start;
  spec.arrivalInterval = arrivalInterval;
  return spec;
}


inline Policy rule(PackingRule packing)
{
  return Policy{packing, {}};
}


inline std::vector<LogEntry> entriesOf(
    const std::vector<LogEntry>& log,
    LogEntry::Kind kind,
    const FrameworkID& framework = "")
{
  std::vector<LogEntry> found;
  std::copy_if(log.begin(), log.end(), std::back_inserter(found),
               [&](const LogEntry& entry) {
                 return entry.kind == kind &&
                        (framework.empty() || entry.framework == framework);
               });
  return found;
}

} // namespace tests {
} // namespace drfsim {

#endif // __DRFSIM_TESTS_HELPERS_HPP__
