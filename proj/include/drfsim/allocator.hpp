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

#ifndef __DRFSIM_ALLOCATOR_HPP__
#define __DRFSIM_ALLOCATOR_HPP__

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "drfsim/resources.hpp"
#include "drfsim/time.hpp"

namespace drfsim {

using FrameworkID = std::string;
using AgentID = std::string;

const std::string DEFAULT_ROLE = "*";


// While `now < expiresAt`, resources on `agent` are not offered to
// `framework`.
struct FilterEntry
{
  FrameworkID framework;
  AgentID agent;
  Duration expiresAt;

  friend bool operator==(const FilterEntry&, const FilterEntry&) = default;
};


// All free resources of one agent, not yet assigned to anyone.
struct FreeOffer
{
  AgentID agent;
  ResourceVector resources;
};


struct Assignment
{
  FreeOffer offer;
  FrameworkID framework;
};


struct CycleResult
{
  std::vector<Assignment> assigned;

  // Offers every framework had filtered.
  std::vector<FreeOffer> unassigned;
};


// The master's allocation module. Tracks per-framework usage (running tasks
// plus outstanding offers) and the offer filter table, and runs the
// allocation cycle: agents in seeded-random order, roles then frameworks in
// ascending dominant share, first unfiltered framework wins the agent's
// offer.
//
// Roles are sorted by the smallest dominant share among their member
// frameworks, then by name.
class Allocator
{
public:
  Allocator(const ResourceVector& total, uint64_t seed);

  // Throws std::invalid_argument if the framework is already known.
  void addFramework(
      const FrameworkID& frameworkId,
      Duration registeredAt,
      const std::string& role = DEFAULT_ROLE);

  bool hasFramework(const FrameworkID& frameworkId) const;

  // Charges `resources` to the framework's usage.
  void allocate(const FrameworkID& frameworkId, const ResourceVector& resources);

  // Returns `resources` from the framework's usage. Throws UnderflowError if
  // the framework was never charged that much.
  void recover(const FrameworkID& frameworkId, const ResourceVector& resources);

  const ResourceVector& usage(const FrameworkID& frameworkId) const;
  ResourceVector totalUsage() const;
  const ResourceVector& total() const { return clusterTotal; }

  DominantShare share(const FrameworkID& frameworkId) const;

  // Ascending dominant share; ties by registration time, then id.
  std::vector<FrameworkID> sortFrameworks(const std::string& role) const;

  std::vector<std::string> sortRoles() const;

  // A zero duration inserts nothing. An existing entry for the same pair
  // keeps the later expiry.
  void addFilter(
      const FrameworkID& frameworkId,
      const AgentID& agentId,
      Duration duration,
      Duration now);

  // Drops every entry with expiresAt <= now.
  void expireFilters(Duration now);

  bool isFiltered(
      const FrameworkID& frameworkId,
      const AgentID& agentId,
      Duration now) const;

  std::vector<FilterEntry> filters() const;

  // Assigns each offer to the first eligible framework and charges it.
  // Offers must be non-empty.
  CycleResult allocationCycle(std::vector<FreeOffer> offers, Duration now);

private:
  struct Framework
  {
    FrameworkID id;
    Duration registeredAt;
    std::string role;
    ResourceVector usage;
  };

  const Framework& framework(const FrameworkID& frameworkId) const;
  Framework& framework(const FrameworkID& frameworkId);

  // Uniform integer in [0, bound), identical on every platform.
  uint64_t uniformBelow(uint64_t bound);

  ResourceVector clusterTotal;
  std::map<FrameworkID, Framework> frameworks;
  std::map<std::pair<FrameworkID, AgentID>, Duration> filterTable;
  std::mt19937_64 random;
};


// A classical DRF user: every task needs `demand`.
struct DemandVector
{
  FrameworkID owner;
  ResourceVector demand;
};


constexpr int64_t DEFAULT_MAX_GRANTS = 1000000;


// Classical single-pool DRF by progressive filling: repeatedly grant one
// demand unit to the unsaturated user with the lowest dominant share (ties
// by position in `demands`) until nothing fits or `maxSteps` grants were
// made. Axes with a zero total are ignored when computing shares. Returns
// the number of units granted per owner.
std::map<FrameworkID, int64_t> classicalDrfAllocate(
    const ResourceVector& total,
    const std::vector<DemandVector>& demands,
    int64_t maxSteps = DEFAULT_MAX_GRANTS);

} // namespace drfsim {

#endif // __DRFSIM_ALLOCATOR_HPP__
