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

#include "drfsim/allocator.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>

namespace drfsim {

Allocator::Allocator(const ResourceVector& total, uint64_t seed)
  : clusterTotal(total), random(seed) {}


void Allocator::addFramework(
    const FrameworkID& frameworkId,
    Duration registeredAt,
    const std::string& role)
{
  if (frameworks.contains(frameworkId)) {
    throw std::invalid_argument(
        "Framework '" + frameworkId + "' is already registered");
  }

  frameworks.emplace(
      frameworkId, Framework{frameworkId, registeredAt, role, {}});
}


bool Allocator::hasFramework(const FrameworkID& frameworkId) const
{
  return frameworks.contains(frameworkId);
}


const Allocator::Framework& Allocator::framework(
    const FrameworkID& frameworkId) const
{
  auto it = frameworks.find(frameworkId);
  if (it == frameworks.end()) {
    throw std::out_of_range("Unknown framework '" + frameworkId + "'");
  }
  return it->second;
}


Allocator::Framework& Allocator::framework(const FrameworkID& frameworkId)
{
  auto it = frameworks.find(frameworkId);
  if (it == frameworks.end()) {
    throw std::out_of_range("Unknown framework '" + frameworkId + "'");
  }
  return it->second;
}


void Allocator::allocate(
    const FrameworkID& frameworkId,
    const ResourceVector& resources)
{
  framework(frameworkId).usage += resources;
}


void Allocator::recover(
    const FrameworkID& frameworkId,
    const ResourceVector& resources)
{
  framework(frameworkId).usage -= resources;
}


const ResourceVector& Allocator::usage(const FrameworkID& frameworkId) const
{
  return framework(frameworkId).usage;
}


ResourceVector Allocator::totalUsage() const
{
  ResourceVector sum;
  for (const auto& [id, framework] : frameworks) {
    sum += framework.usage;
  }
  return sum;
}


DominantShare Allocator::share(const FrameworkID& frameworkId) const
{
  return dominantShareOverPositive(framework(frameworkId).usage, clusterTotal);
}


std::vector<FrameworkID> Allocator::sortFrameworks(
    const std::string& role) const
{
  struct Entry
  {
    double share;
    Duration registeredAt;
    const FrameworkID* id;
  };

  std::vector<Entry> entries;
  for (const auto& [id, framework] : frameworks) {
    if (framework.role == role) {
      entries.push_back(
          {dominantShareOverPositive(framework.usage, clusterTotal).value,
           framework.registeredAt,
           &id});
    }
  }

  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.share != b.share) {
      return a.share < b.share;
    }
    if (a.registeredAt != b.registeredAt) {
      return a.registeredAt < b.registeredAt;
    }
    return *a.id < *b.id;
  });

  std::vector<FrameworkID> sorted;
  sorted.reserve(entries.size());
  for (const Entry& entry : entries) {
    sorted.push_back(*entry.id);
  }
  return sorted;
}


std::vector<std::string> Allocator::sortRoles() const
{
  std::map<std::string, double> minimum;
  for (const auto& [id, framework] : frameworks) {
    double value =
      dominantShareOverPositive(framework.usage, clusterTotal).value;

    auto it = minimum.find(framework.role);
    if (it == minimum.end()) {
      minimum.emplace(framework.role, value);
    } else {
      it->second = std::min(it->second, value);
    }
  }

  std::vector<std::pair<double, std::string>> entries;
  for (const auto& [role, value] : minimum) {
    entries.emplace_back(value, role);
  }
  std::sort(entries.begin(), entries.end());

  std::vector<std::string> sorted;
  for (auto& [value, role] : entries) {
    sorted.push_back(std::move(role));
  }
  return sorted;
}


void Allocator::addFilter(
    const FrameworkID& frameworkId,
    const AgentID& agentId,
    Duration duration,
    Duration now)
{
  if (duration < Duration::zero()) {
    throw std::invalid_argument("Filter duration must be non-negative");
  }

  if (duration == Duration::zero()) {
    return;
  }

  Duration expiresAt = now + duration;
  auto [it, inserted] =
    filterTable.try_emplace({frameworkId, agentId}, expiresAt);
  if (!inserted) {
    it->second = std::max(it->second, expiresAt);
  }
}


void Allocator::expireFilters(Duration now)
{
  std::erase_if(filterTable, [now](const auto& entry) {
    return entry.second <= now;
  });
}


bool Allocator::isFiltered(
    const FrameworkID& frameworkId,
    const AgentID& agentId,
    Duration now) const
{
  auto it = filterTable.find({frameworkId, agentId});
  return it != filterTable.end() && now < it->second;
}


std::vector<FilterEntry> Allocator::filters() const
{
  std::vector<FilterEntry> entries;
  for (const auto& [key, expiresAt] : filterTable) {
    entries.push_back({key.first, key.second, expiresAt});
  }
  return entries;
}


uint64_t Allocator::uniformBelow(uint64_t bound)
{
  // Rejection sampling; std::uniform_int_distribution is not portable
  // across standard library implementations.
  const uint64_t limit =
    std::numeric_limits<uint64_t>::max() -
    std::numeric_limits<uint64_t>::max() % bound;

  uint64_t value;
  do {
    value = random();
  } while (value >= limit);

  return value % bound;
}


CycleResult Allocator::allocationCycle(
    std::vector<FreeOffer> offers,
    Duration now)
{
  for (const FreeOffer& offer : offers) {
    if (offer.resources.empty()) {
      throw std::invalid_argument(
          "Offer from agent '" + offer.agent + "' carries no resources");
    }
  }

  // Fisher-Yates.
  for (size_t i = offers.size(); i > 1; i--) {
    std::swap(offers[i - 1], offers[uniformBelow(i)]);
  }

  CycleResult result;

  for (FreeOffer& offer : offers) {
    bool assigned = false;

    for (const std::string& role : sortRoles()) {
      for (const FrameworkID& frameworkId : sortFrameworks(role)) {
        if (isFiltered(frameworkId, offer.agent, now)) {
          continue;
        }

        allocate(frameworkId, offer.resources);
        result.assigned.push_back({std::move(offer), frameworkId});
        assigned = true;
        break;
      }

      if (assigned) {
        break;
      }
    }

    if (!assigned) {
      result.unassigned.push_back(std::move(offer));
    }
  }

  return result;
}


std::map<FrameworkID, int64_t> classicalDrfAllocate(
    const ResourceVector& total,
    const std::vector<DemandVector>& demands,
    int64_t maxSteps)
{
  std::map<FrameworkID, int64_t> granted;
  for (const DemandVector& demand : demands) {
    if (demand.demand.empty()) {
      throw std::invalid_argument(
          "Demand of '" + demand.owner + "' must be positive on some axis");
    }
    if (!granted.emplace(demand.owner, 0).second) {
      throw std::invalid_argument(
          "Duplicate demand owner '" + demand.owner + "'");
    }
  }

  // The remainder only shrinks, so a user whose demand no longer fits is
  // saturated for good.
  std::vector<bool> saturated(demands.size(), false);
  ResourceVector remaining = total;

  int64_t grants = 0;
  while (grants < maxSteps) {
    std::optional<size_t> next;
    double lowest = 0.0;

    for (size_t i = 0; i < demands.size(); i++) {
      if (saturated[i]) {
        continue;
      }

      const int64_t units = granted.at(demands[i].owner);
      double value =
        dominantShareOverPositive(demands[i].demand * units, total).value;

      if (!next || value < lowest) {
        next = i;
        lowest = value;
      }
    }

    if (!next) {
      break;
    }

    const DemandVector& demand = demands[*next];
    if (!demand.demand.fitsIn(remaining)) {
      saturated[*next] = true;
      continue;
    }

    remaining -= demand.demand;
    granted[demand.owner]++;
    grants++;
  }

  return granted;
}

} // namespace drfsim {
