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

#include "drfsim/resources.hpp"

#include <cmath>
#include <sstream>

namespace drfsim {

std::string toString(ResourceKind kind)
{
  switch (kind) {
    case ResourceKind::CPU: return "cpus";
    case ResourceKind::MEMORY: return "mem";
    case ResourceKind::DISK: return "disk";
  }
  return "unknown";
}


ResourceVector::ResourceVector(double cpus, int64_t memMb, int64_t diskMb)
  : values{static_cast<int64_t>(std::llround(cpus * 1000.0)), memMb, diskMb}
{
  if (values[0] < 0 || memMb < 0 || diskMb < 0) {
    throw std::invalid_argument("Resource quantities must be non-negative");
  }
}


ResourceVector ResourceVector::fromMillis(
    int64_t cpuMillis, int64_t memMb, int64_t diskMb)
{
  if (cpuMillis < 0 || memMb < 0 || diskMb < 0) {
    throw std::invalid_argument("Resource quantities must be non-negative");
  }

  ResourceVector vector;
  vector.values = {cpuMillis, memMb, diskMb};
  return vector;
}


bool ResourceVector::fitsIn(const ResourceVector& available) const
{
  for (size_t i = 0; i < values.size(); i++) {
    if (values[i] > available.values[i]) {
      return false;
    }
  }
  return true;
}


ResourceVector& ResourceVector::operator+=(const ResourceVector& that)
{
  for (size_t i = 0; i < values.size(); i++) {
    values[i] += that.values[i];
  }
  return *this;
}


ResourceVector& ResourceVector::operator-=(const ResourceVector& that)
{
  if (!that.fitsIn(*this)) {
    std::ostringstream message;
    message << "Cannot subtract " << that << " from " << *this;
    throw UnderflowError(message.str());
  }

  for (size_t i = 0; i < values.size(); i++) {
    values[i] -= that.values[i];
  }
  return *this;
}


ResourceVector operator+(ResourceVector left, const ResourceVector& right)
{
  return left += right;
}


ResourceVector operator-(ResourceVector left, const ResourceVector& right)
{
  return left -= right;
}


ResourceVector operator*(const ResourceVector& vector, int64_t factor)
{
  return ResourceVector::fromMillis(
      vector.cpuMillis() * factor,
      vector.memMb() * factor,
      vector.diskMb() * factor);
}


std::ostream& operator<<(std::ostream& stream, const ResourceVector& vector)
{
  return stream << "<" << vector.cpus() << " cpus, " << vector.memMb()
                << " MB mem, " << vector.diskMb() << " MB disk>";
}


DominantShare dominantShare(
    const ResourceVector& usage,
    const ResourceVector& total)
{
  for (ResourceKind kind : RESOURCE_KINDS) {
    if (total.get(kind) == 0) {
      throw ZeroTotalError(
          "Cluster total has no " + toString(kind) +
          "; dominant share is undefined");
    }
  }

  return dominantShareOverPositive(usage, total);
}


DominantShare dominantShareOverPositive(
    const ResourceVector& usage,
    const ResourceVector& total)
{
  DominantShare share;

  for (ResourceKind kind : RESOURCE_KINDS) {
    if (total.get(kind) == 0) {
      continue;
    }

    double fraction =
      static_cast<double>(usage.get(kind)) /
      static_cast<double>(total.get(kind));

    // Strict comparison keeps the earliest kind on ties.
    if (fraction > share.value) {
      share.value = fraction;
      share.kind = kind;
    }
  }

  return share;
}

} // namespace drfsim {
