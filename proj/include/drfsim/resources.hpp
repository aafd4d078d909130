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

#ifndef __DRFSIM_RESOURCES_HPP__
#define __DRFSIM_RESOURCES_HPP__

#include <array>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace drfsim {

enum class ResourceKind
{
  CPU = 0,
  MEMORY = 1,
  DISK = 2,
};

constexpr std::array<ResourceKind, 3> RESOURCE_KINDS = {
  ResourceKind::CPU, ResourceKind::MEMORY, ResourceKind::DISK};

std::string toString(ResourceKind kind);


// Raised when a subtraction would drive a component negative. This is
// always a bookkeeping bug in the caller.
class UnderflowError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};


// Raised when a dominant share is requested against a total that has a
// zero component.
class ZeroTotalError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};


// CPU is held in millicores, memory and disk in whole megabytes, so that
// every conservation identity holds exactly.
class ResourceVector
{
public:
  constexpr ResourceVector() = default;

  // `cpus` is rounded to the nearest millicore.
  ResourceVector(double cpus, int64_t memMb, int64_t diskMb);

  static ResourceVector fromMillis(
      int64_t cpuMillis, int64_t memMb, int64_t diskMb);

  int64_t cpuMillis() const { return values[0]; }
  double cpus() const { return static_cast<double>(values[0]) / 1000.0; }
  int64_t memMb() const { return values[1]; }
  int64_t diskMb() const { return values[2]; }

  // Raw fixed-point component (millicores for CPU, MB otherwise).
  int64_t get(ResourceKind kind) const
  {
    return values[static_cast<size_t>(kind)];
  }

  bool empty() const { return values == std::array<int64_t, 3>{}; }

  // True iff `*this` fits within `available` on every axis.
  bool fitsIn(const ResourceVector& available) const;

  ResourceVector& operator+=(const ResourceVector& that);

  // Throws UnderflowError.
  ResourceVector& operator-=(const ResourceVector& that);

  friend bool operator==(const ResourceVector&, const ResourceVector&) =
    default;

private:
  std::array<int64_t, 3> values{};
};


ResourceVector operator+(ResourceVector left, const ResourceVector& right);
ResourceVector operator-(ResourceVector left, const ResourceVector& right);

// Multiplies every component by `factor` (factor >= 0).
ResourceVector operator*(const ResourceVector& vector, int64_t factor);

std::ostream& operator<<(std::ostream& stream, const ResourceVector& vector);


inline bool fits(const ResourceVector& demand, const ResourceVector& available)
{
  return demand.fitsIn(available);
}


struct DominantShare
{
  double value = 0.0;
  ResourceKind kind = ResourceKind::CPU;
};


// max over resource kinds of usage/total; ties resolve to the earliest kind
// in CPU, memory, disk order. Throws ZeroTotalError if any total is zero.
DominantShare dominantShare(
    const ResourceVector& usage,
    const ResourceVector& total);


// Same as dominantShare() but axes with a zero total are left out of the
// maximum instead of raising. An all-zero total yields a share of 0.
DominantShare dominantShareOverPositive(
    const ResourceVector& usage,
    const ResourceVector& total);

} // namespace drfsim {

#endif // __DRFSIM_RESOURCES_HPP__
