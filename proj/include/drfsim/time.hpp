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

#ifndef __DRFSIM_TIME_HPP__
#define __DRFSIM_TIME_HPP__

#include <chrono>
#include <cmath>
#include <cstdint>

namespace drfsim {

// Simulated time is kept in integer milliseconds.
using Duration = std::chrono::milliseconds;


inline Duration fromSeconds(double seconds)
{
  return Duration(static_cast<int64_t>(std::llround(seconds * 1000.0)));
}


inline double toSeconds(Duration duration)
{
  return static_cast<double>(duration.count()) / 1000.0;
}

} // namespace drfsim {

#endif // __DRFSIM_TIME_HPP__
