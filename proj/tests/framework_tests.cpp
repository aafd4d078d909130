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

#include <algorithm>
#include <bit>
#include <random>
#include <variant>
#include <vector>

#include <gtest/gtest.h>

#include "drfsim/framework.hpp"

using drfsim::Accept;
using drfsim::Decline;
using drfsim::FrameworkSpec;
using drfsim::Hold;
using drfsim::PackingRule;
using drfsim::Policy;
using drfsim::QueuedTask;
using drfsim::ResourceVector;
using drfsim::Response;
using drfsim::TaskID;

using std::vector;

using namespace std::chrono_literals;

namespace {

const ResourceVector AGENT(8, 16384, 32000);


vector<QueuedTask> uniformQueue(size_t count, const ResourceVector& demand)
{
  vector<QueuedTask> queue;
  for (size_t i = 0; i < count; i++) {
    queue.push_back({i, demand});
  }
  return queue;
}


// Largest number of queued tasks that fit the offer together, by trying
// every subset.
size_t exhaustiveMaximum(
    const vector<QueuedTask>& queue,
    const ResourceVector& offer)
{
  size_t best = 0;
  for (uint32_t mask = 0; mask < (1u << queue.size()); mask++) {
    ResourceVector sum;
    for (size_t i = 0; i < queue.size(); i++) {
      if (mask & (1u << i)) {
        sum += queue[i].demand;
      }
    }
    if (sum.fitsIn(offer)) {
      best = std::max<size_t>(best, std::popcount(mask));
    }
  }
  return best;
}


ResourceVector total(const vector<QueuedTask>& queue, const vector<TaskID>& ids)
{
  ResourceVector sum;
  for (TaskID id : ids) {
    sum += std::find_if(queue.begin(), queue.end(), [id](auto& t) {
      return t.id == id;
    })->demand;
  }
  return sum;
}

} // namespace {


TEST(PackingTest, RuleNames)
{
  for (PackingRule rule : {PackingRule::FIRST_FIT,
                           PackingRule::BIN_PACKING,
                           PackingRule::ONE_TASK_PER_CYCLE,
                           PackingRule::GREEDY_ALL}) {
    EXPECT_EQ(rule, drfsim::parsePackingRule(toString(rule)));
  }
  EXPECT_FALSE(drfsim::parsePackingRule("best-fit").has_value());
}


TEST(PackingTest, FirstFitTakesFifoPrefix)
{
  vector<QueuedTask> queue = uniformQueue(5, ResourceVector(1, 1024, 0));
  EXPECT_EQ((vector<TaskID>{0, 1, 2}),
            firstFit(queue, ResourceVector(3, 16384, 0)));
}


TEST(PackingTest, FirstFitSkipsTasksThatDoNotFit)
{
  vector<QueuedTask> queue = {
    {0, ResourceVector(4, 1024, 0)},
    {1, ResourceVector(1, 1024, 0)}};
  EXPECT_EQ((vector<TaskID>{1}), firstFit(queue, ResourceVector(2, 16384, 0)));
}


TEST(PackingTest, FirstFitNothingFits)
{
  vector<QueuedTask> queue = uniformQueue(3, ResourceVector(1, 1024, 0));
  EXPECT_TRUE(firstFit(queue, ResourceVector(0, 0, 31200)).empty());
}


TEST(PackingTest, BinPackingIdenticalDemands)
{
  vector<QueuedTask> queue = uniformQueue(100, ResourceVector(1, 1024, 0));
  EXPECT_EQ(8u, binPacking(queue, AGENT).size());

  vector<QueuedTask> short_ = uniformQueue(3, ResourceVector(1, 1024, 0));
  EXPECT_EQ(3u, binPacking(short_, AGENT).size());

  vector<QueuedTask> ten = uniformQueue(10, ResourceVector(1, 1024, 0));
  EXPECT_EQ(8u, binPacking(ten, AGENT).size());
  EXPECT_EQ(8u, exhaustiveMaximum(ten, AGENT));

  EXPECT_TRUE(binPacking(queue, ResourceVector(0, 16384, 32000)).empty());
}


TEST(PackingTest, BinPackingPrefersSmallTasks)
{
  // FIFO order would take the big task and stop.
  vector<QueuedTask> queue = {
    {0, ResourceVector(6, 1024, 0)},
    {1, ResourceVector(2, 1024, 0)},
    {2, ResourceVector(2, 1024, 0)},
    {3, ResourceVector(2, 1024, 0)}};

  EXPECT_EQ(2u, firstFit(queue, AGENT).size());
  EXPECT_EQ((vector<TaskID>{1, 2, 3}), binPacking(queue, AGENT));
}


TEST(PackingTest, OneTaskPerCycle)
{
  vector<QueuedTask> queue = uniformQueue(10, ResourceVector(1, 1024, 0));
  vector<TaskID> taken = oneTaskPerCycle(queue, AGENT);
  EXPECT_EQ((vector<TaskID>{0}), taken);
  EXPECT_EQ(ResourceVector(7, 15360, 32000), AGENT - total(queue, taken));
}


TEST(PackingPropertyTest, IdenticalDemandsPackFloorOfTightestAxis)
{
  std::mt19937_64 random(17);
  std::uniform_int_distribution<int64_t> small(0, 6);

  for (int i = 0; i < 2000; i++) {
    ResourceVector demand = ResourceVector::fromMillis(
        small(random) * 500, small(random) * 256, small(random) * 100);
    if (demand.empty()) {
      continue;
    }
    ResourceVector offer = ResourceVector::fromMillis(
        small(random) * 1000, small(random) * 1024, small(random) * 400);
    size_t count = small(random) * 3;
    vector<QueuedTask> queue = uniformQueue(count, demand);

    int64_t expected = static_cast<int64_t>(count);
    for (auto kind : drfsim::RESOURCE_KINDS) {
      if (demand.get(kind) > 0) {
        expected = std::min(expected, offer.get(kind) / demand.get(kind));
      }
    }

    for (PackingRule rule : {PackingRule::FIRST_FIT,
                             PackingRule::BIN_PACKING,
                             PackingRule::GREEDY_ALL}) {
      ASSERT_EQ(expected, static_cast<int64_t>(pack(rule, queue, offer).size()))
        << "case " << i << " rule " << toString(rule);
    }
  }
}


TEST(PackingPropertyTest, RulesAreOrderedAndFeasible)
{
  std::mt19937_64 random(19);
  std::uniform_int_distribution<int64_t> small(0, 4);
  std::uniform_int_distribution<size_t> length(0, 10);

  for (int i = 0; i < 3000; i++) {
    vector<QueuedTask> queue;
    size_t n = length(random);
    for (size_t t = 0; t < n; t++) {
      ResourceVector demand(
          double(small(random)), small(random) * 1024, small(random) * 100);
      if (demand.empty()) {
        demand = ResourceVector(1, 0, 0);
      }
      queue.push_back({t, demand});
    }
    ResourceVector offer(
        double(small(random) * 2), small(random) * 2048, small(random) * 200);

    vector<TaskID> bin = binPacking(queue, offer);
    vector<TaskID> first = firstFit(queue, offer);
    vector<TaskID> one = oneTaskPerCycle(queue, offer);

    for (const vector<TaskID>* taken : {&bin, &first, &one}) {
      ASSERT_TRUE(total(queue, *taken).fitsIn(offer));
    }

    ASSERT_GE(bin.size(), first.size());
    ASSERT_GE(first.size(), one.size());
    ASSERT_LE(bin.size(), exhaustiveMaximum(queue, offer));
    ASSERT_EQ(first.empty(), one.empty());
  }
}


TEST(RespondTest, EmptyQueueDeclines)
{
  for (PackingRule rule : {PackingRule::FIRST_FIT,
                           PackingRule::BIN_PACKING,
                           PackingRule::ONE_TASK_PER_CYCLE,
                           PackingRule::GREEDY_ALL}) {
    Response response = respond(Policy{rule, {}}, {}, AGENT, 0s);
    EXPECT_TRUE(std::holds_alternative<Decline>(response));
  }
}


TEST(RespondTest, AcceptsPackedTasks)
{
  vector<QueuedTask> queue = uniformQueue(10, ResourceVector(1, 1024, 0));

  Response response =
    respond(Policy{PackingRule::BIN_PACKING, {}}, queue, AGENT, 0s);
  ASSERT_TRUE(std::holds_alternative<Accept>(response));
  EXPECT_EQ(8u, std::get<Accept>(response).tasks.size());

  response =
    respond(Policy{PackingRule::ONE_TASK_PER_CYCLE, {}}, queue, AGENT, 0s);
  ASSERT_TRUE(std::holds_alternative<Accept>(response));
  EXPECT_EQ(1u, std::get<Accept>(response).tasks.size());
}


TEST(RespondTest, HoldingHoldsUnusableOffer)
{
  vector<QueuedTask> queue = uniformQueue(10, ResourceVector(1, 2048, 100));
  Policy aurora = Policy::holding(300s, PackingRule::FIRST_FIT);
  ResourceVector diskOnly(0, 0, 31200);

  Response first = respond(aurora, queue, diskOnly, 40s);
  ASSERT_TRUE(std::holds_alternative<Hold>(first));
  EXPECT_EQ(340s, std::get<Hold>(first).until);

  // Once the hold runs out the inner rule decides.
  Response second = respond(aurora, queue, diskOnly, 340s, true);
  EXPECT_TRUE(std::holds_alternative<Decline>(second));

  // An empty queue is held too.
  EXPECT_TRUE(std::holds_alternative<Hold>(respond(aurora, {}, AGENT, 0s)));
}


TEST(RespondTest, HoldingUsesFittingOfferAtOnce)
{
  vector<QueuedTask> queue = uniformQueue(10, ResourceVector(1, 2048, 100));
  Response response = respond(
      Policy::holding(300s, PackingRule::FIRST_FIT), queue, AGENT, 0s);
  ASSERT_TRUE(std::holds_alternative<Accept>(response));
  EXPECT_EQ(8u, std::get<Accept>(response).tasks.size());
}


TEST(RespondTest, ZeroHoldIsInnerRule)
{
  Policy zero = Policy::holding(0s, PackingRule::FIRST_FIT);
  EXPECT_TRUE(std::holds_alternative<Decline>(
      respond(zero, {}, AGENT, 0s)));
}


TEST(FrameworkSpecTest, GreedyAllIgnoresBackOff)
{
  FrameworkSpec spec;
  spec.refuse = 5s;
  spec.decisionDelay = 2s;

  spec.policy = Policy{PackingRule::GREEDY_ALL, {}};
  EXPECT_EQ(0s, spec.effectiveRefuse());
  EXPECT_EQ(0s, spec.effectiveDecisionDelay());

  spec.policy = Policy{PackingRule::BIN_PACKING, {}};
  EXPECT_EQ(5s, spec.effectiveRefuse());
  EXPECT_EQ(2s, spec.effectiveDecisionDelay());
}
