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

#include "drfsim/scenario.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace drfsim {

ParseError::ParseError(
    size_t _line,
    std::string _field,
    const std::string& message)
  : std::runtime_error(
        (_line > 0 ? "line " + std::to_string(_line) + ": " : std::string()) +
        (_field.empty() ? std::string() : "'" + _field + "': ") + message),
    line(_line),
    field(std::move(_field))
{}


namespace {

std::string_view trim(std::string_view text)
{
  const char* blanks = " \t\r";
  size_t begin = text.find_first_not_of(blanks);
  if (begin == std::string_view::npos) {
    return {};
  }
  size_t end = text.find_last_not_of(blanks);
  return text.substr(begin, end - begin + 1);
}


bool isNameChar(char c, bool allowStar)
{
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.' ||
    (allowStar && c == '*');
}


bool isName(const std::string& text, bool allowStar = false)
{
  if (text.empty()) {
    return false;
  }
  for (char c : text) {
    if (!isNameChar(c, allowStar)) {
      return false;
    }
  }
  return true;
}


// A key/value pair as it appeared in the file.
struct Entry
{
  size_t line;
  std::string value;
};


struct Section
{
  size_t line = 0;
  std::map<std::string, Entry> entries;
};


int64_t parseInteger(const std::string& key, const Entry& entry)
{
  int64_t value = 0;
  const char* begin = entry.value.data();
  const char* end = begin + entry.value.size();
  auto [ptr, error] = std::from_chars(begin, end, value);
  if (error != std::errc() || ptr != end) {
    throw ParseError(entry.line, key, "expected an integer, got '" +
                     entry.value + "'");
  }
  return value;
}


// Fixed-point decimal with at most three fractional digits, returned in
// thousandths. Used for seconds (to milliseconds) and CPUs (to
// millicores) so that values round-trip exactly.
int64_t parseThousandths(const std::string& key, const Entry& entry)
{
  const std::string& text = entry.value;
  auto fail = [&]() -> ParseError {
    return ParseError(entry.line, key,
                      "expected a decimal with at most 3 fractional digits, "
                      "got '" + text + "'");
  };

  size_t dot = text.find('.');
  std::string whole = text.substr(0, dot);
  std::string fraction = dot == std::string::npos ? "" : text.substr(dot + 1);

  bool negative = !whole.empty() && whole[0] == '-';
  if (negative) {
    whole.erase(0, 1);
  }

  if (whole.empty() || fraction.size() > 3 ||
      (dot != std::string::npos && fraction.empty())) {
    throw fail();
  }
  for (char c : whole + fraction) {
    if (c < '0' || c > '9') {
      throw fail();
    }
  }

  fraction.resize(3, '0');

  int64_t units = 0;
  auto [ptr, error] =
    std::from_chars(whole.data(), whole.data() + whole.size(), units);
  if (error != std::errc() || units > INT64_MAX / 1000 - 1) {
    throw fail();
  }
  (void) ptr;

  int64_t value = units * 1000 + std::stoll(fraction);
  return negative ? -value : value;
}


Duration parseSeconds(const std::string& key, const Entry& entry)
{
  return Duration(parseThousandths(key, entry));
}


std::string formatThousandths(int64_t value)
{
  std::string sign = value < 0 ? "-" : "";
  uint64_t magnitude = value < 0
    ? -static_cast<uint64_t>(value)
    : static_cast<uint64_t>(value);

  std::string text = sign + std::to_string(magnitude / 1000);
  if (magnitude % 1000 != 0) {
    char fraction[8];
    std::snprintf(fraction, sizeof(fraction), "%03llu",
                  static_cast<unsigned long long>(magnitude % 1000));
    std::string digits = fraction;
    digits.erase(digits.find_last_not_of('0') + 1);
    text += "." + digits;
  }
  return text;
}


std::string formatSeconds(Duration duration)
{
  return formatThousandths(duration.count());
}


// Pulls typed values out of a section and complains about leftovers.
class Reader
{
public:
  Reader(const Section& _section, std::string _where)
    : section(_section), where(std::move(_where)) {}

  bool has(const std::string& key) const
  {
    return section.entries.count(key) > 0;
  }

  const Entry& required(const std::string& key)
  {
    auto it = section.entries.find(key);
    if (it == section.entries.end()) {
      throw ParseError(section.line, key, "missing in " + where);
    }
    used.insert(key);
    return it->second;
  }

  std::string string(const std::string& key)
  {
    return required(key).value;
  }

  std::string string(const std::string& key, const std::string& otherwise)
  {
    return has(key) ? string(key) : otherwise;
  }

  int64_t integer(const std::string& key)
  {
    return parseInteger(key, required(key));
  }

  int64_t integer(const std::string& key, int64_t otherwise)
  {
    return has(key) ? integer(key) : otherwise;
  }

  int64_t thousandths(const std::string& key)
  {
    return parseThousandths(key, required(key));
  }

  Duration seconds(const std::string& key)
  {
    return parseSeconds(key, required(key));
  }

  Duration seconds(const std::string& key, Duration otherwise)
  {
    return has(key) ? seconds(key) : otherwise;
  }

  std::optional<Duration> optionalSeconds(const std::string& key)
  {
    if (!has(key)) {
      return std::nullopt;
    }
    return seconds(key);
  }

  void finish() const
  {
    for (const auto& [key, entry] : section.entries) {
      if (used.count(key) == 0) {
        throw ParseError(entry.line, key, "unknown key in " + where);
      }
    }
  }

private:
  const Section& section;
  std::string where;
  std::set<std::string> used;
};


ResourceVector resources(
    const std::string& what,
    int64_t cpuMillis,
    int64_t memMb,
    int64_t diskMb)
{
  if (cpuMillis < 0 || memMb < 0 || diskMb < 0) {
    throw ValidationError(what + " resources must be non-negative");
  }
  return ResourceVector::fromMillis(cpuMillis, memMb, diskMb);
}


FrameworkSpec parseFramework(const Section& section)
{
  Reader reader(section, "[framework] block");

  FrameworkSpec spec;
  spec.id = reader.string("id");
  spec.role = reader.string("role", DEFAULT_ROLE);
  spec.start = reader.seconds("start_s", Duration::zero());

  const Entry& policy = reader.required("policy");
  if (policy.value == "holding") {
    const Entry& inner = reader.required("inner_policy");
    std::optional<PackingRule> rule = parsePackingRule(inner.value);
    if (!rule) {
      throw ParseError(inner.line, "inner_policy",
                       "unknown policy '" + inner.value + "'");
    }
    spec.policy = Policy::holding(reader.seconds("hold_s"), *rule);
  } else {
    std::optional<PackingRule> rule = parsePackingRule(policy.value);
    if (!rule) {
      throw ParseError(policy.line, "policy",
                       "unknown policy '" + policy.value + "'");
    }
    spec.policy.rule = *rule;
    for (const char* key : {"hold_s", "inner_policy"}) {
      if (reader.has(key)) {
        throw ValidationError(
            "framework '" + spec.id + "': " + key +
            " is only allowed with policy = holding");
      }
    }
  }

  spec.refuse = reader.seconds("refuse_s", Duration::zero());
  spec.decisionDelay = reader.seconds("decision_delay_s", Duration::zero());
  spec.taskCount = reader.integer("task_count");
  spec.task.demand = resources(
      "framework '" + spec.id + "' task",
      reader.thousandths("task_cpus"),
      reader.integer("task_mem_mb"),
      reader.integer("task_disk_mb"));
  spec.task.duration = reader.seconds("task_duration_s");
  spec.arrivalInterval = reader.seconds("arrival_interval_s", Duration::zero());

  reader.finish();
  return spec;
}

} // namespace {


ScenarioConfig parseScenario(std::string_view text)
{
  Section header;
  header.line = 1;
  std::vector<Section> blocks;

  Section* current = &header;
  size_t number = 0;
  while (!text.empty()) {
    number++;
    size_t newline = text.find('\n');
    std::string_view raw = text.substr(0, newline);
    text = newline == std::string_view::npos
      ? std::string_view()
      : text.substr(newline + 1);

    std::string_view line = trim(raw);
    if (line.empty() || line[0] == '#') {
      continue;
    }

    if (line[0] == '[') {
      if (line != "[framework]") {
        throw ParseError(number, std::string(line),
                         "unknown section, only [framework] is allowed");
      }
      blocks.emplace_back();
      blocks.back().line = number;
      current = &blocks.back();
      continue;
    }

    size_t equals = line.find('=');
    if (equals == std::string_view::npos) {
      throw ParseError(number, "", "expected 'key = value'");
    }

    std::string key(trim(line.substr(0, equals)));
    std::string value(trim(line.substr(equals + 1)));
    if (key.empty()) {
      throw ParseError(number, "", "missing key before '='");
    }
    if (value.empty() && key != "description") {
      throw ParseError(number, key, "missing value");
    }

    auto [it, inserted] = current->entries.emplace(key, Entry{number, value});
    if (!inserted) {
      throw ParseError(number, key,
                       "duplicate key, first set on line " +
                       std::to_string(it->second.line));
    }
  }

  Reader reader(header, "scenario header");
  if (!reader.has("version")) {
    throw ParseError(0, "version", "missing, expected 'version = " +
                     std::to_string(SCENARIO_VERSION) + "'");
  }
  const Entry& version = reader.required("version");
  if (parseInteger("version", version) != SCENARIO_VERSION) {
    throw ParseError(version.line, "version",
                     "unsupported schema version '" + version.value + "'");
  }

  ScenarioConfig config;
  config.name = reader.string("name", "");
  config.description = reader.string("description", "");
  config.outputDir = reader.string("output_dir", config.outputDir);

  SimulationConfig& simulation = config.simulation;
  simulation.cluster.agents = reader.integer("agents");
  simulation.cluster.perAgent = resources(
      "agent",
      reader.thousandths("agent_cpus"),
      reader.integer("agent_mem_mb"),
      reader.integer("agent_disk_mb"));
  simulation.allocationInterval =
    reader.seconds("allocation_interval_s", simulation.allocationInterval);
  simulation.offerTimeout = reader.optionalSeconds("offer_timeout_s");
  simulation.maxTime = reader.seconds("max_time_s", simulation.maxTime);

  int64_t seed = reader.integer("seed", 0);
  if (seed < 0) {
    throw ValidationError("seed must be non-negative");
  }
  simulation.seed = static_cast<uint64_t>(seed);

  reader.finish();

  for (const Section& block : blocks) {
    simulation.frameworks.push_back(parseFramework(block));
  }

  validateScenario(config);
  return config;
}


void validateScenario(const ScenarioConfig& config)
{
  auto fail = [](const std::string& message) {
    throw ValidationError(message);
  };

  auto tidy = [](const std::string& text) {
    return text.find('\n') == std::string::npos &&
      trim(text).size() == text.size();
  };

  if (!config.name.empty() && !isName(config.name)) {
    fail("name may only use letters, digits, '-', '_' and '.'");
  }
  if (!tidy(config.description)) {
    fail("description must be a single line without surrounding blanks");
  }
  if (config.outputDir.empty() || !tidy(config.outputDir)) {
    fail("output_dir must be a non-empty single line without surrounding "
         "blanks");
  }

  const SimulationConfig& simulation = config.simulation;
  if (simulation.cluster.agents < 1) {
    fail("agents must be at least 1");
  }
  for (ResourceKind kind : RESOURCE_KINDS) {
    if (simulation.cluster.perAgent.get(kind) <= 0) {
      fail("every agent resource must be positive, " + toString(kind) +
           " is not");
    }
  }
  if (simulation.allocationInterval <= Duration::zero()) {
    fail("allocation_interval_s must be positive");
  }
  if (simulation.offerTimeout && *simulation.offerTimeout <= Duration::zero()) {
    fail("offer_timeout_s must be positive when set");
  }
  if (simulation.maxTime <= Duration::zero()) {
    fail("max_time_s must be positive");
  }
  if (simulation.frameworks.empty()) {
    fail("at least one [framework] block is required");
  }

  std::set<FrameworkID> ids;
  for (const FrameworkSpec& spec : simulation.frameworks) {
    if (!isName(spec.id)) {
      fail("framework id '" + spec.id + "' may only use letters, digits, "
           "'-', '_' and '.'");
    }
    if (spec.id == "cluster") {
      fail("framework id 'cluster' is reserved for the summary total row");
    }
    if (!ids.insert(spec.id).second) {
      fail("framework id '" + spec.id + "' is used twice");
    }

    const std::string where = "framework '" + spec.id + "': ";
    if (!isName(spec.role, true)) {
      fail(where + "role may only use letters, digits, '*', '-', '_' and "
           "'.'");
    }
    if (spec.start < Duration::zero()) {
      fail(where + "start_s must be non-negative");
    }
    if (spec.refuse < Duration::zero()) {
      fail(where + "refuse_s must be non-negative");
    }
    if (spec.decisionDelay < Duration::zero()) {
      fail(where + "decision_delay_s must be non-negative");
    }
    if (spec.policy.hold && *spec.policy.hold < Duration::zero()) {
      fail(where + "hold_s must be non-negative");
    }
    if (spec.taskCount < 0) {
      fail(where + "task_count must be non-negative");
    }
    if (spec.arrivalInterval < Duration::zero()) {
      fail(where + "arrival_interval_s must be non-negative");
    }
    if (spec.task.duration <= Duration::zero()) {
      fail(where + "task_duration_s must be positive");
    }
    if (spec.task.demand.empty()) {
      fail(where + "a task must demand some resource");
    }
  }
}


std::string serializeScenario(const ScenarioConfig& config)
{
  const SimulationConfig& simulation = config.simulation;
  const ResourceVector& agent = simulation.cluster.perAgent;

  std::ostringstream out;
  out << "version = " << SCENARIO_VERSION << "\n";
  if (!config.name.empty()) {
    out << "name = " << config.name << "\n";
  }
  if (!config.description.empty()) {
    out << "description = " << config.description << "\n";
  }
  out << "output_dir = " << config.outputDir << "\n"
      << "\n"
      << "agents = " << simulation.cluster.agents << "\n"
      << "agent_cpus = " << formatThousandths(agent.cpuMillis()) << "\n"
      << "agent_mem_mb = " << agent.memMb() << "\n"
      << "agent_disk_mb = " << agent.diskMb() << "\n"
      << "allocation_interval_s = "
      << formatSeconds(simulation.allocationInterval) << "\n";
  if (simulation.offerTimeout) {
    out << "offer_timeout_s = " << formatSeconds(*simulation.offerTimeout)
        << "\n";
  }
  out << "max_time_s = " << formatSeconds(simulation.maxTime) << "\n"
      << "seed = " << simulation.seed << "\n";

  for (const FrameworkSpec& spec : simulation.frameworks) {
    out << "\n"
        << "[framework]\n"
        << "id = " << spec.id << "\n"
        << "role = " << spec.role << "\n"
        << "start_s = " << formatSeconds(spec.start) << "\n";
    if (spec.policy.hold) {
      out << "policy = holding\n"
          << "hold_s = " << formatSeconds(*spec.policy.hold) << "\n"
          << "inner_policy = " << toString(spec.policy.rule) << "\n";
    } else {
      out << "policy = " << toString(spec.policy.rule) << "\n";
    }
    out << "refuse_s = " << formatSeconds(spec.refuse) << "\n"
        << "decision_delay_s = " << formatSeconds(spec.decisionDelay) << "\n"
        << "task_count = " << spec.taskCount << "\n"
        << "task_cpus = " << formatThousandths(spec.task.demand.cpuMillis())
        << "\n"
        << "task_mem_mb = " << spec.task.demand.memMb() << "\n"
        << "task_disk_mb = " << spec.task.demand.diskMb() << "\n"
        << "task_duration_s = " << formatSeconds(spec.task.duration) << "\n"
        << "arrival_interval_s = " << formatSeconds(spec.arrivalInterval)
        << "\n";
  }

  return out.str();
}

} // namespace drfsim {
