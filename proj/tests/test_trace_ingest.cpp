// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "softspace/error.hpp"
#include "softspace/trace_ingest.hpp"

using namespace softspace;
using namespace softspace::ingest;

namespace {

std::string rec(const std::string& time, const std::string& thread, const std::string& cls,
                const std::string& method, const std::string& event) {
  return R"({"time":")" + time + R"(","thread":")" + thread + R"(","class":")" + cls + R"(","method":")" +
         method + R"(","event":")" + event + "\"}\n";
}

ParsedLog parse(const std::string& text, Strictness s = Strictness::Strict, const FieldMap& fm = {}) {
  std::istringstream in(text);
  return parse_log(in, s, fm);
}

TraceEvent ev(const std::string& thread, const std::string& cls, EventKind kind, const std::string& method = "m") {
  TraceEvent e;
  e.thread_id = thread;
  e.class_name = cls;
  e.method_name = method;
  e.kind = kind;
  return e;
}

}  // namespace

TEST_CASE("single thread trace of four records") {
  std::string log = rec("2024-04-01T10:00:00.000Z", "216", "A", "m1", "entry") +
                    rec("2024-04-01T10:00:00.010Z", "216", "B", "m1", "entry") +
                    rec("2024-04-01T10:00:00.020Z", "216", "B", "m1", "exit") +
                    rec("2024-04-01T10:00:00.030Z", "216", "A", "m1", "exit");
  auto parsed = parse(log);
  REQUIRE(parsed.events.size() == 4);
  CHECK(parsed.summary.events_parsed == 4);
  CHECK(parsed.summary.events_rejected == 0);
  CHECK(parsed.events[1].class_name == "B");
  CHECK(parsed.events[2].kind == EventKind::Exit);
  CHECK(format_timestamp(parsed.events[3].timestamp) == "2024-04-01T10:00:00.030Z");

  auto g = reconstruct_calls(parsed.events);
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0] == CallEdge{"A", "B", 1});
  CHECK(g.counts.at("A") == 1);
  CHECK(g.counts.at("B") == 1);
  CHECK(g.summary.unmatched_exits == 0);
  CHECK(g.summary.unclosed_entries == 0);
  CHECK(g.summary.threads_seen == 1);
}

TEST_CASE("empty input") {
  auto parsed = parse("");
  CHECK(parsed.events.empty());
  CHECK(parsed.summary == IngestSummary{});
  auto g = reconstruct_calls(parsed.events);
  CHECK(g.edges.empty());
  CHECK(g.counts.empty());
}

TEST_CASE("blank lines are skipped") {
  auto parsed = parse("\n" + rec("2024-04-01T10:00:00Z", "1", "A", "m", "entry") + "\n   \n");
  CHECK(parsed.events.size() == 1);
  CHECK(parsed.summary.events_rejected == 0);
}

TEST_CASE("truncated record") {
  std::string log;
  for (int i = 0; i < 10; ++i) {
    std::string line = rec("2024-04-01T10:00:0" + std::to_string(i) + "Z", "1", "C" + std::to_string(i), "m", "entry");
    if (i == 6) line = line.substr(0, line.size() / 2) + "\n";
    log += line;
  }
  SUBCASE("lenient skips it") {
    auto parsed = parse(log, Strictness::Lenient);
    CHECK(parsed.events.size() == 9);
    CHECK(parsed.summary.events_parsed == 9);
    CHECK(parsed.summary.events_rejected == 1);
  }
  SUBCASE("strict names the line") {
    try {
      parse(log, Strictness::Strict);
      FAIL("expected MalformedRecord");
    } catch (const MalformedRecord& e) {
      CHECK(e.line() == 7);
      CHECK(e.code() == ErrorCode::MalformedRecord);
    }
  }
}

TEST_CASE("records with bad fields are rejected") {
  const char* bad[] = {
      R"({"time":"2024-04-01T10:00:00Z","thread":"1","class":"A","method":"m"})",
      R"({"time":"yesterday","thread":"1","class":"A","method":"m","event":"entry"})",
      R"({"time":"2024-04-01T10:00:00Z","thread":"1","class":"","method":"m","event":"entry"})",
      R"({"time":"2024-04-01T10:00:00Z","thread":"1","class":"A","method":"m","event":"enter"})",
      R"({"time":"2024-04-01T10:00:00Z","thread":[1],"class":"A","method":"m","event":"entry"})",
      R"(["not", "an", "object"])",
      R"({"time":"2024-02-30T10:00:00Z","thread":"1","class":"A","method":"m","event":"entry"})",
  };
  for (const char* line : bad) {
    CAPTURE(line);
    auto parsed = parse(std::string(line) + "\n", Strictness::Lenient);
    CHECK(parsed.events.empty());
    CHECK(parsed.summary.events_rejected == 1);
    CHECK_THROWS_AS(parse(std::string(line) + "\n", Strictness::Strict), MalformedRecord);
  }
}

TEST_CASE("schematic fixture") {
  std::ifstream in(SOFTSPACE_TEST_DATA "/schematic.jsonl");
  REQUIRE(in);
  auto parsed = parse_log(in, Strictness::Strict);
  CHECK(parsed.events.size() == 8);
  auto g = reconstruct_calls(parsed.events);
  CHECK(g.edges == std::vector<CallEdge>{{"A", "B", 3}, {"B", "D", 1}});
  CHECK(g.counts == std::map<std::string, std::uint64_t>{{"A", 3}, {"B", 4}, {"D", 1}});
  CHECK(g.summary.threads_seen == 3);
  CHECK(g.summary.unclosed_entries == 8);
  auto days = daily_series(parsed.events, std::chrono::minutes{0});
  REQUIRE(days.size() == 1);
  CHECK(format_day(days.begin()->first) == "2024-04-01");
  CHECK(days.begin()->second == 8);
}

TEST_CASE("same class nested call yields no edge") {
  std::vector<TraceEvent> events = {ev("t", "B", EventKind::Entry, "m1"), ev("t", "B", EventKind::Entry, "m2"),
                                    ev("t", "B", EventKind::Exit, "m2"), ev("t", "B", EventKind::Exit, "m1")};
  auto g = reconstruct_calls(events);
  CHECK(g.edges.empty());
  CHECK(g.counts.at("B") == 2);
}

TEST_CASE("no edges across threads") {
  std::vector<TraceEvent> events = {ev("202", "D", EventKind::Entry), ev("202", "D", EventKind::Exit),
                                    ev("216", "A", EventKind::Entry), ev("216", "A", EventKind::Exit)};
  auto g = reconstruct_calls(events);
  CHECK(g.edges.empty());

  std::vector<TraceEvent> open = {ev("1", "A", EventKind::Entry), ev("2", "B", EventKind::Entry)};
  CHECK(reconstruct_calls(open).edges.empty());
}

TEST_CASE("recursion across classes records both directions") {
  std::vector<TraceEvent> events = {ev("t", "A", EventKind::Entry), ev("t", "B", EventKind::Entry),
                                    ev("t", "A", EventKind::Entry), ev("t", "A", EventKind::Exit),
                                    ev("t", "B", EventKind::Exit),  ev("t", "A", EventKind::Exit)};
  auto g = reconstruct_calls(events);
  CHECK(g.edges == std::vector<CallEdge>{{"A", "B", 1}, {"B", "A", 1}});
  CHECK(g.counts.at("A") == 2);
}

TEST_CASE("unmatched exits do not unwind the stack") {
  std::vector<TraceEvent> events = {ev("t", "A", EventKind::Entry), ev("t", "Z", EventKind::Exit),
                                    ev("t", "B", EventKind::Entry), ev("t", "B", EventKind::Exit),
                                    ev("t", "A", EventKind::Exit),  ev("t", "A", EventKind::Exit)};
  auto g = reconstruct_calls(events);
  CHECK(g.edges == std::vector<CallEdge>{{"A", "B", 1}});
  CHECK(g.summary.unmatched_exits == 2);
  CHECK(g.summary.unclosed_entries == 0);
}

TEST_CASE("exit with a different method is unmatched") {
  std::vector<TraceEvent> events = {ev("t", "A", EventKind::Entry, "m1"), ev("t", "A", EventKind::Exit, "m2")};
  auto g = reconstruct_calls(events);
  CHECK(g.summary.unmatched_exits == 1);
  CHECK(g.summary.unclosed_entries == 1);
}

TEST_CASE("field map") {
  auto fm = FieldMap::parse("time=ts,thread=tid,class=cls,method=fn,event=kind,entry=ENTER,exit=LEAVE");
  CHECK(fm.time == "ts");
  CHECK(fm.thread == "tid");
  CHECK(fm.class_name == "cls");
  CHECK(fm.method == "fn");
  CHECK(fm.event == "kind");
  CHECK(fm.entry_value == "ENTER");
  CHECK(fm.exit_value == "LEAVE");
  CHECK(FieldMap::parse("") == FieldMap{});
  CHECK_THROWS_AS(FieldMap::parse("colour=x"), Error);
  CHECK_THROWS_AS(FieldMap::parse("time"), Error);

  std::string log = R"({"ts":1711965600000,"tid":7,"cls":"A","fn":"go","kind":"ENTER"})"
                    "\n"
                    R"({"ts":1711965600005,"tid":7,"cls":"A","fn":"go","kind":"LEAVE"})"
                    "\n";
  auto parsed = parse(log, Strictness::Strict, fm);
  REQUIRE(parsed.events.size() == 2);
  CHECK(parsed.events[0].thread_id == "7");
  CHECK(format_timestamp(parsed.events[0].timestamp) == "2024-04-01T10:00:00.000Z");
  CHECK(parsed.events[1].kind == EventKind::Exit);
}

TEST_CASE("timestamps") {
  using namespace std::chrono;
  auto t = parse_timestamp("2024-04-01T10:00:00Z");
  CHECK(parse_timestamp("2024-04-01T12:30:00+02:30") == t);
  CHECK(parse_timestamp("2024-04-01T05:00:00-05:00") == t);
  CHECK(parse_timestamp("2024-04-01T10:00:00.250Z") - t == milliseconds{250});
  CHECK(format_timestamp(parse_timestamp("1999-12-31T23:59:59.999Z")) == "1999-12-31T23:59:59.999Z");
  CHECK_THROWS_AS(parse_timestamp("2024-04-01"), Error);
  CHECK_THROWS_AS(parse_timestamp("2024-13-01T00:00:00Z"), Error);
}

TEST_CASE("daily series fills gaps") {
  std::vector<TraceEvent> events;
  auto add = [&](const char* when) {
    TraceEvent e = ev("t", "A", EventKind::Entry);
    e.timestamp = parse_timestamp(when);
    events.push_back(e);
  };
  add("2024-04-01T08:00:00Z");
  add("2024-04-01T09:00:00Z");
  add("2024-04-03T23:30:00Z");
  auto days = daily_series(events, std::chrono::minutes{0});
  REQUIRE(days.size() == 3);
  std::vector<std::uint64_t> totals;
  for (const auto& [d, c] : days) totals.push_back(c);
  CHECK(totals == std::vector<std::uint64_t>{2, 0, 1});

  auto shifted = daily_series(events, std::chrono::minutes{60});
  CHECK(format_day(shifted.rbegin()->first) == "2024-04-04");
  CHECK(daily_series({}, std::chrono::minutes{0}).empty());
}

TEST_CASE("exit events are not counted per day") {
  std::vector<TraceEvent> events = {ev("t", "A", EventKind::Entry), ev("t", "A", EventKind::Exit)};
  auto days = daily_series(events, std::chrono::minutes{0});
  REQUIRE(days.size() == 1);
  CHECK(days.begin()->second == 1);
}

TEST_CASE("reader keeps line numbers across chunks") {
  LogReader reader(Strictness::Strict);
  std::vector<TraceEvent> got;
  std::istringstream a(rec("2024-04-01T10:00:00Z", "1", "A", "m", "entry"));
  reader.read(a, [&](TraceEvent&& e) { got.push_back(std::move(e)); });
  std::istringstream b("{broken\n");
  try {
    reader.read(b, [&](TraceEvent&& e) { got.push_back(std::move(e)); });
    FAIL("expected MalformedRecord");
  } catch (const MalformedRecord& e) {
    CHECK(e.line() == 2);
  }
}

namespace {

// Properly nested random traces. Returns the events of one thread and the
// expected caller->callee edges derived from the generating call tree.
void nested_trace(std::mt19937_64& rng, const std::string& thread, int depth, const std::string& parent,
                  std::vector<TraceEvent>& out, std::map<std::pair<std::string, std::string>, std::uint64_t>& edges,
                  std::map<std::string, std::uint64_t>& counts) {
  std::uniform_int_distribution<int> cls(0, 5), kids(0, 3);
  const std::string name(1, static_cast<char>('A' + cls(rng)));
  out.push_back(ev(thread, name, EventKind::Entry));
  ++counts[name];
  if (!parent.empty() && parent != name) ++edges[{parent, name}];
  if (depth < 4) {
    int k = kids(rng);
    for (int i = 0; i < k; ++i) nested_trace(rng, thread, depth + 1, name, out, edges, counts);
  }
  out.push_back(ev(thread, name, EventKind::Exit));
}

}  // namespace

TEST_CASE("properties of reconstruction on nested traces") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int threads = 1 + trial % 4;
    std::vector<std::vector<TraceEvent>> blocks(threads);
    std::map<std::pair<std::string, std::string>, std::uint64_t> expected_edges;
    std::map<std::string, std::uint64_t> expected_counts;
    for (int t = 0; t < threads; ++t) {
      int roots = 1 + static_cast<int>(rng() % 3);
      for (int r = 0; r < roots; ++r)
        nested_trace(rng, "T" + std::to_string(t), 0, "", blocks[t], expected_edges, expected_counts);
    }
    std::vector<TraceEvent> all;
    for (auto& b : blocks) all.insert(all.end(), b.begin(), b.end());
    auto g = reconstruct_calls(all);

    std::uint64_t entries = std::count_if(all.begin(), all.end(), [](auto& e) { return e.kind == EventKind::Entry; });
    std::uint64_t total = 0;
    for (auto& [k, v] : g.counts) total += v;
    CHECK(total == entries);
    CHECK(g.counts == expected_counts);
    CHECK(g.summary.unmatched_exits == 0);
    CHECK(g.summary.unclosed_entries == 0);
    std::vector<CallEdge> expected;
    for (auto& [k, v] : expected_edges) expected.push_back({k.first, k.second, v});
    CHECK(g.edges == expected);
    for (auto& e : g.edges) CHECK(e.caller != e.callee);

    // Thread blocks in another order, and interleaved event by event.
    std::shuffle(blocks.begin(), blocks.end(), rng);
    std::vector<TraceEvent> reordered;
    for (auto& b : blocks) reordered.insert(reordered.end(), b.begin(), b.end());
    auto g2 = reconstruct_calls(reordered);
    CHECK(g2.edges == g.edges);
    CHECK(g2.counts == g.counts);

    std::vector<std::size_t> cursor(blocks.size(), 0);
    std::vector<TraceEvent> mixed;
    while (mixed.size() < all.size()) {
      std::size_t b = rng() % blocks.size();
      if (cursor[b] < blocks[b].size()) mixed.push_back(blocks[b][cursor[b]++]);
    }
    auto g3 = reconstruct_calls(mixed);
    CHECK(g3.edges == g.edges);
    CHECK(g3.counts == g.counts);
  }
}
