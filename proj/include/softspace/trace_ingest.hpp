// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SOFTSPACE_TRACE_INGEST_HPP
#define SOFTSPACE_TRACE_INGEST_HPP

#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace softspace::ingest {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

enum class EventKind { Entry, Exit };

/// One method entry or exit record from an execution log.
struct TraceEvent {
  Timestamp timestamp{};
  std::string thread_id;
  std::string class_name;
  std::string method_name;
  EventKind kind = EventKind::Entry;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

/// Directed class-level call relationship observed at least once.
struct CallEdge {
  std::string caller;
  std::string callee;
  std::uint64_t occurrence_count = 1;

  friend bool operator==(const CallEdge&, const CallEdge&) = default;
};

struct IngestSummary {
  std::uint64_t events_parsed = 0;
  std::uint64_t events_rejected = 0;
  std::uint64_t unmatched_exits = 0;
  std::uint64_t unclosed_entries = 0;
  std::uint64_t threads_seen = 0;

  friend bool operator==(const IngestSummary&, const IngestSummary&) = default;
};

enum class Strictness { Strict, Lenient };

/// Names of the JSON fields holding each part of a record, and the marker
/// values for the event field.
struct FieldMap {
  std::string time = "time";
  std::string thread = "thread";
  std::string class_name = "class";
  std::string method = "method";
  std::string event = "event";
  std::string entry_value = "entry";
  std::string exit_value = "exit";

  /// Parses "time=ts,thread=tid,entry=ENTER" style overrides on top of the
  /// defaults. Keys: time, thread, class, method, event, entry, exit.
  static FieldMap parse(std::string_view spec);

  friend bool operator==(const FieldMap&, const FieldMap&) = default;
};

/// Accepts "YYYY-MM-DDTHH:MM:SS[.fff][Z|+hh:mm|-hh:mm]" (a space may
/// replace the T). Throws Error(InvalidArgument) on anything else.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

/// Line-oriented JSON Lines reader. Line numbers and the summary keep
/// counting across successive read() calls, so several files can be fed
/// as if concatenated.
class LogReader {
 public:
  using Sink = std::function<void(TraceEvent&&)>;

  explicit LogReader(Strictness strictness, FieldMap fields = {});

  /// Blank lines are skipped without being counted.
  void read(std::istream& in, const Sink& sink);

  const IngestSummary& summary() const noexcept { return summary_; }

 private:
  Strictness strictness_;
  FieldMap fields_;
  std::size_t line_no_ = 0;
  IngestSummary summary_;
};

struct ParsedLog {
  std::vector<TraceEvent> events;
  IngestSummary summary;
};

ParsedLog parse_log(std::istream& in, Strictness strictness, const FieldMap& fields = {});

/// Incremental per-thread call stack reconstruction.
class CallReconstructor {
 public:
  void consume(const TraceEvent& event);

  /// Edges sorted by (caller, callee).
  std::vector<CallEdge> edges() const;
  const std::map<std::string, std::uint64_t>& counts() const noexcept { return counts_; }
  /// Frames still open are reported as unclosed_entries; events_parsed is
  /// the number of events consumed.
  IngestSummary summary() const;

 private:
  struct Frame {
    std::string class_name;
    std::string method_name;
  };

  std::unordered_map<std::string, std::vector<Frame>> stacks_;
  std::map<std::pair<std::string, std::string>, std::uint64_t> edges_;
  std::map<std::string, std::uint64_t> counts_;
  std::uint64_t consumed_ = 0;
  std::uint64_t unmatched_exits_ = 0;
};

struct CallGraph {
  std::vector<CallEdge> edges;
  std::map<std::string, std::uint64_t> counts;
  IngestSummary summary;
};

CallGraph reconstruct_calls(std::span<const TraceEvent> events);

using DailySeries = std::map<std::chrono::sys_days, std::uint64_t>;

/// Counts Entry events per calendar day, shifted by a fixed UTC offset.
class DailySeriesBuilder {
 public:
  explicit DailySeriesBuilder(std::chrono::minutes utc_offset = std::chrono::minutes{0})
      : offset_(utc_offset) {}

  void add(const TraceEvent& event);
  /// Every day between the first and last observed day is present.
  DailySeries build() const;

 private:
  std::chrono::minutes offset_;
  DailySeries days_;
};

DailySeries daily_series(std::span<const TraceEvent> events, std::chrono::minutes utc_offset);

std::string format_day(std::chrono::sys_days day);

}  // namespace softspace::ingest

#endif  // SOFTSPACE_TRACE_INGEST_HPP
