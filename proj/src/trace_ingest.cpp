// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0

#include "softspace/trace_ingest.hpp"

#include <cstdio>
#include <istream>
#include <optional>

#include <json.hpp>

#include "softspace/error.hpp"

namespace softspace::ingest {

namespace {

using namespace std::chrono;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

class DigitCursor {
 public:
  explicit DigitCursor(std::string_view text) : text_(text) {}

  int digits(std::size_t count) {
    if (pos_ + count > text_.size()) fail();
    int value = 0;
    for (std::size_t k = 0; k < count; ++k) {
      char c = text_[pos_++];
      if (c < '0' || c > '9') fail();
      value = value * 10 + (c - '0');
    }
    return value;
  }
  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) fail();
    ++pos_;
  }
  bool at_end() const { return pos_ == text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip() { ++pos_; }
  [[noreturn]] void fail() const {
    throw Error(ErrorCode::InvalidArgument, "invalid timestamp '" + std::string(text_) + "'");
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::optional<std::string> scalar_as_string(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  return std::nullopt;
}

struct Decoded {
  std::optional<TraceEvent> event;
  std::string reason;
};

Decoded decode(std::string_view line, const FieldMap& fields) {
  nlohmann::json obj = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded()) return {std::nullopt, "not valid JSON"};
  if (!obj.is_object()) return {std::nullopt, "record is not a JSON object"};

  auto field = [&](const std::string& name) -> const nlohmann::json* {
    auto it = obj.find(name);
    return it == obj.end() ? nullptr : &*it;
  };

  TraceEvent ev;
  const auto* time = field(fields.time);
  if (!time) return {std::nullopt, "missing field '" + fields.time + "'"};
  if (time->is_string()) {
    try {
      ev.timestamp = parse_timestamp(time->get<std::string>());
    } catch (const Error& e) {
      return {std::nullopt, e.what()};
    }
  } else if (time->is_number_integer()) {
    ev.timestamp = Timestamp{milliseconds{time->get<std::int64_t>()}};
  } else {
    return {std::nullopt, "field '" + fields.time + "' is not a timestamp"};
  }

  const auto* thread = field(fields.thread);
  auto thread_text = thread ? scalar_as_string(*thread) : std::nullopt;
  if (!thread_text || thread_text->empty()) return {std::nullopt, "missing or empty '" + fields.thread + "'"};
  ev.thread_id = std::move(*thread_text);

  const auto* cls = field(fields.class_name);
  if (!cls || !cls->is_string() || cls->get_ref<const std::string&>().empty())
    return {std::nullopt, "missing or empty '" + fields.class_name + "'"};
  ev.class_name = cls->get<std::string>();

  const auto* method = field(fields.method);
  auto method_text = method ? scalar_as_string(*method) : std::nullopt;
  if (!method_text) return {std::nullopt, "missing '" + fields.method + "'"};
  ev.method_name = std::move(*method_text);

  const auto* kind = field(fields.event);
  if (!kind || !kind->is_string()) return {std::nullopt, "missing '" + fields.event + "'"};
  const auto& kind_text = kind->get_ref<const std::string&>();
  if (kind_text == fields.entry_value) {
    ev.kind = EventKind::Entry;
  } else if (kind_text == fields.exit_value) {
    ev.kind = EventKind::Exit;
  } else {
    return {std::nullopt, "unknown event marker '" + kind_text + "'"};
  }
  return {std::move(ev), {}};
}

}  // namespace

FieldMap FieldMap::parse(std::string_view spec) {
  FieldMap map;
  spec = trim(spec);
  while (!spec.empty()) {
    auto comma = spec.find(',');
    auto item = trim(spec.substr(0, comma));
    spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::InvalidArgument, "field map entry '" + std::string(item) + "' is not key=value");
    auto key = trim(item.substr(0, eq));
    auto value = std::string(trim(item.substr(eq + 1)));
    if (value.empty()) throw Error(ErrorCode::InvalidArgument, "empty field name for '" + std::string(key) + "'");
    if (key == "time") map.time = value;
    else if (key == "thread") map.thread = value;
    else if (key == "class") map.class_name = value;
    else if (key == "method") map.method = value;
    else if (key == "event") map.event = value;
    else if (key == "entry") map.entry_value = value;
    else if (key == "exit") map.exit_value = value;
    else throw Error(ErrorCode::InvalidArgument, "unknown field map key '" + std::string(key) + "'");
  }
  return map;
}

Timestamp parse_timestamp(std::string_view text) {
  DigitCursor cur(trim(text));
  int y = cur.digits(4);
  cur.expect('-');
  int mo = cur.digits(2);
  cur.expect('-');
  int d = cur.digits(2);
  if (cur.peek() != 'T' && cur.peek() != 't' && cur.peek() != ' ') cur.fail();
  cur.skip();
  int h = cur.digits(2);
  cur.expect(':');
  int mi = cur.digits(2);
  cur.expect(':');
  int s = cur.digits(2);
  int ms = 0;
  if (cur.peek() == '.' || cur.peek() == ',') {
    cur.skip();
    int scale = 100;
    bool any = false;
    while (cur.peek() >= '0' && cur.peek() <= '9') {
      ms += scale * cur.digits(1);  // digits past millisecond precision are truncated
      scale /= 10;
      any = true;
    }
    if (!any) cur.fail();
  }
  minutes offset{0};
  if (cur.peek() == 'Z' || cur.peek() == 'z') {
    cur.skip();
  } else if (cur.peek() == '+' || cur.peek() == '-') {
    int sign = cur.peek() == '-' ? -1 : 1;
    cur.skip();
    int oh = cur.digits(2);
    if (cur.peek() == ':') cur.skip();
    int om = cur.digits(2);
    offset = minutes{sign * (oh * 60 + om)};
  }
  if (!cur.at_end()) cur.fail();

  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) cur.fail();
  auto t = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} + milliseconds{ms} - offset;
  return time_point_cast<milliseconds>(t);
}

std::string format_timestamp(Timestamp t) {
  auto day = floor<days>(t);
  year_month_day ymd{day};
  hh_mm_ss tod{t - day};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()), static_cast<int>(tod.subseconds().count()));
  return buf;
}

LogReader::LogReader(Strictness strictness, FieldMap fields)
    : strictness_(strictness), fields_(std::move(fields)) {}

void LogReader::read(std::istream& in, const Sink& sink) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no_;
    auto body = trim(line);
    if (body.empty()) continue;
    auto decoded = decode(body, fields_);
    if (!decoded.event) {
      if (strictness_ == Strictness::Strict) throw MalformedRecord(line_no_, decoded.reason);
      ++summary_.events_rejected;
      continue;
    }
    ++summary_.events_parsed;
    sink(std::move(*decoded.event));
  }
  if (in.bad()) throw Error(ErrorCode::Io, "read error after line " + std::to_string(line_no_));
}

ParsedLog parse_log(std::istream& in, Strictness strictness, const FieldMap& fields) {
  LogReader reader(strictness, fields);
  ParsedLog out;
  reader.read(in, [&](TraceEvent&& ev) { out.events.push_back(std::move(ev)); });
  out.summary = reader.summary();
  std::unordered_map<std::string_view, bool> threads;
  for (const auto& ev : out.events) threads.emplace(ev.thread_id, true);
  out.summary.threads_seen = threads.size();
  return out;
}

void CallReconstructor::consume(const TraceEvent& event) {
  ++consumed_;
  auto& stack = stacks_[event.thread_id];
  if (event.kind == EventKind::Entry) {
    if (!stack.empty() && stack.back().class_name != event.class_name)
      ++edges_[{stack.back().class_name, event.class_name}];
    ++counts_[event.class_name];
    stack.push_back({event.class_name, event.method_name});
    return;
  }
  if (!stack.empty() && stack.back().class_name == event.class_name &&
      stack.back().method_name == event.method_name) {
    stack.pop_back();
  } else {
    ++unmatched_exits_;
  }
}

std::vector<CallEdge> CallReconstructor::edges() const {
  std::vector<CallEdge> out;
  out.reserve(edges_.size());
  for (const auto& [key, count] : edges_) out.push_back({key.first, key.second, count});
  return out;
}

IngestSummary CallReconstructor::summary() const {
  IngestSummary s;
  s.events_parsed = consumed_;
  s.unmatched_exits = unmatched_exits_;
  s.threads_seen = stacks_.size();
  for (const auto& [thread, stack] : stacks_) s.unclosed_entries += stack.size();
  return s;
}

CallGraph reconstruct_calls(std::span<const TraceEvent> events) {
  CallReconstructor rec;
  for (const auto& ev : events) rec.consume(ev);
  return {rec.edges(), rec.counts(), rec.summary()};
}

void DailySeriesBuilder::add(const TraceEvent& event) {
  if (event.kind != EventKind::Entry) return;
  ++days_[floor<days>(event.timestamp + offset_)];
}

DailySeries DailySeriesBuilder::build() const {
  DailySeries out = days_;
  if (days_.empty()) return out;
  for (auto d = days_.begin()->first; d < days_.rbegin()->first; d += days{1}) out.try_emplace(d, 0);
  return out;
}

DailySeries daily_series(std::span<const TraceEvent> events, minutes utc_offset) {
  DailySeriesBuilder builder(utc_offset);
  for (const auto& ev : events) builder.add(ev);
  return builder.build();
}

std::string format_day(sys_days day) {
  year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace softspace::ingest
