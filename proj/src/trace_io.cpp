#include "ckpt/tracegen.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace ckpt {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_number(std::string_view text, double& value) {
  text = trim(text);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

bool parse_unsigned(std::string_view text, std::uint64_t& value) {
  text = trim(text);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return !text.empty() && ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return ec == std::errc() ? std::string(buffer, ptr) : std::string("nan");
}

EmpiricalDurations parse_fta_durations(std::istream& in, const std::string& source_name) {
  EmpiricalDurations out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    double value = 0.0;
    if (!parse_number(text, value)) throw ParseError(source_name, number, "not a number: '" + std::string(text) + "'");
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw ParseError(source_name, number, "availability duration must be positive and finite");
    }
    out.samples.push_back(value);
  }
  if (out.samples.empty()) throw ParseError(source_name, number, "no availability durations found");
  return out;
}

EmpiricalDurations ingest_fta_durations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open FTA durations file: " + path.string());
  return parse_fta_durations(in, path.string());
}

void write_trace_csv(std::ostream& out, const EventTrace& trace) {
  out << "# horizon_s=" << format_double(trace.horizon) << '\n';
  out << "# job_start_s=" << format_double(trace.job_start) << '\n';
  out << "# seed=" << trace.seed << '\n';
  out << "time_s,kind,actual_fault_time_s\n";
  for (const Event& e : trace.events) {
    out << format_double(e.time) << ',' << to_string(e.kind) << ',';
    if (e.kind == EventKind::TruePrediction) out << format_double(e.actual_fault_time);
    out << '\n';
  }
}

EventTrace read_trace_csv(std::istream& in, const std::string& source_name) {
  EventTrace trace;
  trace.horizon = kInfinity;
  std::string line;
  std::size_t number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      const std::string_view body = trim(text.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      const std::string_view key = trim(body.substr(0, eq));
      const std::string_view value = body.substr(eq + 1);
      bool ok = true;
      if (key == "horizon_s") ok = parse_number(value, trace.horizon);
      else if (key == "job_start_s") ok = parse_number(value, trace.job_start);
      else if (key == "seed") ok = parse_unsigned(value, trace.seed);
      if (!ok) throw ParseError(source_name, number, "bad value for '" + std::string(key) + "'");
      continue;
    }
    if (!header_seen) {
      if (text != "time_s,kind,actual_fault_time_s") {
        throw ParseError(source_name, number, "expected header 'time_s,kind,actual_fault_time_s'");
      }
      header_seen = true;
      continue;
    }
    const auto c1 = text.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(',', c1 + 1);
    if (c2 == std::string_view::npos) throw ParseError(source_name, number, "expected three columns");
    Event e;
    if (!parse_number(text.substr(0, c1), e.time)) throw ParseError(source_name, number, "bad time");
    const std::string_view kind = trim(text.substr(c1 + 1, c2 - c1 - 1));
    const std::string_view actual = trim(text.substr(c2 + 1));
    if (kind == "fault") {
      e.kind = EventKind::UnpredictedFault;
    } else if (kind == "pred_false") {
      e.kind = EventKind::FalsePrediction;
    } else if (kind == "pred_true") {
      e.kind = EventKind::TruePrediction;
      e.actual_fault_time = e.time;
      if (!actual.empty() && !parse_number(actual, e.actual_fault_time)) {
        throw ParseError(source_name, number, "bad actual fault time");
      }
    } else {
      throw ParseError(source_name, number, "unknown event kind '" + std::string(kind) + "'");
    }
    if (e.kind != EventKind::TruePrediction && !actual.empty()) {
      throw ParseError(source_name, number, "actual fault time only allowed for pred_true");
    }
    trace.events.push_back(e);
  }
  if (!header_seen) throw ParseError(source_name, number, "missing header");
  try {
    trace.validate();
  } catch (const InvalidArgument& err) {
    throw ParseError(source_name, number, err.what());
  }
  return trace;
}

}  // namespace ckpt
