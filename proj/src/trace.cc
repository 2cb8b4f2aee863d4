#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "cv2x/scenario.h"

namespace cv2x {

namespace {

std::string Trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return "";
  }
  const size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    out.push_back(Trim(field));
  }
  return out;
}

[[noreturn]] void Fail(const std::string& source, size_t line,
                       const std::string& what) {
  throw TraceError(source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

MobilityTrace ParseTrace(std::istream& in, const std::string& source_name) {
  MobilityTrace trace;
  std::unordered_map<std::string, size_t> index;
  std::string line;
  size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = Trim(line);
    if (trimmed.empty()) {
      continue;
    }
    if (!saw_header) {
      saw_header = true;
      if (trimmed != "time_ms,node_id,x_m,y_m") {
        Fail(source_name, line_no,
             "expected header 'time_ms,node_id,x_m,y_m', got '" + trimmed +
                 "'");
      }
      continue;
    }
    const std::vector<std::string> fields = SplitCsv(trimmed);
    if (fields.size() != 4) {
      Fail(source_name, line_no,
           "expected 4 fields, got " + std::to_string(fields.size()));
    }
    TraceSample sample;
    try {
      size_t pos = 0;
      sample.time_ms = std::stoull(fields[0], &pos);
      if (pos != fields[0].size()) throw std::invalid_argument(fields[0]);
      sample.x_m = std::stod(fields[2], &pos);
      if (pos != fields[2].size()) throw std::invalid_argument(fields[2]);
      sample.y_m = std::stod(fields[3], &pos);
      if (pos != fields[3].size()) throw std::invalid_argument(fields[3]);
    } catch (const std::exception&) {
      Fail(source_name, line_no, "malformed numeric field");
    }
    const std::string& node = fields[1];
    if (node.empty()) {
      Fail(source_name, line_no, "empty node_id");
    }
    auto [it, inserted] = index.try_emplace(node, trace.node_names.size());
    if (inserted) {
      trace.node_names.push_back(node);
      trace.samples.emplace_back();
    }
    std::vector<TraceSample>& series = trace.samples[it->second];
    if (!series.empty() && sample.time_ms <= series.back().time_ms) {
      Fail(source_name, line_no,
           "non-monotone timestamp for node '" + node + "': " +
               std::to_string(sample.time_ms) + " after " +
               std::to_string(series.back().time_ms));
    }
    series.push_back(sample);
  }
  if (trace.node_names.empty()) {
    throw TraceError(source_name + ": trace contains no samples");
  }
  return trace;
}

MobilityTrace LoadTrace(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw TraceError("cannot open trace file: " + path);
  }
  return ParseTrace(in, path);
}

void SaveTrace(const MobilityTrace& trace, std::ostream& out) {
  out << "time_ms,node_id,x_m,y_m\n";
  char buf[64];
  for (size_t n = 0; n < trace.NodeCount(); ++n) {
    for (const TraceSample& s : trace.samples[n]) {
      out << s.time_ms << ',' << trace.node_names[n] << ',';
      std::snprintf(buf, sizeof buf, "%.17g", s.x_m);
      out << buf << ',';
      std::snprintf(buf, sizeof buf, "%.17g", s.y_m);
      out << buf << '\n';
    }
  }
}

Vec2 TracePositionAt(const MobilityTrace& trace, uint32_t node,
                     uint64_t t_ms) {
  const std::vector<TraceSample>& s = trace.samples[node];
  if (t_ms <= s.front().time_ms) {
    return Vec2{s.front().x_m, s.front().y_m};
  }
  if (t_ms >= s.back().time_ms) {
    return Vec2{s.back().x_m, s.back().y_m};
  }
  const auto after = std::upper_bound(
      s.begin(), s.end(), t_ms,
      [](uint64_t t, const TraceSample& ts) { return t < ts.time_ms; });
  const TraceSample& a = *(after - 1);
  const TraceSample& b = *after;
  const double f = static_cast<double>(t_ms - a.time_ms) /
                   static_cast<double>(b.time_ms - a.time_ms);
  return Vec2{a.x_m + f * (b.x_m - a.x_m), a.y_m + f * (b.y_m - a.y_m)};
}

}  // namespace cv2x
