#include "fasttrack/mot_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fasttrack/errors.hpp"

namespace fasttrack {

namespace {

std::vector<double> parse_row(const std::string& line, int line_no, size_t min_fields) {
  std::vector<double> fields;
  size_t pos = 0;
  while (pos <= line.size()) {
    size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    std::string tok = line.substr(pos, comma - pos);
    // trim
    const size_t b = tok.find_first_not_of(" \t\r");
    const size_t e = tok.find_last_not_of(" \t\r");
    if (b == std::string::npos) {
      tok.clear();
    } else {
      tok = tok.substr(b, e - b + 1);
    }
    if (!tok.empty()) {
      double v = 0.0;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw ValidationError("line " + std::to_string(line_no) +
                              ": non-numeric field '" + tok + "'");
      fields.push_back(v);
    } else if (comma < line.size()) {
      throw ValidationError("line " + std::to_string(line_no) + ": empty field");
    }
    pos = comma + 1;
    if (comma == line.size()) break;
  }
  if (!fields.empty() && fields.size() < min_fields)
    throw ValidationError("line " + std::to_string(line_no) + ": expected at least " +
                          std::to_string(min_fields) + " fields, got " +
                          std::to_string(fields.size()));
  return fields;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

template <typename Fn>
void for_each_row(const std::string& text, size_t min_fields, Fn&& fn) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const std::vector<double> f = parse_row(line, line_no, min_fields);
    if (!f.empty()) fn(f, line_no);
  }
}

}  // namespace

DetectionStream parse_detections_text(const std::string& text,
                                      std::vector<std::string>* diagnostics) {
  DetectionStream out;
  for_each_row(text, 7, [&](const std::vector<double>& f, int line_no) {
    Detection d;
    d.frame = static_cast<int>(f[0]);
    d.box = {f[2], f[3], f[4], f[5]};
    d.confidence = std::clamp(f[6], 0.0, 1.0);
    d.class_id = f.size() >= 8 ? static_cast<int>(f[7]) : 1;
    if (d.frame < 1)
      throw ValidationError("line " + std::to_string(line_no) + ": frame must be >= 1");
    if (!d.box.valid()) {
      if (diagnostics)
        diagnostics->push_back("line " + std::to_string(line_no) +
                               ": rejected row with nonpositive extents");
      return;
    }
    out[d.frame].push_back(d);
  });
  return out;
}

DetectionStream parse_detections(const std::string& path,
                                 std::vector<std::string>* diagnostics) {
  return parse_detections_text(read_text_file(path), diagnostics);
}

GroundTruthStream parse_ground_truth_text(const std::string& text,
                                          std::vector<std::string>* diagnostics) {
  GroundTruthStream out;
  for_each_row(text, 6, [&](const std::vector<double>& f, int line_no) {
    if (f.size() >= 7 && f[6] == 0.0) return;  // flag 0: not evaluated
    GroundTruthBox g;
    g.frame = static_cast<int>(f[0]);
    g.id = static_cast<int>(f[1]);
    g.box = {f[2], f[3], f[4], f[5]};
    g.class_id = f.size() >= 8 ? static_cast<int>(f[7]) : 1;
    g.visibility = f.size() >= 9 ? f[8] : 1.0;
    if (g.frame < 1)
      throw ValidationError("line " + std::to_string(line_no) + ": frame must be >= 1");
    if (!g.box.valid()) {
      if (diagnostics)
        diagnostics->push_back("line " + std::to_string(line_no) +
                               ": rejected row with nonpositive extents");
      return;
    }
    out[g.frame].push_back(g);
  });
  return out;
}

GroundTruthStream parse_ground_truth(const std::string& path,
                                     std::vector<std::string>* diagnostics) {
  return parse_ground_truth_text(read_text_file(path), diagnostics);
}

std::vector<TrackRecord> parse_results_text(const std::string& text) {
  std::vector<TrackRecord> out;
  for_each_row(text, 7, [&](const std::vector<double>& f, int line_no) {
    TrackRecord r;
    r.frame = static_cast<int>(f[0]);
    r.id = static_cast<int>(f[1]);
    r.box = {f[2], f[3], f[4], f[5]};
    r.confidence = f[6];
    r.class_id = f.size() >= 8 && f[7] > 0 ? static_cast<int>(f[7]) : 1;
    if (!r.box.valid())
      throw ValidationError("line " + std::to_string(line_no) +
                            ": result row with nonpositive extents");
    out.push_back(r);
  });
  return out;
}

std::vector<TrackRecord> parse_results(const std::string& path) {
  return parse_results_text(read_text_file(path));
}

namespace {

void append_num(std::string& s, const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  s += buf;
}

}  // namespace

std::string format_results(std::vector<TrackRecord> records) {
  std::sort(records.begin(), records.end(), [](const TrackRecord& a, const TrackRecord& b) {
    return std::tie(a.frame, a.id) < std::tie(b.frame, b.id);
  });
  std::string out;
  for (const TrackRecord& r : records) {
    out += std::to_string(r.frame) + "," + std::to_string(r.id) + ",";
    append_num(out, "%.2f", r.box.left);
    out += ",";
    append_num(out, "%.2f", r.box.top);
    out += ",";
    append_num(out, "%.2f", r.box.width);
    out += ",";
    append_num(out, "%.2f", r.box.height);
    out += ",";
    append_num(out, "%.2f", r.confidence);
    out += ",-1,-1,-1\n";
  }
  return out;
}

void write_results(const std::vector<TrackRecord>& records, const std::string& path) {
  write_text_file(path, format_results(records));
}

std::string format_ground_truth(std::vector<GroundTruthBox> rows) {
  std::sort(rows.begin(), rows.end(), [](const GroundTruthBox& a, const GroundTruthBox& b) {
    return std::tie(a.frame, a.id) < std::tie(b.frame, b.id);
  });
  std::string out;
  for (const GroundTruthBox& g : rows) {
    out += std::to_string(g.frame) + "," + std::to_string(g.id) + ",";
    append_num(out, "%.2f", g.box.left);
    out += ",";
    append_num(out, "%.2f", g.box.top);
    out += ",";
    append_num(out, "%.2f", g.box.width);
    out += ",";
    append_num(out, "%.2f", g.box.height);
    out += ",1," + std::to_string(g.class_id) + ",";
    append_num(out, "%.2f", g.visibility);
    out += "\n";
  }
  return out;
}

void write_ground_truth(const std::vector<GroundTruthBox>& rows, const std::string& path) {
  write_text_file(path, format_ground_truth(rows));
}

std::string format_detections(std::vector<Detection> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const Detection& a, const Detection& b) {
    return a.frame < b.frame;
  });
  std::string out;
  for (const Detection& d : rows) {
    out += std::to_string(d.frame) + ",-1,";
    append_num(out, "%.2f", d.box.left);
    out += ",";
    append_num(out, "%.2f", d.box.top);
    out += ",";
    append_num(out, "%.2f", d.box.width);
    out += ",";
    append_num(out, "%.2f", d.box.height);
    out += ",";
    append_num(out, "%.4f", d.confidence);
    out += "," + std::to_string(d.class_id) + ",-1,-1\n";
  }
  return out;
}

void write_detections(const std::vector<Detection>& rows, const std::string& path) {
  write_text_file(path, format_detections(rows));
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fasttrack
