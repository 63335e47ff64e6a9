#include "gammaflow/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gammaflow {

namespace {

json point_to_json(const Point& p) {
  json arr = json::array();
  for (int i = 0; i < p.dim; ++i) arr.push_back(p[i]);
  return arr;
}

Point point_from_json(const json& j) {
  if (!j.is_array() || (j.size() != 2 && j.size() != 3))
    throw std::invalid_argument("point: expected an array of 2 or 3 coordinates");
  Point p;
  p.dim = int(j.size());
  for (int i = 0; i < p.dim; ++i) p[i] = j[std::size_t(i)].get<double>();
  return p;
}

}  // namespace

json current_to_json(const ZeroCurrent& t, const std::string& source) {
  json j;
  j["dim"] = t.dim;
  j["atoms"] = json::array();
  for (const auto& a : t.atoms) j["atoms"].push_back({{"x", point_to_json(a.p)}, {"m", a.m}});
  if (!source.empty()) j["source"] = source;
  return j;
}

json current_to_json(const OneCurrent& s, const std::string& source) {
  json j;
  j["dim"] = s.dim;
  j["segments"] = json::array();
  for (const auto& seg : s.segments)
    j["segments"].push_back(
        {{"a", point_to_json(seg.a)}, {"b", point_to_json(seg.b)}, {"m", seg.m}});
  if (!source.empty()) j["source"] = source;
  return j;
}

json currents_to_json(const ZeroCurrent& t, const OneCurrent& s) {
  json j = current_to_json(t);
  j["segments"] = current_to_json(s)["segments"];
  return j;
}

ZeroCurrent zero_current_from_json(const json& j) {
  ZeroCurrent t(j.at("dim").get<int>());
  if (j.contains("atoms"))
    for (const auto& a : j.at("atoms")) {
      Point p = point_from_json(a.at("x"));
      if (p.dim != t.dim) throw std::invalid_argument("current: atom dimension mismatch");
      t.add(p, a.at("m").get<long long>());
    }
  return t;
}

OneCurrent one_current_from_json(const json& j) {
  OneCurrent s(j.at("dim").get<int>());
  if (j.contains("segments"))
    for (const auto& seg : j.at("segments")) {
      Point a = point_from_json(seg.at("a"));
      Point b = point_from_json(seg.at("b"));
      if (a.dim != s.dim || b.dim != s.dim)
        throw std::invalid_argument("current: segment dimension mismatch");
      s.add(a, b, seg.at("m").get<long long>());
    }
  return s;
}

json domain_to_json(const Domain& d) {
  json j;
  if (d.kind == Domain::Kind::Box) {
    j["lo"] = point_to_json(d.box.lo);
    j["hi"] = point_to_json(d.box.hi);
  } else {
    j["center"] = point_to_json(d.disk.center);
    j["radius"] = d.disk.radius;
  }
  return j;
}

Domain domain_from_json(const json& j) {
  if (j.contains("lo"))
    return Domain(BoxDomain(point_from_json(j.at("lo")), point_from_json(j.at("hi"))));
  if (j.contains("center"))
    return Domain(DiskDomain(point_from_json(j.at("center")), j.at("radius").get<double>()));
  throw std::invalid_argument("domain: expected box {lo,hi} or disk {center,radius}");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : impl_(new Impl) {
  impl_->out.open(path);
  if (!impl_->out) throw std::runtime_error("CsvWriter: cannot open " + path);
  for (std::size_t i = 0; i < header.size(); ++i)
    impl_->out << header[i] << (i + 1 < header.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i)
    impl_->out << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

void CsvWriter::row_values(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  row(cells);
}

void CsvWriter::close() {
  if (impl_ && impl_->out.is_open()) impl_->out.close();
}

CsvWriter::~CsvWriter() {
  close();
  delete impl_;
}

std::string file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("file_checksum: cannot open " + path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= std::uint8_t(buf[i]);
      h *= 0x100000001b3ull;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", (unsigned long long)h);
  return hex;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_text_file: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_text_file: cannot open " + path);
  out << content;
}

}  // namespace gammaflow
