#ifndef GAMMAFLOW_SERIALIZE_HPP
#define GAMMAFLOW_SERIALIZE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gammaflow/currents.hpp"

namespace gammaflow {

using nlohmann::json;

/// Currents serialize as {"dim":d,"atoms":[{"x":[...],"m":..}],
/// "segments":[{"a":[...],"b":[...],"m":..}]}; emitters may add a "source"
/// provenance tag (e.g. "plaquette_winding").
json current_to_json(const ZeroCurrent& t, const std::string& source = "");
json current_to_json(const OneCurrent& s, const std::string& source = "");
json currents_to_json(const ZeroCurrent& t, const OneCurrent& s);

ZeroCurrent zero_current_from_json(const json& j);
OneCurrent one_current_from_json(const json& j);

/// Domains: {"lo":[...],"hi":[...]} or {"center":[...],"radius":r}.
json domain_to_json(const Domain& d);
Domain domain_from_json(const json& j);

/// %.17g, locale-independent.
std::string format_double(double v);

/// CSV with one fixed header row; numeric cells print as %.17g.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);
  void row_values(const std::vector<double>& values);
  void close();
  ~CsvWriter();

 private:
  struct Impl;
  Impl* impl_;
};

/// FNV-1a 64-bit file hash, hex-encoded (manifest checksums).
std::string file_checksum(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace gammaflow

#endif
