#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace bosegas::io {

inline constexpr const char* schema_version = "1.0";
inline constexpr int schema_major = 1;

/// Shortest decimal string that parses back to the same double.
std::string fmt(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Writes a `# schema_version=` comment, a header line and one row per entry.
void write_csv(const std::string& path, const CsvTable& table);
std::string to_csv(const CsvTable& table);

/// Reads a table produced by write_csv; rejects unknown schema majors.
CsvTable read_csv(const std::string& path);

void write_json(const std::string& path, const nlohmann::json& j);
std::string dump_json(const nlohmann::json& j);

/// Parses a JSON file and rejects documents whose schema major is unknown.
nlohmann::json read_json_checked(const std::string& path);

/// Major component of a "major.minor" version string; -1 when malformed.
int parse_major(const std::string& version);

/// UTC time stamp in ISO-8601 form.
std::string utc_timestamp();

}  // namespace bosegas::io
