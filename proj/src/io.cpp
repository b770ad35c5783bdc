#include "bosegas/io.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "bosegas/errors.hpp"

namespace bosegas::io {

std::string fmt(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string to_csv(const CsvTable& table) {
  std::ostringstream os;
  os << "# schema_version=" << schema_version << '\n';
  for (std::size_t i = 0; i < table.header.size(); ++i)
    os << (i ? "," : "") << table.header[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt(row[i]);
    os << '\n';
  }
  return os.str();
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << to_csv(table);
  if (!out) throw IoError("write failed: " + path);
}

static std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  CsvTable t;
  std::string line;
  bool have_schema = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string key = "# schema_version=";
      if (line.rfind(key, 0) == 0) {
        const int major = parse_major(line.substr(key.size()));
        if (major != schema_major)
          throw IoError("unsupported schema_version in " + path + ": " + line.substr(key.size()));
        have_schema = true;
      }
      continue;
    }
    if (t.header.empty()) {
      t.header = split(line, ',');
      continue;
    }
    std::vector<double> row;
    for (const auto& cell : split(line, ',')) {
      double v = 0;
      auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc()) throw IoError("malformed number '" + cell + "' in " + path);
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (!have_schema) throw IoError("missing schema_version in " + path);
  return t;
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << dump_json(j);
  if (!out) throw IoError("write failed: " + path);
}

nlohmann::json read_json_checked(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed JSON in " + path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("schema_version") || !j["schema_version"].is_string())
    throw IoError("missing schema_version in " + path);
  if (parse_major(j["schema_version"].get<std::string>()) != schema_major)
    throw IoError("unsupported schema_version in " + path);
  return j;
}

int parse_major(const std::string& version) {
  int major = -1;
  const auto dot = version.find('.');
  const std::string head = version.substr(0, dot);
  auto res = std::from_chars(head.data(), head.data() + head.size(), major);
  if (res.ec != std::errc() || res.ptr != head.data() + head.size()) return -1;
  return major;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace bosegas::io
