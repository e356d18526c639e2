#include "dglab/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dglab/common.hpp"

namespace dglab {

std::string content_checksum(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string signed_part(const std::string& kind, const Json& config, const Json& payload) {
  return Json{{"kind", kind}, {"config", config}, {"payload", payload}}.dump();
}

std::string cell(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

}  // namespace

std::string render_json(const std::string& kind, const Json& config, const Json& payload) {
  Json j;
  j["kind"] = kind;
  j["config"] = config;
  j["payload"] = payload;
  j["checksum"] = content_checksum(signed_part(kind, config, payload));
  return j.dump(2) + "\n";
}

std::string render_csv(const Json& config, const Table& t) {
  std::ostringstream body;
  for (std::size_t i = 0; i < t.header.size(); ++i) body << (i ? "," : "") << t.header[i];
  body << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) body << (i ? "," : "") << cell(row[i]);
    body << "\n";
  }
  std::string b = body.str();
  return "# config=" + config.dump() + "\n# checksum=" + content_checksum(config.dump() + "\n" + b) + "\n" + b;
}

Json verify_json_report(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Checksum, std::string("report is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("checksum") || !j.contains("payload") || !j.contains("config") ||
      !j.contains("kind"))
    throw Error(ErrorKind::InvalidInput, "report lacks kind/config/payload/checksum");
  std::string want = j["checksum"].is_string() ? j["checksum"].get<std::string>() : "";
  std::string got = content_checksum(signed_part(j["kind"].get<std::string>(), j["config"], j["payload"]));
  if (want != got) throw Error(ErrorKind::Checksum, "checksum mismatch (stored " + want + ", computed " + got + ")");
  return j;
}

void verify_csv_report(const std::string& text) {
  std::size_t a = text.find('\n');
  std::size_t b = a == std::string::npos ? a : text.find('\n', a + 1);
  if (b == std::string::npos || text.rfind("# config=", 0) != 0 || text.compare(a + 1, 11, "# checksum=") != 0)
    throw Error(ErrorKind::InvalidInput, "CSV report header missing");
  std::string config = text.substr(9, a - 9);
  std::string want = text.substr(a + 12, b - a - 12);
  std::string got = content_checksum(config + "\n" + text.substr(b + 1));
  if (want != got) throw Error(ErrorKind::Checksum, "checksum mismatch (stored " + want + ", computed " + got + ")");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_checked_json(const std::string& path) { return verify_json_report(read_text(path)); }

void write_text(const std::string& dir, const std::string& name, const std::string& text) {
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write '" + name + "' in '" + dir + "'");
  out << text;
}

}  // namespace dglab
