#pragma once

#include <string>
#include <vector>

#include "dglab/config.hpp"

namespace dglab {

// 64-bit FNV-1a as 16 hex digits.
std::string content_checksum(const std::string& bytes);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Json>> rows;
};

// {"kind", "config", "payload", "checksum"}; the checksum covers the compact dump of kind, config and payload.
std::string render_json(const std::string& kind, const Json& config, const Json& payload);
// Two comment lines (resolved config, checksum of the table body) followed by the table.
std::string render_csv(const Json& config, const Table& t);

// Both throw Error(Checksum) on mismatch and Error(InvalidInput) on malformed input.
Json verify_json_report(const std::string& text);
void verify_csv_report(const std::string& text);
Json read_checked_json(const std::string& path);

void write_text(const std::string& dir, const std::string& name, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace dglab
