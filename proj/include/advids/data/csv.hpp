#pragma once

#include <string>
#include <vector>

namespace advids::data {

// Minimal CSV support: comma separator, optional double-quote quoting,
// no embedded newlines. Enough for the traffic corpora and our own outputs.
std::vector<std::string> split_csv_line(const std::string& line);

struct CsvFile {
  std::vector<std::string> header;  // empty when has_header = false
  std::vector<std::vector<std::string>> rows;
};

CsvFile read_csv(const std::string& path, bool has_header);

std::string csv_escape(const std::string& field);

}  // namespace advids::data
