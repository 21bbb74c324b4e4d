#include "advids/data/csv.hpp"

#include <fstream>

#include "advids/types.hpp"

namespace advids::data {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  out.push_back(std::move(field));
  return out;
}

CsvFile read_csv(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  CsvFile file;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    auto fields = split_csv_line(line);
    if (first && has_header) {
      file.header = std::move(fields);
      first = false;
      continue;
    }
    first = false;
    file.rows.push_back(std::move(fields));
  }
  return file;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace advids::data
