#include "advids/data/load.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "advids/data/csv.hpp"

namespace advids::data {

const char* dialect_name(Dialect d) {
  return d == Dialect::NslKdd ? "nslkdd" : "cicids2017";
}

Dialect dialect_from_name(const std::string& name) {
  if (name == "nslkdd") return Dialect::NslKdd;
  if (name == "cicids2017") return Dialect::Cicids2017;
  throw ConfigError("unknown dialect: " + name);
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::None: return "none";
    case Provenance::Fgsm: return "fgsm";
    case Provenance::Pgd: return "pgd";
    case Provenance::Cw: return "cw";
    case Provenance::Df: return "df";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool is_nonfinite_token(const std::string& v) {
  if (v.empty()) return true;
  std::string low;
  for (char c : v) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return low == "infinity" || low == "inf" || low == "-infinity" || low == "-inf" ||
         low == "nan";
}

}  // namespace

const std::vector<RawFeature>& nslkdd_features() {
  static const std::vector<RawFeature> kFeatures = {
      {"duration", false},
      {"protocol_type", true},
      {"service", true},
      {"flag", true},
      {"src_bytes", false},
      {"dst_bytes", false},
      {"land", false},
      {"wrong_fragment", false},
      {"urgent", false},
      {"hot", false},
      {"num_failed_logins", false},
      {"logged_in", false},
      {"num_compromised", false},
      {"root_shell", false},
      {"su_attempted", false},
      {"num_root", false},
      {"num_file_creations", false},
      {"num_shells", false},
      {"num_access_files", false},
      {"num_outbound_cmds", false},
      {"is_host_login", false},
      {"is_guest_login", false},
      {"count", false},
      {"srv_count", false},
      {"serror_rate", false},
      {"srv_serror_rate", false},
      {"rerror_rate", false},
      {"srv_rerror_rate", false},
      {"same_srv_rate", false},
      {"diff_srv_rate", false},
      {"srv_diff_host_rate", false},
      {"dst_host_count", false},
      {"dst_host_srv_count", false},
      {"dst_host_same_srv_rate", false},
      {"dst_host_diff_srv_rate", false},
      {"dst_host_same_src_port_rate", false},
      {"dst_host_srv_diff_host_rate", false},
      {"dst_host_serror_rate", false},
      {"dst_host_srv_serror_rate", false},
      {"dst_host_rerror_rate", false},
      {"dst_host_srv_rerror_rate", false},
  };
  return kFeatures;
}

namespace {

RawRecords load_nslkdd(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  RawRecords rec;
  rec.dialect = Dialect::NslKdd;
  rec.features = nslkdd_features();
  const std::size_t n_features = rec.features.size();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    // 42 columns (features + label) or 43 (with the difficulty column)
    if (fields.size() != n_features + 1 && fields.size() != n_features + 2) {
      throw DataError("nslkdd: line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(n_features + 1) + " or " +
                      std::to_string(n_features + 2));
    }
    std::vector<std::string> row(fields.begin(), fields.begin() + n_features);
    rec.rows.push_back(std::move(row));
    rec.labels.push_back(trim(fields[n_features]));
  }
  if (rec.rows.empty()) throw DataError("nslkdd: no records in " + path);
  return rec;
}

RawRecords load_cicids(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  RawRecords rec;
  rec.dialect = Dialect::Cicids2017;
  std::string line;
  std::size_t line_no = 0;
  std::size_t label_col = 0;
  std::size_t n_cols = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (!have_header) {
      n_cols = fields.size();
      bool found = false;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (trim(fields[i]) == "Label") {
          label_col = i;
          found = true;
        }
      }
      if (!found) throw DataError("cicids2017: no Label column in header of " + path);
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i == label_col) continue;
        rec.features.push_back({trim(fields[i]), false});
      }
      have_header = true;
      continue;
    }
    if (fields.size() != n_cols) {
      throw DataError("cicids2017: line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(n_cols));
    }
    std::vector<std::string> row;
    row.reserve(n_cols - 1);
    bool flagged = false;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i == label_col) continue;
      std::string v = trim(fields[i]);
      if (is_nonfinite_token(v)) flagged = true;
      row.push_back(std::move(v));
    }
    if (flagged) rec.flagged.push_back(rec.rows.size());
    rec.rows.push_back(std::move(row));
    rec.labels.push_back(trim(fields[label_col]));
  }
  if (!have_header) throw DataError("cicids2017: empty file " + path);
  if (rec.rows.empty()) throw DataError("cicids2017: no records in " + path);
  return rec;
}

}  // namespace

RawRecords load_dataset(const std::string& path, Dialect dialect) {
  return dialect == Dialect::NslKdd ? load_nslkdd(path) : load_cicids(path);
}

}  // namespace advids::data
