#include "advids/data/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "advids/data/csv.hpp"

namespace advids::data {

using nlohmann::json;

std::string FeatureSchema::to_json() const {
  json j;
  j["dialect"] = dialect_name(dialect);
  json feats = json::array();
  for (std::size_t f = 0; f < features.size(); ++f) {
    json jf;
    jf["name"] = features[f].name;
    jf["kind"] = features[f].categorical ? "categorical" : "numeric";
    if (features[f].categorical) jf["categories"] = categories[f];
    feats.push_back(jf);
  }
  j["features"] = feats;
  json groups = json::array();
  for (const auto& g : onehot_groups) {
    groups.push_back({{"source", g.source}, {"begin", g.begin}, {"end", g.end}});
  }
  j["onehot_groups"] = groups;
  j["expanded_names"] = expanded_names;
  json mask = json::array();
  for (char m : mutable_mask) mask.push_back(m != 0);
  j["mutable_mask"] = mask;
  j["col_min"] = col_min;
  j["col_max"] = col_max;
  return j.dump(2) + "\n";
}

FeatureSchema FeatureSchema::from_json(const std::string& text) {
  json j = json::parse(text);
  FeatureSchema s;
  s.dialect = dialect_from_name(j.at("dialect").get<std::string>());
  for (const auto& jf : j.at("features")) {
    RawFeature f;
    f.name = jf.at("name").get<std::string>();
    f.categorical = jf.at("kind").get<std::string>() == "categorical";
    s.features.push_back(f);
    s.categories.push_back(
        f.categorical ? jf.at("categories").get<std::vector<std::string>>()
                      : std::vector<std::string>{});
  }
  for (const auto& jg : j.at("onehot_groups")) {
    OneHotGroup g;
    g.source = jg.at("source").get<std::string>();
    g.begin = jg.at("begin").get<int>();
    g.end = jg.at("end").get<int>();
    s.onehot_groups.push_back(g);
  }
  s.expanded_names = j.at("expanded_names").get<std::vector<std::string>>();
  for (const auto& m : j.at("mutable_mask")) s.mutable_mask.push_back(m.get<bool>() ? 1 : 0);
  s.col_min = j.at("col_min").get<std::vector<double>>();
  s.col_max = j.at("col_max").get<std::vector<double>>();
  return s;
}

void FeatureSchema::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << to_json();
}

FeatureSchema FeatureSchema::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void save_labeled_csv(const std::string& path, const LabeledDataset& ds) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (std::size_t c = 0; c < ds.schema.expanded_names.size(); ++c) {
    out << csv_escape(ds.schema.expanded_names[c]) << ',';
  }
  out << "label\n";
  char buf[32];
  for (Eigen::Index r = 0; r < ds.X.rows(); ++r) {
    for (Eigen::Index c = 0; c < ds.X.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", ds.X(r, c));
      out << buf << ',';
    }
    out << (ds.y[r] > 0.5 ? 1 : 0) << '\n';
  }
}

LabeledDataset load_labeled_csv(const std::string& csv_path,
                                const std::string& schema_path) {
  LabeledDataset ds;
  ds.schema = FeatureSchema::load(schema_path);
  CsvFile file = read_csv(csv_path, true);
  const int width = ds.schema.expanded_width();
  if (file.header.size() != static_cast<std::size_t>(width) + 1) {
    throw DataError("normalized csv width does not match schema: " + csv_path);
  }
  ds.X.resize(static_cast<Eigen::Index>(file.rows.size()), width);
  ds.y.resize(static_cast<Eigen::Index>(file.rows.size()));
  for (std::size_t r = 0; r < file.rows.size(); ++r) {
    const auto& row = file.rows[r];
    if (row.size() != static_cast<std::size_t>(width) + 1) {
      throw DataError("normalized csv row " + std::to_string(r + 2) + " malformed");
    }
    for (int c = 0; c < width; ++c) {
      ds.X(static_cast<Eigen::Index>(r), c) = std::stod(row[c]);
    }
    ds.y[static_cast<Eigen::Index>(r)] = std::stod(row[width]);
  }
  return ds;
}

}  // namespace advids::data
