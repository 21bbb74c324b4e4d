#include "advids/data/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace advids::data {

namespace {

std::string lower(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

bool cic_immutable_column(const std::string& name) {
  const std::string n = lower(name);
  return n == "destination port" || n == "dst port" || n == "protocol";
}

double parse_numeric(const std::string& v, const std::string& column) {
  try {
    std::size_t consumed = 0;
    const double x = std::stod(v, &consumed);
    if (consumed == 0) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw DataError("cannot parse numeric value '" + v + "' in column " + column);
  }
}

struct Layout {
  FeatureSchema schema;  // categories/groups/names/mask populated, min/max empty
};

// expanded-column layout shared by fit and apply
Layout build_layout(const RawRecords& raw,
                    const std::vector<std::vector<std::string>>& categories) {
  Layout lay;
  FeatureSchema& s = lay.schema;
  s.dialect = raw.dialect;
  s.features = raw.features;
  s.categories = categories;
  int col = 0;
  for (std::size_t f = 0; f < raw.features.size(); ++f) {
    const RawFeature& feat = raw.features[f];
    if (feat.categorical) {
      OneHotGroup g;
      g.source = feat.name;
      g.begin = col;
      for (const auto& value : categories[f]) {
        s.expanded_names.push_back(feat.name + "=" + value);
        ++col;
      }
      g.end = col;
      s.onehot_groups.push_back(g);
    } else {
      s.expanded_names.push_back(feat.name);
      ++col;
    }
  }
  s.mutable_mask.assign(s.expanded_names.size(), 1);
  if (raw.dialect == Dialect::NslKdd) {
    // protocol/service/flag one-hot groups stay untouched by attacks
    for (const auto& g : s.onehot_groups) {
      for (int c = g.begin; c < g.end; ++c) s.mutable_mask[c] = 0;
    }
  } else {
    for (std::size_t f = 0, c = 0; f < raw.features.size(); ++f, ++c) {
      if (cic_immutable_column(raw.features[f].name)) {
        s.mutable_mask[c] = 0;
      }
    }
  }
  return lay;
}

Mat expand_rows(const RawRecords& raw, const FeatureSchema& schema,
                const std::vector<std::size_t>& keep) {
  const int width = schema.expanded_width();
  Mat X = Mat::Zero(static_cast<Eigen::Index>(keep.size()), width);
  for (std::size_t out_r = 0; out_r < keep.size(); ++out_r) {
    const auto& row = raw.rows[keep[out_r]];
    int col = 0;
    for (std::size_t f = 0; f < schema.features.size(); ++f) {
      const RawFeature& feat = schema.features[f];
      if (feat.categorical) {
        const auto& vocab = schema.categories[f];
        const auto it = std::lower_bound(vocab.begin(), vocab.end(), row[f]);
        if (it != vocab.end() && *it == row[f]) {
          X(static_cast<Eigen::Index>(out_r), col + static_cast<int>(it - vocab.begin())) = 1.0;
        }
        // unseen category: all-zero group
        col += static_cast<int>(vocab.size());
      } else {
        const double v = parse_numeric(row[f], feat.name);
        if (!std::isfinite(v)) {
          throw DataError("non-finite value after sanitization in column " + feat.name);
        }
        X(static_cast<Eigen::Index>(out_r), col) = v;
        ++col;
      }
    }
  }
  return X;
}

Vec binarize_labels(const RawRecords& raw, const std::vector<std::size_t>& keep) {
  Vec y(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    y[static_cast<Eigen::Index>(i)] =
        is_benign_label(raw.dialect, raw.labels[keep[i]]) ? 0.0 : 1.0;
  }
  return y;
}

std::vector<std::size_t> unflagged_rows(const RawRecords& raw) {
  std::vector<char> bad(raw.rows.size(), 0);
  for (std::size_t i : raw.flagged) bad[i] = 1;
  std::vector<std::size_t> keep;
  keep.reserve(raw.rows.size());
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    if (!bad[i]) keep.push_back(i);
  }
  return keep;
}

}  // namespace

bool is_benign_label(Dialect dialect, const std::string& label) {
  if (dialect == Dialect::NslKdd) return label == "normal";
  return lower(label) == "benign";
}

LabeledDataset preprocess(const RawRecords& raw) {
  if (raw.rows.empty()) throw DataError("preprocess: no records");
  const auto keep = unflagged_rows(raw);
  if (keep.empty()) throw DataError("preprocess: all rows dropped by sanitization");

  std::vector<std::vector<std::string>> categories(raw.features.size());
  for (std::size_t f = 0; f < raw.features.size(); ++f) {
    if (!raw.features[f].categorical) continue;
    std::set<std::string> vocab;
    for (std::size_t i : keep) vocab.insert(raw.rows[i][f]);
    categories[f].assign(vocab.begin(), vocab.end());
  }

  Layout lay = build_layout(raw, categories);
  FeatureSchema& schema = lay.schema;
  Mat X = expand_rows(raw, schema, keep);

  const int width = schema.expanded_width();
  schema.col_min.resize(width);
  schema.col_max.resize(width);
  for (int c = 0; c < width; ++c) {
    schema.col_min[c] = X.col(c).minCoeff();
    schema.col_max[c] = X.col(c).maxCoeff();
    const double span = schema.col_max[c] - schema.col_min[c];
    if (span > 0.0) {
      X.col(c) = (X.col(c).array() - schema.col_min[c]) / span;
    } else {
      X.col(c).setZero();  // constant column convention
    }
  }

  LabeledDataset ds;
  ds.X = std::move(X);
  ds.y = binarize_labels(raw, keep);
  ds.schema = std::move(schema);
  return ds;
}

LabeledDataset preprocess_with(const RawRecords& raw, const FeatureSchema& schema) {
  if (raw.rows.empty()) throw DataError("preprocess: no records");
  if (raw.features.size() != schema.features.size()) {
    throw DataError("preprocess: feature list does not match schema");
  }
  for (std::size_t f = 0; f < raw.features.size(); ++f) {
    if (raw.features[f].name != schema.features[f].name) {
      throw DataError("preprocess: feature order mismatch at " + raw.features[f].name);
    }
  }
  const auto keep = unflagged_rows(raw);
  if (keep.empty()) throw DataError("preprocess: all rows dropped by sanitization");
  Mat X = expand_rows(raw, schema, keep);
  const int width = schema.expanded_width();
  for (int c = 0; c < width; ++c) {
    const double span = schema.col_max[c] - schema.col_min[c];
    if (span > 0.0) {
      X.col(c) = ((X.col(c).array() - schema.col_min[c]) / span).cwiseMax(0.0).cwiseMin(1.0);
    } else {
      X.col(c).setZero();
    }
  }
  LabeledDataset ds;
  ds.X = std::move(X);
  ds.y = binarize_labels(raw, keep);
  ds.schema = schema;
  return ds;
}

}  // namespace advids::data
