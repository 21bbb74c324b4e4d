#pragma once

#include "advids/data/dataset.hpp"

namespace advids::data {

// Ingest a raw corpus file.
//   nslkdd: headerless, 41 features + attack label (+ optional difficulty
//           column); protocol_type/service/flag are categorical.
//   cicids2017: header row; every column is a numeric feature except the
//           trailing "Label". Rows containing Infinity/NaN are flagged for
//           sanitization.
// Malformed rows raise DataError with the 1-based line number.
RawRecords load_dataset(const std::string& path, Dialect dialect);

// canonical NSL-KDD feature list (order matters)
const std::vector<RawFeature>& nslkdd_features();

}  // namespace advids::data
