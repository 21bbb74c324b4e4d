#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace advids {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Error taxonomy. Everything user-facing throws one of these.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Dempster combination with total conflict (normalizer 1-k vanishes).
struct ConflictError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace advids
