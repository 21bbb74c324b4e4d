#pragma once

#include "advids/data/dataset.hpp"
#include "advids/ids/ids.hpp"

namespace advids::detect {

enum class TransferMode : std::uint8_t {
  FeatureExtraction = 0,   // IDS prefix shared, frozen
  FineTuning = 1,          // IDS prefix shared, trainable (IDS may change)
  DuplicateFineTuning = 2  // IDS prefix deep-copied, trainable
};

const char* transfer_mode_name(TransferMode m);
TransferMode transfer_mode_from_name(const std::string& name);

enum class Design : std::uint8_t { Serial = 0, Parallel = 1 };

struct Placement {
  Design design = Design::Serial;
  int index = 0;  // 1-based depth (serial) or member index (parallel)
};

// IDS prefix layers + 2 ReLU(256) layers + 1 sigmoid unit
struct AdversarialDetector {
  net::Network net;
  Placement placement;
  int prefix_layers = 0;
};

struct DetectorBank {
  std::vector<AdversarialDetector> detectors;
  TransferMode mode = TransferMode::DuplicateFineTuning;
  std::uint64_t source_fingerprint = 0;
  // per-detector input columns; empty = full feature rows (serial design)
  std::vector<std::vector<int>> slices;

  std::size_t size() const { return detectors.size(); }
};

// One detector per hidden layer of the serial IDS: detector n sees the
// output of IDS layers 1..n. head_seed seeds the fresh head layers.
DetectorBank build_serial_bank(const ids::SerialIds& ids, TransferMode mode,
                               std::uint64_t head_seed);

// One detector per ensemble member: detector k reuses member k's hidden
// stack and consumes only cluster k's columns.
DetectorBank build_parallel_bank(const ids::ParallelIds& ids, TransferMode mode,
                                 std::uint64_t head_seed);

// Train every detector on the adversarial dataset (full rows or its slice)
// with binary cross-entropy and best-checkpoint selection. FE/DFT banks
// train detectors concurrently; FT banks train sequentially because the
// prefixes are shared with the live IDS.
std::vector<net::TrainHistory> train_bank(DetectorBank& bank,
                                          const data::AdvDataset& train,
                                          const data::AdvDataset& eval,
                                          net::TrainConfig cfg,
                                          unsigned workers = 0);

// per-detector adversarial probabilities; column j comes from detector j
Mat detect(const DetectorBank& bank, const Mat& X);

}  // namespace advids::detect
