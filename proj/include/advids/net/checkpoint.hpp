#pragma once

#include <string>

#include "advids/net/network.hpp"

namespace advids::net {

// Binary checkpoint container, little-endian throughout:
//   magic "ADVNET01", u32 format version, u64 seed, u32 input_dim,
//   u32 layer count, then per layer (u32 fan_in, u32 fan_out, u8 activation,
//   u8 trainable), then per layer the raw IEEE-754 doubles of W (row-major)
//   followed by b. Round-trips are lossless.
void save_network(const std::string& path, const Network& net, std::uint64_t seed);

struct LoadedNetwork {
  Network net;
  std::uint64_t seed = 0;
};

LoadedNetwork load_network(const std::string& path);

}  // namespace advids::net
