#pragma once

#include <cstdint>
#include <string>

namespace advids::synth {

// Deterministic demo-traffic generators. They emit CSV files in the exact
// on-disk dialects the loaders expect (headerless 41-feature + label +
// difficulty rows for nslkdd, header + Label column with Infinity/NaN
// artifacts for cicids2017), with class structure hard enough to be
// interesting: correlated feature groups, partially informative categorical
// features, label noise, and heavy-tailed magnitudes. Equal (rows, seed)
// give byte-identical files.
void write_nsl_like_csv(const std::string& path, int rows, std::uint64_t seed);
void write_cic_like_csv(const std::string& path, int rows, std::uint64_t seed);

}  // namespace advids::synth
