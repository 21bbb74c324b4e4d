#include "advids/synth/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "advids/data/load.hpp"
#include "advids/rng.hpp"
#include "advids/types.hpp"

namespace advids::synth {

namespace {

// shaping applied to a latent value before it is written out
enum class Shape { Positive, Rate, Count, Heavy, Binary };

struct NumericFeature {
  int group;     // latent factor driving this feature
  double load;   // factor loading
  double noise;  // private noise scale
  Shape shape;
  double scale;
};

struct Profile {
  int n_groups = 0;
  std::vector<double> group_shift;  // class shift per latent factor
  std::vector<NumericFeature> numeric;
  double label_noise = 0.0;
  double p_malicious = 0.5;
};

// Feature geometry is derived from a fixed stream so that every generated
// file shares one population; the row seed only drives the samples.
Profile nsl_profile() {
  Profile p;
  p.n_groups = 9;
  p.group_shift = {1.9, 1.5, 1.25, 1.05, 0.85, 0.0, 0.0, 1.2, 0.7};
  p.label_noise = 0.12;
  p.p_malicious = 0.52;
  Rng geo(0x51D5A11CE5ULL);
  const Shape shapes[5] = {Shape::Positive, Shape::Rate, Shape::Count, Shape::Heavy,
                           Shape::Binary};
  for (int j = 0; j < 38; ++j) {
    NumericFeature f;
    f.group = j % 9;
    f.load = geo.uniform(0.55, 1.0);
    f.noise = geo.uniform(0.35, 0.8);
    f.shape = shapes[geo.below(5)];
    f.scale = geo.uniform(0.8, 1.6);
    p.numeric.push_back(f);
  }
  // a couple of degenerate columns: near-constant and pure noise
  p.numeric[19].load = 0.0;   // num_outbound_cmds stays 0 in the real corpus too
  p.numeric[19].noise = 0.0;
  p.numeric[19].shape = Shape::Count;
  p.numeric[17].load = 0.0;   // noise-only column
  p.numeric[17].noise = 1.0;
  return p;
}

Profile cic_profile() {
  Profile p;
  p.n_groups = 5;
  p.group_shift = {2.6, 2.2, 1.8, 1.4, 0.0};
  p.label_noise = 0.01;
  p.p_malicious = 0.45;
  Rng geo(0xC1C1D5ULL);
  const Shape shapes[4] = {Shape::Positive, Shape::Rate, Shape::Count, Shape::Heavy};
  for (int j = 0; j < 30; ++j) {
    NumericFeature f;
    f.group = j % 5;
    f.load = geo.uniform(0.6, 1.0);
    f.noise = geo.uniform(0.3, 0.7);
    f.shape = shapes[geo.below(4)];
    f.scale = geo.uniform(0.8, 1.5);
    p.numeric.push_back(f);
  }
  p.numeric[29].load = 0.0;  // Idle Mean: uninformative
  return p;
}

double shape_value(Shape s, double z, double scale, Rng& rng) {
  switch (s) {
    case Shape::Positive:
      return std::max(0.0, scale * (z + 2.0));
    case Shape::Rate: {
      const double v = 1.0 / (1.0 + std::exp(-1.2 * z));
      return std::round(v * 100.0) / 100.0;
    }
    case Shape::Count:
      return std::floor(std::max(0.0, scale * 40.0 * (z + 2.2)));
    case Shape::Heavy:
      return std::floor(std::exp(1.1 * z + scale) * 25.0);
    case Shape::Binary:
      return (z + 0.25 * rng.normal()) > 0.6 ? 1.0 : 0.0;
  }
  return 0.0;
}

struct SampledRow {
  std::vector<double> numeric;
  bool malicious_observed;
  bool malicious_true;
};

SampledRow sample_row(const Profile& p, Rng& rng) {
  SampledRow row;
  const bool mal = rng.uniform() < p.p_malicious;
  std::vector<double> g(static_cast<std::size_t>(p.n_groups));
  for (int i = 0; i < p.n_groups; ++i) {
    g[static_cast<std::size_t>(i)] = rng.normal() + (mal ? p.group_shift[static_cast<std::size_t>(i)] : 0.0);
  }
  row.numeric.reserve(p.numeric.size());
  for (const auto& f : p.numeric) {
    const double z = f.load * g[static_cast<std::size_t>(f.group)] + f.noise * rng.normal();
    row.numeric.push_back(shape_value(f.shape, z, f.scale, rng));
  }
  row.malicious_true = mal;
  row.malicious_observed = rng.uniform() < p.label_noise ? !mal : mal;
  return row;
}

// categorical value index from a class-conditional distribution
std::size_t pick_category(Rng& rng, const std::vector<double>& weights) {
  double u = rng.uniform();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return weights.size() - 1;
}

std::string format_number(double v) {
  char buf[40];
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%.2f", v);
  }
  return buf;
}

}  // namespace

void write_nsl_like_csv(const std::string& path, int rows, std::uint64_t seed) {
  if (rows <= 0) throw ConfigError("write_nsl_like_csv: rows must be positive");
  const Profile profile = nsl_profile();
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);

  const std::vector<std::string> protocols = {"tcp", "udp", "icmp"};
  const std::vector<std::string> services = {"http",     "private", "domain_u", "smtp",
                                             "ftp_data", "eco_i",   "other",    "telnet",
                                             "finger",   "ftp",     "auth",     "pop_3"};
  const std::vector<std::string> flags = {"SF", "S0", "REJ", "RSTR", "SH"};
  const std::vector<std::string> attack_names = {"neptune", "satan", "portsweep",
                                                 "smurf"};
  // class-conditional categorical distributions (weakly informative)
  const std::vector<double> proto_ben = {0.72, 0.22, 0.06};
  const std::vector<double> proto_mal = {0.58, 0.18, 0.24};
  std::vector<double> svc_ben(12, 0.0), svc_mal(12, 0.0);
  {
    Rng geo(0x5EBF00D1ULL);
    double tb = 0.0, tm = 0.0;
    for (int i = 0; i < 12; ++i) {
      svc_ben[static_cast<std::size_t>(i)] = geo.uniform(0.4, 1.0);
      svc_mal[static_cast<std::size_t>(i)] = geo.uniform(0.4, 1.0);
      tb += svc_ben[static_cast<std::size_t>(i)];
      tm += svc_mal[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < 12; ++i) {
      svc_ben[static_cast<std::size_t>(i)] /= tb;
      svc_mal[static_cast<std::size_t>(i)] /= tm;
    }
  }
  const std::vector<double> flag_ben = {0.78, 0.06, 0.08, 0.05, 0.03};
  const std::vector<double> flag_mal = {0.38, 0.33, 0.17, 0.07, 0.05};

  Rng rng(Rng::mix(0x4E534CULL, seed));
  const auto& features = data::nslkdd_features();
  for (int r = 0; r < rows; ++r) {
    const SampledRow s = sample_row(profile, rng);
    const bool mal = s.malicious_true;
    const std::string proto = protocols[pick_category(rng, mal ? proto_mal : proto_ben)];
    const std::string service = services[pick_category(rng, mal ? svc_mal : svc_ben)];
    const std::string flag = flags[pick_category(rng, mal ? flag_mal : flag_ben)];
    std::size_t num_idx = 0;
    for (std::size_t f = 0; f < features.size(); ++f) {
      if (f > 0) out << ',';
      if (features[f].name == "protocol_type") {
        out << proto;
      } else if (features[f].name == "service") {
        out << service;
      } else if (features[f].name == "flag") {
        out << flag;
      } else {
        out << format_number(s.numeric[num_idx++]);
      }
    }
    const std::string label =
        s.malicious_observed ? attack_names[rng.below(attack_names.size())] : "normal";
    out << ',' << label << ',' << (1 + rng.below(21)) << '\n';
  }
}

void write_cic_like_csv(const std::string& path, int rows, std::uint64_t seed) {
  if (rows <= 0) throw ConfigError("write_cic_like_csv: rows must be positive");
  const Profile profile = cic_profile();
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);

  const std::vector<std::string> numeric_names = {
      "Flow Duration", "Total Fwd Packets", "Total Backward Packets",
      "Total Length of Fwd Packets", "Total Length of Bwd Packets",
      "Fwd Packet Length Max", "Fwd Packet Length Mean", "Bwd Packet Length Max",
      "Bwd Packet Length Mean", "Flow Bytes/s", "Flow Packets/s", "Flow IAT Mean",
      "Flow IAT Std", "Fwd IAT Mean", "Bwd IAT Mean", "Fwd PSH Flags",
      "Fwd Header Length", "Bwd Header Length", "Fwd Packets/s", "Bwd Packets/s",
      "Min Packet Length", "Max Packet Length", "Packet Length Mean",
      "Packet Length Std", "FIN Flag Count", "SYN Flag Count", "RST Flag Count",
      "ACK Flag Count", "Average Packet Size", "Idle Mean"};
  const std::vector<std::string> attack_names = {"DoS Hulk", "PortScan", "DDoS"};
  const std::vector<int> ports_ben = {80, 443, 53, 22, 8080};
  const std::vector<int> ports_mal = {80, 21, 23, 445, 3389};
  const std::vector<double> port_ben_w = {0.45, 0.3, 0.12, 0.08, 0.05};
  const std::vector<double> port_mal_w = {0.3, 0.2, 0.2, 0.18, 0.12};

  out << "Destination Port,Protocol";
  for (const auto& n : numeric_names) out << ',' << n;
  out << ",Label\n";

  Rng rng(Rng::mix(0xC1C1D52017ULL, seed));
  for (int r = 0; r < rows; ++r) {
    const SampledRow s = sample_row(profile, rng);
    const bool mal = s.malicious_true;
    const int port = mal ? ports_mal[pick_category(rng, port_mal_w)]
                         : ports_ben[pick_category(rng, port_ben_w)];
    const int proto = rng.uniform() < (mal ? 0.85 : 0.7) ? 6 : 17;
    out << port << ',' << proto;
    for (std::size_t j = 0; j < s.numeric.size(); ++j) {
      // the known corpus artifact: sporadic Infinity/NaN in the rate columns
      if (numeric_names[j] == "Flow Bytes/s" && rng.uniform() < 0.003) {
        out << ",Infinity";
      } else if (numeric_names[j] == "Flow Packets/s" && rng.uniform() < 0.001) {
        out << ",NaN";
      } else {
        out << ',' << format_number(s.numeric[j]);
      }
    }
    const std::string label =
        s.malicious_observed ? attack_names[rng.below(attack_names.size())] : "BENIGN";
    out << ',' << label << '\n';
  }
}

}  // namespace advids::synth
