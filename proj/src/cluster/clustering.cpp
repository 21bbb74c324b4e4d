#include "advids/cluster/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace advids::cluster {

using nlohmann::json;

const char* method_name(Method m) {
  return m == Method::Distribution ? "distribution" : "cut";
}

Method method_from_name(const std::string& name) {
  if (name == "distribution") return Method::Distribution;
  if (name == "cut") return Method::Cut;
  throw ConfigError("unknown clustering method: " + name);
}

std::string FeatureClusters::to_json() const {
  json j;
  j["method"] = method_name(method);
  j["k_max"] = k_max;
  j["clusters"] = clusters;
  return j.dump(2) + "\n";
}

FeatureClusters FeatureClusters::from_json(const std::string& text) {
  json j = json::parse(text);
  FeatureClusters fc;
  fc.method = method_from_name(j.at("method").get<std::string>());
  fc.k_max = j.at("k_max").get<int>();
  fc.clusters = j.at("clusters").get<std::vector<std::vector<int>>>();
  return fc;
}

void FeatureClusters::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << to_json();
}

FeatureClusters FeatureClusters::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

Mat correlation_matrix(const Mat& X) {
  if (X.rows() < 2) throw DataError("correlation_matrix: need at least 2 rows");
  const auto n = X.cols();
  const auto rows = static_cast<double>(X.rows());
  Vec mean = X.colwise().mean();
  Mat centered = X.rowwise() - mean.transpose();
  Vec sd(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    sd[c] = std::sqrt(centered.col(c).squaredNorm() / rows);
  }
  Mat corr = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    corr(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (sd[i] == 0.0 || sd[j] == 0.0) continue;  // constant columns
      const double cov = centered.col(i).dot(centered.col(j)) / rows;
      const double rho = cov / (sd[i] * sd[j]);
      corr(i, j) = rho;
      corr(j, i) = rho;
    }
  }
  return corr;
}

namespace {

struct Agglomerator {
  // cluster members kept in discovery (leaf) order for the cut method;
  // `min_index` gives deterministic tie-breaks
  std::vector<std::vector<int>> members;

  explicit Agglomerator(int n) {
    members.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) members.push_back({i});
  }

  int min_index(std::size_t c) const {
    return *std::min_element(members[c].begin(), members[c].end());
  }
};

enum class Linkage { Average, Single };

double cluster_distance(const Mat& dist, const std::vector<int>& a,
                        const std::vector<int>& b, Linkage lk) {
  if (lk == Linkage::Average) {
    double total = 0.0;
    for (int i : a)
      for (int j : b) total += dist(i, j);
    return total / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
  }
  double best = std::numeric_limits<double>::infinity();
  for (int i : a)
    for (int j : b) best = std::min(best, dist(i, j));
  return best;
}

// merge until `target` clusters remain; ties broken towards the pair with
// the lexicographically smallest (min leaf, min leaf) indices
void agglomerate(Agglomerator& ag, const Mat& dist, Linkage lk, std::size_t target) {
  while (ag.members.size() > target) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 1;
    int bmin_i = 0, bmin_j = 0;
    for (std::size_t i = 0; i < ag.members.size(); ++i) {
      for (std::size_t j = i + 1; j < ag.members.size(); ++j) {
        const double d = cluster_distance(dist, ag.members[i], ag.members[j], lk);
        const int mi = std::min(ag.min_index(i), ag.min_index(j));
        const int mj = std::max(ag.min_index(i), ag.min_index(j));
        if (d < best || (d == best && (mi < bmin_i || (mi == bmin_i && mj < bmin_j)))) {
          best = d;
          bi = i;
          bj = j;
          bmin_i = mi;
          bmin_j = mj;
        }
      }
    }
    // keep leaf order: cluster with the smaller min index comes first
    std::size_t first = bi, second = bj;
    if (ag.min_index(second) < ag.min_index(first)) std::swap(first, second);
    auto merged = ag.members[first];
    merged.insert(merged.end(), ag.members[second].begin(), ag.members[second].end());
    ag.members[first] = std::move(merged);
    ag.members.erase(ag.members.begin() + static_cast<std::ptrdiff_t>(second));
    if (first > second) --first;
  }
}

Mat abs_distance(const Mat& corr) {
  return (1.0 - corr.array().abs()).matrix();
}

void sort_canonical(std::vector<std::vector<int>>& clusters) {
  for (auto& c : clusters) std::sort(c.begin(), c.end());
  std::sort(clusters.begin(), clusters.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

}  // namespace

FeatureClusters cluster_distribution(const Mat& corr, int K) {
  const int n = static_cast<int>(corr.cols());
  if (K < 2) throw ConfigError("cluster_distribution: K must be >= 2");
  if (n < 4) {
    throw ConfigError("cluster_distribution: need >= 4 features for clusters of >= 2");
  }
  const Mat dist = abs_distance(corr);
  Agglomerator ag(n);
  agglomerate(ag, dist, Linkage::Average, static_cast<std::size_t>(std::min(K, n)));
  auto clusters = ag.members;
  sort_canonical(clusters);

  // dissolve singletons into the currently smallest other cluster
  for (;;) {
    std::size_t singleton = clusters.size();
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      if (clusters[i].size() == 1) {
        singleton = i;
        break;
      }
    }
    if (singleton == clusters.size()) break;
    if (clusters.size() < 2) {
      throw ConfigError("cluster_distribution: cannot dissolve the only cluster");
    }
    std::size_t target = clusters.size();
    std::size_t best_size = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      if (i == singleton) continue;
      if (clusters[i].size() < best_size) {
        best_size = clusters[i].size();
        target = i;
      }
    }
    clusters[target].push_back(clusters[singleton].front());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(singleton));
  }
  sort_canonical(clusters);

  FeatureClusters fc;
  fc.clusters = std::move(clusters);
  fc.method = Method::Distribution;
  fc.k_max = K;
  return fc;
}

FeatureClusters cluster_cut(const Mat& corr, int K) {
  const int n = static_cast<int>(corr.cols());
  if (K < 2) throw ConfigError("cluster_cut: K must be >= 2");
  if (K > n) throw ConfigError("cluster_cut: K exceeds feature count");
  const Mat dist = abs_distance(corr);
  Agglomerator ag(n);
  agglomerate(ag, dist, Linkage::Single, 1);
  const std::vector<int>& order = ag.members.front();  // dendrogram leaves

  FeatureClusters fc;
  fc.method = Method::Cut;
  fc.k_max = K;
  const int big = (n + K - 1) / K;   // ceil
  const int small = n / K;           // floor
  const int n_big = n - small * K;   // how many chunks take the ceil size
  int pos = 0;
  for (int c = 0; c < K; ++c) {
    const int len = c < n_big ? big : small;
    fc.clusters.emplace_back(order.begin() + pos, order.begin() + pos + len);
    pos += len;
  }
  return fc;
}

}  // namespace advids::cluster
