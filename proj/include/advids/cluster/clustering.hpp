#pragma once

#include <string>
#include <vector>

#include "advids/types.hpp"

namespace advids::cluster {

enum class Method : int { Distribution = 0, Cut = 1 };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

struct FeatureClusters {
  std::vector<std::vector<int>> clusters;  // disjoint column-index lists
  Method method = Method::Distribution;
  int k_max = 0;

  std::size_t size() const { return clusters.size(); }
  std::string to_json() const;
  static FeatureClusters from_json(const std::string& text);
  void save(const std::string& path) const;
  static FeatureClusters load(const std::string& path);
};

// Pearson correlation between columns; constant columns correlate 0 with
// everything, the diagonal is 1. Needs at least two rows.
Mat correlation_matrix(const Mat& X);

// Agglomerative average-linkage clustering on distance 1-|rho| cut to at
// most K clusters; singleton clusters are dissolved by moving their feature
// into the currently smallest other cluster (ties -> lowest cluster index).
// Every resulting cluster has >= 2 features.
FeatureClusters cluster_distribution(const Mat& corr, int K);

// Features ordered by a single-linkage dendrogram leaf traversal and split
// into exactly K contiguous chunks whose sizes differ by at most one.
FeatureClusters cluster_cut(const Mat& corr, int K);

}  // namespace advids::cluster
