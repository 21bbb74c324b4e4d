#include "advids/data/advset.hpp"

#include <numeric>

#include "advids/rng.hpp"

namespace advids::data {

namespace {

AdvDataset shuffle_rows(Mat X, Vec y, std::vector<Provenance> prov, std::uint64_t seed) {
  std::vector<std::size_t> order(static_cast<std::size_t>(X.rows()));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(Rng::mix(seed, 0xADD5));
  rng.shuffle(order);
  AdvDataset out;
  out.X.resize(X.rows(), X.cols());
  out.y_adv.resize(y.size());
  out.provenance.resize(prov.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    out.X.row(static_cast<Eigen::Index>(r)) = X.row(static_cast<Eigen::Index>(order[r]));
    out.y_adv[static_cast<Eigen::Index>(r)] = y[static_cast<Eigen::Index>(order[r])];
    out.provenance[r] = prov[order[r]];
  }
  return out;
}

}  // namespace

AdvDataset build_attack_specific(const Mat& clean_X, const Mat& adv_X,
                                 Provenance attack, std::uint64_t seed) {
  if (adv_X.rows() == 0) throw DataError("attack-specific set: no adversarial rows");
  if (clean_X.rows() != adv_X.rows() || clean_X.cols() != adv_X.cols()) {
    throw DataError("attack-specific set: clean/adversarial row mismatch");
  }
  const auto n = clean_X.rows();
  Mat X(2 * n, clean_X.cols());
  X.topRows(n) = clean_X;
  X.bottomRows(n) = adv_X;
  Vec y(2 * n);
  y.head(n).setZero();
  y.tail(n).setOnes();
  std::vector<Provenance> prov(static_cast<std::size_t>(2 * n), Provenance::None);
  for (std::size_t i = static_cast<std::size_t>(n); i < prov.size(); ++i) prov[i] = attack;
  return shuffle_rows(std::move(X), std::move(y), std::move(prov), seed);
}

AdvDataset build_balanced(const Mat& clean_X, const std::array<Mat, 4>& per_attack,
                          std::uint64_t seed) {
  const auto n = clean_X.rows();
  if (n == 0) throw DataError("balanced set: no clean rows");
  // equal quarters; the first (n mod 4) attacks in documented order get the
  // extra row
  std::array<Eigen::Index, 4> quota{};
  const Eigen::Index base = n / 4;
  const Eigen::Index extra = n % 4;
  for (int a = 0; a < 4; ++a) quota[a] = base + (a < extra ? 1 : 0);
  for (int a = 0; a < 4; ++a) {
    if (per_attack[a].rows() < quota[a]) {
      throw DataError(std::string("balanced set: attack pool ") +
                      provenance_name(kBalancedOrder[a]) + " has " +
                      std::to_string(per_attack[a].rows()) + " rows, needs " +
                      std::to_string(quota[a]));
    }
    if (per_attack[a].cols() != clean_X.cols()) {
      throw DataError("balanced set: attack pool width mismatch");
    }
  }
  Mat X(2 * n, clean_X.cols());
  X.topRows(n) = clean_X;
  Vec y(2 * n);
  y.head(n).setZero();
  y.tail(n).setOnes();
  std::vector<Provenance> prov(static_cast<std::size_t>(2 * n), Provenance::None);
  Eigen::Index write = n;
  for (int a = 0; a < 4; ++a) {
    // seeded draw without replacement from this attack's pool
    std::vector<std::size_t> idx(static_cast<std::size_t>(per_attack[a].rows()));
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(Rng::mix(seed, 0xBA1A + static_cast<std::uint64_t>(a)));
    rng.shuffle(idx);
    for (Eigen::Index k = 0; k < quota[a]; ++k, ++write) {
      X.row(write) = per_attack[a].row(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(k)]));
      prov[static_cast<std::size_t>(write)] = kBalancedOrder[a];
    }
  }
  return shuffle_rows(std::move(X), std::move(y), std::move(prov), seed);
}

}  // namespace advids::data
