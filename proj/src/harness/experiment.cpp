#include "advids/harness/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "advids/harness/report.hpp"
#include "advids/net/checkpoint.hpp"
#include "advids/rng.hpp"
#include "advids/util.hpp"

namespace advids::harness {

namespace fs = std::filesystem;
using nlohmann::json;

const std::array<const char*, 5> kTrainRowNames = {"fgsm", "pgd", "cw", "df",
                                                   "balanced"};

Mat TrainedModel::classify_proba(const Mat& X) const {
  return parallel ? ids::classify_proba(par, X) : ids::classify_proba(serial, X);
}

Vec TrainedModel::hard_labels(const Mat& X) const {
  return ids::hard_labels(classify_proba(X));
}

std::uint64_t TrainedModel::fingerprint() const {
  if (!parallel) return serial.net.fingerprint();
  Fnv1a h;
  for (const auto& m : par.members) {
    const auto f = m.fingerprint();
    h.update(&f, sizeof(f));
  }
  const auto f = par.output_net.fingerprint();
  h.update(&f, sizeof(f));
  return h.digest();
}

std::vector<Eigen::Index> stratified_sample(const Vec& y, Eigen::Index want,
                                            std::uint64_t seed) {
  const auto n = y.size();
  if (want >= n) {
    std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  std::vector<Eigen::Index> pos, neg;
  for (Eigen::Index i = 0; i < n; ++i) (y[i] > 0.5 ? pos : neg).push_back(i);
  Rng rng(Rng::mix(seed, 0x57A7));
  rng.shuffle(pos);
  rng.shuffle(neg);
  const auto n_pos = static_cast<Eigen::Index>(
      std::llround(static_cast<double>(want) * static_cast<double>(pos.size()) /
                   static_cast<double>(n)));
  std::vector<Eigen::Index> out;
  out.reserve(static_cast<std::size_t>(want));
  for (Eigen::Index i = 0; i < std::min<Eigen::Index>(n_pos, pos.size()); ++i) {
    out.push_back(pos[static_cast<std::size_t>(i)]);
  }
  for (Eigen::Index i = 0; out.size() < static_cast<std::size_t>(want) &&
                           i < static_cast<Eigen::Index>(neg.size());
       ++i) {
    out.push_back(neg[static_cast<std::size_t>(i)]);
  }
  for (Eigen::Index i = n_pos; out.size() < static_cast<std::size_t>(want) &&
                               i < static_cast<Eigen::Index>(pos.size());
       ++i) {
    out.push_back(pos[static_cast<std::size_t>(i)]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Mat take_rows(const Mat& X, const std::vector<Eigen::Index>& idx) {
  Mat out(static_cast<Eigen::Index>(idx.size()), X.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = X.row(idx[i]);
  }
  return out;
}

Vec take_rows(const Vec& y, const std::vector<Eigen::Index>& idx) {
  Vec out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = y[idx[i]];
  }
  return out;
}

namespace {

std::uint64_t matrix_hash(const Mat& X) {
  Fnv1a h;
  const auto rows = X.rows(), cols = X.cols();
  h.update(&rows, sizeof(rows));
  h.update(&cols, sizeof(cols));
  h.update(X.data(), sizeof(double) * static_cast<std::size_t>(X.size()));
  return h.digest();
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void save_matrix_csv(const std::string& path, const Mat& X) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  char buf[40];
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", X(r, c));
      out << buf << (c + 1 == X.cols() ? '\n' : ',');
    }
  }
}

Mat load_matrix_csv(const std::string& path, Eigen::Index cols) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<double> values;
  std::string line;
  Eigen::Index rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t pos = 0;
    for (Eigen::Index c = 0; c < cols; ++c) {
      std::size_t used = 0;
      values.push_back(std::stod(line.substr(pos), &used));
      pos += used;
      if (c + 1 < cols) {
        if (pos >= line.size() || line[pos] != ',') {
          throw DataError("cached matrix row malformed in " + path);
        }
        ++pos;
      }
    }
    ++rows;
  }
  Mat X(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      X(r, c) = values[static_cast<std::size_t>(r * cols + c)];
    }
  }
  return X;
}

double detection_rate(const Vec& y_adv, const std::vector<char>& flagged) {
  long tp = 0, total = 0;
  for (Eigen::Index r = 0; r < y_adv.size(); ++r) {
    if (y_adv[r] > 0.5) {
      ++total;
      if (flagged[static_cast<std::size_t>(r)]) ++tp;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(total);
}

}  // namespace

Experiment::Experiment(ExperimentConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
}

void Experiment::ensure_data() {
  if (train_.has_value()) return;
  const auto dialect = data::dialect_from_name(cfg_.dialect);
  auto raw_train = data::load_dataset(cfg_.resolved_train_path(), dialect);
  auto raw_test = data::load_dataset(cfg_.resolved_test_path(), dialect);
  data::LabeledDataset train = data::preprocess(raw_train);
  data::LabeledDataset test = data::preprocess_with(raw_test, train.schema);
  // desk-scale stratified caps
  const auto tr_idx = stratified_sample(train.y, cfg_.max_train_rows, 0xD5CA1E);
  const auto te_idx = stratified_sample(test.y, cfg_.max_test_rows, 0xD5CA1F);
  if (tr_idx.size() != train.rows()) {
    train.X = take_rows(train.X, tr_idx);
    train.y = take_rows(train.y, tr_idx);
  }
  if (te_idx.size() != test.rows()) {
    test.X = take_rows(test.X, te_idx);
    test.y = take_rows(test.y, te_idx);
  }
  train_ = std::move(train);
  test_ = std::move(test);
}

const data::LabeledDataset& Experiment::train_data() {
  ensure_data();
  return *train_;
}

const data::LabeledDataset& Experiment::test_data() {
  ensure_data();
  return *test_;
}

const cluster::FeatureClusters& Experiment::feature_clusters() {
  if (!clusters_.has_value()) {
    ensure_data();
    const Mat corr = cluster::correlation_matrix(train_->X);
    clusters_ = cfg_.cluster_method == "cut"
                    ? cluster::cluster_cut(corr, cfg_.cluster_k)
                    : cluster::cluster_distribution(corr, cfg_.cluster_k);
  }
  return *clusters_;
}

attack::Constraints Experiment::constraints() {
  ensure_data();
  return attack::constraints_from_schema(train_->schema, cfg_.epsilon);
}

void Experiment::prepare(bool persist) {
  ensure_data();
  if (!persist) return;
  const fs::path dir = fs::path(cfg_.out_dir) / "data";
  fs::create_directories(dir);
  train_->schema.save((dir / "schema.json").string());
  data::save_labeled_csv((dir / "train_norm.csv").string(), *train_);
  data::save_labeled_csv((dir / "test_norm.csv").string(), *test_);
  if (cfg_.parallel_design()) {
    feature_clusters().save((dir / "clusters.json").string());
  }
}

TrainedModel Experiment::train_model(std::uint64_t seed) {
  ensure_data();
  TrainedModel model;
  model.parallel = cfg_.parallel_design();
  const unsigned workers = cfg_.workers == 0 ? default_workers() : cfg_.workers;
  if (model.parallel) {
    model.par = ids::make_parallel(feature_clusters(), Rng::mix(seed, 0x1D5));
    ids::train_parallel(model.par, *train_, *test_, cfg_.ids_train_config(seed), workers);
  } else {
    model.serial = ids::make_serial(train_->schema.expanded_width(), Rng::mix(seed, 0x1D5));
    ids::train_serial(model.serial, *train_, *test_, cfg_.ids_train_config(seed));
  }
  return model;
}

Mat Experiment::craft_cached(const TrainedModel& model, const Mat& src, const Vec& y,
                             attack::Kind kind, const char* tag) {
  const attack::AttackSpec spec = cfg_.attack_spec(kind);
  Fnv1a key;
  const auto fp = model.fingerprint();
  key.update(&fp, sizeof(fp));
  const std::string canon = spec.canonical();
  key.update(canon.data(), canon.size());
  const auto src_hash = matrix_hash(src);
  key.update(&src_hash, sizeof(src_hash));

  const fs::path cache_dir = fs::path(cfg_.out_dir) / "cache";
  const fs::path file = cache_dir / ("adv_" + hex64(key.digest()) + ".csv");
  if (fs::exists(file)) {
    return load_matrix_csv(file.string(), src.cols());
  }

  // fixed-size chunks keep results identical for any worker count
  constexpr Eigen::Index kChunk = 512;
  const auto rows = src.rows();
  const auto n_chunks = static_cast<std::size_t>((rows + kChunk - 1) / kChunk);
  Mat adv(rows, src.cols());
  const attack::Constraints c = constraints();
  const unsigned workers = cfg_.workers == 0 ? default_workers() : cfg_.workers;
  run_parallel(n_chunks, workers, [&](std::size_t chunk) {
    const Eigen::Index begin = static_cast<Eigen::Index>(chunk) * kChunk;
    const Eigen::Index len = std::min(kChunk, rows - begin);
    const Mat block = src.middleRows(begin, len);
    const Vec yb = y.segment(begin, len);
    attack::BatchResult res =
        model.parallel ? attack::craft_parallel(model.par, block, yb, spec, c)
                       : attack::craft(model.serial.net, block, yb, spec, c);
    adv.middleRows(begin, len) = res.X_adv;
  });

  fs::create_directories(cache_dir);
  save_matrix_csv(file.string(), adv);
  json manifest;
  manifest["attack"] = attack::kind_name(kind);
  manifest["spec"] = canon;
  manifest["model_fingerprint"] = hex64(fp);
  manifest["source_hash"] = hex64(src_hash);
  manifest["rows"] = adv.rows();
  manifest["tag"] = tag;
  std::ofstream mf(file.string() + ".json");
  mf << manifest.dump(2) << "\n";
  return adv;
}

void Experiment::build_adv_sets(SeedArtifacts& art) {
  const auto& train = *train_;
  const auto& test = *test_;
  art.train_idx = stratified_sample(train.y, cfg_.adv_train_rows, Rng::mix(art.seed, 0xA1));
  art.eval_idx = stratified_sample(test.y, cfg_.adv_eval_rows, Rng::mix(art.seed, 0xA2));

  const Mat src_train = take_rows(train.X, art.train_idx);
  const Vec y_train = take_rows(train.y, art.train_idx);
  const Mat src_eval = take_rows(test.X, art.eval_idx);
  const Vec y_eval = take_rows(test.y, art.eval_idx);

  for (int a = 0; a < 4; ++a) {
    const attack::Kind kind = kAttackOrder[static_cast<std::size_t>(a)];
    const bool is_cw = kind == attack::Kind::Cw;
    const Eigen::Index n_tr =
        is_cw ? std::min<Eigen::Index>(cfg_.cw_train_rows, src_train.rows())
              : src_train.rows();
    const Eigen::Index n_ev =
        is_cw ? std::min<Eigen::Index>(cfg_.cw_eval_rows, src_eval.rows())
              : src_eval.rows();
    art.adv_train[static_cast<std::size_t>(a)] = craft_cached(
        art.model, src_train.topRows(n_tr), y_train.head(n_tr), kind, "train");
    art.adv_eval[static_cast<std::size_t>(a)] = craft_cached(
        art.model, src_eval.topRows(n_ev), y_eval.head(n_ev), kind, "eval");
  }

  for (int a = 0; a < 4; ++a) {
    const auto ai = static_cast<std::size_t>(a);
    art.det_train[ai] = data::build_attack_specific(
        src_train.topRows(art.adv_train[ai].rows()), art.adv_train[ai],
        data::kBalancedOrder[ai], Rng::mix(art.seed, 0xB0 + static_cast<std::uint64_t>(a)));
    art.det_eval[ai] = data::build_attack_specific(
        src_eval.topRows(art.adv_eval[ai].rows()), art.adv_eval[ai],
        data::kBalancedOrder[ai], Rng::mix(art.seed, 0xC0 + static_cast<std::uint64_t>(a)));
  }
  art.det_train[kBalancedRow] = data::build_balanced(
      src_train, {art.adv_train[0], art.adv_train[1], art.adv_train[2], art.adv_train[3]},
      Rng::mix(art.seed, 0xB4));
  art.det_eval[kBalancedRow] = data::build_balanced(
      src_eval, {art.adv_eval[0], art.adv_eval[1], art.adv_eval[2], art.adv_eval[3]},
      Rng::mix(art.seed, 0xC4));
}

SeedArtifacts& Experiment::artifacts(std::size_t seed_index) {
  auto it = artifacts_.find(seed_index);
  if (it != artifacts_.end()) return it->second;
  if (seed_index >= cfg_.seeds.size()) throw ConfigError("seed index out of range");
  ensure_data();
  SeedArtifacts art;
  art.seed = cfg_.seeds[seed_index];
  art.model = train_model(art.seed);
  build_adv_sets(art);
  return artifacts_.emplace(seed_index, std::move(art)).first->second;
}

AttackImpact Experiment::run_attack_impact() {
  ensure_data();
  AttackImpact impact;
  impact.rows.push_back("clean");
  for (const auto& a : cfg_.attacks) impact.rows.push_back(a);
  impact.per_seed.resize(cfg_.seeds.size());

  for (std::size_t s = 0; s < cfg_.seeds.size(); ++s) {
    SeedArtifacts& art = artifacts(s);
    auto& rows = impact.per_seed[s];
    rows.push_back(
        ids::metrics_from_labels(test_->y, art.model.hard_labels(test_->X)));
    for (const auto& name : cfg_.attacks) {
      const attack::Kind kind = attack::kind_from_name(name);
      const auto ai = static_cast<std::size_t>(
          std::find(kAttackOrder.begin(), kAttackOrder.end(), kind) -
          kAttackOrder.begin());
      const Mat& adv = art.adv_eval[ai];
      const Vec y_src = take_rows(test_->y, art.eval_idx).head(adv.rows());
      rows.push_back(ids::metrics_from_labels(y_src, art.model.hard_labels(adv)));
    }
  }
  // arithmetic mean over seeds
  for (std::size_t r = 0; r < impact.rows.size(); ++r) {
    ids::Metrics m;
    for (const auto& seed_rows : impact.per_seed) {
      m.precision += seed_rows[r].precision;
      m.recall += seed_rows[r].recall;
      m.f1 += seed_rows[r].f1;
    }
    const auto n = static_cast<double>(impact.per_seed.size());
    m.precision /= n;
    m.recall /= n;
    m.f1 /= n;
    impact.mean.push_back(m);
  }
  return impact;
}

bool Experiment::fused_label(fuse::Rule rule, const std::vector<double>& p) {
  switch (rule) {
    case fuse::Rule::Majority:
      return fuse::fuse_majority(p).adversarial;
    case fuse::Rule::BayesAvg:
      return fuse::fuse_bayes_avg(p).adversarial;
    case fuse::Rule::Dempster: {
      // clamp float-saturated sigmoid outputs away from hard certainty
      std::vector<double> q(p);
      for (double& v : q) v = std::min(std::max(v, 1e-9), 1.0 - 1e-9);
      return fuse::fuse_dempster(q).adversarial;
    }
  }
  throw ConfigError("unhandled fusion rule");
}

CrossDetection Experiment::run_cross_detection() {
  for (const char* required : {"fgsm", "pgd", "cw", "df"}) {
    if (std::find(cfg_.attacks.begin(), cfg_.attacks.end(), required) ==
        cfg_.attacks.end()) {
      throw ConfigError("cross-detection requires all four attacks configured");
    }
  }
  ensure_data();
  const auto mode = detect::transfer_mode_from_name(cfg_.transfer_mode);
  CrossDetection out;
  out.row_names.assign(kTrainRowNames.begin(), kTrainRowNames.end());
  for (const auto kind : kAttackOrder) out.col_names.push_back(attack::kind_name(kind));

  std::vector<Mat> det_sum;         // per-detector accumulators
  std::map<std::string, Mat> rule_sum;
  const unsigned workers = cfg_.workers == 0 ? default_workers() : cfg_.workers;

  for (std::size_t s = 0; s < cfg_.seeds.size(); ++s) {
    SeedArtifacts& art = artifacts(s);
    for (int row = 0; row < 5; ++row) {
      // FT shares prefixes with the live IDS; give each training row its own
      // copy so rows stay independent
      TrainedModel scratch;
      const TrainedModel* m = &art.model;
      if (mode == detect::TransferMode::FineTuning) {
        scratch.parallel = art.model.parallel;
        if (scratch.parallel) {
          scratch.par = art.model.par;
          for (auto& member : scratch.par.members) member = member.clone();
          scratch.par.output_net = art.model.par.output_net.clone();
        } else {
          scratch.serial = art.model.serial;
          scratch.serial.net = art.model.serial.net.clone();
        }
        m = &scratch;
      }
      detect::DetectorBank bank =
          m->parallel
              ? detect::build_parallel_bank(m->par, mode, Rng::mix(art.seed, 0xE0 + row))
              : detect::build_serial_bank(m->serial, mode, Rng::mix(art.seed, 0xE0 + row));
      detect::train_bank(bank, art.det_train[static_cast<std::size_t>(row)],
                         art.det_eval[static_cast<std::size_t>(row)],
                         cfg_.detector_train_config(Rng::mix(art.seed, 0xF0 + row)),
                         workers);
      if (det_sum.empty()) {
        det_sum.assign(bank.size(), Mat::Zero(5, 4));
        for (const auto& r : cfg_.fusion_rules) rule_sum[r] = Mat::Zero(5, 4);
      }
      for (int col = 0; col < 4; ++col) {
        const data::AdvDataset& eval = art.det_eval[static_cast<std::size_t>(col)];
        const Mat probs = detect::detect(bank, eval.X);
        for (std::size_t d = 0; d < bank.size(); ++d) {
          std::vector<char> flags(static_cast<std::size_t>(probs.rows()));
          for (Eigen::Index r = 0; r < probs.rows(); ++r) {
            flags[static_cast<std::size_t>(r)] =
                probs(r, static_cast<Eigen::Index>(d)) >= 0.5;
          }
          det_sum[d](row, col) += detection_rate(eval.y_adv, flags);
        }
        for (const auto& rname : cfg_.fusion_rules) {
          const fuse::Rule rule = fuse::rule_from_name(rname);
          std::vector<char> flags(static_cast<std::size_t>(probs.rows()));
          std::vector<double> p(bank.size());
          for (Eigen::Index r = 0; r < probs.rows(); ++r) {
            for (std::size_t d = 0; d < bank.size(); ++d) {
              p[d] = probs(r, static_cast<Eigen::Index>(d));
            }
            flags[static_cast<std::size_t>(r)] = fused_label(rule, p);
          }
          rule_sum[rname](row, col) += detection_rate(eval.y_adv, flags);
        }
      }
    }
  }
  const double n = static_cast<double>(cfg_.seeds.size());
  for (auto& m : det_sum) out.per_detector.push_back(m / n);
  for (auto& [rname, m] : rule_sum) out.per_rule[rname] = m / n;
  return out;
}

BaselineResult Experiment::run_advtrain_baseline() {
  if (!cfg_.parallel_design()) {
    throw ConfigError("the disagreement baseline needs the parallel design");
  }
  ensure_data();
  BaselineResult result;
  const unsigned workers = cfg_.workers == 0 ? default_workers() : cfg_.workers;

  for (std::size_t s = 0; s < cfg_.seeds.size(); ++s) {
    SeedArtifacts& art = artifacts(s);
    // 50/50 clean + adversarial training set with the traffic labels kept
    // correct; the adversarial half mirrors the balanced-set quarter rule
    auto mixed = [&](const std::vector<Eigen::Index>& idx,
                     const std::array<Mat, 4>& pools, const Vec& split_y,
                     std::uint64_t tag) {
      const Eigen::Index n_clean = static_cast<Eigen::Index>(idx.size());
      std::array<Eigen::Index, 4> quota{};
      const Eigen::Index base = n_clean / 4;
      const Eigen::Index extra = n_clean % 4;
      for (int a = 0; a < 4; ++a) quota[static_cast<std::size_t>(a)] = base + (a < extra ? 1 : 0);
      Mat X(2 * n_clean, pools[0].cols());
      Vec y(2 * n_clean);
      Eigen::Index w = 0;
      for (Eigen::Index i = 0; i < n_clean; ++i, ++w) {
        X.row(w) = train_->X.row(idx[static_cast<std::size_t>(i)]);
        y[w] = split_y[idx[static_cast<std::size_t>(i)]];
      }
      for (int a = 0; a < 4; ++a) {
        const auto ai = static_cast<std::size_t>(a);
        std::vector<std::size_t> order(static_cast<std::size_t>(pools[ai].rows()));
        std::iota(order.begin(), order.end(), 0);
        Rng rng(Rng::mix(art.seed, tag + static_cast<std::uint64_t>(a)));
        rng.shuffle(order);
        if (pools[ai].rows() < quota[ai]) {
          throw DataError("baseline: adversarial pool too small");
        }
        for (Eigen::Index k = 0; k < quota[ai]; ++k, ++w) {
          const auto pool_row = order[static_cast<std::size_t>(k)];
          X.row(w) = pools[ai].row(static_cast<Eigen::Index>(pool_row));
          y[w] = split_y[idx[pool_row]];  // pools align with idx prefixes
        }
      }
      return std::pair<Mat, Vec>(std::move(X), std::move(y));
    };

    auto [Xr, yr] = mixed(art.train_idx, art.adv_train, train_->y, 0x7A0);
    auto [Xe, ye] = mixed(art.eval_idx, art.adv_eval, test_->y, 0x7B0);

    ids::ParallelIds robust = ids::make_parallel(feature_clusters(), Rng::mix(art.seed, 0x7F));
    data::LabeledDataset rob_train{std::move(Xr), std::move(yr), train_->schema};
    data::LabeledDataset rob_eval{std::move(Xe), std::move(ye), train_->schema};
    ids::train_parallel(robust, rob_train, rob_eval,
                        cfg_.ids_train_config(Rng::mix(art.seed, 0x7C)), workers);

    const data::AdvDataset& eval = art.det_eval[kBalancedRow];
    const Vec base_pred = art.model.hard_labels(eval.X);
    const Vec robust_pred = ids::hard_labels(ids::classify_proba(robust, eval.X));
    std::vector<char> disagree(static_cast<std::size_t>(eval.X.rows()));
    for (Eigen::Index r = 0; r < eval.X.rows(); ++r) {
      disagree[static_cast<std::size_t>(r)] = base_pred[r] != robust_pred[r];
    }
    result.per_seed.push_back(detection_rate(eval.y_adv, disagree));
  }
  for (double v : result.per_seed) result.detection_rate += v;
  result.detection_rate /= static_cast<double>(result.per_seed.size());
  return result;
}

void Experiment::persist_models() {
  const fs::path dir = fs::path(cfg_.out_dir) / "models";
  for (std::size_t s = 0; s < cfg_.seeds.size(); ++s) {
    SeedArtifacts& art = artifacts(s);
    const fs::path seed_dir = dir / ("seed_" + std::to_string(art.seed));
    fs::create_directories(seed_dir);
    json manifest;
    manifest["seed"] = art.seed;
    manifest["design"] = cfg_.design;
    manifest["fingerprint"] = hex64(art.model.fingerprint());
    if (art.model.parallel) {
      const fs::path members = seed_dir / "members";
      fs::create_directories(members);
      for (std::size_t k = 0; k < art.model.par.members.size(); ++k) {
        net::save_network((members / ("member_" + std::to_string(k) + ".net")).string(),
                          art.model.par.members[k], art.seed);
      }
      net::save_network((seed_dir / "output.net").string(), art.model.par.output_net,
                        art.seed);
      art.model.par.clusters.save((seed_dir / "clusters.json").string());
    } else {
      net::save_network((seed_dir / "serial.net").string(), art.model.serial.net,
                        art.seed);
    }
    std::ofstream mf(seed_dir / "manifest.json");
    mf << manifest.dump(2) << "\n";
  }
}

std::string Experiment::run_all() {
  prepare(true);
  const AttackImpact impact = run_attack_impact();
  CrossDetection cross;
  bool have_cross = false;
  const bool all_attacks = cfg_.attacks.size() == 4;
  if (all_attacks) {
    cross = run_cross_detection();
    have_cross = true;
  }
  BaselineResult baseline;
  bool have_baseline = false;
  if (cfg_.parallel_design() && all_attacks) {
    baseline = run_advtrain_baseline();
    have_baseline = true;
  }
  persist_models();
  const std::string report_dir = (fs::path(cfg_.out_dir) / "reports").string();
  report::emit_report(cfg_, impact, have_cross ? &cross : nullptr,
                      have_baseline ? &baseline : nullptr, report_dir);
  return report_dir;
}

}  // namespace advids::harness
