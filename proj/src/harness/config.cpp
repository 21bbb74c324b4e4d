#include "advids/harness/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "advids/rng.hpp"

namespace advids::harness {

using nlohmann::json;

const char* kDataDirEnvVar = "ADVIDS_DATA_DIR";

namespace {

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::string resolve(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* base = std::getenv(kDataDirEnvVar);
  if (base == nullptr || base[0] == '\0') return path;
  return std::string(base) + "/" + path;
}

}  // namespace

std::string ExperimentConfig::to_json() const {
  json j;
  j["dialect"] = dialect;
  j["train_path"] = train_path;
  j["test_path"] = test_path;
  j["max_train_rows"] = max_train_rows;
  j["max_test_rows"] = max_test_rows;
  j["design"] = design;
  j["cluster_method"] = cluster_method;
  j["cluster_k"] = cluster_k;
  j["attacks"] = attacks;
  j["epsilon"] = epsilon;
  j["pgd_step"] = pgd_step;
  j["pgd_iters"] = pgd_iters;
  j["df_overshoot"] = df_overshoot;
  j["df_max_iters"] = df_max_iters;
  j["cw_kappa"] = cw_kappa;
  j["cw_c"] = cw_c;
  j["cw_iters"] = cw_iters;
  j["cw_step"] = cw_step;
  j["cw_bss"] = cw_bss;
  j["adv_train_rows"] = adv_train_rows;
  j["adv_eval_rows"] = adv_eval_rows;
  j["cw_train_rows"] = cw_train_rows;
  j["cw_eval_rows"] = cw_eval_rows;
  j["transfer_mode"] = transfer_mode;
  j["fusion_rules"] = fusion_rules;
  j["serial_epochs"] = serial_epochs;
  j["parallel_epochs"] = parallel_epochs;
  j["detector_epochs"] = detector_epochs;
  j["eval_interval"] = eval_interval;
  j["batch_size"] = batch_size;
  j["learning_rate"] = learning_rate;
  j["optimizer"] = optimizer;
  j["seeds"] = seeds;
  j["out_dir"] = out_dir;
  j["workers"] = workers;
  return j.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  ExperimentConfig c;
  maybe(j, "dialect", c.dialect);
  maybe(j, "train_path", c.train_path);
  maybe(j, "test_path", c.test_path);
  maybe(j, "max_train_rows", c.max_train_rows);
  maybe(j, "max_test_rows", c.max_test_rows);
  maybe(j, "design", c.design);
  maybe(j, "cluster_method", c.cluster_method);
  maybe(j, "cluster_k", c.cluster_k);
  maybe(j, "attacks", c.attacks);
  maybe(j, "epsilon", c.epsilon);
  maybe(j, "pgd_step", c.pgd_step);
  maybe(j, "pgd_iters", c.pgd_iters);
  maybe(j, "df_overshoot", c.df_overshoot);
  maybe(j, "df_max_iters", c.df_max_iters);
  maybe(j, "cw_kappa", c.cw_kappa);
  maybe(j, "cw_c", c.cw_c);
  maybe(j, "cw_iters", c.cw_iters);
  maybe(j, "cw_step", c.cw_step);
  maybe(j, "cw_bss", c.cw_bss);
  maybe(j, "adv_train_rows", c.adv_train_rows);
  maybe(j, "adv_eval_rows", c.adv_eval_rows);
  maybe(j, "cw_train_rows", c.cw_train_rows);
  maybe(j, "cw_eval_rows", c.cw_eval_rows);
  maybe(j, "transfer_mode", c.transfer_mode);
  maybe(j, "fusion_rules", c.fusion_rules);
  maybe(j, "serial_epochs", c.serial_epochs);
  maybe(j, "parallel_epochs", c.parallel_epochs);
  maybe(j, "detector_epochs", c.detector_epochs);
  maybe(j, "eval_interval", c.eval_interval);
  maybe(j, "batch_size", c.batch_size);
  maybe(j, "learning_rate", c.learning_rate);
  maybe(j, "optimizer", c.optimizer);
  maybe(j, "seeds", c.seeds);
  maybe(j, "out_dir", c.out_dir);
  maybe(j, "workers", c.workers);
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void ExperimentConfig::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config " + path);
  out << to_json();
}

std::uint64_t ExperimentConfig::config_hash() const {
  const std::string canon = to_json();
  Fnv1a h;
  h.update(canon.data(), canon.size());
  return h.digest();
}

std::string ExperimentConfig::resolved_train_path() const { return resolve(train_path); }
std::string ExperimentConfig::resolved_test_path() const { return resolve(test_path); }

bool ExperimentConfig::parallel_design() const { return design == "parallel"; }

net::TrainConfig ExperimentConfig::ids_train_config(std::uint64_t seed) const {
  net::TrainConfig tc;
  tc.epochs = parallel_design() ? parallel_epochs : serial_epochs;
  tc.eval_interval = eval_interval;
  tc.batch_size = batch_size;
  tc.learning_rate = learning_rate;
  tc.optimizer = optimizer == "sgd" ? net::Optimizer::Sgd : net::Optimizer::Adam;
  tc.seed = seed;
  tc.loss = net::Loss::CategoricalCrossEntropy;
  return tc;
}

net::TrainConfig ExperimentConfig::detector_train_config(std::uint64_t seed) const {
  net::TrainConfig tc;
  tc.epochs = detector_epochs;
  tc.eval_interval = eval_interval;
  tc.batch_size = batch_size;
  tc.learning_rate = learning_rate;
  tc.optimizer = optimizer == "sgd" ? net::Optimizer::Sgd : net::Optimizer::Adam;
  tc.seed = seed;
  tc.loss = net::Loss::BinaryCrossEntropy;
  return tc;
}

attack::AttackSpec ExperimentConfig::attack_spec(attack::Kind kind) const {
  attack::AttackSpec s;
  s.kind = kind;
  s.epsilon = epsilon;
  s.pgd = {pgd_step, pgd_iters};
  s.df = {df_overshoot, df_max_iters};
  s.cw = {cw_kappa, cw_c, cw_iters, cw_step, cw_bss};
  return s;
}

void ExperimentConfig::validate() const {
  if (design != "serial" && design != "parallel") {
    throw ConfigError("config: design must be serial or parallel");
  }
  if (dialect != "nslkdd" && dialect != "cicids2017") {
    throw ConfigError("config: dialect must be nslkdd or cicids2017");
  }
  if (optimizer != "adam" && optimizer != "sgd") {
    throw ConfigError("config: optimizer must be adam or sgd");
  }
  if (seeds.empty()) throw ConfigError("config: need at least one seed");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw ConfigError("config: epsilon must be in (0, 1]");
  }
  for (const auto& a : attacks) attack::kind_from_name(a);
  for (const auto& r : fusion_rules) {
    if (r != "majority" && r != "bayes_avg" && r != "dempster") {
      throw ConfigError("config: unknown fusion rule " + r);
    }
  }
  if (transfer_mode != "fe" && transfer_mode != "ft" && transfer_mode != "dft") {
    throw ConfigError("config: transfer_mode must be fe, ft or dft");
  }
  if (cluster_method != "distribution" && cluster_method != "cut") {
    throw ConfigError("config: cluster_method must be distribution or cut");
  }
}

}  // namespace advids::harness
