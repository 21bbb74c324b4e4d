#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <map>

#include "advids/data/advset.hpp"
#include "advids/data/load.hpp"
#include "advids/data/preprocess.hpp"
#include "advids/rng.hpp"
#include "advids/synth/synth.hpp"

using namespace advids;
using data::Dialect;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/advids_" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

std::string nsl_row(const std::string& proto, const std::string& service,
                    const std::string& flag, const std::string& label, double fill) {
  std::string row;
  const auto& feats = data::nslkdd_features();
  for (std::size_t f = 0; f < feats.size(); ++f) {
    if (!row.empty()) row += ',';
    if (feats[f].name == "protocol_type") row += proto;
    else if (feats[f].name == "service") row += service;
    else if (feats[f].name == "flag") row += flag;
    else row += std::to_string(fill);
  }
  return row + "," + label + ",15";
}

}  // namespace

TEST_CASE("nslkdd loader: 41 features plus label, malformed rows, empty files") {
  const auto path = write_temp("nsl_ok.csv", nsl_row("tcp", "http", "SF", "normal", 1.0) +
                                                 "\n" +
                                                 nsl_row("udp", "ftp", "S0", "neptune", 2.0) +
                                                 "\n");
  const auto rec = data::load_dataset(path, Dialect::NslKdd);
  CHECK(rec.rows.size() == 2);
  CHECK(rec.features.size() == 41);
  CHECK(rec.labels[0] == "normal");
  CHECK(rec.labels[1] == "neptune");

  const auto empty = write_temp("nsl_empty.csv", "");
  CHECK_THROWS_AS(data::load_dataset(empty, Dialect::NslKdd), DataError);

  const auto bad = write_temp("nsl_bad.csv", "1,2,3\n");
  try {
    data::load_dataset(bad, Dialect::NslKdd);
    CHECK(false);
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }

  CHECK_THROWS_AS(data::load_dataset("/nonexistent/file.csv", Dialect::NslKdd), IoError);
}

TEST_CASE("cicids loader flags Infinity/NaN rows for sanitization") {
  const std::string content =
      "Destination Port,Protocol,Flow Bytes/s,Flow Packets/s,Label\n"
      "80,6,1000.5,12.0,BENIGN\n"
      "443,6,Infinity,9.0,DoS Hulk\n"
      "22,17,55.1,NaN,BENIGN\n";
  const auto path = write_temp("cic_inf.csv", content);
  const auto rec = data::load_dataset(path, Dialect::Cicids2017);
  CHECK(rec.rows.size() == 3);
  CHECK(rec.features.size() == 4);
  REQUIRE(rec.flagged.size() == 2);
  CHECK(rec.flagged[0] == 1);
  CHECK(rec.flagged[1] == 2);

  // flagged rows are dropped by preprocessing
  const auto ds = data::preprocess(rec);
  CHECK(ds.rows() == 1);
  CHECK(ds.X.allFinite());
}

TEST_CASE("preprocess: one-hot expansion, mutability, scaling conventions") {
  std::string content;
  content += nsl_row("tcp", "http", "SF", "normal", 1.0) + "\n";
  content += nsl_row("udp", "http", "S0", "neptune", 5.0) + "\n";
  content += nsl_row("icmp", "ftp", "SF", "normal", 3.0) + "\n";
  const auto path = write_temp("nsl_pre.csv", content);
  const auto rec = data::load_dataset(path, Dialect::NslKdd);
  const auto ds = data::preprocess(rec);

  // protocol_type saw 3 values -> 3 immutable one-hot columns
  int proto_cols = 0;
  for (std::size_t c = 0; c < ds.schema.expanded_names.size(); ++c) {
    if (ds.schema.expanded_names[c].rfind("protocol_type=", 0) == 0) {
      ++proto_cols;
      CHECK_FALSE(ds.schema.mutable_mask[c]);
    }
  }
  CHECK(proto_cols == 3);

  // every numeric value scaled into [0,1]; constant columns forced to zero
  CHECK(ds.X.minCoeff() >= 0.0);
  CHECK(ds.X.maxCoeff() <= 1.0);
  CHECK(ds.y[0] == 0.0);
  CHECK(ds.y[1] == 1.0);

  // a test-split value below the training minimum clips to 0
  std::string test_content = nsl_row("tcp", "http", "SF", "normal", -10.0) + "\n";
  const auto tpath = write_temp("nsl_pre_test.csv", test_content);
  const auto trec = data::load_dataset(tpath, Dialect::NslKdd);
  const auto tds = data::preprocess_with(trec, ds.schema);
  CHECK(tds.X.minCoeff() >= 0.0);
  CHECK(tds.X.maxCoeff() <= 1.0);
  const Eigen::Index duration_col = 0;  // first expanded column is duration
  CHECK(tds.X(0, duration_col) == 0.0);
}

TEST_CASE("attack-specific sets are exactly balanced with provenance") {
  Rng rng(3);
  Mat clean(100, 6), adv(100, 6);
  for (Eigen::Index i = 0; i < clean.size(); ++i) {
    clean.data()[i] = rng.uniform();
    adv.data()[i] = rng.uniform();
  }
  const auto ds = data::build_attack_specific(clean, adv, data::Provenance::Fgsm, 9);
  CHECK(ds.rows() == 200);
  std::map<data::Provenance, int> counts;
  int ones = 0;
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    counts[ds.provenance[r]]++;
    if (ds.y_adv[static_cast<Eigen::Index>(r)] > 0.5) ++ones;
    // label/provenance coupling
    CHECK((ds.y_adv[static_cast<Eigen::Index>(r)] > 0.5) ==
          (ds.provenance[r] != data::Provenance::None));
  }
  CHECK(ones == 100);
  CHECK(counts[data::Provenance::None] == 100);
  CHECK(counts[data::Provenance::Fgsm] == 100);

  Mat short_adv(50, 6);
  short_adv.setZero();
  CHECK_THROWS_AS(data::build_attack_specific(clean, short_adv, data::Provenance::Pgd, 9),
                  DataError);
  Mat none(0, 6);
  CHECK_THROWS_AS(data::build_attack_specific(none, none, data::Provenance::Pgd, 9),
                  DataError);
}

TEST_CASE("balanced sets draw equal quarters in documented attack order") {
  Rng rng(4);
  auto fill = [&](Eigen::Index rows) {
    Mat m(rows, 5);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform();
    return m;
  };
  const Mat clean = fill(400);
  const std::array<Mat, 4> pools = {fill(400), fill(400), fill(400), fill(400)};
  const auto ds = data::build_balanced(clean, pools, 11);
  CHECK(ds.rows() == 800);
  std::map<data::Provenance, int> counts;
  for (const auto p : ds.provenance) counts[p]++;
  CHECK(counts[data::Provenance::None] == 400);
  CHECK(counts[data::Provenance::Fgsm] == 100);
  CHECK(counts[data::Provenance::Pgd] == 100);
  CHECK(counts[data::Provenance::Cw] == 100);
  CHECK(counts[data::Provenance::Df] == 100);

  const Mat clean402 = fill(402);
  const auto ds402 = data::build_balanced(clean402, pools, 11);
  std::map<data::Provenance, int> c402;
  for (const auto p : ds402.provenance) c402[p]++;
  CHECK(c402[data::Provenance::Fgsm] == 101);
  CHECK(c402[data::Provenance::Pgd] == 101);
  CHECK(c402[data::Provenance::Cw] == 100);
  CHECK(c402[data::Provenance::Df] == 100);

  const std::array<Mat, 4> starved = {fill(400), Mat(0, 5), fill(400), fill(400)};
  try {
    data::build_balanced(clean, starved, 11);
    CHECK(false);
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("pgd") != std::string::npos);
  }
}

TEST_CASE("synthetic corpora parse, preprocess and stay finite") {
  const std::string nsl = "/tmp/advids_synth_nsl.csv";
  synth::write_nsl_like_csv(nsl, 400, 7);
  const auto nrec = data::load_dataset(nsl, Dialect::NslKdd);
  CHECK(nrec.rows.size() == 400);
  const auto nds = data::preprocess(nrec);
  CHECK(nds.X.allFinite());
  CHECK(nds.X.minCoeff() >= 0.0);
  CHECK(nds.X.maxCoeff() <= 1.0);
  // both classes present
  CHECK(nds.y.sum() > 40);
  CHECK(nds.y.sum() < 360);

  // determinism: equal (rows, seed) produce byte-identical files
  const std::string nsl2 = "/tmp/advids_synth_nsl2.csv";
  synth::write_nsl_like_csv(nsl2, 400, 7);
  std::ifstream a(nsl), b(nsl2);
  std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(sa == sb);

  const std::string cic = "/tmp/advids_synth_cic.csv";
  synth::write_cic_like_csv(cic, 2000, 7);
  const auto crec = data::load_dataset(cic, Dialect::Cicids2017);
  CHECK(crec.rows.size() == 2000);
  CHECK(!crec.flagged.empty());  // the corpus artifact is reproduced
  const auto cds = data::preprocess(crec);
  CHECK(cds.X.allFinite());
  // destination port and protocol are immutable
  CHECK_FALSE(cds.schema.mutable_mask[0]);
  CHECK_FALSE(cds.schema.mutable_mask[1]);
}
