#include "support.hpp"

#include "evocad/harness.hpp"
#include "evocad/lm.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace evocad;
using namespace evocad::harness;

namespace {

const std::string kFixtures = std::string(EVOCAD_DATA_DIR) + "/fixtures/csg10";

const lm::FewShotStore &corpus() {
  static const auto store = lm::FewShotStore::load_dir(std::string(EVOCAD_DATA_DIR) + "/fewshot");
  return store;
}

BackendFactory mock_factory() {
  return [](std::uint64_t seed) {
    auto m = std::make_shared<lm::MockBackend>(seed);
    using lm::ModelRole;
    using lm::ModelRoleConfig;
    return lm::Backends{{m, ModelRoleConfig::defaults(ModelRole::Generator)},
                        {m, ModelRoleConfig::defaults(ModelRole::Describer)},
                        {m, ModelRoleConfig::defaults(ModelRole::Ranker)}};
  };
}

evolve::EvoConfig quick_cfg(std::uint64_t seed) {
  evolve::EvoConfig c;
  c.seed = seed;
  c.render_size = 64;
  c.workers = 1;
  return c;
}

RunOptions quick_opts() {
  RunOptions o;
  o.voxel_resolution = 24;
  o.sample_workers = 1;
  return o;
}

SampleResult hand_sample(const std::string &id, bool t_corr, bool watertight = true) {
  SampleResult s;
  s.id = id;
  s.metrics.gt_watertight = true;
  s.metrics.gen_watertight = watertight;
  if (watertight) {
    s.metrics.t_corr = t_corr;
    s.metrics.t_err = t_corr ? 0 : 2;
    s.metrics.iou = 0.5;
    s.metrics.dsc = 0.6;
  }
  s.metrics.pcd = 0.01;
  s.metrics.hdd = 0.1;
  return s;
}

RunReport hand_run(int correct_of_ten) {
  RunReport r;
  for (int i = 0; i < 10; ++i)
    r.samples.push_back(hand_sample("s" + std::to_string(i), i < correct_of_ten));
  return r;
}

} // namespace

TEST(Dataset, LoadsValidSkipsBroken) {
  const auto root = test::fresh_temp_dir("dataset");
  write_sample(root, "c_third", "A cube.", test::unit_cube());
  write_sample(root, "a_first", "A plate with one hole.", test::plate_mesh(1));
  write_sample(root, "b_second", "A plate with two holes.", test::plate_mesh(2));
  std::filesystem::create_directories(root / "d_broken");
  std::ofstream(root / "d_broken" / "prompt.txt") << "no mesh here\n";
  std::vector<std::string> warnings;
  const auto samples = load_dataset(root, &warnings);
  ASSERT_EQ(samples.size(), 3u);
  EXPECT_EQ(samples[0].id, "a_first");
  EXPECT_EQ(samples[1].id, "b_second");
  EXPECT_EQ(samples[2].id, "c_third");
  EXPECT_EQ(samples[0].prompt, "A plate with one hole.");
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("d_broken"), std::string::npos);
}

TEST(Dataset, EmptyAndMissing) {
  EXPECT_THROW(load_dataset(test::fresh_temp_dir("dataset_empty")), EmptyDataset);
  EXPECT_THROW(load_dataset("/nonexistent/dataset"), IoError);
}

TEST(Dataset, FixturesAreConsistent) {
  const auto samples = load_dataset(kFixtures);
  ASSERT_EQ(samples.size(), 10u);
  std::set<std::size_t> hole_counts;
  for (const auto &s : samples) {
    const auto prog = csg::parse(read_file_bytes(s.source / "target.csg"));
    EXPECT_EQ(lm::mock::target_holes(s.prompt), static_cast<int>(prog.hole_count())) << s.id;
    EXPECT_TRUE(is_watertight(s.ground_truth)) << s.id;
    EXPECT_EQ(euler_characteristic(s.ground_truth), csg::expected_chi(prog)) << s.id;
    hole_counts.insert(prog.hole_count());
  }
  EXPECT_EQ(hole_counts, (std::set<std::size_t>{0, 1, 2, 3}));
}

TEST(EvaluateRun, MockSamplesHaveTopology) {
  auto samples = load_dataset(kFixtures);
  samples.resize(3);
  bridge::CsgEngine engine;
  const auto run = evaluate_run(samples, quick_cfg(1), mock_factory(), engine, corpus(), quick_opts());
  ASSERT_EQ(run.samples.size(), 3u);
  for (const auto &s : run.samples) {
    EXPECT_TRUE(s.error.empty()) << s.error;
    EXPECT_TRUE(s.metrics.t_err.has_value()) << s.id;
    EXPECT_TRUE(s.metrics.pcd.has_value());
    EXPECT_TRUE(s.metrics.iou.has_value());
    EXPECT_EQ(s.curve.size(), 5u);
    EXPECT_EQ(s.traces.size(), 5u);
  }
}

TEST(EvaluateRun, OpenGroundTruthLosesTopology) {
  auto tris = test::box_triangles({0, 0, 0}, {1, 1, 1});
  tris.pop_back();
  tris.pop_back();
  const std::vector<Sample> samples{{"open", "A box.", weld_vertices(tris), {}},
                                    {"plate", "A plate with one hole.", test::plate_mesh(1), {}}};
  bridge::CsgEngine engine;
  const auto run = evaluate_run(samples, quick_cfg(2), mock_factory(), engine, corpus(), quick_opts());
  EXPECT_FALSE(run.samples[0].metrics.gt_watertight);
  EXPECT_FALSE(run.samples[0].metrics.t_err);
  EXPECT_FALSE(run.samples[0].metrics.t_corr);
  EXPECT_TRUE(run.samples[0].metrics.pcd);
  const auto agg = aggregate({run});
  EXPECT_EQ(agg.subset, (std::vector<std::string>{"plate"}));
}

TEST(EvaluateRun, RepeatableUnderSeed) {
  auto samples = load_dataset(kFixtures);
  samples.resize(2);
  bridge::CsgEngine engine;
  const auto a = evaluate_run(samples, quick_cfg(8), mock_factory(), engine, corpus(), quick_opts());
  auto opts = quick_opts();
  opts.sample_workers = 2;
  const auto b = evaluate_run(samples, quick_cfg(8), mock_factory(), engine, corpus(), opts);
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    EXPECT_EQ(to_json(a.samples[i], 0).dump(), to_json(b.samples[i], 0).dump());
}

TEST(Aggregate, HandEnteredTcorr) {
  const auto agg = aggregate({hand_run(8), hand_run(9), hand_run(10)});
  EXPECT_EQ(agg.runs, 3);
  const auto &t = agg.metrics.at("t_corr");
  EXPECT_NEAR(*t.mean, 90.0, 1e-9);
  EXPECT_NEAR(*t.std, 10.0, 1e-9);
  EXPECT_NEAR(*agg.metrics.at("iou").mean, 50.0, 1e-9);
  EXPECT_NEAR(*agg.metrics.at("dsc").mean, 60.0, 1e-9);
  ASSERT_EQ(agg.metrics.size(), 6u);
  for (const auto k : kMetricColumns)
    EXPECT_TRUE(agg.metrics.contains(std::string(k)));
}

TEST(Aggregate, SingleRunHasZeroStd) {
  const auto agg = aggregate({hand_run(7)});
  for (const auto &[k, st] : agg.metrics) {
    ASSERT_TRUE(st.std) << k;
    EXPECT_EQ(*st.std, 0.0) << k;
  }
  EXPECT_NEAR(*agg.metrics.at("t_corr").mean, 70.0, 1e-9);
}

TEST(Aggregate, JointSubsetAcrossRuns) {
  auto r1 = hand_run(10), r2 = hand_run(10);
  r2.samples[3] = hand_sample("s3", false, false);
  const auto agg = aggregate({r1, r2});
  EXPECT_EQ(agg.subset.size(), 9u);
  EXPECT_EQ(std::find(agg.subset.begin(), agg.subset.end(), "s3"), agg.subset.end());
  EXPECT_EQ(*agg.metrics.at("t_corr").mean, 100.0);
}

TEST(Aggregate, OrderInvariant) {
  Rng rng(6);
  std::vector<RunReport> runs;
  for (int r = 0; r < 4; ++r) {
    RunReport rep;
    for (int i = 0; i < 12; ++i) {
      auto s = hand_sample("s" + std::to_string(i), rng.bernoulli(0.6), !rng.bernoulli(0.1));
      s.metrics.pcd = rng.uniform();
      s.metrics.hdd = rng.uniform();
      rep.samples.push_back(s);
    }
    runs.push_back(rep);
  }
  const auto a = to_json(aggregate(runs)).dump();
  std::reverse(runs.begin(), runs.end());
  std::swap(runs[0], runs[2]);
  EXPECT_EQ(to_json(aggregate(runs)).dump(), a);
}

TEST(Aggregate, MismatchedSets) {
  auto r2 = hand_run(5);
  r2.samples.pop_back();
  EXPECT_THROW(aggregate({hand_run(5), r2}), MismatchedSampleSets);
}

TEST(Output, FilesAndShapes) {
  auto samples = load_dataset(kFixtures);
  samples.resize(2);
  bridge::CsgEngine engine;
  const std::vector<RunReport> runs{
      evaluate_run(samples, quick_cfg(3), mock_factory(), engine, corpus(), quick_opts())};
  const auto agg = aggregate(runs);
  const auto dir = test::fresh_temp_dir("outputs");
  OutputOptions oo;
  oo.gallery = true;
  oo.gallery_size = 64;
  write_outputs(dir, agg, runs, oo);
  for (const char *f : {"report.json", "per_sample.jsonl", "curves.csv", "curves_population.csv"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  EXPECT_TRUE(read_file_bytes(dir / "curves.csv").starts_with(
      "generation,t_corr_mean,t_corr_std,t_err_mean,t_err_std\n0,"));
  const auto report = nlohmann::json::parse(read_file_bytes(dir / "report.json"));
  EXPECT_EQ(report["metrics"].size(), 6u);
  EXPECT_EQ(report["metrics"]["t_corr"]["unit"], "%");
  EXPECT_EQ(report["curves"]["elite"].size(), 5u);
  EXPECT_TRUE(std::filesystem::exists(dir / "gallery" / ("run0_" + samples[0].id + ".png")));
  EXPECT_TRUE(std::filesystem::exists(dir / "traces" / ("run0_" + samples[0].id + ".jsonl")));
}
