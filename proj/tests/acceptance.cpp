// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "oracles.hpp"
#include "support.hpp"

#include "evocad/bridge.hpp"
#include "evocad/evolve.hpp"
#include "evocad/harness.hpp"
#include "evocad/lm.hpp"
#include "evocad/metrics.hpp"

#include <json.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace evocad;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string &what) {
    if (!cond) {
      if (!pass)
        detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

int failures = 0;

void criterion(const std::string &name, double budget_s, const std::function<void(Verdict &)> &body) {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception &e) {
    v.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0)
    v.require(secs < budget_s, "runtime " + std::to_string(secs) + " s over budget");
  failures += v.pass ? 0 : 1;
  std::printf("%s %-22s %7.2f s%s%s\n", v.pass ? "PASS" : "FAIL", name.c_str(), secs,
              v.pass ? "" : "  ", v.pass ? "" : v.detail.str().c_str());
  std::fflush(stdout);
}

const std::string kData = EVOCAD_DATA_DIR;
constexpr double kDeg = std::numbers::pi / 180.0;

lm::Backends mock_backends(std::uint64_t seed) {
  auto m = std::make_shared<lm::MockBackend>(seed);
  using lm::ModelRole;
  using lm::ModelRoleConfig;
  return {{m, ModelRoleConfig::defaults(ModelRole::Generator)},
          {m, ModelRoleConfig::defaults(ModelRole::Describer)},
          {m, ModelRoleConfig::defaults(ModelRole::Ranker)}};
}

int run_cli(const std::string &args) {
  const std::string cmd = std::string(EVOCAD_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_bytes(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void topology_suite(Verdict &v) {
  v.require(euler_characteristic(test::unit_cube()) == 2, "chi(cube) != 2");
  const long expect[] = {0, -2, -4};
  for (int h = 1; h <= 3; ++h) {
    const long chi = euler_characteristic(test::plate_mesh(h));
    v.require(chi == expect[h - 1], std::to_string(h) + "-hole plate chi " + std::to_string(chi));
  }
  Rng rng(20240);
  int bad = 0;
  for (int i = 0; i < 200; ++i) {
    const auto prog = test::random_program(rng);
    const auto mesh = csg::compile(prog);
    if (!is_watertight(mesh) || euler_characteristic(mesh) != csg::expected_chi(prog))
      ++bad;
  }
  v.require(bad == 0, std::to_string(bad) + "/200 random programs mismatch");
}

void watertight_gate(Verdict &v) {
  const auto cube = test::unit_cube();
  auto faces = cube.faces();
  faces.resize(faces.size() - 2);
  const TriMesh open(cube.vertices(), faces);
  v.require(!is_watertight(open), "open cube reported watertight");
  const auto r = full_report(open, cube, IcpConfig{}, 32, 1);
  v.require(!r.t_err && !r.t_corr && !r.chi_gen && !r.chi_gt, "topology fields present");
  v.require(!r.gen_watertight, "gen_watertight set");
}

void selection_suite(Verdict &v) {
  const std::map<int, double> ranks{{1, 1.0}, {2, 2.0}, {3, 3.0}};
  const auto probs = evolve::selection_probabilities(ranks, 0.5);
  double sum = 0.0;
  for (const auto &[id, p] : probs)
    sum += p;
  v.require(std::abs(sum - 1.0) <= 1e-12, "probabilities do not sum to 1");
  const std::map<int, double> want{{1, 0.5065}, {2, 0.3072}, {3, 0.1863}};
  for (const auto &[id, p] : want)
    v.require(std::abs(probs.at(id) - p) <= 1e-4, "p(" + std::to_string(id) + ") = " + std::to_string(probs.at(id)));
  Rng rng(7);
  std::map<int, int> hits;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i)
    ++hits[evolve::detail::draw(probs, rng)];
  for (const auto &[id, p] : probs)
    v.require(std::abs(static_cast<double>(hits[id]) / draws - p) <= 0.01,
              "empirical frequency off for id " + std::to_string(id));
}

void metric_oracles(Verdict &v) {
  Rng rng(99);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto a = test::random_cloud(rng, 500), b = test::random_cloud(rng, 500);
    worst = std::max(worst, std::abs(pcd(a, b) - test::brute_pcd(a, b)));
    worst = std::max(worst, std::abs(hdd(a, b) - test::brute_hdd(a, b)));
  }
  v.require(worst <= 1e-12, "max deviation from brute force " + std::to_string(worst));
  const auto plate = test::plate_mesh(2);
  const auto r = full_report(plate, plate, IcpConfig{}, 64, 1);
  v.require(r.pcd == 0.0 && r.hdd == 0.0, "identical meshes: nonzero pcd/hdd");
  v.require(r.iou == 1.0 && r.dsc == 1.0, "identical meshes: iou/dsc != 1");
  v.require(r.t_err == 0L, "identical meshes: t_err != 0");
}

void overlap_check(Verdict &v) {
  const auto a = test::box_mesh({0, 0, 0}, {1, 1, 1});
  const auto b = test::box_mesh({0.5, 0, 0}, {1.5, 1, 1});
  const auto o = iou_dsc(a, b, 64);
  v.require(std::abs(o.iou - 1.0 / 3.0) <= 0.02, "IoU " + std::to_string(o.iou));
  v.require(std::abs(o.dsc - 0.5) <= 0.02, "DSC " + std::to_string(o.dsc));
}

void alignment_invariance(Verdict &v) {
  Rng rng(4242);
  for (int i = 0; i < 20; ++i) {
    const auto gt = csg::compile(test::random_program(rng));
    const TriMesh gt_n = normalize(gt).mesh;
    const Vec3 axis{rng.uniform() - 0.5, rng.uniform() - 0.5, rng.uniform() - 0.5};
    const Mat3 rot = axis_angle(axis, rng.uniform() * 15 * kDeg);
    const Vec3 shift{0.2 * (2 * rng.uniform() - 1), 0.2 * (2 * rng.uniform() - 1),
                     0.2 * (2 * rng.uniform() - 1)};
    const double scale = 0.5 + 1.5 * rng.uniform();
    const auto gen = transformed(gt_n, [&](const Vec3 &p) { return rot * p * scale + shift * scale; });
    const auto r = full_report(gen, gt, IcpConfig{}, 64, static_cast<std::uint64_t>(i));
    const std::string tag = "solid " + std::to_string(i) + ": ";
    v.require(*r.pcd <= 1e-3, tag + "pcd " + std::to_string(*r.pcd));
    v.require(*r.hdd <= 5e-3, tag + "hdd " + std::to_string(*r.hdd));
    v.require(r.t_err == 0L, tag + "t_err nonzero");
  }
}

void mock_end_to_end(Verdict &v) {
  const auto samples = harness::load_dataset(kData + "/fixtures/csg10");
  v.require(samples.size() == 10, "fixture set does not have 10 samples");
  const auto corpus = lm::FewShotStore::load_dir(kData + "/fewshot");
  bridge::CsgEngine engine;
  double first = 0.0, last = 0.0;
  int n = 0, carry_breaks = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    for (const auto &s : samples) {
      evolve::EvoConfig cfg;
      cfg.seed = harness::sample_seed(seed, s.id);
      cfg.render_size = 64;
      cfg.workers = 1;
      const auto result = evolve::run(s.prompt, cfg, mock_backends(cfg.seed), engine, corpus);
      const auto curve = harness::topology_curve(result.traces, s.ground_truth);
      first += curve.front().elite_t_corr.value_or(false) ? 1.0 : 0.0;
      last += curve.back().elite_t_corr.value_or(false) ? 1.0 : 0.0;
      ++n;
      for (std::size_t g = 0; g + 1 < result.traces.size(); ++g) {
        const auto &elite = evolve::best_of(result.traces[g].individuals);
        bool carried = false;
        for (const auto &ind : result.traces[g + 1].individuals)
          carried = carried || (ind.id == elite.id && ind.code == elite.code);
        carry_breaks += carried ? 0 : 1;
      }
    }
  }
  first /= n;
  last /= n;
  std::ostringstream msg;
  msg << "gen-0 T_corr " << first << ", final " << last;
  v.require(last >= first + 0.15, msg.str());
  v.require(carry_breaks == 0, std::to_string(carry_breaks) + " elite carry breaks");
  std::cerr << "  mock e2e: " << msg.str() << " over " << n << " searches\n";
}

void bench_determinism(Verdict &v) {
  const auto a = test::fresh_temp_dir("accept_bench_a"), b = test::fresh_temp_dir("accept_bench_b");
  const std::string common = "bench --dataset " + kData + "/fixtures/csg10 --fewshot-dir " + kData +
                             "/fewshot --runs 2 --render-size 64 --resolution 32 --seed 11 --out ";
  v.require(run_cli(common + "'" + a.string() + "'") == 0, "first bench failed");
  v.require(run_cli(common + "'" + b.string() + "'") == 0, "second bench failed");
  const auto ra = read_bytes(a / "report.json");
  v.require(!ra.empty() && ra == read_bytes(b / "report.json"), "report.json differs");
}

void report_shape(Verdict &v) {
  std::vector<harness::RunReport> runs;
  for (double t : {0.8, 0.9, 1.0}) {
    harness::RunReport run;
    for (int i = 0; i < 10; ++i) {
      harness::SampleResult s;
      s.id = "s" + std::to_string(i);
      s.metrics.gt_watertight = s.metrics.gen_watertight = true;
      s.metrics.t_corr = i < static_cast<int>(std::lround(t * 10));
      s.metrics.t_err = *s.metrics.t_corr ? 0 : 1;
      s.metrics.pcd = 0.01;
      s.metrics.hdd = 0.1;
      s.metrics.iou = 0.5;
      s.metrics.dsc = 0.6;
      run.samples.push_back(s);
    }
    runs.push_back(run);
  }
  const auto j = harness::to_json(harness::aggregate(runs));
  const auto &m = j.at("metrics");
  v.require(m.size() == 6, "metric key count " + std::to_string(m.size()));
  for (const auto col : harness::kMetricColumns) {
    const std::string key(col);
    v.require(m.contains(key) && m[key].contains("mean") && m[key].contains("std"), "missing " + key);
  }
  const double t = m.at("t_corr").at("mean").get<double>();
  v.require(std::abs(t - 90.0) <= 1e-9, "T_corr mean " + std::to_string(t));
}

} // namespace

int main() {
  criterion("topology", 10, topology_suite);
  criterion("watertight-gate", 0, watertight_gate);
  criterion("selection-probability", 0, selection_suite);
  criterion("metric-oracles", 0, metric_oracles);
  criterion("iou-dsc-analytic", 5, overlap_check);
  criterion("alignment-invariance", 60, alignment_invariance);
  criterion("mock-end-to-end", 120, mock_end_to_end);
  criterion("bench-determinism", 0, bench_determinism);
  criterion("report-shape", 0, report_shape);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
