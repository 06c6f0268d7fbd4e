#pragma once

#include "evocad/evolve/run.hpp"
#include "evocad/harness/dataset.hpp"
#include "evocad/metrics/report.hpp"

#include <functional>

namespace evocad::harness {

/// Topology of one generation: its elite, and the mean over its watertight members.
struct GenerationPoint {
  int generation = 0;
  std::optional<long> elite_t_err;
  std::optional<bool> elite_t_corr;
  std::optional<double> population_t_err;  ///< mean over members with topology
  std::optional<double> population_t_corr;  ///< fraction of those members
};

struct SampleResult {
  std::string id;
  std::uint64_t seed = 0;
  std::string elite_code;
  std::optional<TriMesh> elite_mesh;
  std::string error; ///< why no elite mesh exists, when it does not
  MetricReport metrics;
  std::vector<GenerationPoint> curve;
  std::vector<evolve::GenerationTrace> traces;
};

struct RunReport {
  std::uint64_t seed = 0;
  std::vector<SampleResult> samples;
};

struct RunOptions {
  int voxel_resolution = kDefaultVoxelResolution;
  int sample_workers = 2;
};

/// Backends for one sample, given that sample's seed.
using BackendFactory = std::function<lm::Backends(std::uint64_t sample_seed)>;

inline std::uint64_t sample_seed(std::uint64_t run_seed, std::string_view id) {
  return mix64(run_seed ^ fnv1a(id));
}

inline std::vector<GenerationPoint> topology_curve(const std::vector<evolve::GenerationTrace> &traces,
                                                   const TriMesh &gt) {
  std::vector<GenerationPoint> curve;
  for (const auto &t : traces) {
    GenerationPoint p;
    p.generation = t.generation;
    const auto &elite = evolve::best_of(t.individuals);
    if (elite.ok()) {
      const auto topo = topology(*elite.mesh, gt);
      p.elite_t_err = topo.t_err;
      p.elite_t_corr = topo.t_corr;
    }
    double err = 0.0, corr = 0.0;
    int n = 0;
    for (const auto &ind : t.individuals) {
      if (!ind.ok())
        continue;
      const auto topo = topology(*ind.mesh, gt);
      if (!topo.t_err)
        continue;
      err += static_cast<double>(*topo.t_err);
      corr += *topo.t_corr ? 1.0 : 0.0;
      ++n;
    }
    if (n > 0) {
      p.population_t_err = err / n;
      p.population_t_corr = corr / n;
    }
    curve.push_back(p);
  }
  return curve;
}

/// Runs the search on every sample and scores the final elite against the ground truth.
/// A failing sample is recorded with its error and never stops the run.
inline RunReport evaluate_run(const std::vector<Sample> &samples, const evolve::EvoConfig &cfg,
                              const BackendFactory &backends, bridge::Engine &engine,
                              const lm::FewShotStore &corpus, const RunOptions &opts = {}) {
  if (samples.empty())
    throw EmptyDataset("no samples to evaluate");
  RunReport report;
  report.seed = cfg.seed;
  report.samples.resize(samples.size());
  evocad::detail::parallel_for(samples.size(), opts.sample_workers, [&](std::size_t i) {
    const auto &s = samples[i];
    auto &out = report.samples[i];
    out.id = s.id;
    out.seed = sample_seed(cfg.seed, s.id);
    out.metrics.gt_watertight = is_watertight(s.ground_truth);
    evolve::EvoConfig c = cfg;
    c.seed = out.seed;
    try {
      auto result = evolve::run(s.prompt, c, backends(out.seed), engine, corpus);
      out.elite_code = result.elite.code;
      out.curve = topology_curve(result.traces, s.ground_truth);
      out.traces = std::move(result.traces);
      if (!result.elite.ok()) {
        out.error = result.elite.error;
        return;
      }
      out.elite_mesh = result.elite.mesh;
      IcpConfig icp;
      icp.seed = out.seed;
      out.metrics = full_report(*out.elite_mesh, s.ground_truth, icp, opts.voxel_resolution, out.seed);
    } catch (const std::exception &e) {
      out.error = e.what();
    }
  });
  return report;
}

} // namespace evocad::harness
