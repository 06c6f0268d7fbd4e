#pragma once

#include "evocad/harness/evaluate.hpp"

#include <array>
#include <cmath>
#include <set>

namespace evocad::harness {

/// Report columns: T_corr %, T_err, PCD, HDD, IoU %, DSC %.
inline constexpr std::array<std::string_view, 6> kMetricColumns = {"t_corr", "t_err", "pcd",
                                                                    "hdd",    "iou",   "dsc"};

struct Stat {
  std::optional<double> mean;
  std::optional<double> std;
};

struct CurveRow {
  int generation = 0;
  Stat t_corr; ///< percent
  Stat t_err;
};

struct AggregateReport {
  int runs = 0;
  std::vector<std::string> sample_ids;
  std::vector<std::string> subset; ///< ids watertight in the ground truth and in every run
  std::map<std::string, Stat, std::less<>> metrics;
  std::vector<CurveRow> elite_curve;
  std::vector<CurveRow> population_curve;
};

/// Mean and sample standard deviation (n - 1; zero for a single value). Values are
/// sorted first so the result does not depend on their order.
inline Stat summarize(std::vector<double> values) {
  if (values.empty())
    return {};
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values)
    sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values)
    ss += (v - mean) * (v - mean);
  const double sd = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
  return {mean, sd};
}

/// Per-sample value of one report column, scaled as reported.
inline std::optional<double> column_value(const MetricReport &m, std::string_view col) {
  if (col == "t_corr")
    return m.t_corr ? std::optional(*m.t_corr ? 100.0 : 0.0) : std::nullopt;
  if (col == "t_err")
    return m.t_err ? std::optional(static_cast<double>(*m.t_err)) : std::nullopt;
  if (col == "pcd")
    return m.pcd;
  if (col == "hdd")
    return m.hdd;
  if (col == "iou")
    return m.iou ? std::optional(*m.iou * 100.0) : std::nullopt;
  if (col == "dsc")
    return m.dsc ? std::optional(*m.dsc * 100.0) : std::nullopt;
  throw ConstraintError("unknown metric column " + std::string(col));
}

inline AggregateReport aggregate(const std::vector<RunReport> &runs) {
  if (runs.empty())
    throw ConstraintError("aggregate needs at least one run");
  AggregateReport agg;
  agg.runs = static_cast<int>(runs.size());
  const auto ids_of = [](const RunReport &r) {
    std::vector<std::string> ids;
    for (const auto &s : r.samples)
      ids.push_back(s.id);
    std::sort(ids.begin(), ids.end());
    return ids;
  };
  agg.sample_ids = ids_of(runs.front());
  for (const auto &r : runs)
    if (ids_of(r) != agg.sample_ids)
      throw MismatchedSampleSets("runs cover different samples");

  std::set<std::string> excluded;
  for (const auto &r : runs)
    for (const auto &s : r.samples)
      if (!s.metrics.gt_watertight || !s.metrics.gen_watertight)
        excluded.insert(s.id);
  for (const auto &id : agg.sample_ids)
    if (!excluded.contains(id))
      agg.subset.push_back(id);
  const std::set<std::string> subset(agg.subset.begin(), agg.subset.end());

  for (const auto col : kMetricColumns) {
    std::vector<double> per_run;
    for (const auto &r : runs) {
      std::vector<double> vals;
      for (const auto &s : r.samples)
        if (subset.contains(s.id))
          if (auto v = column_value(s.metrics, col))
            vals.push_back(*v);
      if (!vals.empty())
        per_run.push_back(*summarize(std::move(vals)).mean);
    }
    agg.metrics[std::string(col)] = summarize(std::move(per_run));
  }

  std::size_t gens = 0;
  for (const auto &r : runs)
    for (const auto &s : r.samples)
      gens = std::max(gens, s.curve.size());
  for (std::size_t g = 0; g < gens; ++g) {
    std::vector<double> ec, ee, pc, pe;
    for (const auto &r : runs) {
      std::vector<double> c1, e1, c2, e2;
      for (const auto &s : r.samples) {
        if (!subset.contains(s.id) || g >= s.curve.size())
          continue;
        const auto &p = s.curve[g];
        if (p.elite_t_corr) {
          c1.push_back(*p.elite_t_corr ? 100.0 : 0.0);
          e1.push_back(static_cast<double>(*p.elite_t_err));
        }
        if (p.population_t_corr) {
          c2.push_back(*p.population_t_corr * 100.0);
          e2.push_back(*p.population_t_err);
        }
      }
      if (!c1.empty()) {
        ec.push_back(*summarize(c1).mean);
        ee.push_back(*summarize(e1).mean);
      }
      if (!c2.empty()) {
        pc.push_back(*summarize(c2).mean);
        pe.push_back(*summarize(e2).mean);
      }
    }
    agg.elite_curve.push_back({static_cast<int>(g), summarize(ec), summarize(ee)});
    agg.population_curve.push_back({static_cast<int>(g), summarize(pc), summarize(pe)});
  }
  return agg;
}

} // namespace evocad::harness
