#pragma once

#include "evocad/harness/aggregate.hpp"
#include "evocad/render/png.hpp"
#include "evocad/render/raster.hpp"

#include <charconv>
#include <fstream>

namespace evocad::harness {

inline nlohmann::json stat_json(const Stat &s) {
  return {{"mean", s.mean ? nlohmann::json(*s.mean) : nlohmann::json(nullptr)},
          {"std", s.std ? nlohmann::json(*s.std) : nlohmann::json(nullptr)}};
}

inline nlohmann::json to_json(const AggregateReport &a) {
  using nlohmann::json;
  json metrics = json::object();
  for (const auto col : kMetricColumns) {
    json m = stat_json(a.metrics.at(std::string(col)));
    m["unit"] = (col == "t_corr" || col == "iou" || col == "dsc") ? "%" : "";
    metrics[std::string(col)] = std::move(m);
  }
  const auto curve = [](const std::vector<CurveRow> &rows) {
    json out = json::array();
    for (const auto &r : rows)
      out.push_back({{"generation", r.generation},
                     {"t_corr", stat_json(r.t_corr)},
                     {"t_err", stat_json(r.t_err)}});
    return out;
  };
  return {{"runs", a.runs},
          {"samples", a.sample_ids.size()},
          {"subset",
           {{"rule", "ground truth and every run's generated object watertight"},
            {"ids", a.subset},
            {"fraction", a.sample_ids.empty() ? 0.0
                                              : static_cast<double>(a.subset.size()) /
                                                    static_cast<double>(a.sample_ids.size())}}},
          {"metrics", metrics},
          {"curves",
           {{"elite", curve(a.elite_curve)}, {"population_mean", curve(a.population_curve)}}}};
}

inline nlohmann::json to_json(const SampleResult &s, std::size_t run) {
  using nlohmann::json;
  json curve = json::array();
  for (const auto &p : s.curve) {
    curve.push_back({{"generation", p.generation},
                     {"elite_t_err", p.elite_t_err ? json(*p.elite_t_err) : json(nullptr)},
                     {"elite_t_corr", p.elite_t_corr ? json(*p.elite_t_corr) : json(nullptr)},
                     {"population_t_err", p.population_t_err ? json(*p.population_t_err) : json(nullptr)},
                     {"population_t_corr", p.population_t_corr ? json(*p.population_t_corr) : json(nullptr)}});
  }
  return {{"run", run},       {"id", s.id},         {"seed", s.seed},
          {"metrics", s.metrics}, {"elite_code", s.elite_code}, {"error", s.error},
          {"curve", curve}};
}

inline std::string format_optional(const std::optional<double> &v) {
  if (!v)
    return "";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, *v);
  return std::string(buf, r.ptr);
}

inline std::string curves_csv(const std::vector<CurveRow> &rows) {
  std::string out = "generation,t_corr_mean,t_corr_std,t_err_mean,t_err_std\n";
  for (const auto &r : rows)
    out += std::to_string(r.generation) + "," + format_optional(r.t_corr.mean) + "," +
           format_optional(r.t_corr.std) + "," + format_optional(r.t_err.mean) + "," +
           format_optional(r.t_err.std) + "\n";
  return out;
}

inline void write_text(const std::filesystem::path &path, const std::string &text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text))
    throw IoError("cannot write " + path.string());
}

struct OutputOptions {
  bool gallery = false;
  bool traces = true;
  int gallery_size = 256;
};

/// report.json, per_sample.jsonl, curves.csv (elite), curves_population.csv, traces/, gallery/.
inline void write_outputs(const std::filesystem::path &dir, const AggregateReport &agg,
                          const std::vector<RunReport> &runs, const OutputOptions &opts = {}) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  write_text(dir / "report.json", to_json(agg).dump(2) + "\n");
  std::string lines;
  for (std::size_t r = 0; r < runs.size(); ++r)
    for (const auto &s : runs[r].samples)
      lines += to_json(s, r).dump() + "\n";
  write_text(dir / "per_sample.jsonl", lines);
  write_text(dir / "curves.csv", curves_csv(agg.elite_curve));
  write_text(dir / "curves_population.csv", curves_csv(agg.population_curve));
  if (opts.traces) {
    fs::create_directories(dir / "traces");
    for (std::size_t r = 0; r < runs.size(); ++r)
      for (const auto &s : runs[r].samples)
        evolve::write_traces(s.traces, dir / "traces" / ("run" + std::to_string(r) + "_" + s.id + ".jsonl"));
  }
  if (opts.gallery) {
    fs::create_directories(dir / "gallery");
    for (std::size_t r = 0; r < runs.size(); ++r)
      for (const auto &s : runs[r].samples)
        if (s.elite_mesh)
          write_png(render_multiview(*s.elite_mesh, opts.gallery_size),
                    dir / "gallery" / ("run" + std::to_string(r) + "_" + s.id + ".png"));
  }
}

} // namespace evocad::harness
