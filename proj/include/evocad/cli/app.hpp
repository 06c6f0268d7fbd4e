#pragma once

#include "evocad/cli/settings.hpp"
#include "evocad/harness.hpp"
#include "evocad/metrics.hpp"
#include "evocad/render.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

namespace evocad::cli {

enum ExitCode { kOk = 0, kConfigFailure = 1, kGenerationFailure = 2, kBackendFailure = 3 };

namespace detail {

/// Flags are collected as text and applied after the config file.
struct Overrides {
  std::map<std::string, std::string> values;
  std::vector<std::pair<CLI::Option *, std::string>> options;

  void add(CLI::App &app, const std::string &flag, const std::string &key, const std::string &help) {
    options.emplace_back(app.add_option(flag, values[key], help), key);
  }
  void apply(Settings &s) const {
    for (const auto &[opt, key] : options)
      if (opt->count() > 0)
        s.set(key, values.at(key));
  }
};

inline void add_search_flags(CLI::App &app, Overrides &o) {
  o.add(app, "--backend", "backend", "mock or wire");
  o.add(app, "--engine", "engine", "csg or external");
  o.add(app, "--pop", "pop", "population size M");
  o.add(app, "--gens", "gens", "generations N");
  o.add(app, "--shots", "shots", "few-shot samples k");
  o.add(app, "--pm", "pm", "mutation probability");
  o.add(app, "--lambda", "lambda", "selection pressure");
  o.add(app, "--elites", "elites", "elites carried per generation");
  o.add(app, "--seed", "seed", "master seed");
  o.add(app, "--out", "out", "output directory");
  o.add(app, "--fewshot-dir", "fewshot_dir", "directory of example programs");
  o.add(app, "--render-size", "render_size", "multiview image size in pixels");
  o.add(app, "--workers", "workers", "concurrent tasks per generation");
  o.add(app, "--base-url", "base_url", "chat-completions base URL");
  o.add(app, "--model", "model", "model name for all roles");
  o.add(app, "--timeout-s", "timeout_s", "per-call timeout in seconds");
  o.add(app, "--retries", "retries", "transport retries per call");
  o.add(app, "--runner", "runner", "external runner command line");
  o.add(app, "--runners", "runners", "external runner processes");
  o.add(app, "--script-timeout-s", "script_timeout_s", "external script timeout in seconds");
}

inline std::string trimmed_file(const std::string &path) {
  try {
    return std::string(lm::trim(read_file_bytes(path)));
  } catch (const IoError &e) {
    throw ConfigError(e.what());
  }
}

inline void write_settings(const Settings &s) {
  std::filesystem::create_directories(s.out);
  harness::write_text(std::filesystem::path(s.out) / "effective_config.txt", s.to_text());
}

inline std::string code_extension(const Settings &s) { return s.engine == "csg" ? ".csg" : ".py"; }

} // namespace detail

inline int cmd_generate(const Settings &s, const std::string &prompt) {
  if (prompt.empty())
    throw ConfigError("a prompt is required (--prompt or --prompt-file)");
  auto rt = make_runtime(s);
  detail::write_settings(s);
  const auto t0 = std::chrono::steady_clock::now();
  const auto result = evolve::run(prompt, s.evo, rt.backends(s.evo.seed), *rt.engine, rt.corpus);
  const std::filesystem::path out(s.out);
  evolve::write_traces(result.traces, out / "trace.jsonl");
  harness::write_text(out / ("elite" + detail::code_extension(s)), result.elite.code + "\n");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!result.elite.ok()) {
    std::cerr << "final elite failed to build: " << result.elite.error << "\n";
    return kGenerationFailure;
  }
  write_stl_file(*result.elite.mesh, out / "elite.stl");
  write_png(render_multiview(*result.elite.mesh, s.evo.render_size), out / "elite.png");
  std::cerr << "elite " << result.elite.id << " (avg rank " << result.elite.avg_rank.value_or(0)
            << ", chi " << euler_characteristic(*result.elite.mesh) << ") written to " << s.out
            << " in " << secs << " s\n";
  return kOk;
}

inline int cmd_bench(const Settings &s, const std::string &dataset) {
  if (dataset.empty())
    throw ConfigError("--dataset is required");
  auto rt = make_runtime(s);
  std::vector<std::string> warnings;
  std::vector<harness::Sample> samples;
  try {
    samples = harness::load_dataset(dataset, &warnings);
  } catch (const IoError &e) {
    throw ConfigError(e.what());
  } catch (const EmptyDataset &e) {
    throw ConfigError(e.what());
  }
  for (const auto &w : warnings)
    std::cerr << "skipped " << w << "\n";
  detail::write_settings(s);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<harness::RunReport> runs;
  harness::RunOptions opts;
  opts.voxel_resolution = s.resolution;
  opts.sample_workers = s.sample_workers;
  for (int r = 0; r < s.runs; ++r) {
    auto cfg = s.evo;
    cfg.seed = s.evo.seed + static_cast<std::uint64_t>(r);
    runs.push_back(harness::evaluate_run(samples, cfg, rt.backends, *rt.engine, rt.corpus, opts));
    for (const auto &smp : runs.back().samples)
      if (!smp.error.empty() && smp.error.starts_with("backend:") && smp.elite_code.empty())
        throw BackendError(smp.id + ": " + smp.error);
  }
  const auto agg = harness::aggregate(runs);
  harness::OutputOptions oo;
  oo.gallery = s.gallery;
  oo.gallery_size = s.evo.render_size;
  harness::write_outputs(s.out, agg, runs, oo);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto show = [&](const char *k) {
    const auto &st = agg.metrics.at(k);
    std::cerr << "  " << k << ": "
              << (st.mean ? std::to_string(*st.mean) : std::string("n/a")) << " ± "
              << (st.std ? std::to_string(*st.std) : std::string("n/a")) << "\n";
  };
  std::cerr << runs.size() << " run(s) over " << samples.size() << " samples, joint watertight subset "
            << agg.subset.size() << ", " << secs << " s\n";
  for (const auto k : harness::kMetricColumns)
    show(std::string(k).c_str());
  return kOk;
}

inline int cmd_compare(const std::string &a, const std::string &b, int resolution, std::uint64_t seed) {
  TriMesh ma, mb;
  try {
    ma = load_stl_file(a);
    mb = load_stl_file(b);
  } catch (const Error &e) {
    throw ConfigError(e.what());
  }
  IcpConfig icp;
  icp.seed = seed;
  const auto report = full_report(ma, mb, icp, resolution, seed);
  std::cout << nlohmann::json(report).dump(2) << "\n";
  return kOk;
}

inline int cmd_validate(const Settings &s, bool ping) {
  auto rt = make_runtime(s);
  nlohmann::json out{{"config", "ok"}, {"few_shots", rt.corpus.size()}, {"engine", s.engine}};
  const auto probe = s.engine == "csg" ? std::string("part z 0 1 {\n  rect 1 1;\n}\n")
                                       : std::string("import cadquery as cq\nresult = cq.Workplane().box(1, 1, 1)\n");
  const auto r = rt.engine->render(probe);
  out["engine_probe"] = r.ok() ? "ok" : r.error;
  if (s.backend == "mock" || ping) {
    const auto b = rt.backends(s.evo.seed);
    const std::vector<lm::ChatMessage> hello{{lm::Role::User, "Reply with the word OK."}};
    out["backend_probe"] = b.generator.complete(hello).empty() ? "empty reply" : "ok";
  } else {
    out["backend_probe"] = "skipped (use --ping)";
  }
  std::cout << out.dump(2) << "\n";
  return r.ok() ? kOk : kConfigFailure;
}

inline int cmd_export(const std::string &in, const std::string &out) {
  std::string text;
  try {
    text = read_file_bytes(in);
  } catch (const IoError &e) {
    throw ConfigError(e.what());
  }
  const auto mesh = csg::compile(csg::parse(text));
  write_stl_file(mesh, out);
  std::cerr << mesh.faces().size() << " faces, chi " << euler_characteristic(mesh) << "\n";
  return kOk;
}

/// Entry point; returns the process exit code.
inline int main(int argc, char **argv) {
  CLI::App app{"Evolutionary CAD program search"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key = value settings file");

  detail::Overrides gen_o, bench_o, val_o;
  std::string prompt, prompt_file, dataset, cmp_a, cmp_b, exp_in, exp_out;
  int cmp_res = kDefaultVoxelResolution;
  std::uint64_t cmp_seed = 0;
  bool ping = false;

  auto *gen = app.add_subcommand("generate", "search for a program matching one prompt");
  detail::add_search_flags(*gen, gen_o);
  gen->add_option("--prompt", prompt, "prompt text");
  gen->add_option("--prompt-file", prompt_file, "file holding the prompt");

  auto *bench = app.add_subcommand("bench", "evaluate a dataset over several runs");
  detail::add_search_flags(*bench, bench_o);
  bench->add_option("--dataset", dataset, "dataset root")->required();
  bench_o.add(*bench, "--runs", "runs", "independent runs");
  bench_o.add(*bench, "--resolution", "resolution", "voxel resolution for IoU/DSC");
  bench_o.add(*bench, "--sample-workers", "sample_workers", "samples evaluated concurrently");
  bench_o.add(*bench, "--gallery", "gallery", "write multiview PNGs of final elites (true/false)");

  auto *cmp = app.add_subcommand("compare", "score one STL against another");
  cmp->add_option("generated", cmp_a, "generated STL")->required();
  cmp->add_option("ground_truth", cmp_b, "ground-truth STL")->required();
  cmp->add_option("--resolution", cmp_res, "voxel resolution");
  cmp->add_option("--seed", cmp_seed, "sampling seed");

  auto *val = app.add_subcommand("validate", "check settings, corpus, engine and backend");
  detail::add_search_flags(*val, val_o);
  val->add_flag("--ping", ping, "also call the wire backend");

  auto *exp = app.add_subcommand("export", "compile a csg_mini program to STL");
  exp->add_option("program", exp_in, "csg_mini source")->required();
  exp->add_option("stl", exp_out, "output STL")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigFailure;
  }

  try {
    Settings s;
    if (!config_path.empty())
      load_config_file(s, config_path);
    if (gen->parsed()) {
      gen_o.apply(s);
      if (!prompt_file.empty())
        prompt = detail::trimmed_file(prompt_file);
      return cmd_generate(s, prompt);
    }
    if (bench->parsed()) {
      bench_o.apply(s);
      return cmd_bench(s, dataset);
    }
    if (cmp->parsed())
      return cmd_compare(cmp_a, cmp_b, cmp_res, cmp_seed);
    if (val->parsed()) {
      val_o.apply(s);
      return cmd_validate(s, ping);
    }
    if (exp->parsed())
      return cmd_export(exp_in, exp_out);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const BackendError &e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return kBackendFailure;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kGenerationFailure;
  }
  return kConfigFailure;
}

} // namespace evocad::cli
