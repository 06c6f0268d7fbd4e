#pragma once

#include "evocad/bridge.hpp"
#include "evocad/evolve/config.hpp"
#include "evocad/geometry/stl.hpp"
#include "evocad/harness/evaluate.hpp"
#include "evocad/lm.hpp"

#include <charconv>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>

namespace evocad::cli {

/// Every tunable, with defaults. Filled from a key = value file, then from flags.
struct Settings {
  std::string backend = "mock"; ///< mock | wire
  std::string engine = "csg";   ///< csg | external
  evolve::EvoConfig evo;
  std::string out = "evocad_out";
  std::string fewshot_dir = "data/fewshot";

  std::string base_url = "http://127.0.0.1:8080/v1";
  std::string api_key_env = "EVOCAD_API_KEY";
  std::string generator_model = "gpt-4o";
  std::string describer_model = "gpt-4o";
  std::string ranker_model = "o3-mini";
  double timeout_s = 60.0;
  int retries = 3;
  std::string image_part = "inline"; ///< inline | data-url
  int in_flight = lm::kDefaultInFlightCap;

  std::string runner = "python3 -m cadquery_runner";
  int runners = bridge::kDefaultRunnerCount;
  double script_timeout_s = 30.0;

  int resolution = kDefaultVoxelResolution;
  int runs = 3;
  int sample_workers = 2;
  bool gallery = false;

  /// Sets one key from text. Throws ConfigError on unknown keys or bad values.
  void set(const std::string &key, const std::string &value) {
    const auto as_int = [&] {
      int v = 0;
      const auto r = std::from_chars(value.data(), value.data() + value.size(), v);
      if (r.ec != std::errc() || r.ptr != value.data() + value.size())
        throw ConfigError(key + ": not an integer: " + value);
      return v;
    };
    const auto as_u64 = [&] {
      std::uint64_t v = 0;
      const auto r = std::from_chars(value.data(), value.data() + value.size(), v);
      if (r.ec != std::errc() || r.ptr != value.data() + value.size())
        throw ConfigError(key + ": not an unsigned integer: " + value);
      return v;
    };
    const auto as_double = [&] {
      double v = 0;
      const auto r = std::from_chars(value.data(), value.data() + value.size(), v);
      if (r.ec != std::errc() || r.ptr != value.data() + value.size())
        throw ConfigError(key + ": not a number: " + value);
      return v;
    };
    const auto as_bool = [&] {
      if (value == "true" || value == "1" || value == "yes")
        return true;
      if (value == "false" || value == "0" || value == "no")
        return false;
      throw ConfigError(key + ": not a boolean: " + value);
    };
    const auto one_of = [&](std::initializer_list<const char *> allowed) {
      for (const char *a : allowed)
        if (value == a)
          return value;
      throw ConfigError(key + ": unsupported value " + value);
    };

    if (key == "backend") backend = one_of({"mock", "wire"});
    else if (key == "engine") engine = one_of({"csg", "external"});
    else if (key == "pop") evo.population = as_int();
    else if (key == "gens") evo.generations = as_int();
    else if (key == "shots") evo.few_shots = as_int();
    else if (key == "pm") evo.mutation_prob = as_double();
    else if (key == "lambda") evo.lambda = as_double();
    else if (key == "elites") evo.elites = as_int();
    else if (key == "seed") evo.seed = as_u64();
    else if (key == "render_size") evo.render_size = as_int();
    else if (key == "workers") evo.workers = as_int();
    else if (key == "out") out = value;
    else if (key == "fewshot_dir") fewshot_dir = value;
    else if (key == "base_url") base_url = value;
    else if (key == "api_key_env") api_key_env = value;
    else if (key == "model") generator_model = describer_model = ranker_model = value;
    else if (key == "generator_model") generator_model = value;
    else if (key == "describer_model") describer_model = value;
    else if (key == "ranker_model") ranker_model = value;
    else if (key == "timeout_s") timeout_s = as_double();
    else if (key == "retries") retries = as_int();
    else if (key == "image_part") image_part = one_of({"inline", "data-url"});
    else if (key == "in_flight") in_flight = as_int();
    else if (key == "runner") runner = value;
    else if (key == "runners") runners = as_int();
    else if (key == "script_timeout_s") script_timeout_s = as_double();
    else if (key == "resolution") resolution = as_int();
    else if (key == "runs") runs = as_int();
    else if (key == "sample_workers") sample_workers = as_int();
    else if (key == "gallery") gallery = as_bool();
    else throw ConfigError("unknown setting: " + key);
  }

  void validate() const {
    evo.validate();
    if (!(timeout_s > 0) || !(script_timeout_s > 0))
      throw ConfigError("timeouts must be positive");
    if (retries < 0)
      throw ConfigError("retries must be non-negative");
    if (in_flight < 1 || runners < 1 || sample_workers < 1)
      throw ConfigError("in_flight, runners and sample_workers must be at least 1");
    if (resolution < 2)
      throw ConfigError("resolution must be at least 2");
    if (runs < 1)
      throw ConfigError("runs must be at least 1");
  }

  /// Sorted key = value lines, loadable by load_file.
  std::string to_text() const {
    const auto num = [](double v) {
      char buf[64];
      return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
    };
    const std::map<std::string, std::string> kv{
        {"backend", backend},
        {"engine", engine},
        {"pop", std::to_string(evo.population)},
        {"gens", std::to_string(evo.generations)},
        {"shots", std::to_string(evo.few_shots)},
        {"pm", num(evo.mutation_prob)},
        {"lambda", num(evo.lambda)},
        {"elites", std::to_string(evo.elites)},
        {"seed", std::to_string(evo.seed)},
        {"render_size", std::to_string(evo.render_size)},
        {"workers", std::to_string(evo.workers)},
        {"out", out},
        {"fewshot_dir", fewshot_dir},
        {"base_url", base_url},
        {"api_key_env", api_key_env},
        {"generator_model", generator_model},
        {"describer_model", describer_model},
        {"ranker_model", ranker_model},
        {"timeout_s", num(timeout_s)},
        {"retries", std::to_string(retries)},
        {"image_part", image_part},
        {"in_flight", std::to_string(in_flight)},
        {"runner", runner},
        {"runners", std::to_string(runners)},
        {"script_timeout_s", num(script_timeout_s)},
        {"resolution", std::to_string(resolution)},
        {"runs", std::to_string(runs)},
        {"sample_workers", std::to_string(sample_workers)},
        {"gallery", gallery ? "true" : "false"},
    };
    std::string out_text;
    for (const auto &[k, v] : kv)
      out_text += k + " = " + v + "\n";
    return out_text;
  }
};

/// Applies `key = value` lines. Blank lines, `#` comments and `[section]` headers
/// are ignored; values may be quoted.
inline void apply_config_text(Settings &s, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (const auto hash = line.find('#'); hash != std::string::npos &&
                                           line.find('"') == std::string::npos)
      line.erase(hash);
    const auto t = std::string(lm::trim(line));
    if (t.empty() || t.front() == '[')
      continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(n) + ": expected key = value");
    const std::string key(lm::trim(std::string_view(t).substr(0, eq)));
    std::string value(lm::trim(std::string_view(t).substr(eq + 1)));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    try {
      s.set(key, value);
    } catch (const ConfigError &e) {
      throw ConfigError("config line " + std::to_string(n) + ": " + e.what());
    }
  }
}

inline void load_config_file(Settings &s, const std::filesystem::path &path) {
  std::string text;
  try {
    text = read_file_bytes(path);
  } catch (const IoError &e) {
    throw ConfigError(e.what());
  }
  apply_config_text(s, text);
}

inline std::vector<std::string> split_command(const std::string &cmd) {
  std::vector<std::string> out;
  std::istringstream in(cmd);
  for (std::string w; in >> w;)
    out.push_back(w);
  return out;
}

/// Everything a subcommand needs to run the search.
struct Runtime {
  std::shared_ptr<lm::Gateway> gateway; ///< wire mode: shared by all roles and samples
  std::unique_ptr<bridge::Engine> engine;
  lm::FewShotStore corpus;
  harness::BackendFactory backends;
};

inline lm::Backends bind_roles(const Settings &s, std::shared_ptr<lm::Backend> b) {
  const auto role = [&](lm::ModelRole r, const std::string &model) {
    auto c = lm::ModelRoleConfig::defaults(r, s.backend == "mock" ? "mock" : model);
    c.max_retries = s.retries;
    c.timeout = std::chrono::milliseconds(static_cast<long>(s.timeout_s * 1000));
    return lm::RoleBinding{b, c};
  };
  return {role(lm::ModelRole::Generator, s.generator_model),
          role(lm::ModelRole::Describer, s.describer_model),
          role(lm::ModelRole::Ranker, s.ranker_model)};
}

inline Runtime make_runtime(const Settings &s) {
  s.validate();
  Runtime rt;
  try {
    rt.corpus = lm::FewShotStore::load_dir(s.fewshot_dir);
  } catch (const IoError &e) {
    throw ConfigError(e.what());
  }
  if (rt.corpus.size() < static_cast<std::size_t>(s.evo.few_shots))
    throw ConfigError("few-shot corpus " + s.fewshot_dir + " has " +
                      std::to_string(rt.corpus.size()) + " samples, need " +
                      std::to_string(s.evo.few_shots));
  if (s.engine == "csg") {
    rt.engine = std::make_unique<bridge::CsgEngine>();
  } else {
    bridge::ExternalConfig ec;
    ec.command = split_command(s.runner);
    ec.runners = s.runners;
    ec.timeout = std::chrono::milliseconds(static_cast<long>(s.script_timeout_s * 1000));
    ec.out_dir = std::filesystem::absolute(std::filesystem::path(s.out) / "runner");
    rt.engine = std::make_unique<bridge::ExternalEngine>(ec);
  }
  if (s.backend == "mock") {
    const int cap = s.in_flight;
    rt.backends = [s, cap](std::uint64_t seed) {
      auto m = std::make_shared<lm::Gateway>(
          std::make_shared<lm::MockBackend>(mix64(seed ^ fnv1a("mock"))), cap);
      return bind_roles(s, m);
    };
  } else {
    lm::WireConfig wc;
    wc.base_url = s.base_url;
    wc.api_key_env = s.api_key_env;
    wc.image_part = s.image_part == "inline" ? lm::ImagePart::Inline : lm::ImagePart::DataUrl;
    rt.gateway = std::make_shared<lm::Gateway>(std::make_shared<lm::WireBackend>(wc), s.in_flight);
    auto gw = rt.gateway;
    rt.backends = [s, gw](std::uint64_t) { return bind_roles(s, gw); };
  }
  return rt;
}

} // namespace evocad::cli
