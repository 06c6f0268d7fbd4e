#pragma once

#include "evocad/evolve/operators.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <vector>

namespace evocad::evolve {

struct GenerationTrace {
  int generation = 0;
  Population individuals;                    ///< as evaluated
  EvaluationLog evaluation;
  std::vector<std::vector<std::string>> init_shots; ///< generation 0 only
  std::vector<std::pair<int, int>> pairs;    ///< empty for the last generation
  std::vector<BreedRecord> operators;
  int elite_id = 0;
  std::uint64_t fewshot_draws = 0;
  std::uint64_t selection_draws = 0;
  std::uint64_t gate_draws = 0;
};

inline nlohmann::json to_json(const GenerationTrace &t) {
  using nlohmann::json;
  json inds = json::array();
  for (const auto &i : t.individuals) {
    inds.push_back({{"id", i.id},
                    {"code", i.code},
                    {"ok", i.ok()},
                    {"error", i.error},
                    {"self_debugged", i.self_debugged},
                    {"description", i.description ? json(*i.description) : json(nullptr)},
                    {"avg_rank", i.avg_rank ? json(*i.avg_rank) : json(nullptr)},
                    {"lineage", {{"op", i.lineage.op}, {"parents", i.lineage.parents}}}});
  }
  json ranks = json::array();
  for (const auto &r : t.evaluation.rankings)
    ranks.push_back({{"order", r.ranking.order}, {"retries", r.retries}, {"degraded", r.degraded}});
  json ops = json::array();
  for (const auto &o : t.operators)
    ops.push_back({{"child", o.child},
                   {"parents", {o.parents.first, o.parents.second}},
                   {"mutated", o.mutated},
                   {"ok", o.ok},
                   {"self_debugged", o.self_debugged}});
  json pairs = json::array();
  for (const auto &[a, b] : t.pairs)
    pairs.push_back({a, b});
  return {{"generation", t.generation},
          {"individuals", inds},
          {"rankings", ranks},
          {"init_shots", t.init_shots},
          {"pairs", pairs},
          {"operators", ops},
          {"elite_id", t.elite_id},
          {"elite_reevaluated", true},
          {"rng", {{"few_shot", t.fewshot_draws},
                   {"selection", t.selection_draws},
                   {"mutation_gate", t.gate_draws}}}};
}

inline std::string traces_jsonl(const std::vector<GenerationTrace> &traces) {
  std::string out;
  for (const auto &t : traces)
    out += to_json(t).dump() + "\n";
  return out;
}

inline void write_traces(const std::vector<GenerationTrace> &traces, const std::filesystem::path &path) {
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw IoError("cannot write " + path.string());
  f << traces_jsonl(traces);
}

} // namespace evocad::evolve
