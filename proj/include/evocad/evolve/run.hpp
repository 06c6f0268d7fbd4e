#pragma once

#include "evocad/evolve/trace.hpp"

namespace evocad::evolve {

struct RunResult {
  Individual elite;
  std::vector<GenerationTrace> traces; ///< generations 0..N, each as evaluated
};

/// Named random streams of one run.
struct RunStreams {
  Rng fewshot, selection, gate;
  explicit RunStreams(std::uint64_t seed)
      : fewshot(Rng::stream(seed, "few-shot")), selection(Rng::stream(seed, "selection")),
        gate(Rng::stream(seed, "mutation-gate")) {}
};

/// Initialization, then N rounds of evaluate, select, breed and update, then a final
/// evaluation whose best member is the answer.
inline RunResult run(std::string_view prompt, const EvoConfig &cfg, const lm::Backends &backends,
                     bridge::Engine &engine, const lm::FewShotStore &corpus) {
  cfg.validate();
  RunStreams rng(cfg.seed);
  int next_id = 0;
  InitLog init_log;
  Population pop = initialize(prompt, cfg, corpus, backends, engine, rng.fewshot, next_id, &init_log);
  if (std::none_of(pop.begin(), pop.end(), [](const Individual &i) { return i.ok(); }) &&
      std::all_of(pop.begin(), pop.end(),
                  [](const Individual &i) { return i.error.starts_with("backend:"); }))
    throw BackendError("every initial generation call failed: " + pop.front().error);

  RunResult result;
  for (int g = 0; g <= cfg.generations; ++g) {
    GenerationTrace trace;
    trace.generation = g;
    trace.evaluation = evaluate(pop, prompt, backends, cfg);
    trace.elite_id = best_of(pop).id;
    if (g == 0)
      trace.init_shots = std::move(init_log.shots);
    Population next;
    if (g < cfg.generations) {
      const auto probs = selection_probabilities(trace.evaluation.avg_ranks, cfg.lambda);
      trace.pairs = select_parent_pairs(trace.evaluation.avg_ranks, probs,
                                        cfg.population - cfg.elites, rng.selection);
      auto kids = breed(pop, trace.pairs, prompt, backends, engine, cfg, rng.gate, next_id,
                        &trace.operators);
      next = update(pop, std::move(kids), cfg);
    }
    trace.fewshot_draws = rng.fewshot.draws();
    trace.selection_draws = rng.selection.draws();
    trace.gate_draws = rng.gate.draws();
    trace.individuals = pop;
    result.traces.push_back(std::move(trace));
    if (g < cfg.generations)
      pop = std::move(next);
  }
  result.elite = best_of(pop);
  return result;
}

} // namespace evocad::evolve
