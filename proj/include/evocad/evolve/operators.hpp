#pragma once

#include "evocad/bridge/engine.hpp"
#include "evocad/detail/parallel.hpp"
#include "evocad/evolve/config.hpp"
#include "evocad/evolve/individual.hpp"
#include "evocad/evolve/selection.hpp"
#include "evocad/lm/extract.hpp"
#include "evocad/lm/fewshot.hpp"
#include "evocad/lm/ranking.hpp"
#include "evocad/render/raster.hpp"

#include <functional>
#include <limits>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace evocad::evolve {

/// Asks the generator once, compiles, and on failure spends the single self-debug round.
inline void realize(Individual &ind, const std::function<std::string()> &ask,
                    std::string_view prompt, bridge::Engine &engine, const lm::RoleBinding &generator) {
  std::string error;
  try {
    ind.code = lm::extract_code(ask());
  } catch (const BackendError &e) {
    ind.error = std::string("backend: ") + e.what();
    return;
  } catch (const EmptyResponse &e) {
    error = e.what();
  }
  if (error.empty()) {
    auto r = engine.render(ind.code);
    if (r.ok()) {
      ind.mesh = std::move(r.mesh);
      ind.error.clear();
      return;
    }
    error = std::move(r.error);
  }
  ind.self_debugged = true;
  try {
    ind.code = lm::extract_code(generator.complete(
        lm::build_selfdebug_prompt(ind.code, error, prompt, engine.language())));
    auto r = engine.render(ind.code);
    if (r.ok()) {
      ind.mesh = std::move(r.mesh);
      ind.error.clear();
    } else {
      ind.error = std::move(r.error);
    }
  } catch (const BackendError &e) {
    ind.error = std::string("backend: ") + e.what();
  } catch (const EmptyResponse &e) {
    ind.error = e.what();
  }
}

struct InitLog {
  std::vector<std::vector<std::string>> shots; ///< few-shot names per individual
};

/// M individuals, each prompted with its own random k-subset of the corpus.
inline Population initialize(std::string_view prompt, const EvoConfig &cfg,
                             const lm::FewShotStore &corpus, const lm::Backends &backends,
                             bridge::Engine &engine, Rng &fewshot_rng, int &next_id,
                             InitLog *log = nullptr) {
  if (corpus.size() < static_cast<std::size_t>(cfg.few_shots))
    throw ConfigError("few-shot corpus has " + std::to_string(corpus.size()) +
                      " samples, need " + std::to_string(cfg.few_shots));
  Population pop(static_cast<std::size_t>(cfg.population));
  std::vector<std::vector<lm::FewShot>> shots;
  for (auto &ind : pop) {
    ind.id = next_id++;
    shots.push_back(corpus.sample(static_cast<std::size_t>(cfg.few_shots), fewshot_rng));
  }
  if (log) {
    for (const auto &s : shots) {
      log->shots.emplace_back();
      for (const auto &f : s)
        log->shots.back().push_back(f.name);
    }
  }
  evocad::detail::parallel_for(pop.size(), cfg.workers, [&](std::size_t i) {
    const auto messages = lm::build_init_prompt(prompt, shots[i], engine.language());
    realize(pop[i], [&] { return backends.generator.complete(messages); }, prompt, engine,
            backends.generator);
  });
  return pop;
}

struct EvaluationLog {
  std::vector<lm::RankOutcome> rankings;
  std::map<int, double> avg_ranks;
};

inline constexpr int kRankingRounds = 3;

/// Render, describe, rank three times, average. Failed members get rank M + 1.
inline EvaluationLog evaluate(Population &pop, std::string_view prompt,
                              const lm::Backends &backends, const EvoConfig &cfg) {
  if (pop.empty())
    throw ConstraintError("cannot evaluate an empty population");
  evocad::detail::parallel_for(pop.size(), cfg.workers, [&](std::size_t i) {
    auto &ind = pop[i];
    ind.image.reset();
    ind.description.reset();
    ind.avg_rank.reset();
    if (!ind.ok())
      return;
    Image img = render_multiview(*ind.mesh, cfg.render_size);
    img.provenance = ind.code;
    try {
      ind.description = lm::final_description(backends.describer.complete(lm::build_describe_prompt(img)));
    } catch (const Error &e) {
      ind.description = std::string("No description available (") + e.what() + ").";
    }
    ind.image = std::move(img);
  });

  EvaluationLog log;
  std::vector<std::pair<int, std::string>> described;
  for (const auto &ind : pop)
    if (ind.ok())
      described.emplace_back(ind.id, *ind.description);

  const double penalty = static_cast<double>(cfg.population + 1);
  if (described.size() >= 2) {
    std::vector<lm::Ranking> rs;
    for (int round = 0; round < kRankingRounds; ++round) {
      lm::RankOutcome out;
      try {
        out = lm::rank_once(prompt, described, backends.ranker);
      } catch (const BackendError &e) {
        out.degraded = true;
        out.replies.push_back(std::string("backend: ") + e.what());
        for (const auto &d : described)
          out.ranking.order.push_back(d.first);
      }
      rs.push_back(out.ranking);
      log.rankings.push_back(std::move(out));
    }
    log.avg_ranks = lm::average_rankings(rs);
  } else if (described.size() == 1) {
    log.avg_ranks[described.front().first] = 1.0;
  }
  for (auto &ind : pop) {
    if (!ind.ok())
      log.avg_ranks[ind.id] = penalty;
    ind.avg_rank = log.avg_ranks.at(ind.id);
  }
  return log;
}

/// Best first: compiled before failed, then lower average rank, then lower id.
inline bool fitter(const Individual &a, const Individual &b) {
  const auto key = [](const Individual &i) {
    return std::make_tuple(!i.ok(), i.avg_rank.value_or(std::numeric_limits<double>::infinity()), i.id);
  };
  return key(a) < key(b);
}

inline const Individual &best_of(const Population &pop) {
  if (pop.empty())
    throw ConstraintError("empty population has no elite");
  return *std::min_element(pop.begin(), pop.end(), fitter);
}

struct BreedRecord {
  int child = 0;
  std::pair<int, int> parents;
  bool mutated = false;
  bool ok = false;
  bool self_debugged = false;
};

/// One crossover child per pair; each child is replaced by its mutation with probability p_m.
inline Population breed(const Population &pop, const std::vector<std::pair<int, int>> &pairs,
                        std::string_view prompt, const lm::Backends &backends,
                        bridge::Engine &engine, const EvoConfig &cfg, Rng &gate, int &next_id,
                        std::vector<BreedRecord> *log = nullptr) {
  if (pairs.empty())
    throw ConstraintError("breed needs at least one pair");
  std::map<int, const Individual *> by_id;
  for (const auto &ind : pop)
    by_id[ind.id] = &ind;
  const auto view = [&](int id) -> lm::ParentView {
    const Individual &p = *by_id.at(id);
    std::string desc = p.description ? *p.description
                                     : "The program failed to build: " + p.error;
    return {p.code, std::move(desc)};
  };

  Population kids(pairs.size());
  std::vector<char> mutate(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    kids[i].id = next_id++;
    kids[i].lineage = {{pairs[i].first, pairs[i].second}, "crossover"};
    mutate[i] = gate.bernoulli(cfg.mutation_prob);
  }
  evocad::detail::parallel_for(kids.size(), cfg.workers, [&](std::size_t i) {
    auto &kid = kids[i];
    const auto messages = lm::build_crossover_prompt(view(pairs[i].first), view(pairs[i].second),
                                                     prompt, engine.language());
    realize(kid, [&] { return backends.generator.complete(messages); }, prompt, engine,
            backends.generator);
    if (!mutate[i])
      return;
    Individual mutant;
    mutant.id = kid.id;
    mutant.lineage = {kid.lineage.parents, "crossover+mutation"};
    const auto mmsg = lm::build_mutation_prompt(kid.code, prompt, engine.language());
    realize(mutant, [&] { return backends.generator.complete(mmsg); }, prompt, engine,
            backends.generator);
    mutant.self_debugged = mutant.self_debugged || kid.self_debugged;
    kid = std::move(mutant);
  });
  if (log)
    for (std::size_t i = 0; i < kids.size(); ++i)
      log->push_back({kids[i].id, pairs[i], static_cast<bool>(mutate[i]), kids[i].ok(),
                      kids[i].self_debugged});
  return kids;
}

/// Next generation: the best `elites` members unchanged, then all offspring.
inline Population update(const Population &pop, Population offspring, const EvoConfig &cfg) {
  if (offspring.size() != static_cast<std::size_t>(cfg.population - cfg.elites))
    throw ConstraintError("offspring count must be population - elites");
  Population sorted = pop;
  std::sort(sorted.begin(), sorted.end(), fitter);
  Population next;
  for (int e = 0; e < cfg.elites && e < static_cast<int>(sorted.size()); ++e) {
    Individual elite = sorted[static_cast<std::size_t>(e)];
    elite.image.reset();
    elite.description.reset();
    elite.avg_rank.reset();
    next.push_back(std::move(elite));
  }
  for (auto &kid : offspring)
    next.push_back(std::move(kid));
  return next;
}

} // namespace evocad::evolve
