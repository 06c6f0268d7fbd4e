#pragma once

#include "evocad/lm/backend.hpp"
#include "evocad/lm/prompts.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace evocad::lm {

/// Candidate ids, best first.
struct Ranking {
  std::vector<int> order;
  friend bool operator==(const Ranking &, const Ranking &) = default;
};

struct RankOutcome {
  Ranking ranking;
  int retries = 0;
  bool degraded = false;
  std::vector<std::string> replies;
};

/// Reads the first JSON array in `text`; accepts it only if it is a permutation of `ids`.
inline std::optional<Ranking> parse_ranking(std::string_view text, std::span<const int> ids) {
  const auto open = text.find('[');
  if (open == std::string_view::npos)
    return std::nullopt;
  const auto close = text.find(']', open);
  if (close == std::string_view::npos)
    return std::nullopt;
  const auto j = nlohmann::json::parse(text.substr(open, close - open + 1), nullptr, false);
  if (j.is_discarded() || !j.is_array())
    return std::nullopt;
  Ranking r;
  for (const auto &e : j) {
    if (!e.is_number_integer())
      return std::nullopt;
    r.order.push_back(e.get<int>());
  }
  std::vector<int> a = r.order, b(ids.begin(), ids.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b || std::adjacent_find(a.begin(), a.end()) != a.end())
    return std::nullopt;
  return r;
}

/// One ranking call. A reply that is not a permutation of the ids gets one re-ask;
/// a second failure yields the ids in the given order, flagged degraded.
inline RankOutcome rank_once(std::string_view user_prompt,
                             std::span<const std::pair<int, std::string>> descriptions,
                             const RoleBinding &ranker) {
  if (descriptions.size() < 2)
    throw ConstraintError("ranking needs at least two descriptions");
  std::vector<int> ids;
  for (const auto &d : descriptions)
    ids.push_back(d.first);

  auto messages = build_rank_prompt(user_prompt, descriptions);
  RankOutcome out;
  out.replies.push_back(ranker.complete(messages));
  if (auto r = parse_ranking(out.replies.back(), ids)) {
    out.ranking = std::move(*r);
    return out;
  }
  out.retries = 1;
  messages.emplace_back(Role::Assistant,
                        out.replies.back().empty() ? std::string("(empty)") : out.replies.back());
  messages.emplace_back(Role::User, std::string(kRankReask));
  out.replies.push_back(ranker.complete(messages));
  if (auto r = parse_ranking(out.replies.back(), ids)) {
    out.ranking = std::move(*r);
    return out;
  }
  out.ranking.order = ids;
  out.degraded = true;
  return out;
}

/// Mean 1-based rank per id over exactly three rankings of the same id set.
inline std::map<int, double> average_rankings(std::span<const Ranking> rs) {
  if (rs.size() != 3)
    throw ConstraintError("average_rankings expects exactly three rankings");
  const std::set<int> ids(rs[0].order.begin(), rs[0].order.end());
  if (ids.size() != rs[0].order.size())
    throw MismatchedIds("ranking repeats an id");
  std::map<int, double> sum;
  for (const auto &r : rs) {
    if (std::set<int>(r.order.begin(), r.order.end()) != ids || r.order.size() != ids.size())
      throw MismatchedIds("rankings cover different ids");
    for (std::size_t i = 0; i < r.order.size(); ++i)
      sum[r.order[i]] += static_cast<double>(i + 1);
  }
  for (auto &[id, s] : sum)
    s /= static_cast<double>(rs.size());
  return sum;
}

} // namespace evocad::lm
