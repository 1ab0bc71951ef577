#pragma once

#include "ppir/scenario.hpp"

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace ppir {

using Rng = std::mt19937_64;

// One query: a subclass index for every class, in ascending class order.
struct Query {
  std::size_t index = 0;              // j, 1-based
  std::vector<std::size_t> subclass;  // subclass[i-1] = beta_i^{(j)}

  std::size_t beta(std::size_t i) const { return subclass.at(i - 1); }
  friend bool operator==(const Query&, const Query&) = default;
};

// What the server sees: the queries and the code-dimension parameter.
struct ServerView {
  std::vector<Query> queries;
  std::size_t disclosed = 0;
  friend bool operator==(const ServerView&, const ServerView&) = default;
};

// Client-side choices that never leave the users.
struct PlanSecrets {
  std::vector<std::size_t> demands;
  std::optional<std::size_t> designated;  // r: single-user, identifiable demand
  std::vector<std::size_t> target_class;  // multi-user: v per query
  std::vector<std::size_t> served_user;   // multi-user: phi(j)
  // multi-user: partition[j-1][u-1] = classes in Z_u for query j
  std::vector<std::vector<std::vector<std::size_t>>> partition;
};

struct QueryPlan {
  Mode mode = Mode::single;
  std::vector<Query> queries;
  std::size_t disclosed = 0;
  PlanSecrets secrets;

  ServerView server_view() const { return {queries, disclosed}; }
};

// phi(j) = j mod U when nonzero, else U.
std::size_t phi(std::size_t j, std::size_t users);

// Plans refuse scenarios that fail validate_scenario unless `force` is set;
// a forced plan may still throw ExhaustedIndices.
QueryPlan gen_single_user(const Scenario& s, std::size_t demand, Rng& rng, bool force = false);
QueryPlan gen_multi_user(const Scenario& s, std::span<const std::size_t> demands, Rng& rng, bool force = false);
QueryPlan generate_plan(const Scenario& s, Mode mode, std::span<const std::size_t> demands, Rng& rng,
                        bool force = false);

struct RuleResult {
  std::string rule;
  bool passed;
  std::string detail;
};

struct PlanValidity {
  std::vector<RuleResult> rules;
  bool ok() const noexcept;
  const RuleResult* find(std::string_view rule) const noexcept;
};

// Structural check of a published or generated query list against the
// selection rules of the single-user algorithm. When `designated` is absent
// any query may serve as r.
PlanValidity validate_plan_single(const Scenario& s, std::size_t demand, std::span<const Query> queries,
                                  std::optional<std::size_t> designated = std::nullopt);

// Same for the collaborative algorithm. The substitute class v and the
// partition of Z are searched for, so published plans validate without them.
PlanValidity validate_plan_multi(const Scenario& s, std::span<const std::size_t> demands,
                                 std::span<const Query> queries);

}  // namespace ppir
