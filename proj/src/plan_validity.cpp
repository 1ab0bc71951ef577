#include "ppir/error.hpp"
#include "ppir/query.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace ppir {

namespace {

std::string idx(std::size_t v) { return std::to_string(v); }

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "; " : "") + parts[i];
  return s;
}

class RuleSet {
 public:
  void add(std::string rule, const std::vector<std::string>& violations) {
    out_.rules.push_back({std::move(rule), violations.empty(), join(violations)});
  }
  PlanValidity take() { return std::move(out_); }

 private:
  PlanValidity out_;
};

// Rules shared by both algorithms. Returns false when the queries are too
// malformed for the per-line rules to be evaluated.
bool structural_rules(const Scenario& s, std::size_t expected_length, std::span<const Query> queries, RuleSet& rs) {
  std::vector<std::string> v;
  if (queries.size() != expected_length)
    v.push_back(idx(queries.size()) + " queries, expected k_un+1=" + idx(expected_length));
  rs.add("plan_length", v);

  v.clear();
  for (std::size_t j = 0; j < queries.size(); ++j)
    if (queries[j].index != j + 1) v.push_back("position " + idx(j + 1) + " holds query " + idx(queries[j].index));
  rs.add("query_indices", v);

  v.clear();
  for (const Query& q : queries) {
    if (q.subclass.size() != s.class_count()) {
      v.push_back("query " + idx(q.index) + " has " + idx(q.subclass.size()) + " pairs");
      continue;
    }
    for (std::size_t i = 1; i <= s.class_count(); ++i)
      if (q.beta(i) < 1 || q.beta(i) > s.classes().class_size(i))
        v.push_back("query " + idx(q.index) + " class " + idx(i) + " index " + idx(q.beta(i)));
  }
  const bool well_formed = v.empty();
  rs.add("pairs_in_range", v);

  v.clear();
  if (well_formed) {
    for (std::size_t i = 1; i <= s.class_count(); ++i) {
      std::set<std::size_t> seen;
      for (const Query& q : queries)
        if (!seen.insert(q.beta(i)).second) v.push_back("class " + idx(i) + " index " + idx(q.beta(i)) + " repeated");
    }
  }
  rs.add("non_repetition", v);
  return well_formed;
}

// Can classes [eta] \ {v} be split into U blocks of eta' so that every class
// in block u carries an index user u knows? Kuhn matching over user slots.
bool partition_exists(const Scenario& s, const Query& q, std::size_t v) {
  const std::size_t users = s.user_count();
  const std::size_t eta = s.eta();
  if ((eta - 1) % users != 0) return false;
  const std::size_t per_user = (eta - 1) / users;
  std::vector<std::size_t> classes;
  for (std::size_t i = 1; i <= eta; ++i)
    if (i != v) classes.push_back(i);
  const std::size_t slots = per_user * users;
  std::vector<std::ptrdiff_t> slot_owner(slots, -1);

  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t c, std::vector<bool>& seen) {
    for (std::size_t slot = 0; slot < slots; ++slot) {
      const std::size_t u = slot / per_user + 1;
      if (seen[slot] || !s.user(u).view().knows(classes[c], q.beta(classes[c]))) continue;
      seen[slot] = true;
      if (slot_owner[slot] < 0 || augment(static_cast<std::size_t>(slot_owner[slot]), seen)) {
        slot_owner[slot] = static_cast<std::ptrdiff_t>(c);
        return true;
      }
    }
    return false;
  };
  for (std::size_t c = 0; c < classes.size(); ++c) {
    std::vector<bool> seen(slots, false);
    if (!augment(c, seen)) return false;
  }
  return true;
}

}  // namespace

bool PlanValidity::ok() const noexcept {
  return std::all_of(rules.begin(), rules.end(), [](const RuleResult& r) { return r.passed; });
}

const RuleResult* PlanValidity::find(std::string_view rule) const noexcept {
  for (const auto& r : rules)
    if (r.rule == rule) return &r;
  return nullptr;
}

PlanValidity validate_plan_single(const Scenario& s, std::size_t demand, std::span<const Query> queries,
                                  std::optional<std::size_t> designated) {
  RuleSet rs;
  if (!structural_rules(s, s.k_un_of(1) + 1, queries, rs)) return rs.take();
  const KnowledgeView known = s.user(1).view();
  const std::size_t eta = s.eta();

  if (known.identifiable(demand)) {
    // (i): unknown index from the demand class, known indices from every
    // other identifiable class
    auto designated_ok = [&](const Query& q) {
      for (std::size_t i = 1; i <= eta; ++i) {
        const bool knows = known.knows(i, q.beta(i));
        if (i == demand ? knows : !knows) return false;
      }
      return true;
    };
    std::vector<std::string> v;
    if (designated) {
      if (*designated < 1 || *designated > queries.size() || !designated_ok(queries[*designated - 1]))
        v.push_back("query " + idx(*designated) + " does not satisfy the designated-query rule");
    } else if (std::none_of(queries.begin(), queries.end(), designated_ok)) {
      v.push_back("no query carries a new index of class " + idx(demand) + " with known indices elsewhere");
    }
    rs.add("designated_query", v);
    return rs.take();
  }

  std::vector<std::string> unknown_rule, known_rule;
  for (const Query& q : queries) {
    const std::size_t t = (q.index - 1) % eta + 1;
    if (known.knows(t, q.beta(t)))
      unknown_rule.push_back("query " + idx(q.index) + ": class " + idx(t) + " index " + idx(q.beta(t)) + " is known");
    for (std::size_t i = 1; i <= eta; ++i)
      if (i != t && !known.knows(i, q.beta(i)))
        known_rule.push_back("query " + idx(q.index) + ": class " + idx(i) + " index " + idx(q.beta(i)) + " is not known");
  }
  rs.add("rotation_unknown", unknown_rule);
  rs.add("rotation_known", known_rule);
  return rs.take();
}

PlanValidity validate_plan_multi(const Scenario& s, std::span<const std::size_t> demands,
                                 std::span<const Query> queries) {
  RuleSet rs;
  const std::size_t users = s.user_count();
  std::vector<std::string> v;
  if (demands.size() != users) v.push_back(idx(demands.size()) + " demands for " + idx(users) + " users");
  if ((s.eta() - 1) % users != 0) v.push_back("eta-1 not divisible by U");
  rs.add("demands", v);
  const bool well_formed = structural_rules(s, s.k_un() + 1, queries, rs);
  if (!well_formed || demands.size() != users) return rs.take();

  const std::size_t eta = s.eta();
  std::vector<std::string> target_rule, partition_rule;
  for (const Query& q : queries) {
    const std::size_t u = phi(q.index, users);
    std::vector<std::size_t> candidates;
    if (q.index <= users && demands[q.index - 1] <= eta)
      candidates.push_back(demands[q.index - 1]);
    else
      for (std::size_t i = 1; i <= eta; ++i) candidates.push_back(i);

    bool any_target = false, any_partition = false;
    for (std::size_t c : candidates) {
      if (s.user(u).view().knows(c, q.beta(c))) continue;
      any_target = true;
      if (partition_exists(s, q, c)) {
        any_partition = true;
        break;
      }
    }
    if (!any_target) target_rule.push_back("query " + idx(q.index) + ": no admissible new index for user " + idx(u));
    else if (!any_partition)
      partition_rule.push_back("query " + idx(q.index) + ": known indices cannot be split among users");
  }
  rs.add("target_unknown_to_served_user", target_rule);
  rs.add("known_partition", partition_rule);
  return rs.take();
}

}  // namespace ppir
