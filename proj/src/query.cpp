#include "ppir/query.hpp"

#include "ppir/error.hpp"

#include <algorithm>

namespace ppir {

namespace {

std::string idx(std::size_t v) { return std::to_string(v); }

// Subclass indices already placed in some query, per class.
class UsedIndices {
 public:
  explicit UsedIndices(const std::vector<std::size_t>& sizes) {
    for (std::size_t mu : sizes) used_.emplace_back(mu + 1, false);
  }
  bool used(std::size_t i, std::size_t beta) const { return used_[i - 1][beta]; }
  void mark(std::size_t i, std::size_t beta) { used_[i - 1][beta] = true; }
  std::size_t size(std::size_t i) const { return used_[i - 1].size() - 1; }

 private:
  std::vector<std::vector<bool>> used_;
};

// [mu_i] minus used minus (optionally) a known set.
std::vector<std::size_t> fresh_pool(const UsedIndices& used, std::size_t i, const std::vector<std::size_t>* exclude) {
  std::vector<std::size_t> pool;
  for (std::size_t b = 1; b <= used.size(i); ++b) {
    if (used.used(i, b)) continue;
    if (exclude && std::binary_search(exclude->begin(), exclude->end(), b)) continue;
    pool.push_back(b);
  }
  return pool;
}

// known set minus used
std::vector<std::size_t> known_pool(const UsedIndices& used, std::size_t i, const std::vector<std::size_t>& known) {
  std::vector<std::size_t> pool;
  for (std::size_t b : known)
    if (!used.used(i, b)) pool.push_back(b);
  return pool;
}

std::size_t draw(Rng& rng, const std::vector<std::size_t>& pool, std::size_t j, std::size_t i) {
  if (pool.empty())
    throw Error(Errc::ExhaustedIndices, "no admissible subclass index for class " + idx(i) + " in query " + idx(j));
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  return pool[pick(rng)];
}

void require_valid(const Scenario& s, Mode mode) {
  const ValidationReport report = validate_scenario(s, mode);
  if (report.ok()) return;
  std::string failed;
  for (const auto& name : report.failed(CheckTier::guarantee)) failed += (failed.empty() ? "" : ", ") + name;
  throw Error(Errc::AssumptionViolated, std::string(to_string(mode)) + "-user checks failed: " + failed);
}

void require_class(const Scenario& s, std::size_t v) {
  if (v < 1 || v > s.class_count())
    throw Error(Errc::OutOfRange, "demand class " + idx(v) + " not in [1," + idx(s.class_count()) + "]");
}

}  // namespace

std::size_t phi(std::size_t j, std::size_t users) {
  if (j < 1 || users < 1) throw Error(Errc::OutOfRange, "phi needs j >= 1 and U >= 1");
  const std::size_t r = j % users;
  return r == 0 ? users : r;
}

QueryPlan gen_single_user(const Scenario& s, std::size_t demand, Rng& rng, bool force) {
  require_class(s, demand);
  if (!force) require_valid(s, Mode::single);

  const std::size_t gamma = s.class_count();
  const std::size_t eta = s.eta();
  const std::size_t m = s.k_un_of(1) + 1;
  const KnowledgeView known = s.user(1).view();
  UsedIndices used(s.classes().sizes());

  QueryPlan plan;
  plan.mode = Mode::single;
  plan.disclosed = s.disclosed(Mode::single);
  plan.secrets.demands = {demand};
  plan.queries.resize(m);
  for (std::size_t j = 1; j <= m; ++j) plan.queries[j - 1] = {j, std::vector<std::size_t>(gamma, 0)};

  auto place = [&](std::size_t j, std::size_t i, const std::vector<std::size_t>& pool) {
    const std::size_t b = draw(rng, pool, j, i);
    plan.queries[j - 1].subclass[i - 1] = b;
    used.mark(i, b);
  };

  if (known.identifiable(demand)) {
    std::uniform_int_distribution<std::size_t> pick_r(1, m);
    const std::size_t r = pick_r(rng);
    plan.secrets.designated = r;
    // The designated query goes first so that its known indices can never
    // have been spent by another query.
    for (std::size_t i = 1; i <= gamma; ++i) {
      if (i == demand)
        place(r, i, fresh_pool(used, i, &known.known_indices(i)));
      else if (known.identifiable(i))
        place(r, i, known_pool(used, i, known.known_indices(i)));
      else
        place(r, i, fresh_pool(used, i, nullptr));
    }
    for (std::size_t j = 1; j <= m; ++j) {
      if (j == r) continue;
      for (std::size_t i = 1; i <= gamma; ++i) place(j, i, fresh_pool(used, i, nullptr));
    }
    return plan;
  }

  for (std::size_t j = 1; j <= m; ++j) {
    const std::size_t t = (j - 1) % eta + 1;
    for (std::size_t i = 1; i <= gamma; ++i) {
      if (i == t)
        place(j, i, fresh_pool(used, i, &known.known_indices(i)));
      else if (known.identifiable(i))
        place(j, i, known_pool(used, i, known.known_indices(i)));
      else
        place(j, i, fresh_pool(used, i, nullptr));
    }
  }
  return plan;
}

QueryPlan gen_multi_user(const Scenario& s, std::span<const std::size_t> demands, Rng& rng, bool force) {
  const std::size_t users = s.user_count();
  if (demands.size() != users)
    throw Error(Errc::DimensionMismatch, idx(demands.size()) + " demands for " + idx(users) + " users");
  for (std::size_t v : demands) require_class(s, v);
  const std::size_t gamma = s.class_count();
  const std::size_t eta = s.eta();
  if ((eta - 1) % users != 0)
    throw Error(Errc::PartitionInfeasible, "eta-1=" + idx(eta - 1) + " is not a multiple of U=" + idx(users));
  if (!force) require_valid(s, Mode::multi);

  const std::size_t eta_p = s.eta_prime();
  const std::size_t m = s.k_un() + 1;
  std::vector<KnowledgeView> known;
  for (std::size_t u = 1; u <= users; ++u) known.push_back(s.user(u).view());
  UsedIndices used(s.classes().sizes());

  QueryPlan plan;
  plan.mode = Mode::multi;
  plan.disclosed = eta_p;
  plan.secrets.demands.assign(demands.begin(), demands.end());

  for (std::size_t j = 1; j <= m; ++j) {
    Query q{j, std::vector<std::size_t>(gamma, 0)};
    const std::size_t u = phi(j, users);
    const KnowledgeView& served = known[u - 1];

    std::size_t v = 0;
    if (j <= users && demands[j - 1] <= eta) {
      v = demands[j - 1];
    } else {
      // substitute: identifiable class with the most admissible indices
      std::size_t best = 0;
      for (std::size_t i = 1; i <= eta; ++i) {
        const std::size_t n = fresh_pool(used, i, &served.known_indices(i)).size();
        if (n > best) {
          best = n;
          v = i;
        }
      }
      if (v == 0) throw Error(Errc::ExhaustedIndices, "no identifiable class can serve user " + idx(u) + " in query " + idx(j));
    }
    q.subclass[v - 1] = draw(rng, fresh_pool(used, v, &served.known_indices(v)), j, v);
    used.mark(v, q.subclass[v - 1]);

    // Z = an ordered sample of eta'U classes from [eta] \ {v}; consecutive
    // blocks of eta' belong to users 1..U.
    std::vector<std::size_t> candidates;
    for (std::size_t i = 1; i <= eta; ++i)
      if (i != v) candidates.push_back(i);
    std::vector<std::size_t> owner(gamma + 1, 0);
    std::vector<std::vector<std::size_t>> blocks(users);
    for (std::size_t slot = 0; slot < eta_p * users; ++slot) {
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      const std::size_t at = pick(rng);
      const std::size_t t = candidates[at];
      candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(at));
      owner[t] = slot / eta_p + 1;
      blocks[slot / eta_p].push_back(t);
    }

    for (std::size_t t = 1; t <= gamma; ++t) {
      if (t == v) continue;
      const std::vector<std::size_t> pool = owner[t] ? known_pool(used, t, known[owner[t] - 1].known_indices(t))
                                                     : fresh_pool(used, t, nullptr);
      q.subclass[t - 1] = draw(rng, pool, j, t);
      used.mark(t, q.subclass[t - 1]);
    }

    plan.queries.push_back(std::move(q));
    plan.secrets.target_class.push_back(v);
    plan.secrets.served_user.push_back(u);
    plan.secrets.partition.push_back(std::move(blocks));
  }
  return plan;
}

QueryPlan generate_plan(const Scenario& s, Mode mode, std::span<const std::size_t> demands, Rng& rng, bool force) {
  if (mode == Mode::single) {
    if (demands.size() != 1) throw Error(Errc::DimensionMismatch, "single-user mode takes exactly one demand");
    return gen_single_user(s, demands[0], rng, force);
  }
  return gen_multi_user(s, demands, rng, force);
}

}  // namespace ppir
