#include "ppir/audit.hpp"
#include "ppir/error.hpp"
#include "ppir/seed.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <functional>
#include <map>

namespace ppir {

NonRepetition audit_non_repetition(std::span<const Query> queries) {
  NonRepetition out;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> first_seen;
  for (const Query& q : queries) {
    for (std::size_t i = 1; i <= q.subclass.size(); ++i) {
      auto [it, fresh] = first_seen.try_emplace({i, q.beta(i)}, q.index);
      if (!fresh && out.passed) {
        out.passed = false;
        out.witness = RepetitionWitness{i, q.beta(i), it->second, q.index};
      }
    }
  }
  return out;
}

PlanKey plan_key(std::span<const Query> queries) {
  PlanKey key;
  for (const Query& q : queries) key.insert(key.end(), q.subclass.begin(), q.subclass.end());
  return key;
}

namespace {

// Walks the generator's random choices depth-first. Each choice splits the
// current probability mass evenly over its options. The rules are restated
// here rather than shared with the generator, so the two can be compared.
class Enumerator {
 public:
  Enumerator(const Scenario& s, Mode mode, std::span<const std::size_t> demands, std::size_t limit, bool weigh)
      : s_(s), mode_(mode), demands_(demands.begin(), demands.end()), limit_(limit), weigh_(weigh) {
    gamma_ = s.class_count();
    eta_ = s.eta();
    users_ = mode == Mode::single ? 1 : s.user_count();
    m_ = (mode == Mode::single ? s.k_un_of(1) : s.k_un()) + 1;
    for (std::size_t i = 1; i <= gamma_; ++i) used_.emplace_back(s.classes().class_size(i) + 1, false);
    beta_.assign(m_, std::vector<std::size_t>(gamma_, 0));
    for (std::size_t u = 1; u <= users_; ++u) {
      std::vector<std::vector<std::size_t>> known(gamma_ + 1);
      for (std::size_t i = 1; i <= eta_; ++i) known[i] = s.user(u).ground_truth(i);
      known_.push_back(std::move(known));
    }
  }

  std::size_t run() {
    if (mode_ == Mode::single) {
      if (demands_.size() != 1) throw Error(Errc::DimensionMismatch, "single-user mode takes exactly one demand");
      single();
    } else {
      if (demands_.size() != users_) throw Error(Errc::DimensionMismatch, "one demand per user required");
      if ((eta_ - 1) % users_ != 0) throw Error(Errc::PartitionInfeasible, "eta-1 not divisible by U");
      multi_query(1);
    }
    return leaves_;
  }

  Distribution take() { return std::move(out_); }

 private:
  bool known(std::size_t u, std::size_t i, std::size_t b) const {
    const auto& k = known_[u - 1][i];
    return std::binary_search(k.begin(), k.end(), b);
  }

  std::vector<std::size_t> pool(std::size_t i, std::size_t exclude_user, bool only_known, std::size_t user) const {
    std::vector<std::size_t> p;
    for (std::size_t b = 1; b < used_[i - 1].size(); ++b) {
      if (used_[i - 1][b]) continue;
      if (only_known && !known(user, i, b)) continue;
      if (exclude_user && known(exclude_user, i, b)) continue;
      p.push_back(b);
    }
    return p;
  }
  std::vector<std::size_t> fresh(std::size_t i) const { return pool(i, 0, false, 0); }
  std::vector<std::size_t> new_to(std::size_t u, std::size_t i) const { return pool(i, u, false, 0); }
  std::vector<std::size_t> known_to(std::size_t u, std::size_t i) const { return pool(i, 0, true, u); }

  void branch(const std::vector<std::size_t>& options, const std::function<void(std::size_t)>& next) {
    if (options.empty()) throw Error(Errc::ExhaustedIndices, "an admissible pool is empty on some branch");
    const Rational saved = weight_;
    if (weigh_) weight_ = saved / options.size();
    for (std::size_t o : options) next(o);
    weight_ = saved;
  }

  void set(std::size_t j, std::size_t i, std::size_t b, const std::function<void()>& next) {
    beta_[j - 1][i - 1] = b;
    used_[i - 1][b] = true;
    next();
    used_[i - 1][b] = false;
    beta_[j - 1][i - 1] = 0;
  }

  void draw(std::size_t j, std::size_t i, const std::vector<std::size_t>& options, const std::function<void()>& next) {
    branch(options, [&](std::size_t b) { set(j, i, b, next); });
  }

  void leaf() {
    if (++leaves_ > limit_)
      throw Error(Errc::TooLargeToEnumerate, "more than " + std::to_string(limit_) + " plans");
    if (!weigh_) return;
    PlanKey key;
    for (const auto& row : beta_) key.insert(key.end(), row.begin(), row.end());
    out_[key] += weight_;
  }

  // ---- single user

  struct Cell {
    std::size_t j, i;
    enum { any, unknown, known } rule;
  };

  void fill(const std::vector<Cell>& cells, std::size_t at) {
    if (at == cells.size()) return leaf();
    const Cell& c = cells[at];
    const auto options = c.rule == Cell::any ? fresh(c.i) : c.rule == Cell::unknown ? new_to(1, c.i) : known_to(1, c.i);
    draw(c.j, c.i, options, [&] { fill(cells, at + 1); });
  }

  void single() {
    const std::size_t v = demands_[0];
    if (v <= eta_) {
      std::vector<std::size_t> rs(m_);
      for (std::size_t r = 1; r <= m_; ++r) rs[r - 1] = r;
      branch(rs, [&](std::size_t r) {
        std::vector<Cell> cells;
        for (std::size_t i = 1; i <= gamma_; ++i)
          cells.push_back({r, i, i == v ? Cell::unknown : i <= eta_ ? Cell::known : Cell::any});
        for (std::size_t j = 1; j <= m_; ++j)
          if (j != r)
            for (std::size_t i = 1; i <= gamma_; ++i) cells.push_back({j, i, Cell::any});
        fill(cells, 0);
      });
      return;
    }
    std::vector<Cell> cells;
    for (std::size_t j = 1; j <= m_; ++j) {
      const std::size_t t = (j - 1) % eta_ + 1;
      for (std::size_t i = 1; i <= gamma_; ++i)
        cells.push_back({j, i, i == t ? Cell::unknown : i <= eta_ ? Cell::known : Cell::any});
    }
    fill(cells, 0);
  }

  // ---- multiple users

  void multi_query(std::size_t j) {
    if (j > m_) return leaf();
    const std::size_t u = (j - 1) % users_ + 1;
    std::size_t v = 0;
    if (j <= users_ && demands_[j - 1] <= eta_) {
      v = demands_[j - 1];
    } else {
      std::size_t best = 0;
      for (std::size_t i = 1; i <= eta_; ++i) {
        const std::size_t n = new_to(u, i).size();
        if (n > best) {
          best = n;
          v = i;
        }
      }
      if (v == 0) throw Error(Errc::ExhaustedIndices, "no identifiable class can serve a user");
    }
    std::vector<std::size_t> candidates;
    for (std::size_t i = 1; i <= eta_; ++i)
      if (i != v) candidates.push_back(i);
    std::vector<std::size_t> owner(gamma_ + 1, 0);
    draw(j, v, new_to(u, v), [&] { partition(j, v, 0, candidates, owner); });
  }

  void partition(std::size_t j, std::size_t v, std::size_t slot, std::vector<std::size_t>& candidates,
                 std::vector<std::size_t>& owner) {
    const std::size_t per_user = (eta_ - 1) / users_;
    if (slot == per_user * users_) return rest(j, v, 1, owner);
    std::vector<std::size_t> positions(candidates.size());
    for (std::size_t p = 0; p < positions.size(); ++p) positions[p] = p;
    branch(positions, [&](std::size_t p) {
      const std::size_t t = candidates[p];
      candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(p));
      owner[t] = slot / per_user + 1;
      partition(j, v, slot + 1, candidates, owner);
      owner[t] = 0;
      candidates.insert(candidates.begin() + static_cast<std::ptrdiff_t>(p), t);
    });
  }

  void rest(std::size_t j, std::size_t v, std::size_t t, const std::vector<std::size_t>& owner) {
    if (t > gamma_) return multi_query(j + 1);
    if (t == v) return rest(j, v, t + 1, owner);
    draw(j, t, owner[t] ? known_to(owner[t], t) : fresh(t), [&] { rest(j, v, t + 1, owner); });
  }

  const Scenario& s_;
  Mode mode_;
  std::vector<std::size_t> demands_;
  std::size_t limit_;
  bool weigh_;
  std::size_t gamma_ = 0, eta_ = 0, users_ = 0, m_ = 0;
  std::vector<std::vector<std::vector<std::size_t>>> known_;  // [u-1][i]
  std::vector<std::vector<bool>> used_;
  std::vector<std::vector<std::size_t>> beta_;
  Rational weight_ = 1;
  std::size_t leaves_ = 0;
  Distribution out_;
};

using Counts = std::map<PlanKey, std::size_t>;

Distribution normalise(const Counts& counts, std::size_t samples) {
  Distribution d;
  for (const auto& [key, n] : counts) d.emplace(key, Rational(n, samples));
  return d;
}

PlanKey sample_key(const Scenario& s, Mode mode, std::span<const std::size_t> demands, std::uint64_t seed) {
  Rng rng(seed);
  return plan_key(generate_plan(s, mode, demands, rng, true).queries);
}

// Carries the first exception out of an OpenMP region.
class FirstError {
 public:
  template <class F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
#pragma omp critical(ppir_first_error)
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace

Distribution query_distribution(const Scenario& s, Mode mode, std::span<const std::size_t> demands,
                                std::size_t leaf_limit) {
  for (std::size_t v : demands)
    if (v < 1 || v > s.class_count()) throw Error(Errc::OutOfRange, "demand class " + std::to_string(v));
  // A counting pass first keeps oversized scenarios cheap to reject.
  Enumerator(s, mode, demands, leaf_limit, false).run();
  Enumerator e(s, mode, demands, leaf_limit, true);
  e.run();
  return e.take();
}

Distribution sample_distribution_serial(const Scenario& s, Mode mode, std::span<const std::size_t> demands,
                                        std::size_t samples, std::uint64_t seed) {
  Counts counts;
  for (std::size_t n = 0; n < samples; ++n) ++counts[sample_key(s, mode, demands, derive_seed(seed, n))];
  return normalise(counts, samples);
}

Distribution sample_distribution_parallel(const Scenario& s, Mode mode, std::span<const std::size_t> demands,
                                          std::size_t samples, std::uint64_t seed) {
  Counts counts;
  FirstError error;
#pragma omp parallel
  {
    Counts local;
#pragma omp for schedule(static)
    for (std::ptrdiff_t n = 0; n < static_cast<std::ptrdiff_t>(samples); ++n)
      error.run([&] { ++local[sample_key(s, mode, demands, derive_seed(seed, static_cast<std::uint64_t>(n)))]; });
#pragma omp critical(ppir_merge_counts)
    for (const auto& [key, c] : local) counts[key] += c;
  }
  error.rethrow();
  return normalise(counts, samples);
}

Rational total_variation(const Distribution& a, const Distribution& b) {
  Rational sum = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      sum += abs(ia->second);
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      sum += abs(ib->second);
      ++ib;
    } else {
      sum += abs(ia->second - ib->second);
      ++ia, ++ib;
    }
  }
  return sum / 2;
}

Rational total_mass(const Distribution& d) {
  Rational sum = 0;
  for (const auto& [key, p] : d) sum += p;
  return sum;
}

std::vector<std::vector<std::size_t>> demand_choices(const Scenario& s, Mode mode) {
  const std::size_t gamma = s.class_count();
  const std::size_t slots = mode == Mode::single ? 1 : s.user_count();
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> tuple(slots, 1);
  while (true) {
    out.push_back(tuple);
    std::size_t pos = slots;
    while (pos > 0 && tuple[pos - 1] == gamma) tuple[--pos] = 1;
    if (pos == 0) break;
    ++tuple[pos - 1];
  }
  return out;
}

Rational Census::pass_rate() const { return plans == 0 ? Rational(1) : Rational(passed, plans); }

namespace {

struct CensusItem {
  std::size_t order;
  CensusFailure failure;
};

// Tallies one (run, demand) cell. Returns a failure entry when the plan
// repeats an index or cannot be generated.
std::optional<CensusFailure> census_cell(const Scenario& s, Mode mode, std::size_t run,
                                         const std::vector<std::size_t>& demands, std::uint64_t seed, Census& into) {
  Rng rng(seed);
  QueryPlan plan;
  try {
    plan = generate_plan(s, mode, demands, rng, true);
  } catch (const Error& e) {
    ++into.generation_errors;
    return CensusFailure{run, demands, e.what()};
  }
  ++into.plans;
  const NonRepetition audit = audit_non_repetition(plan);
  if (audit.passed) {
    ++into.passed;
    return std::nullopt;
  }
  const auto& w = *audit.witness;
  return CensusFailure{run, demands,
                       "class " + std::to_string(w.cls) + " index " + std::to_string(w.index) + " in queries " +
                           std::to_string(w.first_query) + " and " + std::to_string(w.second_query)};
}

void keep_first(std::vector<CensusItem>& items) {
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.order < b.order; });
  if (items.size() > kCensusFailuresKept) items.resize(kCensusFailuresKept);
}

}  // namespace

Census non_repetition_census_serial(const Scenario& s, Mode mode, std::size_t runs, std::uint64_t seed) {
  Census c;
  c.runs = runs;
  const auto choices = demand_choices(s, mode);
  std::vector<CensusItem> failures;
  for (std::size_t n = 0; n < runs; ++n)
    for (std::size_t d = 0; d < choices.size(); ++d)
      if (auto f = census_cell(s, mode, n, choices[d], derive_seed(seed, n, d), c))
        failures.push_back({n * choices.size() + d, std::move(*f)});
  keep_first(failures);
  for (auto& item : failures) c.failures.push_back(std::move(item.failure));
  return c;
}

Census non_repetition_census_parallel(const Scenario& s, Mode mode, std::size_t runs, std::uint64_t seed) {
  Census c;
  c.runs = runs;
  const auto choices = demand_choices(s, mode);
  const std::size_t cells = runs * choices.size();
  std::vector<CensusItem> failures;
  FirstError error;
#pragma omp parallel
  {
    Census local;
    std::vector<CensusItem> local_failures;
#pragma omp for schedule(static)
    for (std::ptrdiff_t x = 0; x < static_cast<std::ptrdiff_t>(cells); ++x) {
      const std::size_t n = static_cast<std::size_t>(x) / choices.size();
      const std::size_t d = static_cast<std::size_t>(x) % choices.size();
      error.run([&] {
        auto f = census_cell(s, mode, n, choices[d], derive_seed(seed, n, d), local);
        if (f && local_failures.size() < kCensusFailuresKept)
          local_failures.push_back({static_cast<std::size_t>(x), std::move(*f)});
      });
    }
#pragma omp critical(ppir_merge_census)
    {
      c.plans += local.plans;
      c.passed += local.passed;
      c.generation_errors += local.generation_errors;
      for (auto& item : local_failures) failures.push_back(std::move(item));
    }
  }
  error.rethrow();
  keep_first(failures);
  for (auto& item : failures) c.failures.push_back(std::move(item.failure));
  return c;
}

PrivacyReport privacy_report(const Scenario& s, Mode mode, std::size_t runs, std::uint64_t seed) {
  PrivacyReport r;
  r.mode = mode;
  r.census = non_repetition_census_parallel(s, mode, runs, seed);
  r.demands = demand_choices(s, mode);

  std::vector<Distribution> laws;
  r.distribution_method = "exact";
  try {
    for (const auto& d : r.demands) laws.push_back(query_distribution(s, mode, d));
  } catch (const Error& e) {
    laws.clear();
    if (e.code() == Errc::TooLargeToEnumerate && runs > 0) {
      r.distribution_method = "monte_carlo";
      r.samples_per_demand = runs;
      r.note = "plan space too large to enumerate; distances are between empirical laws of " + std::to_string(runs) +
               " plans per demand and include sampling noise";
      for (std::size_t d = 0; d < r.demands.size(); ++d)
        laws.push_back(sample_distribution_parallel(s, mode, r.demands[d], runs, derive_seed(seed, ~0ULL, d)));
    } else {
      r.distribution_method = "unavailable";
      r.note = e.what();
    }
  }
  for (const auto& law : laws) r.support_sizes.push_back(law.size());
  for (std::size_t a = 0; a < laws.size(); ++a)
    for (std::size_t b = a + 1; b < laws.size(); ++b)
      r.distances.push_back({r.demands[a], r.demands[b], total_variation(laws[a], laws[b])});
  return r;
}

}  // namespace ppir
