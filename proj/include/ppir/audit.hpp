#pragma once

#include "ppir/query.hpp"
#include "ppir/rational.hpp"
#include "ppir/scenario.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ppir {

// Counting parameters behind every rate formula.
struct RateParams {
  std::size_t gamma = 0;
  std::size_t eta = 0;
  std::vector<std::size_t> mu;             // mu[i-1]
  std::vector<std::vector<std::size_t>> k;  // k[u-1][i-1]

  static RateParams from(const Scenario& s);

  std::size_t users() const noexcept { return k.size(); }
  std::size_t k_un_of(std::size_t u) const;
  std::size_t k_un() const;
  std::size_t eta_prime() const noexcept;
};

// Single-user formulas read user 1; the multi-user ones use k_un over all users.
Rational rate_isi(const RateParams& p);
Rational rate_usi(const RateParams& p);
Rational rate_multi(const RateParams& p);
Rational rate_naive_multi(const RateParams& p);

enum class Verdict { holds, fails, not_applicable };
std::string_view to_string(Verdict v) noexcept;

struct TheoremFlag {
  Verdict verdict = Verdict::not_applicable;
  std::vector<std::size_t> witnesses;  // classes breaking the hypothesis
  std::string detail;
};

struct ComparisonReport {
  Rational isi, usi, multi, naive_multi;
  Rational isi_over_usi;
  bool base_hypotheses = false;  // k_i > k_un (identifiable), mu_i - k_i >= ceil((k_un+1)/eta)
  TheoremFlag t2, t3, t4;

  bool any_holds() const noexcept;
};

// Evaluates each comparison theorem's hypothesis for user 1. Throws
// AssumptionViolated if a theorem reported as holding does not give
// R_isi >= R_usi.
ComparisonReport theorem_conditions(const RateParams& p);

struct RepetitionWitness {
  std::size_t cls = 0;
  std::size_t index = 0;
  std::size_t first_query = 0;
  std::size_t second_query = 0;
};

struct NonRepetition {
  bool passed = true;
  std::optional<RepetitionWitness> witness;
};

NonRepetition audit_non_repetition(std::span<const Query> queries);
inline NonRepetition audit_non_repetition(const QueryPlan& plan) { return audit_non_repetition(plan.queries); }

// Server-visible plan, flattened: beta_1^{(1)}..beta_Gamma^{(1)}, beta_1^{(2)}, ...
using PlanKey = std::vector<std::size_t>;
using Distribution = std::map<PlanKey, Rational>;

PlanKey plan_key(std::span<const Query> queries);

inline constexpr std::size_t kEnumerationLeafLimit = 1'000'000;

// Exact law of the server-visible plan, by walking every random choice the
// generator can make with its exact probability. Throws TooLargeToEnumerate
// past `leaf_limit` complete plans.
Distribution query_distribution(const Scenario& s, Mode mode, std::span<const std::size_t> demands,
                                std::size_t leaf_limit = kEnumerationLeafLimit);

// Empirical law from `samples` plans; plan n uses the stream derive_seed(seed, n).
Distribution sample_distribution_serial(const Scenario& s, Mode mode, std::span<const std::size_t> demands,
                                        std::size_t samples, std::uint64_t seed);
Distribution sample_distribution_parallel(const Scenario& s, Mode mode, std::span<const std::size_t> demands,
                                          std::size_t samples, std::uint64_t seed);

Rational total_variation(const Distribution& a, const Distribution& b);
Rational total_mass(const Distribution& d);

// Every demand choice of the mode: [Gamma] single, [Gamma]^U multi.
std::vector<std::vector<std::size_t>> demand_choices(const Scenario& s, Mode mode);

struct CensusFailure {
  std::size_t run = 0;
  std::vector<std::size_t> demands;
  std::string reason;
};

struct Census {
  std::size_t runs = 0;
  std::size_t plans = 0;
  std::size_t passed = 0;
  std::size_t generation_errors = 0;
  std::vector<CensusFailure> failures;  // first few, ordered by (run, demand)

  // passed / plans, or 1 when nothing ran
  Rational pass_rate() const;
};

inline constexpr std::size_t kCensusFailuresKept = 5;

// Run n, demand choice d draws its plan from derive_seed(seed, n, d).
Census non_repetition_census_serial(const Scenario& s, Mode mode, std::size_t runs, std::uint64_t seed);
Census non_repetition_census_parallel(const Scenario& s, Mode mode, std::size_t runs, std::uint64_t seed);

struct DistanceEntry {
  std::vector<std::size_t> demands_a, demands_b;
  Rational tv;
};

struct PrivacyReport {
  Mode mode = Mode::single;
  Census census;
  std::string distribution_method;  // "exact", "monte_carlo" or "unavailable"
  std::size_t samples_per_demand = 0;
  std::vector<std::vector<std::size_t>> demands;
  std::vector<std::size_t> support_sizes;  // per entry of `demands`
  std::vector<DistanceEntry> distances;
  std::string note;
};

PrivacyReport privacy_report(const Scenario& s, Mode mode, std::size_t runs, std::uint64_t seed);

}  // namespace ppir
