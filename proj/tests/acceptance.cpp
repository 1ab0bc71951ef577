// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "support.hpp"

#include "ppir/audit.hpp"
#include "ppir/cli.hpp"
#include "ppir/exchange.hpp"
#include "ppir/mds.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace ppir;
namespace fs = std::filesystem;

namespace {

// Pinned budgets and tolerances.
constexpr double kGoldenBudgetMs = 1.0;
constexpr double kRateBudgetMs = 1000.0;
constexpr double kSweepBudgetMs = 60'000.0;
constexpr double kMdsBudgetMs = 30'000.0;
constexpr double kTheoremBudgetMs = 1000.0;
constexpr double kDistributionBudgetMs = 30'000.0;
constexpr double kMonteCarloTolerance = 0.02;
constexpr std::size_t kMonteCarloSamples = 100'000;
constexpr std::size_t kSeedsPerDemand = 100;
constexpr std::size_t kRandomScenariosPerMode = 12;
constexpr std::size_t kMessagesPerSubset = 50;
constexpr std::size_t kTheoremParameterSets = 60;

struct Outcome {
  bool passed = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

void require(Outcome& o, bool condition, const std::string& what) {
  if (!condition && o.passed) {
    o.passed = false;
    o.detail = what;
  }
}

std::string show(std::span<const Symbol> v) {
  std::ostringstream s;
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "[") << v[i];
  s << "]";
  return s.str();
}

const PrimeField kGf11(11);

Outcome encode_golden() {
  Outcome o;
  const auto start = Clock::now();
  const Generator g = generator_from_explicit(cli::reference_generator(), kGf11);
  const auto c1 = encode(g, std::vector<Symbol>{0, 1, 9, 6, 8});
  const auto c2 = encode(g, std::vector<Symbol>{1, 7, 4, 1, 3});
  const double ms = elapsed_ms(start);
  require(o, c1 == std::vector<Symbol>{0, 1, 9, 6, 8, 10, 8, 10}, "m1 -> " + show(c1));
  require(o, c2 == std::vector<Symbol>{1, 7, 4, 1, 3, 0, 0, 7}, "m2 -> " + show(c2));
  require(o, ms < kGoldenBudgetMs, "took " + std::to_string(ms) + " ms");
  return o;
}

Outcome decode_golden() {
  Outcome o;
  const auto start = Clock::now();
  const Generator g = generator_from_explicit(cli::reference_generator(), kGf11);
  const std::vector<std::size_t> positions{0, 1, 5, 6, 7};
  const auto m = decode_from_positions(g, positions, std::vector<Symbol>{0, 1, 10, 8, 10});
  const double ms = elapsed_ms(start);
  require(o, m == std::vector<Symbol>{0, 1, 9, 6, 8}, "decoded " + show(m));
  const Scenario s = test::fixture("single_user_gf11");
  const std::size_t w23 = s.classes().pair_to_global(3, 5);
  const auto stored = s.store().message(w23);
  require(o, w23 == 23 && m[2] == 9 && stored[0] == 9 && stored[1] == 4, "third slot is not W23 = (9,4)");
  require(o, ms < kGoldenBudgetMs, "took " + std::to_string(ms) + " ms");
  return o;
}

Outcome rate_goldens() {
  Outcome o;
  const auto start = Clock::now();
  auto rates = [](const char* name) { return theorem_conditions(RateParams::from(test::fixture(name))); };
  const ComparisonReport e2 = rates("single_user_gf11");
  require(o, e2.isi == Rational(1, 12) && e2.usi == Rational(1, 16), "single_user_gf11 " + to_fraction(e2.isi) + ", " + to_fraction(e2.usi));
  const ComparisonReport e3 = rates("single_user_six_classes");
  require(o, e3.isi == Rational(1, 12) && e3.usi == Rational(1, 23), "single_user_six_classes " + to_fraction(e3.isi) + ", " + to_fraction(e3.usi));
  require(o, e3.t2.verdict == Verdict::holds, "six-class T2 flag " + std::string(to_string(e3.t2.verdict)));
  const ComparisonReport e5 = rates("two_user_gf13");
  require(o, e5.multi == Rational(1, 20) && e5.naive_multi == Rational(1, 24),
          "two_user_gf13 " + to_fraction(e5.multi) + ", " + to_fraction(e5.naive_multi));
  const ComparisonReport fsi = rates("nine_messages_fsi");
  require(o, fsi.isi == Rational(1), "full side information " + to_fraction(fsi.isi));
  const double ms = elapsed_ms(start);
  require(o, ms < kRateBudgetMs, "took " + std::to_string(ms) + " ms");
  return o;
}

// --- criteria 4-6: one sweep, three tallies ---------------------------------

struct SweepTally {
  std::size_t scenarios = 0, sessions = 0, user_checks = 0;
  Outcome recovery, non_repetition, rate_identity;
  double ms = 0;
};

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

// max count over unidentifiable classes, straight from the ground truth
std::size_t oracle_k_un(const Scenario& s, std::size_t first_user, std::size_t last_user) {
  std::size_t best = 0;
  for (std::size_t u = first_user; u <= last_user; ++u)
    for (std::size_t i = s.eta() + 1; i <= s.class_count(); ++i)
      best = std::max(best, s.user(u).ground_truth(i).size());
  return best;
}

void all_demands(std::size_t gamma, std::size_t users, std::vector<std::size_t>& cur,
                 std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == users) {
    out.push_back(cur);
    return;
  }
  for (std::size_t v = 1; v <= gamma; ++v) {
    cur.push_back(v);
    all_demands(gamma, users, cur, out);
    cur.pop_back();
  }
}

void sweep_scenario(const Scenario& s, Mode mode, const std::string& label, SweepTally& t) {
  ++t.scenarios;
  const std::size_t users = mode == Mode::single ? 1 : s.user_count();
  const std::size_t gamma = s.class_count();
  const std::size_t k_un = oracle_k_un(s, 1, users);
  const std::size_t disclosed = mode == Mode::single ? s.eta() - 1 : ceil_div(s.eta() - 1, users);
  const std::size_t expected_download = (k_un + 1) * (gamma - disclosed) * s.store().length();

  std::vector<std::vector<std::size_t>> choices;
  std::vector<std::size_t> cur;
  all_demands(gamma, users, cur, choices);

  for (const auto& demands : choices)
    for (std::uint64_t seed = 0; seed < kSeedsPerDemand; ++seed) {
      ++t.sessions;
      std::ostringstream where;
      where << label << " demands";
      for (std::size_t d : demands) where << " " << d;
      where << " seed " << seed << ": ";
      SessionTrace trace;
      try {
        trace = run_session(s, mode, demands, seed);
      } catch (const Error& e) {
        require(t.recovery, false, where.str() + e.what());
        continue;
      }

      const auto& qs = trace.plan.queries;
      bool distinct = qs.size() == k_un + 1;
      for (std::size_t i = 1; i <= gamma && distinct; ++i) {
        std::set<std::size_t> seen;
        for (const Query& q : qs) distinct = distinct && seen.insert(q.subclass.at(i - 1)).second;
      }
      require(t.non_repetition, distinct, where.str() + "repeated subclass index or wrong plan length");

      // L/D == closed form  <=>  D * 1 == expected_download, all integers
      require(t.rate_identity, trace.downloaded == expected_download,
              where.str() + "D=" + std::to_string(trace.downloaded) + " vs " + std::to_string(expected_download));

      for (std::size_t u = 1; u <= users; ++u) {
        ++t.user_checks;
        const auto it = std::find_if(trace.users.begin(), trace.users.end(),
                                     [&](const UserOutcome& x) { return x.user == u; });
        if (it == trace.users.end() || !it->new_message) {
          require(t.recovery, false, where.str() + "user " + std::to_string(u) + " got nothing");
          continue;
        }
        const MessagePair p = s.classes().global_to_pair(*it->new_message);
        // decodable: the query carrying it has known identifiable pairs + parities >= Gamma
        bool decodable = false;
        for (const Query& q : qs) {
          if (q.beta(p.cls) != p.sub) continue;
          std::size_t known = 0;
          for (std::size_t i = 1; i <= s.eta(); ++i) known += s.user(u).holds(i, q.beta(i));
          decodable = decodable || known + (gamma - disclosed) >= gamma;
        }
        require(t.recovery, p.cls == demands[u - 1] && !s.user(u).holds(p.cls, p.sub) && decodable,
                where.str() + "user " + std::to_string(u) + " new message W" + std::to_string(*it->new_message) +
                    " is not a decodable unknown message of the demanded class");
      }
    }
}

SweepTally recovery_sweep() {
  SweepTally t;
  const auto start = Clock::now();
  sweep_scenario(test::fixture("single_user_gf11"), Mode::single, "single_user_gf11", t);
  sweep_scenario(test::fixture("single_user_six_classes"), Mode::single, "single_user_six_classes", t);
  sweep_scenario(test::fixture("two_user_gf13"), Mode::multi, "two_user_gf13", t);
  Rng meta(20240601);
  for (Mode mode : {Mode::single, Mode::multi})
    for (std::size_t n = 0; n < kRandomScenariosPerMode; ++n)
      sweep_scenario(test::random_conforming(mode, meta), mode,
                     "random " + std::string(to_string(mode)) + " #" + std::to_string(n + 1), t);
  t.ms = elapsed_ms(start);
  require(t.recovery, t.ms < kSweepBudgetMs, "sweep took " + std::to_string(t.ms) + " ms");
  return t;
}

// --- criterion 7 -------------------------------------------------------------

Outcome mds_round_trip() {
  Outcome o;
  const auto start = Clock::now();
  Rng rng(7);
  std::size_t decodes = 0;
  for (auto [n, k] : std::vector<std::pair<std::size_t, std::size_t>>{{4, 2}, {6, 3}, {8, 5}, {10, 6}, {12, 7}}) {
    const std::uint32_t q = test::next_prime(static_cast<std::uint32_t>(n));
    const PrimeField f(q);
    const Generator g = build_systematic_generator(n, k, f);
    std::uniform_int_distribution<Symbol> pick(0, q - 1);
    std::vector<std::vector<Symbol>> messages(kMessagesPerSubset, std::vector<Symbol>(k));
    std::vector<std::vector<Symbol>> codewords;
    for (auto& m : messages) {
      for (auto& x : m) x = pick(rng);
      codewords.push_back(encode(g, m));
    }
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
      std::vector<std::size_t> positions;
      for (std::size_t i = 0; i < n; ++i)
        if (mask[i]) positions.push_back(i);
      const ErasureDecoder decoder(g, positions);
      for (std::size_t m = 0; m < messages.size(); ++m) {
        std::vector<Symbol> values;
        for (std::size_t p : positions) values.push_back(codewords[m][p]);
        ++decodes;
        require(o, decoder.decode(values) == messages[m],
                "[" + std::to_string(n) + "," + std::to_string(k) + "] over GF(" + std::to_string(q) + ") failed");
      }
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  const double ms = elapsed_ms(start);
  require(o, ms < kMdsBudgetMs, "took " + std::to_string(ms) + " ms");
  if (o.passed) o.detail = std::to_string(decodes) + " decodes";
  return o;
}

// --- criterion 8 -------------------------------------------------------------

std::size_t oracle_sum_min(const RateParams& p) {
  std::size_t sum = 0;
  for (std::size_t i = 0; i < p.gamma; ++i) sum += std::min(p.k[0][i] + 1, p.mu[i] - p.k[0][i]);
  return sum;
}

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool oracle_base(const RateParams& p, std::size_t k_un) {
  for (std::size_t i = 0; i < p.gamma; ++i) {
    if (i < p.eta && p.k[0][i] <= k_un) return false;
    if (p.mu[i] < p.k[0][i] + ceil_div(k_un + 1, p.eta)) return false;
  }
  return true;
}

struct TheoremSweep {
  std::size_t sets = 0;
  Outcome outcome;
};

void check_inequality(TheoremSweep& t, const RateParams& p, std::size_t k_un, const char* which,
                      const TheoremFlag ComparisonReport::*flag) {
  ++t.sets;
  const std::size_t lhs = oracle_sum_min(p);
  const std::size_t rhs = (k_un + 1) * (p.gamma - p.eta + 1);
  std::ostringstream where;
  where << which << " Gamma=" << p.gamma << " eta=" << p.eta << ": ";
  require(t.outcome, lhs >= rhs, where.str() + "sum " + std::to_string(lhs) + " < " + std::to_string(rhs));
  try {
    const ComparisonReport c = theorem_conditions(p);
    require(t.outcome, (c.*flag).verdict == Verdict::holds, where.str() + "flag reads " + std::string(to_string((c.*flag).verdict)));
    require(t.outcome, c.isi >= c.usi, where.str() + "R_isi < R_usi");
  } catch (const Error& e) {
    require(t.outcome, false, where.str() + e.what());
  }
}

TheoremSweep theorem_sweeps() {
  TheoremSweep t;
  const auto start = Clock::now();
  Rng rng(88);
  std::size_t made = 0;
  // T2 hypotheses: k_i + 1 <= mu_i - k_i everywhere, unidentifiable k_i = k_un
  while (made < kTheoremParameterSets) {
    RateParams p;
    p.gamma = uniform(rng, 2, 8);
    p.eta = uniform(rng, 1, p.gamma);
    const std::size_t k_un = uniform(rng, 0, 4);
    p.k.assign(1, {});
    for (std::size_t i = 0; i < p.gamma; ++i) {
      const std::size_t k = i < p.eta ? uniform(rng, k_un + 1, k_un + 4) : k_un;
      p.k[0].push_back(k);
      p.mu.push_back(std::max(2 * k + 1, k + ceil_div(k_un + 1, p.eta)) + uniform(rng, 0, 4));
    }
    if (!oracle_base(p, k_un)) continue;
    ++made;
    check_inequality(t, p, k_un, "T2", &ComparisonReport::t2);
  }
  // T3 hypotheses: uniform mu, uniform k per group, k_i + 1 >= mu - k_i,
  // mu >= k + ceil((Gamma-eta+1)(k_un+1)/Gamma)
  for (made = 0; made < kTheoremParameterSets;) {
    RateParams p;
    p.gamma = uniform(rng, 2, 8);
    p.eta = uniform(rng, 1, p.gamma);
    const std::size_t k_un = p.eta == p.gamma ? 0 : uniform(rng, 0, 5);
    const std::size_t k_id = uniform(rng, k_un + 1, k_un + 6);
    const std::size_t mu = uniform(rng, k_id + 1, 2 * k_id + 1);
    p.mu.assign(p.gamma, mu);
    p.k.assign(1, std::vector<std::size_t>(p.gamma, k_un));
    std::fill(p.k[0].begin(), p.k[0].begin() + static_cast<std::ptrdiff_t>(p.eta), k_id);
    bool ok = oracle_base(p, k_un) && mu >= k_id + ceil_div((p.gamma - p.eta + 1) * (k_un + 1), p.gamma);
    for (std::size_t i = 0; i < p.gamma; ++i) ok = ok && p.k[0][i] + 1 + p.k[0][i] >= mu;
    if (!ok) continue;
    ++made;
    check_inequality(t, p, k_un, "T3", &ComparisonReport::t3);
  }
  // T4 hypotheses: eta = 1, k_i + 1 >= mu_i - k_i
  for (made = 0; made < kTheoremParameterSets;) {
    RateParams p;
    p.gamma = uniform(rng, 2, 8);
    p.eta = 1;
    const std::size_t k_un = uniform(rng, 0, 4);
    p.k.assign(1, {});
    for (std::size_t i = 0; i < p.gamma; ++i) {
      const std::size_t k = i == 0 ? uniform(rng, k_un + 1, k_un + 4) : (i == 1 ? k_un : uniform(rng, 0, k_un));
      p.k[0].push_back(k);
      p.mu.push_back(k + uniform(rng, k_un + 1, 2 * k + 1 > k_un + 1 ? k + 1 : k_un + 1));
    }
    bool ok = oracle_base(p, k_un);
    for (std::size_t i = 0; i < p.gamma; ++i) ok = ok && p.k[0][i] + 1 + p.k[0][i] >= p.mu[i];
    if (!ok) continue;
    ++made;
    check_inequality(t, p, k_un, "T4", &ComparisonReport::t4);
  }
  const double ms = elapsed_ms(start);
  require(t.outcome, ms < kTheoremBudgetMs, "took " + std::to_string(ms) + " ms");
  return t;
}

// --- criterion 9 -------------------------------------------------------------

double tv_double(const Distribution& a, const Distribution& b) { return to_double(total_variation(a, b)); }

Outcome distribution_sanity() {
  Outcome o;
  const auto start = Clock::now();
  std::ostringstream detail;
  for (const char* name : {"tiny_two_class", "tiny_two_class_wide"}) {
    const Scenario s = test::fixture(name);
    for (const auto& demands : demand_choices(s, Mode::single)) {
      const Distribution exact = query_distribution(s, Mode::single, demands, kEnumerationLeafLimit);
      require(o, total_mass(exact) == Rational(1), std::string(name) + ": mass " + to_fraction(total_mass(exact)));
      const Distribution mc = sample_distribution_parallel(s, Mode::single, demands, kMonteCarloSamples, 1234);
      const double tv = tv_double(exact, mc);
      detail << name << " v=" << demands[0] << " support " << exact.size() << " TV " << tv << "; ";
      require(o, tv <= kMonteCarloTolerance, std::string(name) + ": Monte Carlo TV " + std::to_string(tv));
    }
  }
  const double ms = elapsed_ms(start);
  require(o, ms < kDistributionBudgetMs, "took " + std::to_string(ms) + " ms");
  if (o.passed) o.detail = detail.str();
  return o;
}

// --- criterion 10 ------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome deterministic_traces() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "ppir_acceptance";
  fs::create_directories(dir);
  struct Case {
    std::string fixture, args;
  };
  for (const Case& c : std::vector<Case>{{"single_user_gf11", "--demand 4"},
                                         {"two_user_gf13", "--demand 6 --demand 7 --seed 31"},
                                         {"single_user_six_classes", "--demand 1 --seed 2"}}) {
    std::string texts[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path out = dir / (c.fixture + "_" + std::to_string(run) + ".json");
      fs::remove(out);
      const std::string cmd = std::string(PPIR_CLI_PATH) + " run " + PPIR_FIXTURE_DIR + "/" + c.fixture + ".json " +
                              c.args + " --out " + out.string();
      const int status = std::system(cmd.c_str());
      require(o, status == 0, c.fixture + ": exit status " + std::to_string(status));
      texts[run] = slurp(out);
    }
    require(o, !texts[0].empty() && texts[0] == texts[1], c.fixture + ": traces differ");
  }
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const std::string& name, const Outcome& o, double ms) {
    std::printf("%s  %2d  %-32s %9.2f ms  %s\n", o.passed ? "PASS" : "FAIL", id, name.c_str(), ms, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.passed;
  };
  auto timed = [&](int id, const std::string& name, const std::function<Outcome()>& body) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    report(id, name, o, elapsed_ms(start));
  };

  timed(1, "encode_golden", encode_golden);
  timed(2, "decode_golden", decode_golden);
  timed(3, "rate_goldens", rate_goldens);

  SweepTally sweep;
  try {
    sweep = recovery_sweep();
  } catch (const std::exception& e) {
    sweep.recovery = sweep.non_repetition = sweep.rate_identity = {false, std::string("exception: ") + e.what()};
  }
  std::ostringstream summary;
  summary << sweep.scenarios << " scenarios, " << sweep.sessions << " sessions, " << sweep.user_checks << " user retrievals";
  for (Outcome* o : {&sweep.recovery, &sweep.non_repetition, &sweep.rate_identity})
    if (o->passed) o->detail = summary.str();
  report(4, "recovery_every_user", sweep.recovery, sweep.ms);
  report(5, "non_repetition", sweep.non_repetition, sweep.ms);
  report(6, "rate_matches_closed_form", sweep.rate_identity, sweep.ms);

  timed(7, "mds_round_trip", mds_round_trip);
  timed(8, "rate_comparison_inequalities", [] {
    TheoremSweep t = theorem_sweeps();
    if (t.outcome.passed) t.outcome.detail = std::to_string(t.sets) + " parameter sets";
    return t.outcome;
  });
  timed(9, "distribution_oracle", distribution_sanity);
  timed(10, "deterministic_traces", deterministic_traces);

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
