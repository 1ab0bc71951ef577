#include "ppir/audit.hpp"
#include "ppir/cli.hpp"
#include "ppir/exchange.hpp"
#include "ppir/fixtures.hpp"
#include "ppir/io.hpp"
#include "ppir/mds.hpp"

#include <functional>
#include <sstream>

namespace ppir::cli {

namespace {

struct Failure {
  std::string what;
};

void expect(bool condition, const std::string& what) {
  if (!condition) throw Failure{what};
}

std::string show(std::span<const Symbol> v) {
  std::ostringstream s;
  s << "[";
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
  s << "]";
  return s.str();
}

std::vector<Query> queries(const std::vector<std::vector<std::size_t>>& rows) {
  std::vector<Query> out;
  for (std::size_t j = 0; j < rows.size(); ++j) out.push_back({j + 1, rows[j]});
  return out;
}

const PrimeField kGf11(11);
const std::vector<Symbol> kFirstSymbols{0, 1, 9, 6, 8};
const std::vector<Symbol> kSecondSymbols{1, 7, 4, 1, 3};
const std::vector<Symbol> kFirstCodeword{0, 1, 9, 6, 8, 10, 8, 10};
const std::vector<Symbol> kSecondCodeword{1, 7, 4, 1, 3, 0, 0, 7};

void check_rates(const char* fixture, const char* isi, const char* usi, const char* multi, const char* naive) {
  const RateParams p = RateParams::from(parse_scenario(fixture_text(fixture)));
  const ComparisonReport c = theorem_conditions(p);
  if (isi) expect(to_fraction(c.isi) == isi, "R_isi " + to_fraction(c.isi) + ", expected " + isi);
  if (usi) expect(to_fraction(c.usi) == usi, "R_usi " + to_fraction(c.usi) + ", expected " + usi);
  if (multi) expect(to_fraction(c.multi) == multi, "R_multi " + to_fraction(c.multi) + ", expected " + multi);
  if (naive) expect(to_fraction(c.naive_multi) == naive, "R_naive " + to_fraction(c.naive_multi) + ", expected " + naive);
}

// One plan from the fixture, answered and decoded with generator `g`;
// returns user 1's outcome.
UserOutcome replay_single(const Scenario& s, std::size_t demand, const std::vector<std::vector<std::size_t>>& rows,
                          const Generator& g) {
  QueryPlan plan;
  plan.mode = Mode::single;
  plan.queries = queries(rows);
  plan.disclosed = s.disclosed(Mode::single);
  plan.secrets.demands = {demand};
  const SessionTrace t = execute_plan(s, plan, g);
  expect(t.downloaded == closed_form_download(s, Mode::single), "download differs from closed form");
  return t.users.at(0);
}

}  // namespace

Matrix reference_generator() {
  return Matrix{{1, 0, 0, 0, 0, 1, 5, 4},
                {0, 1, 0, 0, 0, 6, 9, 7},
                {0, 0, 1, 0, 0, 10, 1, 5},
                {0, 0, 0, 1, 0, 1, 4, 5},
                {0, 0, 0, 0, 1, 5, 4, 2}};
}

std::vector<FixtureResult> run_selftest(const Matrix& generator) {
  const std::vector<std::pair<std::string, std::function<void()>>> checks = {
      {"generator_gf11_systematic_mds",
       [&] {
         const Generator g = generator_from_explicit(generator, kGf11);
         expect(g.n() == 8 && g.k() == 5, "wrong shape");
       }},
      {"generator_gf11_matches_fixture",
       [&] {
         const Scenario s = parse_scenario(fixture_text("single_user_gf11"));
         expect(s.explicit_generator() && *s.explicit_generator() == generator, "fixture matrix differs");
       }},
      {"encode_gf11_first_symbols",
       [&] {
         const auto c = encode(generator_from_explicit(generator, kGf11), kFirstSymbols);
         expect(c == kFirstCodeword, "got " + show(c));
       }},
      {"encode_gf11_second_symbols",
       [&] {
         const auto c = encode(generator_from_explicit(generator, kGf11), kSecondSymbols);
         expect(c == kSecondCodeword, "got " + show(c));
       }},
      {"decode_gf11_from_parities",
       [&] {
         const Generator g = generator_from_explicit(generator, kGf11);
         const std::vector<std::size_t> positions{0, 1, 5, 6, 7};
         const auto m1 = decode_from_positions(g, positions, std::vector<Symbol>{0, 1, 10, 8, 10});
         const auto m2 = decode_from_positions(g, positions, std::vector<Symbol>{1, 7, 0, 0, 7});
         expect(m1 == kFirstSymbols, "first symbols " + show(m1));
         expect(m2 == kSecondSymbols, "second symbols " + show(m2));
       }},
      {"session_gf11_identifiable_demand",
       [&] {
         const Scenario s = parse_scenario(fixture_text("single_user_gf11"));
         const auto u = replay_single(s, 3, {{3, 2, 5, 8, 3}, {6, 4, 7, 2, 5}, {4, 1, 6, 9, 1}, {5, 3, 2, 1, 2}},
                                      generator_from_explicit(generator, kGf11));
         expect(u.new_message == 23u, "new message is not W23");
         const auto w = s.store().message(23);
         expect(w[0] == 9 && w[1] == 4, "W23 contents " + show(w));
       }},
      {"session_six_classes_unidentifiable_demand",
       [&] {
         const Scenario s = parse_scenario(fixture_text("single_user_six_classes"));
         const auto u = replay_single(s, 4, {{9, 3, 5, 3, 2, 8}, {4, 2, 7, 6, 1, 1}, {7, 8, 10, 2, 3, 6}},
                                      session_generator(s, Mode::single));
         expect(u.new_message == 48u, "new message is not W48");
       }},
      {"plans_single_user_valid",
       [&] {
         const Scenario s2 = parse_scenario(fixture_text("single_user_gf11"));
         const Scenario s3 = parse_scenario(fixture_text("single_user_six_classes"));
         const auto p1 = queries({{3, 2, 5, 8, 3}, {6, 4, 7, 2, 5}, {4, 1, 6, 9, 1}, {5, 3, 2, 1, 2}});
         const auto p2 = queries({{1, 1, 2, 9, 1}, {4, 6, 1, 8, 3}, {7, 5, 7, 2, 5}, {2, 4, 3, 1, 2}});
         const auto p3 = queries({{9, 3, 5, 3, 2, 8}, {4, 2, 7, 6, 1, 1}, {7, 8, 10, 2, 3, 6}});
         expect(validate_plan_single(s2, 3, p1, 1).ok() && audit_non_repetition(p1).passed, "gf11 demand 3");
         expect(validate_plan_single(s2, 4, p2).ok() && audit_non_repetition(p2).passed, "gf11 demand 4");
         expect(validate_plan_single(s3, 4, p3).ok() && audit_non_repetition(p3).passed, "six classes demand 4");
       }},
      {"plans_two_user_valid",
       [&] {
         const Scenario s = parse_scenario(fixture_text("two_user_gf13"));
         const auto a = queries({{1, 5, 2, 3, 4, 2, 8}, {2, 1, 3, 4, 6, 1, 3}, {4, 2, 1, 6, 1, 4, 1}, {3, 4, 4, 1, 2, 3, 5}});
         const auto b = queries({{4, 5, 1, 6, 1, 2, 8}, {3, 4, 4, 1, 2, 1, 3}, {5, 1, 2, 3, 4, 4, 1}, {2, 2, 3, 4, 6, 3, 5}});
         for (const auto& d : std::vector<std::vector<std::size_t>>{{2, 3}, {6, 3}})
           expect(validate_plan_multi(s, d, a).ok(), "demands " + std::to_string(d[0]) + "," + std::to_string(d[1]));
         expect(validate_plan_multi(s, std::vector<std::size_t>{6, 7}, b).ok(), "demands 6,7");
         expect(audit_non_repetition(a).passed && audit_non_repetition(b).passed, "index repeated");
       }},
      {"rates_gf11", [] { check_rates("single_user_gf11", "1/12", "1/16", nullptr, nullptr); }},
      {"rates_six_classes",
       [] {
         check_rates("single_user_six_classes", "1/12", "1/23", nullptr, nullptr);
         const auto c = theorem_conditions(RateParams::from(parse_scenario(fixture_text("single_user_six_classes"))));
         expect(c.t2.verdict == Verdict::holds, "T2 " + std::string(to_string(c.t2.verdict)));
       }},
      {"rates_two_user_gf13", [] { check_rates("two_user_gf13", nullptr, nullptr, "1/20", "1/24"); }},
      {"rate_full_side_information", [] { check_rates("nine_messages_fsi", "1/1", nullptr, nullptr, nullptr); }},
  };

  std::vector<FixtureResult> results;
  for (const auto& [name, body] : checks) {
    FixtureResult r{name, false, ""};
    try {
      body();
      r.passed = true;
    } catch (const Failure& f) {
      r.detail = f.what;
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace ppir::cli
