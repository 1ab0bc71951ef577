#include "support.hpp"

#include "ppir/error.hpp"
#include "ppir/exchange.hpp"

#include <doctest.h>

#include <algorithm>

using namespace ppir;
using ppir::test::fixture;
using ppir::test::queries;

namespace {

const std::vector<std::vector<std::size_t>> kGf11Demand3{
    {3, 2, 5, 8, 3}, {6, 4, 7, 2, 5}, {4, 1, 6, 9, 1}, {5, 3, 2, 1, 2}};

QueryPlan single_plan(const Scenario& s, std::size_t demand, const std::vector<std::vector<std::size_t>>& rows) {
  QueryPlan p;
  p.queries = queries(rows);
  p.disclosed = s.disclosed(Mode::single);
  p.secrets.demands = {demand};
  return p;
}

}  // namespace

TEST_CASE("server answers the first published query with the reference parities") {
  const Scenario s = fixture("single_user_gf11");
  const Generator g = session_generator(s, Mode::single);
  CHECK(g.rows() == *s.explicit_generator());
  const Query q = queries(kGf11Demand3)[0];
  const Answer a = server_answer(s.store(), s.classes(), q, 2, g);
  REQUIRE(a.parities.rows() == 3);
  REQUIRE(a.parities.cols() == 2);
  CHECK(a.parities(0, 0) == 10);
  CHECK(a.parities(1, 0) == 8);
  CHECK(a.parities(2, 0) == 10);
  CHECK(a.parities(0, 1) == 0);
  CHECK(a.parities(1, 1) == 0);
  CHECK(a.parities(2, 1) == 7);

  const ClientStore client = ClientStore::for_user(s, 1);
  CHECK(client.size() == 3 + 4 + 5);
  CHECK(client.lookup(1, 3).has_value());
  CHECK_FALSE(client.lookup(3, 5).has_value());
  CHECK_FALSE(client.lookup(4, 2).has_value());  // unidentifiable, never usable
  const Matrix decoded = client_decode(q, a, client, g);
  CHECK(decoded(2, 0) == 9);
  CHECK(decoded(2, 1) == 4);
  for (std::size_t i = 1; i <= 5; ++i) {
    const auto w = s.store().message(s.classes().pair_to_global(i, q.beta(i)));
    CHECK(decoded(i - 1, 0) == w[0]);
    CHECK(decoded(i - 1, 1) == w[1]);
  }
}

TEST_CASE("default code decodes the six-class query") {
  const Scenario s = fixture("single_user_six_classes");
  const Generator g = session_generator(s, Mode::single);
  CHECK(g.n() == 10);
  const Query q = queries({{9, 3, 5, 3, 2, 8}})[0];
  const Answer a = server_answer(s.store(), s.classes(), q, 2, g);
  const Matrix decoded = client_decode(q, a, ClientStore::for_user(s, 1), g);
  for (std::size_t i = 1; i <= 6; ++i) {
    const auto w = s.store().message(s.classes().pair_to_global(i, q.beta(i)));
    for (std::size_t l = 0; l < 2; ++l) CHECK(decoded(i - 1, l) == w[l]);
  }
}

TEST_CASE("decoding needs enough known positions") {
  const Scenario s = fixture("single_user_gf11");
  const Generator g = session_generator(s, Mode::single);
  const Query q = queries({{1, 3, 5, 1, 1}})[0];
  const Answer a = server_answer(s.store(), s.classes(), q, 2, g);
  try {
    client_decode(q, a, ClientStore::for_user(s, 1), g);
    FAIL("decoded without enough knowns");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InsufficientKnowns);
  }
}

TEST_CASE("full side information: one parity row, everything already known") {
  const Scenario s = fixture("nine_messages_fsi");
  const Generator g = session_generator(s, Mode::single);
  CHECK(g.parity_count() == 1);
  const Query q = queries({{1, 1, 2}})[0];
  const Answer a = server_answer(s.store(), s.classes(), q, 2, g);
  CHECK(a.parities.rows() == 1);
  const Matrix decoded = client_decode(q, a, ClientStore::for_user(s, 1), g);
  CHECK(decoded(1, 0) == s.store().message(2)[0]);

  const std::vector<std::size_t> demand{2};
  const SessionTrace t = run_session(s, Mode::single, demand, 1);
  CHECK(t.downloaded == 2);
  CHECK(t.rate() == Rational(1));
}

TEST_CASE("replaying the server view reproduces the answers") {
  const Scenario s = fixture("two_user_gf13");
  const std::vector<std::size_t> demands{2, 3};
  const SessionTrace t = run_session(s, Mode::multi, demands, 5);
  const Generator g = session_generator(s, Mode::multi);
  CHECK(replay_server(s.store(), s.classes(), t.plan, g) == t.answers);
  CHECK(t.rate() == Rational(1, 20));
  REQUIRE(t.users.size() == 2);
  for (const UserOutcome& u : t.users) {
    REQUIRE(u.new_message);
    CHECK(s.classes().global_to_pair(*u.new_message).cls == u.demand);
    CHECK_FALSE(s.user(u.user).holds(u.demand, s.classes().global_to_pair(*u.new_message).sub));
  }
}

TEST_CASE("sessions on the published scenarios hit the closed-form rate") {
  const Scenario s2 = fixture("single_user_gf11");
  for (std::size_t d = 1; d <= 5; ++d) {
    const std::vector<std::size_t> demand{d};
    const SessionTrace t = run_session(s2, Mode::single, demand, 11 + d);
    CHECK(t.rate() == Rational(1, 12));
    CHECK(t.downloaded == closed_form_download(s2, Mode::single));
  }
  const Scenario s3 = fixture("single_user_six_classes");
  const std::vector<std::size_t> demand{4};
  CHECK(run_session(s3, Mode::single, demand, 3).rate() == Rational(1, 12));
}

TEST_CASE("published plan for the identifiable demand yields W23") {
  const Scenario s = fixture("single_user_gf11");
  const SessionTrace t = execute_plan(s, single_plan(s, 3, kGf11Demand3), session_generator(s, Mode::single));
  REQUIRE(t.users[0].new_message);
  CHECK(*t.users[0].new_message == 23);
  const auto& decoded = t.users[0].decoded_queries;
  CHECK(std::find(decoded.begin(), decoded.end(), 1u) != decoded.end());
}
